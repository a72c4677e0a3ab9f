#include "frozenperc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "frozenperc/parallel.hpp"

namespace frozenperc {

namespace {

constexpr double kLengthThreshold = 0.01;
constexpr double kClampMargin = 1e-9;

void require_replicas(std::int64_t replicas) {
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

template <typename Sample>
std::vector<double> run_replicas(std::int64_t replicas, std::uint64_t base_seed, unsigned workers,
                                 Sample&& sample) {
    std::vector<double> out(static_cast<std::size_t>(replicas));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        out[i] = sample(replica_seed(base_seed, i));
    });
    return out;
}

// Origin joined to the inner boundary of the lazily sampled box.
bool origin_reaches_boundary(const SiteIndex& box, std::uint64_t seed, double p) {
    const std::int32_t origin = box.index_of({0, 0});
    if (origin < 0 || !is_black(tau_at(seed, box.site(origin)), p)) return false;
    std::vector<std::uint8_t> state(box.size(), 0);  // 0 unseen, 1 white, 2 black
    std::vector<std::int32_t> stack{origin};
    state[origin] = 2;
    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        if (box.on_inner_boundary(static_cast<std::size_t>(i))) return true;
        for (std::int32_t j : box.neighbors(static_cast<std::size_t>(i))) {
            if (j < 0 || state[j]) continue;
            if (is_black(tau_at(seed, box.site(j)), p)) {
                state[j] = 2;
                stack.push_back(j);
            } else {
                state[j] = 1;
            }
        }
    }
    return false;
}

double crossing_frequency(const std::shared_ptr<const SiteIndex>& rect_sites, Orientation orientation,
                          double p, Color color, std::int64_t replicas, std::uint64_t base_seed,
                          unsigned workers, std::vector<double>* samples = nullptr) {
    const BoundRegion bound(rect_sites->region(), rect_sites);
    auto values = run_replicas(replicas, base_seed, workers, [&](std::uint64_t seed) {
        const TauField field = TauField::lazy(rect_sites, seed);
        return has_crossing(field, bound, p, color, orientation) ? 1.0 : 0.0;
    });
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    if (samples) *samples = std::move(values);
    return mean;
}

}  // namespace

nlohmann::json Estimate::to_json() const {
    return {{"estimand", estimand}, {"params", params},     {"value", value},
            {"stderr", stderr_},    {"replicas", replicas}, {"base_seed", base_seed},
            {"grid", grid}};
}

Estimate summarize(std::string estimand, nlohmann::json params, std::span<const double> samples,
                   std::uint64_t base_seed) {
    Estimate e;
    e.estimand = std::move(estimand);
    e.params = std::move(params);
    e.replicas = static_cast<std::int64_t>(samples.size());
    e.base_seed = base_seed;
    if (samples.empty()) return e;
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    e.value = mean;
    e.stderr_ = sd / std::sqrt(n);
    return e;
}

Estimate estimate_crossing(double width, double height, Orientation orientation, double p,
                           std::int64_t replicas, std::uint64_t base_seed, Color color,
                           unsigned workers) {
    require_replicas(replicas);
    require_probability(p);
    if (!(width >= 0.0 && height >= 0.0)) throw std::invalid_argument("rectangle sides must be >= 0");
    auto sites = std::make_shared<const SiteIndex>(Region::rectangle(0.0, width, 0.0, height));
    std::vector<double> samples;
    crossing_frequency(sites, orientation, p, color, replicas, base_seed, workers, &samples);
    return summarize("crossing",
                     {{"width", width},
                      {"height", height},
                      {"orientation", orientation == Orientation::horizontal ? "horizontal" : "vertical"},
                      {"color", color == Color::black ? "black" : "white"},
                      {"p", p}},
                     samples, base_seed);
}

nlohmann::json LengthEstimate::to_json() const {
    nlohmann::json g = nlohmann::json::array();
    for (const auto& [n, prob] : grid) g.push_back({{"n", n}, {"crossing", prob}});
    nlohmann::json v;
    switch (status) {
        case Status::finite: v = value; break;
        case Status::infinite: v = "inf"; break;
        case Status::exceeds_grid: v = "exceeds_grid"; break;
    }
    return {{"estimand", "L"},
            {"params", {{"p", p}, {"threshold", kLengthThreshold}}},
            {"value", v},
            {"stderr", nullptr},
            {"replicas", replicas_per_n},
            {"base_seed", base_seed},
            {"grid", g}};
}

LengthEstimate estimate_L(double p, std::int64_t replicas_per_n, std::uint64_t base_seed, int max_n,
                          unsigned workers) {
    require_replicas(replicas_per_n);
    require_probability(p);
    LengthEstimate out;
    out.p = p;
    out.replicas_per_n = replicas_per_n;
    out.base_seed = base_seed;
    if (p == kCriticalP) {
        out.status = LengthEstimate::Status::infinite;
        return out;
    }
    // L(p) = L(1-p): evaluate at the subcritical reflection, rounded so that p
    // and 1-p land on the same double.
    const double q = std::round(std::min(p, 1.0 - p) * 1e12) / 1e12;

    std::vector<std::pair<int, double>> evaluated;
    auto probability = [&](int n) {
        auto it = std::find_if(evaluated.begin(), evaluated.end(), [&](const auto& e) { return e.first == n; });
        if (it != evaluated.end()) return it->second;
        auto sites = std::make_shared<const SiteIndex>(Region::rectangle(0.0, 2.0 * n, 0.0, 1.0 * n));
        const double prob = crossing_frequency(sites, Orientation::vertical, q, Color::black,
                                               replicas_per_n, base_seed, workers);
        evaluated.emplace_back(n, prob);
        return prob;
    };

    int below = 0;  // largest scanned n still above the threshold
    int hit = 0;
    for (int n = 1; n <= max_n; n *= 2) {
        if (probability(n) <= kLengthThreshold) {
            hit = n;
            break;
        }
        below = n;
    }
    if (hit == 0) {
        out.status = LengthEstimate::Status::exceeds_grid;
    } else {
        int lo = below, hi = hit;  // probability(lo) > threshold (or lo = 0), probability(hi) <= it
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            if (probability(mid) <= kLengthThreshold) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.status = LengthEstimate::Status::finite;
        out.value = hi;
    }
    std::sort(evaluated.begin(), evaluated.end());
    out.grid = std::move(evaluated);
    return out;
}

Estimate estimate_theta(double p, double radius, std::int64_t replicas, std::uint64_t base_seed,
                        unsigned workers) {
    require_replicas(replicas);
    require_probability(p);
    if (!(radius >= 1.0)) throw std::invalid_argument("theta radius must be >= 1");
    const SiteIndex box(Region::box(radius));
    auto samples = run_replicas(replicas, base_seed, workers, [&](std::uint64_t seed) {
        return origin_reaches_boundary(box, seed, p) ? 1.0 : 0.0;
    });
    return summarize("theta", {{"p", p}, {"M", radius}}, samples, base_seed);
}

Estimate estimate_pi1(int n, std::int64_t replicas, std::uint64_t base_seed, unsigned workers) {
    Estimate e = estimate_theta(kCriticalP, static_cast<double>(n), replicas, base_seed, workers);
    e.estimand = "pi1";
    e.params = {{"n", n}};
    return e;
}

Estimate estimate_pi4(int n, std::int64_t replicas, std::uint64_t base_seed, unsigned workers,
                      double p_black, double p_white) {
    require_replicas(replicas);
    if (n < 1) throw std::invalid_argument("pi4 scale must be >= 1");
    auto domain = std::make_shared<const SiteIndex>(Region::box(3.0 * n));
    const FourArmDetector detector(domain, n);
    const double candidates = static_cast<double>(detector.candidate_count());
    auto samples = run_replicas(replicas, base_seed, workers, [&](std::uint64_t seed) {
        const TauField field(domain, seed);
        return static_cast<double>(detector.count(field, p_black, p_white)) / candidates;
    });
    return summarize("pi4", {{"n", n}, {"p_black", p_black}, {"p_white", p_white}}, samples,
                     base_seed);
}

NearCriticalP p_lambda(double n, double lambda, double pi4) {
    if (!(pi4 > 0.0)) throw std::invalid_argument("pi4 estimate must be > 0");
    if (!(n >= 1.0)) throw std::invalid_argument("N must be >= 1");
    const double raw = kCriticalP + lambda / (n * n * pi4);
    const double p = std::clamp(raw, kClampMargin, 1.0 - kClampMargin);
    return {p, p != raw};
}

Estimate estimate_net_prob(int m, int n, double p, std::int64_t replicas, std::uint64_t base_seed,
                           unsigned workers) {
    require_replicas(replicas);
    require_probability(p);
    auto domain = std::make_shared<const SiteIndex>(Region::box(NetDetector::covered_radius(m, n)));
    const NetDetector detector(domain, m, n);
    auto samples = run_replicas(replicas, base_seed, workers, [&](std::uint64_t seed) {
        return detector.holds(TauField::lazy(domain, seed), p) ? 1.0 : 0.0;
    });
    return summarize("net", {{"m", m}, {"n", n}, {"p", p}}, samples, base_seed);
}

double fit_arm_exponent(std::span<const double> ns, std::span<const double> values) {
    if (ns.size() != values.size() || ns.size() < 2) {
        throw std::invalid_argument("exponent fit needs >= 2 matched points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0 && values[i] > 0.0)) throw std::invalid_argument("exponent fit needs positive data");
        const double x = std::log(ns[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return -slope;
}

}  // namespace frozenperc
