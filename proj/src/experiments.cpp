#include "frozenperc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "frozenperc/connectivity.hpp"
#include "frozenperc/estimators.hpp"
#include "frozenperc/parallel.hpp"

namespace frozenperc {

namespace {

constexpr char kSeedScheme[] = "replica_seed(base_seed, replica) = splitmix64 mix of base seed and index";

std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json seed_manifest(std::uint64_t base_seed, std::int64_t replicas) {
    nlohmann::json seeds = nlohmann::json::array();
    for (std::int64_t i = 0; i < replicas; ++i) seeds.push_back(replica_seed(base_seed, i));
    return {{"base_seed", base_seed}, {"scheme", kSeedScheme}, {"replicas", replicas}, {"seeds", seeds}};
}

double domain_radius(const ExperimentOptions& o, double n) {
    return o.domain_radius > 0.0 ? o.domain_radius : 4.0 * n;
}

void check_options(const ExperimentOptions& o) {
    if (o.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
}

// Per-replica outcome: either rows for the CSV or an error message that is
// turned into explicit failure rows.
struct ReplicaRows {
    std::vector<std::vector<std::string>> rows;
    std::string error;
};

template <typename Body>
std::vector<ReplicaRows> fan_out(std::int64_t replicas, unsigned workers, Body&& body) {
    std::vector<ReplicaRows> out(static_cast<std::size_t>(replicas));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        try {
            out[i].rows = body(i);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

// Frozen-cluster freeze times of clusters meeting `window`.
std::vector<double> freeze_times_in(const FinalState& fs, const BoundRegion& window) {
    std::set<std::int32_t> ids;
    for (std::size_t i = 0; i < window.local().size(); ++i) {
        const auto d = static_cast<std::size_t>(window.to_domain(i));
        if (fs.is_frozen(d)) ids.insert(fs.cluster[d]);
    }
    std::vector<double> times;
    for (std::int32_t id : ids) times.push_back(fs.cluster_record(id)->freeze_time);
    std::sort(times.begin(), times.end());
    return times;
}

nlohmann::json proportion(std::int64_t successes, std::int64_t trials) {
    const double p = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    const double se = trials > 1 ? std::sqrt(p * (1.0 - p) / trials) : 0.0;
    const auto [lo, hi] = wilson_interval(static_cast<double>(successes), static_cast<double>(trials));
    return {{"successes", successes}, {"trials", trials}, {"p_hat", p}, {"stderr", se}, {"ci95", {lo, hi}}};
}

}  // namespace

std::pair<double, double> wilson_interval(double successes, double trials) {
    if (trials <= 0.0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = successes / trials;
    const double denom = 1.0 + z * z / trials;
    const double center = (p + z * z / (2.0 * trials)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string ExperimentResult::csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_escape(columns[c]);
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(row[c]);
        out << '\n';
    }
    return out.str();
}

nlohmann::json ExperimentResult::summary_json() const {
    return {{"name", name},
            {"config", config},
            {"columns", columns},
            {"rows", rows.size()},
            {"summary", summary},
            {"seed_manifest", seed_manifest},
            {"wall_seconds", wall_seconds}};
}

void ExperimentResult::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / (name + ".csv"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / (name + ".csv")).string());
        out << csv();
    }
    std::ofstream out(dir / (name + ".json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / (name + ".json")).string());
    out << summary_json().dump(2) << '\n';
}

std::vector<Variant> all_variants() {
    return {{SizeRule::diameter, BoundaryRule::original},
            {SizeRule::diameter, BoundaryRule::modified},
            {SizeRule::volume, BoundaryRule::original},
            {SizeRule::volume, BoundaryRule::modified}};
}

ExperimentResult exp_freeze_time_window(double n, double k, const std::vector<double>& lambdas,
                                        const ExperimentOptions& options, std::optional<double> pi4_hat,
                                        std::int64_t pi4_replicas) {
    check_options(options);
    if (lambdas.empty()) throw std::invalid_argument("lambda grid is empty");
    const Stopwatch clock;
    const double radius = domain_radius(options, n);
    if (k * n > radius) throw std::invalid_argument("B_{KN} must fit inside the simulated domain");

    nlohmann::json pi4_info;
    if (!pi4_hat) {
        const Estimate e = estimate_pi4(static_cast<int>(std::lround(n)), pi4_replicas,
                                        replica_seed(options.base_seed, 0xF4F4F4F4ULL), options.workers);
        pi4_hat = e.value;
        pi4_info = e.to_json();
    } else {
        pi4_info = {{"value", *pi4_hat}, {"source", "given"}};
    }
    struct Window {
        double lambda, low, high;
    };
    std::vector<Window> windows;
    for (double lambda : lambdas) {
        windows.push_back({lambda, p_lambda(n, -lambda, *pi4_hat).p, p_lambda(n, lambda, *pi4_hat).p});
    }

    auto sites = std::make_shared<const SiteIndex>(Region::box(radius));
    const BoundRegion window(Region::box(k * n), sites);
    ProcessConfig config = ProcessConfig::diameter_default(BoundaryRule::original, n, 0);
    config.domain = sites->region();

    const auto per_replica = fan_out(options.replicas, options.workers, [&](std::size_t r) {
        const std::uint64_t seed = replica_seed(options.base_seed, r);
        ProcessConfig c = config;
        c.seed = seed;
        const FinalState fs = run(c, TauField(sites, seed));
        const auto times = freeze_times_in(fs, window);
        const auto core = std::count_if(times.begin(), times.end(), [](double t) { return t > 0.35 && t < 0.65; });
        std::vector<std::vector<std::string>> rows;
        for (const Window& w : windows) {
            const auto outside = std::count_if(times.begin(), times.end(),
                                               [&](double t) { return t < w.low || t > w.high; });
            rows.push_back({fmt_int(static_cast<std::int64_t>(r)), std::to_string(seed), fmt_double(w.lambda),
                            fmt_double(w.low), fmt_double(w.high), fmt_int(static_cast<std::int64_t>(times.size())),
                            fmt_int(outside), outside > 0 ? "1" : "0", fmt_int(core),
                            times.empty() ? "" : fmt_double(times.front()),
                            times.empty() ? "" : fmt_double(times.back()), "ok"});
        }
        return rows;
    });

    ExperimentResult res;
    res.name = "freeze_window";
    res.config = {{"N", n}, {"K", k}, {"lambdas", lambdas}, {"domain_radius", radius},
                  {"size_rule", "diameter"}, {"boundary_rule", "original"}, {"replicas", options.replicas}};
    res.columns = {"replica", "seed", "lambda", "p_low", "p_high", "frozen_clusters", "outside",
                   "any_outside", "in_core_window", "earliest", "latest", "status"};
    std::vector<std::int64_t> any_outside(windows.size(), 0);
    std::int64_t total_times = 0, total_core = 0, ok = 0;
    for (std::size_t r = 0; r < per_replica.size(); ++r) {
        const auto& rr = per_replica[r];
        if (!rr.error.empty()) {
            for (const Window& w : windows) {
                res.rows.push_back({fmt_int(static_cast<std::int64_t>(r)),
                                    std::to_string(replica_seed(options.base_seed, r)), fmt_double(w.lambda),
                                    fmt_double(w.low), fmt_double(w.high), "", "", "", "", "", "",
                                    "error: " + rr.error});
            }
            continue;
        }
        ++ok;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            res.rows.push_back(rr.rows[w]);
            any_outside[w] += rr.rows[w][7] == "1";
        }
        total_times += std::stoll(rr.rows[0][5]);
        total_core += std::stoll(rr.rows[0][8]);
    }
    nlohmann::json per_lambda = nlohmann::json::array();
    for (std::size_t w = 0; w < windows.size(); ++w) {
        per_lambda.push_back({{"lambda", windows[w].lambda},
                              {"p_low", windows[w].low},
                              {"p_high", windows[w].high},
                              {"outside_fraction", ok ? static_cast<double>(any_outside[w]) / ok : 0.0}});
    }
    res.summary = {{"pi4_hat", pi4_info},
                   {"per_lambda", per_lambda},
                   {"freeze_times", total_times},
                   {"core_window", {0.35, 0.65}},
                   {"core_fraction", total_times ? static_cast<double>(total_core) / total_times : 0.0},
                   {"failed_replicas", options.replicas - ok}};
    res.seed_manifest = seed_manifest(options.base_seed, options.replicas);
    res.wall_seconds = clock.seconds();
    return res;
}

ExperimentResult exp_origin_freeze(double n, const std::vector<Variant>& variants,
                                   const ExperimentOptions& options) {
    check_options(options);
    if (variants.empty()) throw std::invalid_argument("no process variants given");
    const Stopwatch clock;
    const double radius = domain_radius(options, n);
    auto sites = std::make_shared<const SiteIndex>(Region::box(radius));

    const auto per_replica = fan_out(options.replicas, options.workers, [&](std::size_t r) {
        const std::uint64_t seed = replica_seed(options.base_seed, r);
        const TauField field(sites, seed);
        std::vector<std::vector<std::string>> rows;
        for (const Variant& v : variants) {
            ProcessConfig c;
            c.size_rule = v.size_rule;
            c.boundary_rule = v.boundary_rule;
            c.threshold = v.size_rule == SizeRule::volume ? std::round(n) : n;
            c.domain = sites->region();
            c.seed = seed;
            const FinalState fs = run(c, field);
            const auto t = origin_freeze_time(fs);
            rows.push_back({fmt_int(static_cast<std::int64_t>(r)), std::to_string(seed), to_string(v.size_rule),
                            to_string(v.boundary_rule), t ? "1" : "0", t ? fmt_double(*t) : "",
                            fmt_double(origin_cluster_diameter(fs)), "ok"});
        }
        return rows;
    });

    ExperimentResult res;
    res.name = "origin_freeze";
    nlohmann::json vj = nlohmann::json::array();
    for (const Variant& v : variants) vj.push_back(to_string(v.size_rule) + "/" + to_string(v.boundary_rule));
    res.config = {{"N", n}, {"variants", vj}, {"domain_radius", radius}, {"replicas", options.replicas}};
    res.columns = {"replica", "seed", "size_rule", "boundary_rule", "origin_frozen", "freeze_time",
                   "origin_diameter", "status"};
    std::vector<std::int64_t> frozen(variants.size(), 0), trials(variants.size(), 0);
    constexpr int kBins = 20;
    std::vector<std::int64_t> histogram(kBins, 0);
    std::int64_t late = 0, modified_diam_frozen = 0;
    for (std::size_t r = 0; r < per_replica.size(); ++r) {
        const auto& rr = per_replica[r];
        for (std::size_t v = 0; v < variants.size(); ++v) {
            if (!rr.error.empty()) {
                res.rows.push_back({fmt_int(static_cast<std::int64_t>(r)),
                                    std::to_string(replica_seed(options.base_seed, r)),
                                    to_string(variants[v].size_rule), to_string(variants[v].boundary_rule), "",
                                    "", "", "error: " + rr.error});
                continue;
            }
            const auto& row = rr.rows[v];
            res.rows.push_back(row);
            ++trials[v];
            if (row[4] != "1") continue;
            ++frozen[v];
            if (variants[v].size_rule == SizeRule::diameter && variants[v].boundary_rule == BoundaryRule::modified) {
                const double t = std::stod(row[5]);
                ++modified_diam_frozen;
                histogram[std::min(kBins - 1, static_cast<int>(t * kBins))] += 1;
                if (t > 0.8) ++late;
            }
        }
    }
    nlohmann::json per_variant = nlohmann::json::object();
    for (std::size_t v = 0; v < variants.size(); ++v) {
        per_variant[vj[v].get<std::string>()] = proportion(frozen[v], trials[v]);
    }
    nlohmann::json hist = nlohmann::json::array();
    for (int b = 0; b < kBins; ++b) {
        hist.push_back({{"low", static_cast<double>(b) / kBins}, {"high", static_cast<double>(b + 1) / kBins},
                        {"count", histogram[b]}});
    }
    res.summary = {{"per_variant", per_variant},
                   {"modified_diameter_freeze_histogram", hist},
                   {"modified_diameter_frozen", modified_diam_frozen},
                   {"modified_diameter_late_freezes", late},
                   {"late_threshold", 0.8}};
    res.seed_manifest = seed_manifest(options.base_seed, options.replicas);
    res.wall_seconds = clock.seconds();
    return res;
}

ExperimentResult exp_macro_cluster(double n, const std::vector<double>& epsilons, BoundaryRule rule,
                                   const ExperimentOptions& options) {
    check_options(options);
    const Stopwatch clock;
    const double radius = domain_radius(options, n);
    auto sites = std::make_shared<const SiteIndex>(Region::box(radius));

    const auto per_replica = fan_out(options.replicas, options.workers, [&](std::size_t r) {
        const std::uint64_t seed = replica_seed(options.base_seed, r);
        ProcessConfig c;
        c.size_rule = SizeRule::diameter;
        c.boundary_rule = rule;
        c.threshold = n;
        c.domain = sites->region();
        c.seed = seed;
        const FinalState fs = run(c, TauField(sites, seed));
        const std::size_t origin = static_cast<std::size_t>(sites->index_of({0, 0}));
        const double diam = origin_cluster_diameter(fs);
        const char* state = fs.is_frozen(origin) ? "frozen"
                            : fs.state[origin] == SiteState::white ? "white"
                                                                   : "black";
        return std::vector<std::vector<std::string>>{{fmt_int(static_cast<std::int64_t>(r)), std::to_string(seed),
                                                      state, fmt_double(diam), fmt_double(diam / n), "ok"}};
    });

    ExperimentResult res;
    res.name = "macro_cluster";
    res.config = {{"N", n}, {"epsilons", epsilons}, {"boundary_rule", to_string(rule)},
                  {"size_rule", "diameter"}, {"domain_radius", radius}, {"replicas", options.replicas}};
    res.columns = {"replica", "seed", "origin_state", "diameter", "ratio", "status"};
    std::vector<double> ratios;
    for (std::size_t r = 0; r < per_replica.size(); ++r) {
        const auto& rr = per_replica[r];
        if (!rr.error.empty()) {
            res.rows.push_back({fmt_int(static_cast<std::int64_t>(r)), std::to_string(replica_seed(options.base_seed, r)),
                                "", "", "", "error: " + rr.error});
            continue;
        }
        res.rows.push_back(rr.rows[0]);
        ratios.push_back(std::stod(rr.rows[0][4]));
    }
    nlohmann::json per_eps = nlohmann::json::array();
    for (double eps : epsilons) {
        const auto hits = std::count_if(ratios.begin(), ratios.end(),
                                        [&](double x) { return x >= eps && x <= 1.0 - eps; });
        nlohmann::json entry = proportion(hits, static_cast<std::int64_t>(ratios.size()));
        entry["epsilon"] = eps;
        entry["interval"] = {eps, 1.0 - eps};
        per_eps.push_back(entry);
    }
    std::vector<std::int64_t> histogram(20, 0);
    for (double x : ratios) histogram[std::min(19, static_cast<int>(x * 20.0))] += 1;
    res.summary = {{"per_epsilon", per_eps}, {"ratio_histogram_0_to_1_by_0.05", histogram}};
    res.seed_manifest = seed_manifest(options.base_seed, options.replicas);
    res.wall_seconds = clock.seconds();
    return res;
}

ExperimentResult exp_volume_scale_scan(double n, const std::vector<double>& radii, BoundaryRule rule,
                                       const ExperimentOptions& options) {
    check_options(options);
    if (radii.empty()) throw std::invalid_argument("radius grid is empty");
    const Stopwatch clock;

    ExperimentResult res;
    res.name = "volume_scan";
    res.config = {{"N", n}, {"m_grid", radii}, {"boundary_rule", to_string(rule)}, {"size_rule", "volume"},
                  {"replicas", options.replicas}};
    res.columns = {"m", "replica", "seed", "domain_volume", "origin_frozen", "freeze_time", "status"};
    nlohmann::json per_m = nlohmann::json::array();
    for (double m : radii) {
        auto sites = std::make_shared<const SiteIndex>(Region::box(m));
        const auto per_replica = fan_out(options.replicas, options.workers, [&](std::size_t r) {
            const std::uint64_t seed = replica_seed(options.base_seed, r);
            ProcessConfig c;
            c.size_rule = SizeRule::volume;
            c.boundary_rule = rule;
            c.threshold = std::round(n);
            c.domain = sites->region();
            c.seed = seed;
            const FinalState fs = run(c, TauField(sites, seed));
            const auto t = origin_freeze_time(fs);
            return std::vector<std::vector<std::string>>{{fmt_double(m), fmt_int(static_cast<std::int64_t>(r)),
                                                          std::to_string(seed),
                                                          fmt_int(static_cast<std::int64_t>(sites->size())),
                                                          t ? "1" : "0", t ? fmt_double(*t) : "", "ok"}};
        });
        std::int64_t frozen = 0, trials = 0;
        for (std::size_t r = 0; r < per_replica.size(); ++r) {
            const auto& rr = per_replica[r];
            if (!rr.error.empty()) {
                res.rows.push_back({fmt_double(m), fmt_int(static_cast<std::int64_t>(r)),
                                    std::to_string(replica_seed(options.base_seed, r)),
                                    fmt_int(static_cast<std::int64_t>(sites->size())), "", "", "error: " + rr.error});
                continue;
            }
            res.rows.push_back(rr.rows[0]);
            ++trials;
            frozen += rr.rows[0][4] == "1";
        }
        nlohmann::json entry = proportion(frozen, trials);
        entry["m"] = m;
        entry["domain_volume"] = sites->size();
        per_m.push_back(entry);
    }
    res.summary = {{"per_m", per_m}};
    res.seed_manifest = seed_manifest(options.base_seed, options.replicas);
    res.wall_seconds = clock.seconds();
    return res;
}

}  // namespace frozenperc
