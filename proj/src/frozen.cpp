#include "frozenperc/frozen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "binary_io.hpp"

namespace frozenperc {

namespace {

constexpr char kStateMagic[5] = "FPFS";
constexpr std::uint32_t kStateVersion = 1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(SizeRule r) { return r == SizeRule::diameter ? "diameter" : "volume"; }
std::string to_string(BoundaryRule r) { return r == BoundaryRule::original ? "original" : "modified"; }

SizeRule parse_size_rule(const std::string& s) {
    if (s == "diameter" || s == "diam") return SizeRule::diameter;
    if (s == "volume" || s == "vol") return SizeRule::volume;
    throw std::invalid_argument("unknown size rule '" + s + "' (expected diam|vol)");
}

BoundaryRule parse_boundary_rule(const std::string& s) {
    if (s == "original" || s == "orig") return BoundaryRule::original;
    if (s == "modified" || s == "mod") return BoundaryRule::modified;
    throw std::invalid_argument("unknown boundary rule '" + s + "' (expected original|modified)");
}

void ProcessConfig::validate() const {
    if (std::isnan(threshold) || threshold < 1.0) {
        throw std::invalid_argument("threshold N must be >= 1");
    }
    if (size_rule == SizeRule::volume && std::isfinite(threshold) &&
        threshold != std::floor(threshold)) {
        throw std::invalid_argument("volume threshold must be an integer");
    }
    const auto [x0, x1, y0, y1] = domain.extent();
    if (!(x0 <= x1 && y0 <= y1) || !std::isfinite(x0 + x1 + y0 + y1)) {
        throw std::invalid_argument("domain must be a nonempty finite region");
    }
}

ProcessConfig ProcessConfig::diameter_default(BoundaryRule rule, double n, std::uint64_t seed) {
    ProcessConfig c;
    c.size_rule = SizeRule::diameter;
    c.boundary_rule = rule;
    c.threshold = n;
    c.domain = Region::box(4.0 * n);
    c.seed = seed;
    return c;
}

bool FinalState::is_frozen(std::size_t site) const {
    if (config.boundary_rule == BoundaryRule::modified) return state[site] == SiteState::frozen;
    return !std::isnan(freeze_time[site]);
}

const ClusterRecord* FinalState::cluster_record(std::int32_t id) const {
    auto it = std::lower_bound(clusters.begin(), clusters.end(), id,
                               [](const ClusterRecord& c, std::int32_t v) { return c.id < v; });
    if (it == clusters.end() || it->id != id) return nullptr;
    return &*it;
}

void FinalState::save(std::ostream& out) const {
    detail::write_magic(out, kStateMagic);
    detail::write_le<std::uint32_t>(out, kStateVersion);
    detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(config.size_rule));
    detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(config.boundary_rule));
    detail::write_f64(out, config.threshold);
    detail::write_le<std::uint64_t>(out, config.seed);
    detail::write_region(out, config.domain);
    detail::write_le<std::uint64_t>(out, state.size());
    for (SiteState s : state) detail::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(s));
    for (double t : freeze_time) detail::write_f64(out, t);
    if (!out) throw std::runtime_error("failed to write final state");
}

std::string FinalState::serialize() const {
    std::ostringstream out(std::ios::binary);
    save(out);
    return std::move(out).str();
}

FinalState FinalState::load(std::istream& in) {
    detail::expect_magic(in, kStateMagic);
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kStateVersion) {
        throw std::runtime_error("unsupported final state version " + std::to_string(version));
    }
    FinalState fs;
    const auto size_rule = detail::read_le<std::uint8_t>(in);
    const auto boundary_rule = detail::read_le<std::uint8_t>(in);
    if (size_rule > 1 || boundary_rule > 1) throw std::runtime_error("bad rule code in final state");
    fs.config.size_rule = static_cast<SizeRule>(size_rule);
    fs.config.boundary_rule = static_cast<BoundaryRule>(boundary_rule);
    fs.config.threshold = detail::read_f64(in);
    fs.config.seed = detail::read_le<std::uint64_t>(in);
    fs.config.domain = detail::read_region(in);
    fs.sites = std::make_shared<const SiteIndex>(fs.config.domain);
    const auto count = detail::read_le<std::uint64_t>(in);
    if (count != fs.sites->size()) throw std::runtime_error("final state site count does not match domain");
    fs.state.resize(count);
    for (auto& s : fs.state) {
        const auto code = detail::read_le<std::uint8_t>(in);
        if (code > 2) throw std::runtime_error("bad site state code");
        s = static_cast<SiteState>(code);
    }
    fs.freeze_time.resize(count);
    for (auto& t : fs.freeze_time) t = detail::read_f64(in);
    return fs;
}

FinalState run(const ProcessConfig& config) {
    config.validate();
    return run(config, TauField::sample(config.domain, config.seed));
}

FinalState run(const ProcessConfig& config, const TauField& field) {
    config.validate();
    if (!(field.domain() == config.domain)) {
        throw std::invalid_argument("tau field domain differs from the process domain");
    }
    const SiteIndex& sites = field.sites();
    const std::size_t n = sites.size();
    const bool modified = config.boundary_rule == BoundaryRule::modified;
    const bool by_diameter = config.size_rule == SizeRule::diameter;
    const double threshold = config.threshold;

    std::vector<double> tau(n);
    for (std::size_t i = 0; i < n; ++i) tau[i] = field.tau(i);
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return tau[a] < tau[b] || (tau[a] == tau[b] && a < b);
    });

    // Union-find over activated sites; the payload is valid at roots only.
    std::vector<std::int32_t> parent(n, -1);
    std::vector<std::int64_t> volume(n, 0);
    std::vector<BoundingBox> bbox(n);
    std::vector<std::uint8_t> frozen(n, 0);
    std::vector<double> root_freeze_time(n, kNaN);
    auto find = [&](std::int32_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };

    FinalState out;
    out.config = config;
    out.sites = field.shared_sites();
    out.events.reserve(n);

    for (const std::int32_t v : order) {
        std::array<std::int32_t, 6> roots{};
        std::size_t root_count = 0;
        bool blocked = false;
        for (const std::int32_t u : sites.neighbors(static_cast<std::size_t>(v))) {
            if (u < 0 || parent[u] < 0) continue;
            const std::int32_t r = find(u);
            if (frozen[r]) {
                if (!modified) blocked = true;
                continue;
            }
            if (std::find(roots.begin(), roots.begin() + root_count, r) == roots.begin() + root_count) {
                roots[root_count++] = r;
            }
        }
        if (blocked) {
            out.events.push_back({tau[v], v, Action::stayed_white});
            continue;
        }

        std::int64_t merged_volume = 1;
        BoundingBox merged_box = BoundingBox::of(sites.site(static_cast<std::size_t>(v)));
        std::int32_t root = v;
        std::int64_t root_volume = 1;
        for (std::size_t k = 0; k < root_count; ++k) {
            merged_volume += volume[roots[k]];
            merged_box.merge(bbox[roots[k]]);
            if (volume[roots[k]] > root_volume) {
                root = roots[k];
                root_volume = volume[roots[k]];
            }
        }
        parent[v] = root;
        for (std::size_t k = 0; k < root_count; ++k) parent[roots[k]] = root;
        volume[root] = merged_volume;
        bbox[root] = merged_box;

        const double size = by_diameter ? merged_box.diameter() : static_cast<double>(merged_volume);
        if (size >= threshold) {
            frozen[root] = 1;
            root_freeze_time[root] = tau[v];
            out.events.push_back({tau[v], v, Action::froze_cluster});
        } else {
            out.events.push_back({tau[v], v, Action::became_black});
        }
    }

    out.state.assign(n, SiteState::white);
    out.freeze_time.assign(n, kNaN);
    out.cluster.assign(n, -1);
    std::vector<std::int32_t> root_id(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] < 0) continue;
        const std::int32_t r = find(static_cast<std::int32_t>(i));
        if (root_id[r] < 0) {
            root_id[r] = static_cast<std::int32_t>(i);
            out.clusters.push_back({static_cast<std::int32_t>(i), volume[r], bbox[r], frozen[r] != 0,
                                    root_freeze_time[r]});
        }
        out.cluster[i] = root_id[r];
        out.state[i] = (modified && frozen[r]) ? SiteState::frozen : SiteState::black;
        out.freeze_time[i] = root_freeze_time[r];
    }
    return out;
}

namespace {

std::size_t origin_index(const FinalState& fs) {
    const std::int32_t i = fs.sites->index_of({0, 0});
    if (i < 0) throw std::out_of_range("origin is not in the process domain");
    return static_cast<std::size_t>(i);
}

// Members of the time-1 cluster of `start`: same-state neighbors, and for
// frozen sites also the same freeze time (adjacent frozen clusters froze at
// different activations, hence different times).
std::vector<Coord> cluster_members(const FinalState& fs, std::size_t start) {
    const SiteIndex& sites = *fs.sites;
    auto same = [&](std::size_t a, std::size_t b) {
        if (fs.state[a] != fs.state[b]) return false;
        if (fs.state[a] == SiteState::frozen) return fs.freeze_time[a] == fs.freeze_time[b];
        return true;
    };
    std::vector<std::uint8_t> seen(sites.size(), 0);
    std::vector<std::size_t> stack{start};
    std::vector<Coord> members;
    seen[start] = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        members.push_back(sites.site(i));
        for (std::int32_t j : sites.neighbors(i)) {
            if (j < 0 || seen[j] || !same(start, static_cast<std::size_t>(j))) continue;
            seen[j] = 1;
            stack.push_back(static_cast<std::size_t>(j));
        }
    }
    return members;
}

}  // namespace

bool origin_freezes(const FinalState& final_state) {
    return final_state.is_frozen(origin_index(final_state));
}

std::optional<double> origin_freeze_time(const FinalState& final_state) {
    const std::size_t i = origin_index(final_state);
    if (!final_state.is_frozen(i)) return std::nullopt;
    return final_state.freeze_time[i];
}

double origin_cluster_diameter(const FinalState& final_state) {
    const std::size_t i = origin_index(final_state);
    if (final_state.state[i] == SiteState::white) return 0.0;
    if (!final_state.cluster.empty()) {
        if (const ClusterRecord* c = final_state.cluster_record(final_state.cluster[i])) {
            return c->diameter();
        }
    }
    return linf_diameter(cluster_members(final_state, i));
}

}  // namespace frozenperc
