// Naive frozen-percolation oracle. Every activation recomputes the clusters it
// touches by depth-first search over the current configuration; nothing is
// cached between activations.
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "frozenperc/frozen.hpp"

namespace frozenperc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sites reachable from `start` through sites accepted by `member`.
template <typename Member>
std::vector<std::int32_t> search(const SiteIndex& sites, std::int32_t start, Member&& member) {
    std::vector<std::int32_t> found{start};
    std::vector<std::uint8_t> seen(sites.size(), 0);
    seen[start] = 1;
    for (std::size_t head = 0; head < found.size(); ++head) {
        for (std::int32_t j : sites.neighbors(static_cast<std::size_t>(found[head]))) {
            if (j < 0 || seen[j] || !member(j)) continue;
            seen[j] = 1;
            found.push_back(j);
        }
    }
    return found;
}

double size_of(const SiteIndex& sites, const std::vector<std::int32_t>& members, SizeRule rule) {
    if (rule == SizeRule::volume) return static_cast<double>(members.size());
    std::vector<Coord> coords;
    coords.reserve(members.size());
    for (std::int32_t i : members) coords.push_back(sites.site(static_cast<std::size_t>(i)));
    return linf_diameter(coords);
}

}  // namespace

FinalState reference_run(const ProcessConfig& config) {
    config.validate();
    return reference_run(config, TauField::sample(config.domain, config.seed));
}

FinalState reference_run(const ProcessConfig& config, const TauField& field) {
    config.validate();
    if (!(field.domain() == config.domain)) {
        throw std::invalid_argument("tau field domain differs from the process domain");
    }
    const SiteIndex& sites = field.sites();
    const std::size_t n = sites.size();
    const bool modified = config.boundary_rule == BoundaryRule::modified;

    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return field.tau(static_cast<std::size_t>(a)) < field.tau(static_cast<std::size_t>(b));
    });

    FinalState out;
    out.config = config;
    out.sites = field.shared_sites();
    out.state.assign(n, SiteState::white);
    out.freeze_time.assign(n, kNaN);
    // Frozen clusters under the modified rule are told apart by the
    // activation that froze them.
    std::vector<std::int32_t> frozen_by(n, -1);

    auto is_black = [&](std::int32_t j) { return out.state[j] == SiteState::black; };

    for (const std::int32_t v : order) {
        const double t = field.tau(static_cast<std::size_t>(v));
        std::vector<std::int32_t> adjacent_black;
        for (std::int32_t u : sites.neighbors(static_cast<std::size_t>(v))) {
            if (u >= 0 && is_black(u)) adjacent_black.push_back(u);
        }

        if (!modified) {
            // v may turn black iff every adjacent black cluster has size < N.
            bool allowed = true;
            for (std::int32_t u : adjacent_black) {
                if (size_of(sites, search(sites, u, is_black), config.size_rule) >= config.threshold) {
                    allowed = false;
                    break;
                }
            }
            if (!allowed) {
                out.events.push_back({t, v, Action::stayed_white});
                continue;
            }
            out.state[v] = SiteState::black;
            const auto cluster = search(sites, v, is_black);
            if (size_of(sites, cluster, config.size_rule) >= config.threshold) {
                for (std::int32_t i : cluster) out.freeze_time[i] = t;
                out.events.push_back({t, v, Action::froze_cluster});
            } else {
                out.events.push_back({t, v, Action::became_black});
            }
            continue;
        }

        // Modified rule: B = {v} plus every adjacent black (non-frozen) cluster.
        std::vector<std::int32_t> b{v};
        std::vector<std::uint8_t> in_b(n, 0);
        in_b[v] = 1;
        for (std::int32_t u : adjacent_black) {
            if (in_b[u]) continue;
            for (std::int32_t i : search(sites, u, is_black)) {
                if (!in_b[i]) {
                    in_b[i] = 1;
                    b.push_back(i);
                }
            }
        }
        if (size_of(sites, b, config.size_rule) >= config.threshold) {
            for (std::int32_t i : b) {
                out.state[i] = SiteState::frozen;
                out.freeze_time[i] = t;
                frozen_by[i] = v;
            }
            out.events.push_back({t, v, Action::froze_cluster});
        } else {
            out.state[v] = SiteState::black;
            out.events.push_back({t, v, Action::became_black});
        }
    }

    // Time-1 clusters: maximal connected sets of black sites, or of frozen
    // sites frozen by the same activation.
    out.cluster.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (out.state[i] == SiteState::white || out.cluster[i] >= 0) continue;
        const auto start = static_cast<std::int32_t>(i);
        const auto members = search(sites, start, [&](std::int32_t j) {
            return out.state[j] == out.state[i] && frozen_by[j] == frozen_by[i];
        });
        ClusterRecord rec{start, static_cast<std::int64_t>(members.size()), {}, false, kNaN};
        for (std::int32_t j : members) {
            out.cluster[j] = start;
            rec.bbox.add(sites.site(static_cast<std::size_t>(j)));
        }
        rec.freeze_time = out.freeze_time[i];
        rec.frozen = !std::isnan(rec.freeze_time);
        out.clusters.push_back(rec);
    }
    return out;
}

}  // namespace frozenperc
