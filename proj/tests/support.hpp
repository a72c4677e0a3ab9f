// Shared test helpers and independent oracles. Oracles work from coordinates
// and the raw neighbor relation only, never through SiteIndex tables or the
// library's search routines.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "frozenperc/connectivity.hpp"
#include "frozenperc/field.hpp"
#include "frozenperc/frozen.hpp"
#include "frozenperc/lattice.hpp"

namespace testing {

using namespace frozenperc;

inline TauField field_with(const Region& region, std::vector<double> values) {
    return TauField::from_values(std::make_shared<const SiteIndex>(region), std::move(values));
}

inline TauField field_from(const Region& region, std::uint64_t seed) {
    auto sites = std::make_shared<const SiteIndex>(region);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> values(sites->size());
    for (auto& v : values) v = u(rng);
    return TauField::from_values(sites, std::move(values), seed);
}

/// Coordinate-keyed view of a colored region.
struct Colored {
    std::map<Coord, bool> in;  // site -> has the color

    bool has(Coord c) const {
        auto it = in.find(c);
        return it != in.end() && it->second;
    }
};

inline Colored colored(const TauField& f, const Region& region, double p, Color color) {
    Colored out;
    for (Coord c : sites_of(region)) out.in[c] = has_color(f.tau(c), p, color);
    return out;
}

/// Sites of `color` reachable from any of `sources` within `allowed`.
inline std::set<Coord> reach(const Colored& g, const std::vector<Coord>& sources) {
    std::set<Coord> seen;
    std::queue<Coord> q;
    for (Coord s : sources) {
        if (g.has(s) && seen.insert(s).second) q.push(s);
    }
    while (!q.empty()) {
        const Coord v = q.front();
        q.pop();
        for (Coord u : neighbors(v)) {
            if (g.has(u) && seen.insert(u).second) q.push(u);
        }
    }
    return seen;
}

inline double brute_diameter(const std::vector<Coord>& s) {
    double d = 0.0;
    for (Coord a : s) {
        for (Coord b : s) {
            const Point pa = embed(a), pb = embed(b);
            d = std::max({d, std::abs(pa.x - pb.x), std::abs(pa.y - pb.y)});
        }
    }
    return d;
}

/// Crossing oracle: sides found by coordinate scans of the region.
inline bool brute_crossing(const TauField& f, const Region& rect, double p, Color color, Orientation o) {
    const auto sites = sites_of(rect);
    if (sites.empty()) return false;
    const Colored g = colored(f, rect, p, color);
    int lo = sites.front().y, hi = lo;
    for (Coord c : sites) {
        lo = std::min(lo, c.y);
        hi = std::max(hi, c.y);
    }
    std::vector<Coord> from;
    std::set<Coord> to;
    for (Coord c : sites) {
        if (o == Orientation::horizontal) {
            if (!rect.contains(Coord{c.x - 1, c.y})) from.push_back(c);
            if (!rect.contains(Coord{c.x + 1, c.y})) to.insert(c);
        } else {
            if (c.y == lo) from.push_back(c);
            if (c.y == hi) to.insert(c);
        }
    }
    for (Coord c : reach(g, from)) {
        if (to.count(c)) return true;
    }
    return false;
}

/// Circuit oracle: looks for a cycle of `color` in the annulus that winds
/// around the center (a lattice vertex). Edges crossing the ray from
/// center + (0, 0.25) to +infinity carry voltage +-1; a same-color cycle with
/// nonzero winding exists iff BFS potentials are inconsistent somewhere.
inline bool brute_circuit(const TauField& f, const Region& annulus, double p, Color color) {
    const Colored g = colored(f, annulus, p, color);
    const double h = annulus.center.y + 0.25;
    auto voltage = [&](Coord a, Coord b) {
        const Point pa = embed(a), pb = embed(b);
        if ((pa.y - h) * (pb.y - h) >= 0.0) return 0;
        const double x = pa.x + (h - pa.y) * (pb.x - pa.x) / (pb.y - pa.y);
        if (x <= annulus.center.x) return 0;
        return pb.y > pa.y ? 1 : -1;
    };
    std::map<Coord, int> potential;
    for (const auto& [start, on] : g.in) {
        if (!on || potential.count(start)) continue;
        potential[start] = 0;
        std::queue<Coord> q;
        q.push(start);
        while (!q.empty()) {
            const Coord v = q.front();
            q.pop();
            for (Coord u : neighbors(v)) {
                if (!g.has(u)) continue;
                const int want = potential[v] + voltage(v, u);
                auto it = potential.find(u);
                if (it == potential.end()) {
                    potential[u] = want;
                    q.push(u);
                } else if (it->second != want) {
                    return true;
                }
            }
        }
    }
    return false;
}

/// Per-site passage test: from each candidate v, searches its own arms.
inline std::vector<Coord> brute_four_arm(const TauField& f, int n, double p_black, double p_white) {
    const Region hslab = Region::rectangle(-3.0 * n, 3.0 * n, -1.0 * n, 1.0 * n);
    const Region vslab = Region::rectangle(-1.0 * n, 1.0 * n, -3.0 * n, 3.0 * n);
    const Colored black = colored(f, hslab, p_black, Color::black);
    const Colored white = colored(f, vslab, p_white, Color::white);
    const auto vs = sites_of(vslab);
    int lo = vs.front().y, hi = lo;
    for (Coord c : vs) {
        lo = std::min(lo, c.y);
        hi = std::max(hi, c.y);
    }
    std::vector<Coord> out;
    for (Coord v : sites_of(Region::box(0.5 * n))) {
        if (!white.has(v)) continue;
        const auto up = reach(white, {v});
        bool top = false, bottom = false;
        for (Coord c : up) {
            top |= c.y == hi;
            bottom |= c.y == lo;
        }
        if (!top || !bottom) continue;
        std::vector<Coord> left_hits, right_hits;
        for (Coord u : neighbors(v)) {
            for (Coord c : reach(black, {u})) {
                if (!hslab.contains(Coord{c.x - 1, c.y})) left_hits.push_back(u);
                if (!hslab.contains(Coord{c.x + 1, c.y})) right_hits.push_back(u);
            }
        }
        std::sort(left_hits.begin(), left_hits.end());
        left_hits.erase(std::unique(left_hits.begin(), left_hits.end()), left_hits.end());
        std::sort(right_hits.begin(), right_hits.end());
        right_hits.erase(std::unique(right_hits.begin(), right_hits.end()), right_hits.end());
        bool distinct = false;
        for (Coord a : left_hits) {
            for (Coord b : right_hits) distinct |= !(a == b);
        }
        if (distinct) out.push_back(v);
    }
    return out;
}

inline ProcessConfig config_of(SizeRule size, BoundaryRule boundary, double n, Region domain,
                               std::uint64_t seed = 0) {
    ProcessConfig c;
    c.size_rule = size;
    c.boundary_rule = boundary;
    c.threshold = n;
    c.domain = domain;
    c.seed = seed;
    return c;
}

inline bool same_double(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace testing
