#include "frozenperc/connectivity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "frozenperc/union_find.hpp"

namespace frozenperc {

namespace {

constexpr std::size_t kRightSlot = 0;  // offset (1, 0)
constexpr std::size_t kLeftSlot = 1;   // offset (-1, 0)

enum class Side : std::uint8_t { left, right, bottom, top };

bool on_side(const SiteIndex& sites, std::size_t i, Side side, int min_row, int max_row) {
    switch (side) {
        case Side::left: return sites.neighbors(i)[kLeftSlot] < 0;
        case Side::right: return sites.neighbors(i)[kRightSlot] < 0;
        case Side::bottom: return sites.site(i).y == min_row;
        case Side::top: return sites.site(i).y == max_row;
    }
    return false;
}

std::pair<int, int> row_range(const SiteIndex& sites) {
    int lo = 0, hi = -1;
    bool first = true;
    for (const Coord& v : sites.sites()) {
        if (first) {
            lo = hi = v.y;
            first = false;
        } else {
            lo = std::min(lo, v.y);
            hi = std::max(hi, v.y);
        }
    }
    return {lo, hi};
}

// Search state per local site: 0 unseen, 1 wrong color, 2 reached.
constexpr std::uint8_t kUnseen = 0;
constexpr std::uint8_t kBlocked = 1;
constexpr std::uint8_t kReached = 2;

// Marks every site of `color` joined to `from` inside the bound region. tau is
// read at most once per site so lazy fields stay cheap.
template <typename TauOf>
std::vector<std::uint8_t> flood_from_side(const SiteIndex& local, TauOf&& tau_of, double p,
                                          Color color, Side from) {
    const auto [min_row, max_row] = row_range(local);
    std::vector<std::uint8_t> state(local.size(), kUnseen);
    std::vector<std::int32_t> stack;
    auto visit = [&](std::int32_t i) {
        if (state[i] != kUnseen) return;
        if (has_color(tau_of(static_cast<std::size_t>(i)), p, color)) {
            state[i] = kReached;
            stack.push_back(i);
        } else {
            state[i] = kBlocked;
        }
    };
    for (std::size_t i = 0; i < local.size(); ++i) {
        if (on_side(local, i, from, min_row, max_row)) visit(static_cast<std::int32_t>(i));
    }
    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        for (std::int32_t j : local.neighbors(static_cast<std::size_t>(i))) {
            if (j >= 0) visit(j);
        }
    }
    return state;
}

template <typename TauOf>
bool crossing_search(const SiteIndex& local, TauOf&& tau_of, double p, Color color,
                     Orientation orientation) {
    const auto [min_row, max_row] = row_range(local);
    const Side from = orientation == Orientation::horizontal ? Side::left : Side::bottom;
    const Side to = orientation == Orientation::horizontal ? Side::right : Side::top;
    std::vector<std::uint8_t> state(local.size(), kUnseen);
    std::vector<std::int32_t> stack;
    for (std::size_t i = 0; i < local.size(); ++i) {
        if (!on_side(local, i, from, min_row, max_row)) continue;
        if (state[i] != kUnseen) continue;
        if (!has_color(tau_of(i), p, color)) {
            state[i] = kBlocked;
            continue;
        }
        state[i] = kReached;
        stack.push_back(static_cast<std::int32_t>(i));
        while (!stack.empty()) {
            const std::int32_t s = stack.back();
            stack.pop_back();
            if (on_side(local, static_cast<std::size_t>(s), to, min_row, max_row)) return true;
            for (std::int32_t j : local.neighbors(static_cast<std::size_t>(s))) {
                if (j < 0 || state[j] != kUnseen) continue;
                if (has_color(tau_of(static_cast<std::size_t>(j)), p, color)) {
                    state[j] = kReached;
                    stack.push_back(j);
                } else {
                    state[j] = kBlocked;
                }
            }
        }
    }
    return false;
}

int checked_scale(int n) {
    if (n < 1) throw std::invalid_argument("four-arm scale must be >= 1");
    return n;
}

Color opposite(Color c) { return c == Color::black ? Color::white : Color::black; }

}  // namespace

BoundRegion::BoundRegion(const Region& region, std::shared_ptr<const SiteIndex> domain)
    : local_(region), domain_(std::move(domain)) {
    to_domain_.resize(local_.size());
    for (std::size_t i = 0; i < local_.size(); ++i) {
        const Coord v = local_.site(i);
        const std::int32_t j = domain_->index_of(v);
        if (j < 0) {
            throw std::out_of_range("region site (" + std::to_string(v.x) + ", " +
                                    std::to_string(v.y) + ") is outside the field domain");
        }
        to_domain_[i] = j;
    }
}

ComponentLabeling components(const TauField& field, const Region& region, double p, Color color) {
    const BoundRegion bound(region, field.shared_sites());
    const SiteIndex& local = bound.local();
    const std::size_t n = local.size();

    std::vector<std::uint8_t> in_color(n);
    for (std::size_t i = 0; i < n; ++i) {
        in_color[i] = has_color(field.tau(static_cast<std::size_t>(bound.to_domain(i))), p, color);
    }
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_color[i]) continue;
        for (std::int32_t j : local.neighbors(i)) {
            if (j > static_cast<std::int32_t>(i) && in_color[j]) {
                sets.unite(static_cast<std::int32_t>(i), j);
            }
        }
    }

    ComponentLabeling out;
    out.sites.assign(local.sites().begin(), local.sites().end());
    out.label.assign(n, -1);
    std::vector<std::int32_t> root_label(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_color[i]) continue;
        const std::int32_t r = sets.find(static_cast<std::int32_t>(i));
        if (root_label[r] < 0) {
            root_label[r] = static_cast<std::int32_t>(out.size.size());
            out.size.push_back(0);
            out.bbox.emplace_back();
        }
        const std::int32_t id = root_label[r];
        out.label[i] = id;
        out.size[id] += 1;
        out.bbox[id].add(local.site(i));
    }
    return out;
}

bool has_crossing(const TauField& field, const BoundRegion& rect, double p, Color color,
                  Orientation orientation) {
    return crossing_search(
        rect.local(),
        [&](std::size_t i) { return field.tau(static_cast<std::size_t>(rect.to_domain(i))); }, p,
        color, orientation);
}

bool has_crossing(const TauField& field, const Region& rect, double p, Color color,
                  Orientation orientation) {
    if (rect.kind != RegionKind::rectangle) throw std::invalid_argument("crossing needs a rectangle");
    return has_crossing(field, BoundRegion(rect, field.shared_sites()), p, color, orientation);
}

bool has_circuit(const TauField& field, const Region& annulus, double p, Color color) {
    if (annulus.kind != RegionKind::annulus) throw std::invalid_argument("circuit needs an annulus");
    if (!(annulus.inner < annulus.outer)) {
        throw std::invalid_argument("annulus needs inner radius < outer radius");
    }
    const Region hole = Region::box(annulus.inner, annulus.center);
    if (sites_of(hole).empty()) throw std::invalid_argument("annulus hole contains no vertex");

    const BoundRegion bound(annulus, field.shared_sites());
    const SiteIndex& local = bound.local();
    if (local.size() == 0) return false;

    // A circuit of `color` surrounds the hole iff no path of the opposite
    // color joins the hole's outer boundary to the annulus' outer rim.
    const Color dual = opposite(color);
    std::vector<std::uint8_t> touches_hole(local.size(), 0);
    std::vector<std::uint8_t> touches_rim(local.size(), 0);
    for (std::size_t i = 0; i < local.size(); ++i) {
        const Coord v = local.site(i);
        for (std::size_t k = 0; k < 6; ++k) {
            if (local.neighbors(i)[k] >= 0) continue;
            const Coord u = v + kNeighborOffsets[k];
            if (hole.contains(u)) {
                touches_hole[i] = 1;
            } else {
                touches_rim[i] = 1;
            }
        }
    }
    std::vector<std::uint8_t> state(local.size(), kUnseen);
    std::vector<std::int32_t> stack;
    auto tau_of = [&](std::size_t i) { return field.tau(static_cast<std::size_t>(bound.to_domain(i))); };
    for (std::size_t i = 0; i < local.size(); ++i) {
        if (!touches_hole[i] || state[i] != kUnseen) continue;
        if (!has_color(tau_of(i), p, dual)) {
            state[i] = kBlocked;
            continue;
        }
        state[i] = kReached;
        stack.push_back(static_cast<std::int32_t>(i));
        while (!stack.empty()) {
            const std::int32_t s = stack.back();
            stack.pop_back();
            if (touches_rim[s]) return false;
            for (std::int32_t j : local.neighbors(static_cast<std::size_t>(s))) {
                if (j < 0 || state[j] != kUnseen) continue;
                if (has_color(tau_of(static_cast<std::size_t>(j)), p, dual)) {
                    state[j] = kReached;
                    stack.push_back(j);
                } else {
                    state[j] = kBlocked;
                }
            }
        }
    }
    return true;
}

FourArmDetector::FourArmDetector(std::shared_ptr<const SiteIndex> domain, int n)
    : n_(n),
      domain_(domain),
      horizontal_(Region::rectangle(-3.0 * checked_scale(n), 3.0 * n, -1.0 * n, 1.0 * n), domain),
      vertical_(Region::rectangle(-1.0 * n, 1.0 * n, -3.0 * n, 3.0 * n), domain) {
    for (const Coord& v : sites_of(Region::box(0.5 * n))) {
        candidates_.push_back(domain_->index_of(v));
    }
}

std::vector<std::uint8_t> FourArmDetector::mark(const TauField& field, double p_black,
                                                double p_white) const {
    auto h_tau = [&](std::size_t i) { return field.tau(static_cast<std::size_t>(horizontal_.to_domain(i))); };
    auto v_tau = [&](std::size_t i) { return field.tau(static_cast<std::size_t>(vertical_.to_domain(i))); };
    const auto left = flood_from_side(horizontal_.local(), h_tau, p_black, Color::black, Side::left);
    const auto right = flood_from_side(horizontal_.local(), h_tau, p_black, Color::black, Side::right);
    const auto bottom = flood_from_side(vertical_.local(), v_tau, p_white, Color::white, Side::bottom);
    const auto top = flood_from_side(vertical_.local(), v_tau, p_white, Color::white, Side::top);

    const SiteIndex& dom = *domain_;
    std::vector<std::uint8_t> hit(candidates_.size(), 0);
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
        const Coord v = dom.site(static_cast<std::size_t>(candidates_[c]));
        const std::int32_t vi = vertical_.local().index_of(v);
        if (vi < 0 || top[vi] != kReached || bottom[vi] != kReached) continue;
        std::int32_t left_arm = -1, right_arm = -1;
        int left_count = 0, right_count = 0;
        for (const Coord& u : neighbors(v)) {
            const std::int32_t hi = horizontal_.local().index_of(u);
            if (hi < 0) continue;
            if (left[hi] == kReached) {
                left_arm = hi;
                ++left_count;
            }
            if (right[hi] == kReached) {
                right_arm = hi;
                ++right_count;
            }
        }
        if (left_count == 0 || right_count == 0) continue;
        // Distinct endpoints: only fails if the single candidate on each side
        // is the same neighbor.
        if (left_count == 1 && right_count == 1 && left_arm == right_arm) continue;
        hit[c] = 1;
    }
    return hit;
}

std::vector<Coord> FourArmDetector::sites(const TauField& field, double p_black,
                                          double p_white) const {
    const auto hit = mark(field, p_black, p_white);
    std::vector<Coord> out;
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
        if (hit[c]) out.push_back(domain_->site(static_cast<std::size_t>(candidates_[c])));
    }
    return out;
}

std::int64_t FourArmDetector::count(const TauField& field, double p_black, double p_white) const {
    std::int64_t total = 0;
    for (std::uint8_t h : mark(field, p_black, p_white)) total += h;
    return total;
}

std::vector<Coord> four_arm_sites(const TauField& field, int n, double p_black, double p_white) {
    return FourArmDetector(field.shared_sites(), n).sites(field, p_black, p_white);
}

std::int64_t count_passage_sites(const TauField& field, int n, double p_black, double p_white) {
    return FourArmDetector(field.shared_sites(), n).count(field, p_black, p_white);
}

double NetDetector::covered_radius(int m, int n) {
    const int k = static_cast<int>(std::ceil(static_cast<double>(n) / (2.0 * m))) + 1;
    return static_cast<double>((2 * k + 1) * m);
}

NetDetector::NetDetector(std::shared_ptr<const SiteIndex> domain, int m, int n) {
    if (m < 1) throw std::invalid_argument("net mesh must be >= 1");
    if (m > n) throw std::invalid_argument("net mesh must not exceed the net radius");
    const int k = static_cast<int>(std::ceil(static_cast<double>(n) / (2.0 * m))) + 1;
    const double mm = m;
    for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
            const double cx = 2.0 * mm * i;
            const double cy = 2.0 * mm * j;
            if (i < k) {
                rects_.push_back({BoundRegion(Region::rectangle(cx - mm, cx + 2.0 * mm + mm,
                                                                cy - mm, cy + mm),
                                              domain),
                                  Orientation::horizontal});
            }
            if (j < k) {
                rects_.push_back({BoundRegion(Region::rectangle(cx - mm, cx + mm, cy - mm,
                                                                cy + 2.0 * mm + mm),
                                              domain),
                                  Orientation::vertical});
            }
        }
    }
}

bool NetDetector::holds(const TauField& field, double p) const {
    for (const Domino& d : rects_) {
        if (!has_crossing(field, d.rect, p, Color::black, d.long_direction)) return false;
    }
    return true;
}

bool net_event(const TauField& field, int m, int n, double p) {
    return NetDetector(field.shared_sites(), m, n).holds(field, p);
}

}  // namespace frozenperc
