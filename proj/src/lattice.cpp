#include "frozenperc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frozenperc {

namespace {

// Region membership is decided in floating point; sites exactly on a boundary
// (e.g. embedded x = n) must count as inside regardless of rounding.
constexpr double kMembershipTolerance = 1e-9;

}  // namespace

Point embed(Coord v) {
    return {static_cast<double>(v.x) + 0.5 * static_cast<double>(v.y),
            kSqrt3Half * static_cast<double>(v.y)};
}

std::array<Coord, 6> neighbors(Coord v) {
    std::array<Coord, 6> out{};
    for (std::size_t k = 0; k < kNeighborOffsets.size(); ++k) {
        out[k] = v + kNeighborOffsets[k];
    }
    return out;
}

BoundingBox BoundingBox::of(Coord v) {
    BoundingBox b;
    b.add(v);
    return b;
}

void BoundingBox::add(Coord v) {
    const int x2 = 2 * v.x + v.y;
    if (empty) {
        min_x2 = max_x2 = x2;
        min_y = max_y = v.y;
        empty = false;
        return;
    }
    min_x2 = std::min(min_x2, x2);
    max_x2 = std::max(max_x2, x2);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
}

void BoundingBox::merge(const BoundingBox& other) {
    if (other.empty) return;
    if (empty) {
        *this = other;
        return;
    }
    min_x2 = std::min(min_x2, other.min_x2);
    max_x2 = std::max(max_x2, other.max_x2);
    min_y = std::min(min_y, other.min_y);
    max_y = std::max(max_y, other.max_y);
}

double BoundingBox::diameter() const {
    if (empty) return 0.0;
    const double dx = 0.5 * static_cast<double>(max_x2 - min_x2);
    const double dy = kSqrt3Half * static_cast<double>(max_y - min_y);
    return std::max(dx, dy);
}

Point BoundingBox::lower() const {
    return {0.5 * static_cast<double>(min_x2), kSqrt3Half * static_cast<double>(min_y)};
}

Point BoundingBox::upper() const {
    return {0.5 * static_cast<double>(max_x2), kSqrt3Half * static_cast<double>(max_y)};
}

double linf_diameter(std::span<const Coord> sites) {
    BoundingBox b;
    for (const Coord& v : sites) b.add(v);
    return b.diameter();
}

Region Region::box(double radius, Point center) {
    Region r;
    r.kind = RegionKind::box;
    r.center = center;
    r.outer = radius;
    return r;
}

Region Region::annulus(double inner, double outer, Point center) {
    Region r;
    r.kind = RegionKind::annulus;
    r.center = center;
    r.inner = inner;
    r.outer = outer;
    return r;
}

Region Region::rectangle(double x1, double x2, double y1, double y2) {
    Region r;
    r.kind = RegionKind::rectangle;
    r.x1 = x1;
    r.x2 = x2;
    r.y1 = y1;
    r.y2 = y2;
    return r;
}

bool Region::contains(Coord v) const {
    const Point e = embed(v);
    switch (kind) {
        case RegionKind::box: {
            const double d = std::max(std::abs(e.x - center.x), std::abs(e.y - center.y));
            return d <= outer + kMembershipTolerance;
        }
        case RegionKind::annulus: {
            const double d = std::max(std::abs(e.x - center.x), std::abs(e.y - center.y));
            return d > inner + kMembershipTolerance && d <= outer + kMembershipTolerance;
        }
        case RegionKind::rectangle:
            return e.x >= x1 - kMembershipTolerance && e.x <= x2 + kMembershipTolerance &&
                   e.y >= y1 - kMembershipTolerance && e.y <= y2 + kMembershipTolerance;
    }
    return false;
}

std::array<double, 4> Region::extent() const {
    if (kind == RegionKind::rectangle) return {x1, x2, y1, y2};
    return {center.x - outer, center.x + outer, center.y - outer, center.y + outer};
}

std::vector<Coord> sites_of(const Region& region) {
    std::vector<Coord> out;
    const auto [ex0, ex1, ey0, ey1] = region.extent();
    if (!(ex0 <= ex1 && ey0 <= ey1) || !std::isfinite(ex0) || !std::isfinite(ex1) ||
        !std::isfinite(ey0) || !std::isfinite(ey1)) {
        return out;
    }
    const int y_lo = static_cast<int>(std::ceil((ey0 - kMembershipTolerance) / kSqrt3Half));
    const int y_hi = static_cast<int>(std::floor((ey1 + kMembershipTolerance) / kSqrt3Half));
    for (int y = y_lo; y <= y_hi; ++y) {
        const double shift = 0.5 * static_cast<double>(y);
        const int x_lo = static_cast<int>(std::ceil(ex0 - shift - kMembershipTolerance));
        const int x_hi = static_cast<int>(std::floor(ex1 - shift + kMembershipTolerance));
        for (int x = x_lo; x <= x_hi; ++x) {
            const Coord v{x, y};
            if (region.contains(v)) out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SiteIndex::SiteIndex(const Region& region) : region_(region), sites_(sites_of(region)) {
    if (sites_.empty()) return;
    min_x_ = sites_.front().x;
    max_x_ = sites_.back().x;
    min_y_ = std::numeric_limits<int>::max();
    max_y_ = std::numeric_limits<int>::min();
    for (const Coord& v : sites_) {
        min_y_ = std::min(min_y_, v.y);
        max_y_ = std::max(max_y_, v.y);
    }
    const std::size_t width = static_cast<std::size_t>(max_y_ - min_y_ + 1);
    lookup_.assign(static_cast<std::size_t>(max_x_ - min_x_ + 1) * width, -1);
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const Coord v = sites_[i];
        lookup_[static_cast<std::size_t>(v.x - min_x_) * width +
                static_cast<std::size_t>(v.y - min_y_)] = static_cast<std::int32_t>(i);
    }
    neighbor_table_.resize(6 * sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        for (std::size_t k = 0; k < 6; ++k) {
            neighbor_table_[6 * i + k] = index_of(sites_[i] + kNeighborOffsets[k]);
        }
    }
}

std::int32_t SiteIndex::index_of(Coord v) const noexcept {
    if (v.x < min_x_ || v.x > max_x_ || v.y < min_y_ || v.y > max_y_) return -1;
    const std::size_t width = static_cast<std::size_t>(max_y_ - min_y_ + 1);
    return lookup_[static_cast<std::size_t>(v.x - min_x_) * width +
                   static_cast<std::size_t>(v.y - min_y_)];
}

bool SiteIndex::on_inner_boundary(std::size_t i) const {
    for (std::int32_t j : neighbors(i)) {
        if (j < 0) return true;
    }
    return false;
}

}  // namespace frozenperc
