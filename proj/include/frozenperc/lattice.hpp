// Triangular-lattice geometry: vertices x + y*e^{i*pi/3}, the six-neighbor
// relation, the L-infinity metric on the planar embedding, and finite regions.
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace frozenperc {

inline constexpr double kSqrt3Half = 0.86602540378443864676;

/// Lattice coordinates of the vertex x + y*e^{i*pi/3}.
struct Coord {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
    friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline constexpr std::array<Coord, 6> kNeighborOffsets{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};

Point embed(Coord v);

std::array<Coord, 6> neighbors(Coord v);

/// Axis-aligned bounding box of a vertex set in the embedding, kept in
/// integer form: twice the embedded x (2x + y) and the row index y. The L-inf
/// diameter of any set equals the larger side of its bounding box, so this is
/// all that is needed to track cluster diameters incrementally.
struct BoundingBox {
    int min_x2 = 0;
    int max_x2 = 0;
    int min_y = 0;
    int max_y = 0;
    bool empty = true;

    static BoundingBox of(Coord v);
    void add(Coord v);
    void merge(const BoundingBox& other);
    double diameter() const;
    Point lower() const;
    Point upper() const;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// sup over pairs of the L-inf distance between embedded points; 0 for the
/// empty set and for singletons.
double linf_diameter(std::span<const Coord> sites);

enum class RegionKind : std::uint8_t { box = 0, annulus = 1, rectangle = 2 };

/// A finite set of vertices described in embedded coordinates.
///   box:       ||embed(v) - center||_inf <= outer
///   annulus:   inner < ||embed(v) - center||_inf <= outer
///   rectangle: x1 <= embed(v).x <= x2 and y1 <= embed(v).y <= y2
struct Region {
    RegionKind kind = RegionKind::box;
    Point center{};
    double inner = 0.0;
    double outer = 0.0;
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;

    static Region box(double radius, Point center = {});
    static Region annulus(double inner, double outer, Point center = {});
    static Region rectangle(double x1, double x2, double y1, double y2);

    bool contains(Coord v) const;
    /// Embedded bounding rectangle of the region (may be inverted when empty).
    std::array<double, 4> extent() const;

    friend bool operator==(const Region&, const Region&) = default;
};

/// Every vertex of the region, lexicographic in (x, y).
std::vector<Coord> sites_of(const Region& region);

/// Indexed vertex set of a region with a precomputed neighbor table. Site
/// indices follow the canonical (lexicographic) order; a neighbor slot holds -1
/// when that neighbor lies outside the region, so a site lies on the inner
/// boundary exactly when one of its slots is -1.
class SiteIndex {
public:
    explicit SiteIndex(const Region& region);

    const Region& region() const { return region_; }
    std::span<const Coord> sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    Coord site(std::size_t i) const { return sites_[i]; }

    /// -1 when v is not part of the region.
    std::int32_t index_of(Coord v) const noexcept;
    bool contains(Coord v) const noexcept { return index_of(v) >= 0; }

    std::span<const std::int32_t, 6> neighbors(std::size_t i) const {
        return std::span<const std::int32_t, 6>(&neighbor_table_[6 * i], 6);
    }
    bool on_inner_boundary(std::size_t i) const;

private:
    Region region_;
    std::vector<Coord> sites_;
    int min_x_ = 0, max_x_ = -1, min_y_ = 0, max_y_ = -1;
    std::vector<std::int32_t> lookup_;
    std::vector<std::int32_t> neighbor_table_;
};

}  // namespace frozenperc
