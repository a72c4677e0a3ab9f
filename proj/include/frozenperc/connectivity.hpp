// Static percolation analysis of a tau field at fixed parameters: cluster
// labeling, rectangle crossings, annulus circuits, four-arm (passage) sites
// and the net event.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "frozenperc/field.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

enum class Orientation : std::uint8_t { horizontal, vertical };

struct ComponentLabeling {
    std::vector<Coord> sites;          // region sites, canonical order
    std::vector<std::int32_t> label;   // component id per site, -1 if other color
    std::vector<std::int64_t> size;    // per component
    std::vector<BoundingBox> bbox;     // per component

    std::size_t count() const { return size.size(); }
};

/// A region whose sites are resolved against a field domain once, so repeated
/// queries over many fields with the same domain skip the geometry work.
/// Throws std::out_of_range if some site of the region is not in the domain.
class BoundRegion {
public:
    BoundRegion(const Region& region, std::shared_ptr<const SiteIndex> domain);

    const SiteIndex& local() const { return local_; }
    const SiteIndex& domain() const { return *domain_; }
    std::int32_t to_domain(std::size_t local_index) const { return to_domain_[local_index]; }

private:
    SiteIndex local_;
    std::shared_ptr<const SiteIndex> domain_;
    std::vector<std::int32_t> to_domain_;
};

/// Same-color clusters of the region at parameter p. Two sites share a label
/// iff a same-color path inside the region joins them.
ComponentLabeling components(const TauField& field, const Region& region, double p, Color color);

/// Left/right sides of a rectangle are the sites whose horizontal neighbor
/// falls outside it; bottom/top are its lowest and highest rows.
bool has_crossing(const TauField& field, const Region& rect, double p, Color color,
                  Orientation orientation);

/// Crossing of a rectangle bound to the field's domain.
bool has_crossing(const TauField& field, const BoundRegion& rect, double p, Color color,
                  Orientation orientation);

/// Whether a circuit of `color` inside the annulus surrounds its hole. Decided
/// by duality: no path of the opposite color may cross the annulus.
/// Throws std::invalid_argument for a non-annulus, inner >= outer, or a hole
/// containing no vertex.
bool has_circuit(const TauField& field, const Region& annulus, double p, Color color);

/// Prepared detector for the separated four-arm event at scale n, anchored on
/// the box of radius 3n around the origin. A candidate v in B_{n/2} is counted
/// when v is white at p_white, v joins the top and bottom sides of B_{3n} by
/// p_white-white paths inside [-n,n]x[-3n,3n], and two distinct neighbors of v
/// join the left and right sides by p_black-black paths inside
/// [-3n,3n]x[-n,n]. Four side-anchored searches decide every candidate.
class FourArmDetector {
public:
    /// Throws std::out_of_range when the slabs do not fit in the domain.
    FourArmDetector(std::shared_ptr<const SiteIndex> domain, int n);

    std::vector<Coord> sites(const TauField& field, double p_black, double p_white) const;
    std::int64_t count(const TauField& field, double p_black, double p_white) const;
    std::size_t candidate_count() const { return candidates_.size(); }
    int scale() const { return n_; }

private:
    std::vector<std::uint8_t> mark(const TauField& field, double p_black, double p_white) const;

    int n_;
    std::shared_ptr<const SiteIndex> domain_;
    BoundRegion horizontal_;
    BoundRegion vertical_;
    std::vector<std::int32_t> candidates_;  // domain indices of B_{n/2}
};

std::vector<Coord> four_arm_sites(const TauField& field, int n, double p_black, double p_white);

/// Number of passage sites in B_{n/2}: p_white-white sites whose neighbors
/// carry p_black-black arms to the left and right sides of B_{3n}, with
/// white arms to top and bottom.
std::int64_t count_passage_sites(const TauField& field, int n, double p_black,
                                 double p_white = kCriticalP);

/// Prepared net event: every horizontal/vertical domino B_m(2mx) u B_m(2mx'),
/// x ~ x' axis-adjacent in B_{ceil(n/2m)+1}, is crossed in its long direction.
class NetDetector {
public:
    NetDetector(std::shared_ptr<const SiteIndex> domain, int m, int n);

    bool holds(const TauField& field, double p) const;
    std::size_t rectangle_count() const { return rects_.size(); }
    /// Radius of the box covered by the dominoes, (2*ceil(n/2m) + 3) * m.
    static double covered_radius(int m, int n);

private:
    struct Domino {
        BoundRegion rect;
        Orientation long_direction;
    };
    std::vector<Domino> rects_;
};

bool net_event(const TauField& field, int m, int n, double p);

}  // namespace frozenperc
