// Activation-time field: an i.i.d. Uniform[0,1) time tau_v per vertex, and the
// p-coloring it induces (v is p-black iff tau_v <= p) coupled across all p.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "frozenperc/lattice.hpp"

namespace frozenperc {

inline constexpr double kCriticalP = 0.5;

enum class Color : std::uint8_t { white = 0, black = 1 };

inline bool is_black(double tau, double p) { return tau <= p; }
inline bool has_color(double tau, double p, Color c) {
    return is_black(tau, p) == (c == Color::black);
}

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed of replica `index` derived from a base seed; used everywhere replicas
/// fan out so that every run is reproducible from (base_seed, index).
std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// Counter-based keyed hash of (seed, x, y) mapped to [0, 1) with 53 bits.
/// The value at a vertex depends on nothing else, so any sub-region of a
/// field agrees with the full field.
double tau_at(std::uint64_t seed, Coord v) noexcept;

class TauField {
public:
    /// Materializes tau for every site of the index.
    TauField(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed);

    static TauField sample(const Region& domain, std::uint64_t seed);
    /// Same values as `sample`, computed on demand. Suited to searches that
    /// touch a small part of a large domain.
    static TauField lazy(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed);
    /// Explicit values in canonical site order, each in [0, 1]. The seed is
    /// only echoed into dumps.
    static TauField from_values(std::shared_ptr<const SiteIndex> sites, std::vector<double> values,
                                std::uint64_t seed = 0);

    const SiteIndex& sites() const { return *sites_; }
    const std::shared_ptr<const SiteIndex>& shared_sites() const { return sites_; }
    const Region& domain() const { return sites_->region(); }
    std::uint64_t seed() const { return seed_; }
    bool materialized() const { return !values_.empty() || sites_->size() == 0; }

    double tau(std::size_t index) const {
        return values_.empty() ? tau_at(seed_, sites_->site(index)) : values_[index];
    }
    /// Throws std::out_of_range when v is outside the domain.
    double tau(Coord v) const;
    Color color_at(double p, Coord v) const;

    /// Empty unless materialized.
    std::span<const double> values() const { return values_; }

    /// Binary layout (little endian): "FPTF", u32 version, u64 seed, u8 region
    /// kind, 8 x f64 region parameters (center.x, center.y, inner, outer, x1,
    /// x2, y1, y2), u64 site count, then one f64 per site in canonical order.
    void save(std::ostream& out) const;
    static TauField load(std::istream& in);

private:
    TauField(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed,
             std::vector<double> values);

    std::shared_ptr<const SiteIndex> sites_;
    std::uint64_t seed_ = 0;
    std::vector<double> values_;
};

}  // namespace frozenperc
