// Frozen percolation: black clusters grow as sites activate in increasing tau
// order and stop growing ("freeze") once their size reaches the threshold N.
//
// Size is the L-inf diameter or the volume of a cluster. Under the original
// boundary rule a site adjacent to a frozen cluster stays white forever; under
// the modified rule frozen clusters are inert and the site may still turn black
// (and freeze together with the clusters it joins).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frozenperc/field.hpp"
#include "frozenperc/lattice.hpp"

namespace frozenperc {

enum class SizeRule : std::uint8_t { diameter = 0, volume = 1 };
enum class BoundaryRule : std::uint8_t { original = 0, modified = 1 };

std::string to_string(SizeRule r);
std::string to_string(BoundaryRule r);
SizeRule parse_size_rule(const std::string& s);
BoundaryRule parse_boundary_rule(const std::string& s);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct ProcessConfig {
    SizeRule size_rule = SizeRule::diameter;
    BoundaryRule boundary_rule = BoundaryRule::original;
    /// N >= 1; real for the diameter rule, integral for the volume rule;
    /// kUnreachable disables freezing.
    double threshold = 1.0;
    Region domain = Region::box(8.0);
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument.
    void validate() const;
    /// Domain B_{4N} around the origin, the default for diameter experiments.
    static ProcessConfig diameter_default(BoundaryRule rule, double n, std::uint64_t seed);

    friend bool operator==(const ProcessConfig&, const ProcessConfig&) = default;
};

enum class SiteState : std::uint8_t { white = 0, black = 1, frozen = 2 };
enum class Action : std::uint8_t { became_black = 0, froze_cluster = 1, stayed_white = 2 };

struct Event {
    double tau;
    std::int32_t site;
    Action action;

    friend bool operator==(const Event&, const Event&) = default;
};

struct ClusterRecord {
    std::int32_t id;  // smallest member site index
    std::int64_t volume;
    BoundingBox bbox;
    bool frozen;
    double freeze_time;  // NaN unless frozen

    double diameter() const { return bbox.diameter(); }
};

struct FinalState {
    ProcessConfig config;
    std::shared_ptr<const SiteIndex> sites;
    /// Original rule: white or black only (frozen is derived from freeze_time).
    /// Modified rule: white, black or frozen.
    std::vector<SiteState> state;
    /// Freeze time of the site's cluster; NaN for sites that never froze.
    std::vector<double> freeze_time;
    /// Time-1 cluster id per site (smallest member index), -1 for white sites.
    std::vector<std::int32_t> cluster;
    std::vector<ClusterRecord> clusters;  // ordered by id
    std::vector<Event> events;            // in activation order

    bool is_frozen(std::size_t site) const;
    const ClusterRecord* cluster_record(std::int32_t id) const;

    /// Binary layout (little endian): "FPFS", u32 version, u8 size rule, u8
    /// boundary rule, f64 threshold, u64 seed, u8 region kind + 8 x f64 region
    /// parameters, u64 site count, one u8 state code per site (0 white,
    /// 1 black, 2 frozen), then one f64 freeze time per site (NaN when none).
    /// Sites are in canonical (lexicographic) order.
    void save(std::ostream& out) const;
    std::string serialize() const;
    /// Restores config, states and freeze times; events and clusters are not
    /// part of the dump and come back empty.
    static FinalState load(std::istream& in);
};

/// Event-driven engine: activations sorted by (tau, site index), clusters in
/// a union-find carrying volume, bounding box and frozen flag per root.
FinalState run(const ProcessConfig& config);
FinalState run(const ProcessConfig& config, const TauField& field);

/// Testing oracle: recomputes the clusters around each activation by graph
/// search from scratch and applies the dynamics literally.
FinalState reference_run(const ProcessConfig& config);
FinalState reference_run(const ProcessConfig& config, const TauField& field);

/// Modified rule: the origin ends frozen. Original rule: its time-1 cluster
/// reached size N. Throws std::out_of_range if the origin is not in the domain.
bool origin_freezes(const FinalState& final_state);
std::optional<double> origin_freeze_time(const FinalState& final_state);
/// L-inf diameter of the origin's time-1 cluster; 0 when the origin is white.
double origin_cluster_diameter(const FinalState& final_state);

}  // namespace frozenperc
