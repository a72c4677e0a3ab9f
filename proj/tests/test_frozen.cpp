#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace frozenperc;
using testing::config_of;
using testing::same_double;

namespace {

const std::vector<std::pair<SizeRule, BoundaryRule>> kVariants{
    {SizeRule::diameter, BoundaryRule::original},
    {SizeRule::diameter, BoundaryRule::modified},
    {SizeRule::volume, BoundaryRule::original},
    {SizeRule::volume, BoundaryRule::modified}};

void check_same(const FinalState& a, const FinalState& b) {
    REQUIRE(a.state.size() == b.state.size());
    CHECK(a.state == b.state);
    for (std::size_t i = 0; i < a.freeze_time.size(); ++i) CHECK(same_double(a.freeze_time[i], b.freeze_time[i]));
    CHECK(a.events == b.events);
    CHECK(a.cluster == b.cluster);
}

double size_of(const std::vector<Coord>& members, SizeRule rule) {
    return rule == SizeRule::volume ? static_cast<double>(members.size()) : testing::brute_diameter(members);
}

// Components of `members` with `removed` taken out, by coordinate BFS.
std::vector<std::vector<Coord>> split(const std::vector<Coord>& members, Coord removed) {
    testing::Colored g;
    for (Coord c : members) g.in[c] = !(c == removed);
    std::set<Coord> done;
    std::vector<std::vector<Coord>> parts;
    for (Coord c : members) {
        if (c == removed || done.count(c)) continue;
        const auto comp = testing::reach(g, {c});
        done.insert(comp.begin(), comp.end());
        parts.emplace_back(comp.begin(), comp.end());
    }
    return parts;
}

}  // namespace

TEST_CASE("rule names parse") {
    CHECK(parse_size_rule("diam") == SizeRule::diameter);
    CHECK(parse_size_rule("volume") == SizeRule::volume);
    CHECK(parse_boundary_rule("mod") == BoundaryRule::modified);
    CHECK(parse_boundary_rule("original") == BoundaryRule::original);
    CHECK_THROWS_AS(parse_size_rule("area"), std::invalid_argument);
}

TEST_CASE("config validation") {
    ProcessConfig c;
    c.threshold = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.threshold = 2.5;
    c.size_rule = SizeRule::volume;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.threshold = kUnreachable;
    CHECK_NOTHROW(c.validate());
    const auto d = ProcessConfig::diameter_default(BoundaryRule::modified, 30.0, 7);
    CHECK(d.domain == Region::box(120.0));
    CHECK(run(c).state.size() == sites_of(c.domain).size());
    CHECK_THROWS_AS(run(c, TauField::sample(Region::box(3.0), 0)), std::invalid_argument);
}

TEST_CASE("three-site path: the boundary-rule contrast in miniature") {
    const Region path = Region::rectangle(0.0, 2.0, 0.0, 0.0);
    const TauField f = testing::field_with(path, {0.2, 0.5, 0.8});
    for (bool modified : {false, true}) {
        const auto cfg = config_of(SizeRule::volume, modified ? BoundaryRule::modified : BoundaryRule::original,
                                   2.0, path);
        for (const FinalState& fs : {run(cfg, f), reference_run(cfg, f)}) {
            CHECK(fs.is_frozen(0));
            CHECK(fs.is_frozen(1));
            CHECK(fs.freeze_time[0] == 0.5);
            CHECK(fs.freeze_time[1] == 0.5);
            CHECK_FALSE(fs.is_frozen(2));
            CHECK(fs.state[2] == (modified ? SiteState::black : SiteState::white));
            CHECK(fs.state[1] == (modified ? SiteState::frozen : SiteState::black));
        }
        // The middle vertex plays the role of the origin: shift the path.
        const Region shifted = Region::rectangle(-1.0, 1.0, 0.0, 0.0);
        auto c2 = cfg;
        c2.domain = shifted;
        const FinalState fs = run(c2, testing::field_with(shifted, {0.2, 0.5, 0.8}));
        CHECK(origin_freezes(fs));
        CHECK(origin_freeze_time(fs) == 0.5);
    }
}

TEST_CASE("unreachable threshold leaves everything black") {
    for (const auto& [size, boundary] : kVariants) {
        const auto cfg = config_of(size, boundary, kUnreachable, Region::box(6.0), 3);
        const FinalState fs = run(cfg);
        CHECK(std::all_of(fs.state.begin(), fs.state.end(), [](SiteState s) { return s == SiteState::black; }));
        CHECK(fs.clusters.size() == 1);
        CHECK_FALSE(origin_freezes(fs));
        CHECK(origin_cluster_diameter(fs) == doctest::Approx(linf_diameter(fs.sites->sites())));
        // Finite but too large for the domain behaves the same.
        auto big = cfg;
        big.threshold = 1000.0;
        CHECK(run(big).state == fs.state);
    }
}

TEST_CASE("modified volume N = 1 freezes every site alone at its own time") {
    const auto cfg = config_of(SizeRule::volume, BoundaryRule::modified, 1.0, Region::box(6.0), 11);
    const TauField f = TauField::sample(cfg.domain, cfg.seed);
    const FinalState fs = run(cfg, f);
    for (std::size_t i = 0; i < fs.state.size(); ++i) {
        CHECK(fs.state[i] == SiteState::frozen);
        CHECK(fs.freeze_time[i] == f.tau(i));
        CHECK(fs.cluster_record(fs.cluster[i])->volume == 1);
    }
    CHECK(origin_freeze_time(fs) == f.tau(Coord{0, 0}));
}

TEST_CASE("original volume N = 1 is the greedy independent set in tau order") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto cfg = config_of(SizeRule::volume, BoundaryRule::original, 1.0, Region::box(6.0), s);
        const TauField f = TauField::sample(cfg.domain, s);
        std::vector<Coord> order(f.sites().sites().begin(), f.sites().sites().end());
        std::stable_sort(order.begin(), order.end(), [&](Coord a, Coord b) { return f.tau(a) < f.tau(b); });
        std::set<Coord> chosen;
        for (Coord v : order) {
            bool free = true;
            for (Coord u : neighbors(v)) free &= !chosen.count(u);
            if (free) chosen.insert(v);
        }
        const FinalState fs = run(cfg, f);
        const FinalState ref = reference_run(cfg, f);
        for (std::size_t i = 0; i < fs.state.size(); ++i) {
            const bool black = fs.state[i] == SiteState::black;
            CHECK(black == (chosen.count(f.sites().site(i)) == 1));
            CHECK(black == fs.is_frozen(i));
            CHECK(ref.state[i] == fs.state[i]);
        }
    }
}

TEST_CASE("engine matches the reference oracle on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick_n(1, 20);
    for (const auto& [size, boundary] : kVariants) {
        for (int t = 0; t < 60; ++t) {
            const auto cfg = config_of(size, boundary, pick_n(rng), Region::box(6.0), rng());
            const FinalState a = run(cfg);
            const FinalState b = reference_run(cfg);
            check_same(a, b);
            CHECK(a.clusters.size() == b.clusters.size());
        }
    }
}

TEST_CASE("freezing invariants hold on the event log") {
    std::mt19937_64 rng(7);
    for (const auto& [size, boundary] : kVariants) {
        for (int t = 0; t < 30; ++t) {
            const double n = size == SizeRule::volume ? 6.0 + t % 10 : 2.0 + 0.5 * (t % 8);
            const auto cfg = config_of(size, boundary, n, Region::box(7.0), rng());
            const FinalState fs = run(cfg);
            const SiteIndex& sites = *fs.sites;

            double last = -1.0;
            std::set<double> freeze_events;
            for (const Event& e : fs.events) {
                CHECK(e.tau >= last);
                last = e.tau;
                if (e.action == Action::froze_cluster) {
                    CHECK(freeze_events.insert(e.tau).second);
                }
            }
            for (const ClusterRecord& rec : fs.clusters) {
                std::vector<Coord> members;
                for (std::size_t i = 0; i < sites.size(); ++i) {
                    if (fs.cluster[i] == rec.id) members.push_back(sites.site(i));
                }
                CHECK(static_cast<std::int64_t>(members.size()) == rec.volume);
                CHECK(rec.diameter() == doctest::Approx(testing::brute_diameter(members)));
                if (!rec.frozen) continue;
                CHECK(freeze_events.count(rec.freeze_time) == 1);
                // The freezing vertex is the member activated at the freeze time.
                auto it = std::find_if(fs.events.begin(), fs.events.end(), [&](const Event& e) {
                    return e.tau == rec.freeze_time && e.action == Action::froze_cluster;
                });
                REQUIRE(it != fs.events.end());
                const Coord v = sites.site(static_cast<std::size_t>(it->site));
                // Removing the freezing vertex splits the cluster into pieces
                // that were too small.
                CHECK(size_of(members, size) >= n);
                for (const auto& part : split(members, v)) CHECK(size_of(part, size) < n);
                if (boundary == BoundaryRule::original) {
                    // Nothing adjacent ever joined: every outside neighbor is white.
                    for (Coord c : members) {
                        for (Coord u : neighbors(c)) {
                            const auto j = sites.index_of(u);
                            if (j >= 0 && fs.cluster[j] != rec.id) CHECK(fs.state[j] == SiteState::white);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("origin cluster diameter matches a static recomputation") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        for (const auto& [size, boundary] : kVariants) {
            const auto cfg = config_of(size, boundary, size == SizeRule::volume ? 12.0 : 4.0, Region::box(8.0), s);
            const FinalState fs = run(cfg);
            const std::int32_t o = fs.sites->index_of({0, 0});
            if (fs.state[o] == SiteState::white) {
                CHECK(origin_cluster_diameter(fs) == 0.0);
                CHECK_FALSE(origin_freeze_time(fs).has_value());
                continue;
            }
            testing::Colored g;
            for (std::size_t i = 0; i < fs.state.size(); ++i) {
                g.in[fs.sites->site(i)] = fs.state[i] == fs.state[o] &&
                                          same_double(fs.freeze_time[i], fs.freeze_time[o]);
            }
            const auto comp = testing::reach(g, {Coord{0, 0}});
            CHECK(origin_cluster_diameter(fs) ==
                  doctest::Approx(testing::brute_diameter({comp.begin(), comp.end()})));
            CHECK(origin_freezes(fs) == fs.is_frozen(o));
        }
    }
    ProcessConfig off_origin;
    off_origin.domain = Region::rectangle(3.0, 6.0, 0.0, 2.0);
    CHECK_THROWS_AS(origin_freezes(run(off_origin)), std::out_of_range);
}

TEST_CASE("final state dump is deterministic and round-trips") {
    const auto cfg = config_of(SizeRule::diameter, BoundaryRule::modified, 5.0, Region::box(12.0), 99);
    const FinalState a = run(cfg);
    const FinalState b = run(cfg);
    CHECK(a.serialize() == b.serialize());
    std::stringstream buf(a.serialize());
    const FinalState c = FinalState::load(buf);
    CHECK(c.config == cfg);
    CHECK(c.state == a.state);
    for (std::size_t i = 0; i < a.freeze_time.size(); ++i) CHECK(same_double(c.freeze_time[i], a.freeze_time[i]));
    CHECK(c.serialize() == a.serialize());
    std::stringstream truncated(a.serialize().substr(0, 40));
    CHECK_THROWS(FinalState::load(truncated));
}
