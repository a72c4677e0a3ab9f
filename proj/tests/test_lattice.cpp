#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace frozenperc;

TEST_CASE("neighbors of the origin and of a translate") {
    const auto n0 = neighbors({0, 0});
    const std::set<Coord> expected{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    CHECK(std::set<Coord>(n0.begin(), n0.end()) == expected);

    const auto n1 = neighbors({5, -2});
    std::set<Coord> shifted;
    for (Coord c : expected) shifted.insert(c + Coord{5, -2});
    CHECK(std::set<Coord>(n1.begin(), n1.end()) == shifted);
}

TEST_CASE("neighbors sit at unit distance and the relation is symmetric") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int t = 0; t < 200; ++t) {
        const Coord v{d(rng), d(rng)};
        for (Coord u : neighbors(v)) {
            const Point a = embed(u), b = embed(v);
            CHECK(std::hypot(a.x - b.x, a.y - b.y) == doctest::Approx(1.0).epsilon(1e-12));
            const auto back = neighbors(u);
            CHECK(std::find(back.begin(), back.end(), v) != back.end());
        }
    }
}

TEST_CASE("embedding") {
    CHECK(embed({1, 0}) == Point{1.0, 0.0});
    CHECK(embed({0, 1}).x == 0.5);
    CHECK(embed({0, 1}).y == doctest::Approx(0.8660254037844386).epsilon(1e-15));
    CHECK(embed({2, -2}).x == 1.0);
    CHECK(embed({2, -2}).y == doctest::Approx(-1.7320508075688772).epsilon(1e-15));
}

TEST_CASE("linf_diameter small cases") {
    CHECK(linf_diameter(std::vector<Coord>{}) == 0.0);
    CHECK(linf_diameter(std::vector<Coord>{{0, 0}}) == 0.0);
    CHECK(linf_diameter(std::vector<Coord>{{0, 0}, {1, 0}}) == 1.0);
    CHECK(linf_diameter(std::vector<Coord>{{0, 0}, {0, 1}}) == doctest::Approx(0.8660254037844386));
}

TEST_CASE("linf_diameter equals the pairwise maximum") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-10, 10);
    for (int t = 0; t < 20; ++t) {
        std::vector<Coord> s;
        for (int i = 0; i < 5; ++i) s.push_back({d(rng), d(rng)});
        CHECK(linf_diameter(s) == doctest::Approx(testing::brute_diameter(s)).epsilon(1e-12));
    }
    for (int t = 0; t < 200; ++t) {
        std::vector<Coord> s;
        const int k = 1 + t % 12;
        for (int i = 0; i < k; ++i) s.push_back({d(rng), d(rng)});
        const double base = linf_diameter(s);
        CHECK(base == doctest::Approx(testing::brute_diameter(s)).epsilon(1e-12));
        std::vector<Coord> moved;
        for (Coord c : s) moved.push_back(c + Coord{7, -3});
        CHECK(linf_diameter(moved) == doctest::Approx(base).epsilon(1e-12));
        s.push_back({d(rng), d(rng)});
        CHECK(linf_diameter(s) >= base);
    }
}

TEST_CASE("bounding box tracks the diameter under merges") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-20, 20);
    BoundingBox a, b;
    std::vector<Coord> all;
    for (int i = 0; i < 30; ++i) {
        const Coord c{d(rng), d(rng)};
        (i % 2 ? a : b).add(c);
        all.push_back(c);
    }
    a.merge(b);
    CHECK(a.diameter() == doctest::Approx(testing::brute_diameter(all)).epsilon(1e-12));
}

TEST_CASE("box B_1 by membership scan") {
    std::vector<Coord> scan;
    for (int x = -5; x <= 5; ++x) {
        for (int y = -5; y <= 5; ++y) {
            const Point p = embed({x, y});
            if (std::abs(p.x) <= 1.0 + 1e-12 && std::abs(p.y) <= 1.0 + 1e-12) scan.push_back({x, y});
        }
    }
    std::sort(scan.begin(), scan.end());
    const auto sites = sites_of(Region::box(1.0));
    CHECK(sites == scan);
    // Rows y = -1, 0, 1 contribute 2 + 3 + 2 vertices.
    CHECK(sites.size() == 7);
}

TEST_CASE("regions: annulus, rectangle, ordering") {
    CHECK(sites_of(Region::annulus(3.0, 3.0)).empty());
    CHECK(sites_of(Region::rectangle(1.0, 0.0, 0.0, 1.0)).empty());

    const Region rect = Region::rectangle(0.0, 2.0, 0.0, 1.0);
    int count = 0;
    for (int x = -5; x <= 5; ++x) {
        for (int y = -5; y <= 5; ++y) {
            const Point p = embed({x, y});
            count += p.x >= -1e-12 && p.x <= 2.0 + 1e-12 && p.y >= -1e-12 && p.y <= 1.0 + 1e-12;
        }
    }
    CHECK(sites_of(rect).size() == static_cast<std::size_t>(count));

    const Region ann = Region::annulus(2.0, 5.0, {0.5, 0.0});
    for (Coord c : sites_of(ann)) {
        const Point p = embed(c);
        const double r = std::max(std::abs(p.x - 0.5), std::abs(p.y));
        CHECK(r > 2.0);
        CHECK(r <= 5.0 + 1e-9);
    }
    const auto s = sites_of(Region::box(6.0));
    CHECK(std::is_sorted(s.begin(), s.end()));
}

TEST_CASE("boxes are nested and grow quadratically") {
    const auto b4 = sites_of(Region::box(4.0));
    const auto b9 = sites_of(Region::box(9.0));
    CHECK(std::includes(b9.begin(), b9.end(), b4.begin(), b4.end()));
    for (int n : {8, 16}) {
        const double a = static_cast<double>(sites_of(Region::box(n)).size()) / (n * n);
        const double b = static_cast<double>(sites_of(Region::box(2 * n)).size()) / (4 * n * n);
        CHECK(std::abs(a / b - 1.0) < 0.2);
    }
}

TEST_CASE("site index: lookup, neighbor table, boundary") {
    const Region r = Region::box(5.0);
    const SiteIndex idx(r);
    REQUIRE(idx.size() == sites_of(r).size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const Coord v = idx.site(i);
        CHECK(idx.index_of(v) == static_cast<std::int32_t>(i));
        bool boundary = false;
        const auto nb = neighbors(v);
        for (int k = 0; k < 6; ++k) {
            const std::int32_t j = idx.neighbors(i)[k];
            if (r.contains(nb[k])) {
                CHECK(j >= 0);
                CHECK(idx.site(j) == nb[k]);
            } else {
                CHECK(j == -1);
                boundary = true;
            }
        }
        CHECK(idx.on_inner_boundary(i) == boundary);
    }
    CHECK(idx.index_of({100, 100}) == -1);
}
