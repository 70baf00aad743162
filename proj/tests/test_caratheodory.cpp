#include "csd/caratheodory.hpp"
#include "csd/experiment.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>
#include <set>
#include <tuple>

using namespace csd;

namespace {

Point reconstruct(const std::vector<Point>& pts, const PointSet& support, const Vec& coeffs) {
    Point z(pts[0].size(), Scalar(0));
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = 0; j < z.size(); ++j) z[j] += coeffs[i] * pts[static_cast<std::size_t>(support[i])][j];
    return z;
}

bool convex(const Vec& c) {
    Scalar s = 0;
    for (const auto& v : c) {
        if (v < 0) return false;
        s += v;
    }
    return s == 1;
}

Polytope hexagon() {
    // |x| <= 2, |y| <= 2, |x + y| <= 3.
    Mat w{{Scalar(1), Scalar(0)}, {Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(1)},
          {Scalar(0), Scalar(-1)}, {Scalar(1), Scalar(1)}, {Scalar(-1), Scalar(-1)}};
    Vec h{Scalar(2), Scalar(2), Scalar(2), Scalar(2), Scalar(3), Scalar(3)};
    return Polytope::from_rows(2, w, h);
}

Polytope interval(Scalar lo, Scalar hi) {
    return Polytope::from_rows(1, {{Scalar(1)}, {Scalar(-1)}}, {hi, -lo});
}

Point random_point_in(const Polytope& q, std::mt19937_64& rng) {
    return random_interior_point(enumerate_vertices(q), rng);
}

Domain random_domain(int n, int d, std::mt19937_64& rng) {
    std::set<Point> seen;
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < n) {
        Point p;
        for (int j = 0; j < d; ++j) p.push_back(Scalar(static_cast<long>(rng() % 9) - 4));
        if (seen.insert(p).second) pts.push_back(p);
    }
    return Domain(d, pts);
}

}  // namespace

TEST_CASE("caratheodory_reduce examples") {
    Domain line(1, {{Scalar(0)}, {Scalar(1)}, {Scalar(2)}, {Scalar(3)}});
    auto c = caratheodory_reduce({Scalar(1)}, line, {0, 1, 2, 3});
    CHECK(c.support.size() <= 2);
    CHECK(convex(c.coeffs));
    CHECK(reconstruct(line.points, c.support, c.coeffs) == Point{Scalar(1)});

    auto self = caratheodory_reduce({Scalar(3)}, line, {0, 3});
    CHECK(self.support == PointSet{3});
    CHECK(self.coeffs == Vec{Scalar(1)});

    CHECK_THROWS_AS(caratheodory_reduce({Scalar(5)}, line, {0, 3}), std::invalid_argument);
}

TEST_CASE("caratheodory_reduce on random planar hulls") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        Domain u = random_domain(10, 2, rng);
        PointSet all;
        for (int i = 0; i < 10; ++i) all.push_back(i);
        Point x = random_interior_point(u.points, rng);
        auto c = caratheodory_reduce(x, u, all);
        CHECK(c.support.size() <= 3);
        CHECK(convex(c.coeffs));
        CHECK(reconstruct(u.points, c.support, c.coeffs) == x);
    }
}

TEST_CASE("symmetric_caratheodory examples") {
    Domain line(1, {{Scalar(0)}, {Scalar(1)}, {Scalar(2)}, {Scalar(3)}});
    auto s = symmetric_caratheodory(line, {0, 2}, {1, 3});
    CHECK(s.s1.size() + s.s2.size() <= 3);
    CHECK(oracle::hulls_intersect(line, s.s1, s.s2));
    CHECK(oracle::in_hull(s.witness, oracle::pick(line, s.s1)));
    CHECK(oracle::in_hull(s.witness, oracle::pick(line, s.s2)));

    auto p = symmetric_caratheodory(line, {0, 1, 3}, {1, 2});
    CHECK(p.s1.size() + p.s2.size() <= 3);
    CHECK(oracle::hulls_intersect(line, p.s1, p.s2));

    auto same = symmetric_caratheodory(line, {2}, {2});
    CHECK(same.s1 == PointSet{2});
    CHECK(same.s2 == PointSet{2});

    CHECK_THROWS_AS(symmetric_caratheodory(line, {0}, {3}), std::invalid_argument);
}

TEST_CASE("symmetric_caratheodory size bound and oracle re-check") {
    std::mt19937_64 rng(29);
    int checked = 0;
    for (int d = 1; d <= 3; ++d)
        for (int t = 0; t < 60; ++t) {
            Domain u = random_domain(8, d, rng);
            PointSet x, y;
            if (t % 2 == 0) {
                std::tie(x, y) = random_intersecting_pair(u, rng);
            } else {
                // Disjoint index sets whose hulls still meet.
                do {
                    x.clear();
                    y.clear();
                    for (int i = 0; i < 8; ++i) {
                        auto r = rng() % 3;
                        if (r == 0) x.push_back(i);
                        if (r == 1) y.push_back(i);
                    }
                } while (x.empty() || y.empty() || !oracle::hulls_intersect(u, x, y));
            }
            auto s = symmetric_caratheodory(u, x, y);
            CHECK(s.s1.size() + s.s2.size() <= static_cast<std::size_t>(d + 2));
            CHECK(std::includes(x.begin(), x.end(), s.s1.begin(), s.s1.end()));
            CHECK(std::includes(y.begin(), y.end(), s.s2.begin(), s.s2.end()));
            CHECK(convex(s.c1));
            CHECK(convex(s.c2));
            CHECK(reconstruct(u.points, s.s1, s.c1) == s.witness);
            CHECK(reconstruct(u.points, s.s2, s.c2) == s.witness);
            CHECK(oracle::hulls_intersect(u, s.s1, s.s2));
            ++checked;
        }
    CHECK(checked == 180);
}

TEST_CASE("bottom_vertex") {
    Polytope square = Polytope::from_rows(2, {{Scalar(1), Scalar(0)}, {Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(1)}, {Scalar(0), Scalar(-1)}},
                                          {Scalar(1), Scalar(0), Scalar(1), Scalar(0)});
    CHECK(bottom_vertex(square) == Point{Scalar(0), Scalar(0)});
    CHECK(bottom_vertex(interval(Scalar(1, 3), Scalar(2, 3))) == Point{Scalar(1, 3)});
    CHECK_THROWS(bottom_vertex(interval(Scalar(1), Scalar(0))));

    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        Polytope q = random_polytope(2, 4, rng);
        auto verts = oracle::vertices(q.normals(), q.bounds());
        REQUIRE_FALSE(verts.empty());
        CHECK(bottom_vertex(q) == verts.front());
        auto mine = enumerate_vertices(q);
        CHECK(std::set<Point>(mine.begin(), mine.end()) == std::set<Point>(verts.begin(), verts.end()));
    }
}

TEST_CASE("bvt on the unit interval") {
    Polytope q = interval(Scalar(0), Scalar(1));  // id 0: x <= 1, id 1: -x <= 0
    auto s = bvt_encode(q, {Scalar(1, 3)});
    CHECK(s == BvtSequence{0});
    auto verts = bvt_decode(q, s);
    REQUIRE(verts.size() == 2);
    CHECK(verts[0] == Point{Scalar(0)});
    CHECK(verts[1] == Point{Scalar(1)});

    // The pivot itself: degenerate ray, decode must still contain it.
    auto d = bvt_encode(q, {Scalar(0)});
    CHECK(d.size() == 1);
    CHECK(oracle::in_hull({Scalar(0)}, bvt_decode(q, d)));

    CHECK_THROWS(bvt_encode(q, {Scalar(2)}));
}

TEST_CASE("bvt_decode rejects empty faces") {
    // Two parallel tightenings x = 1 and x = -1 cannot hold together.
    Polytope sq = Polytope::from_rows(2, {{Scalar(1), Scalar(0)}, {Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(1)}, {Scalar(0), Scalar(-1)}},
                                      {Scalar(1), Scalar(1), Scalar(1), Scalar(1)});
    CHECK_THROWS(bvt_decode(sq, {0, 1}));
    CHECK_THROWS(bvt_decode(sq, {7, 0}));
}

TEST_CASE("bvt round trip on the hexagon") {
    Polytope q = hexagon();
    std::mt19937_64 rng(37);
    std::set<BvtSequence> seqs;
    for (int t = 0; t < 100; ++t) {
        Point a = random_point_in(q, rng);
        auto s = bvt_encode(q, a);
        CHECK(s.size() == 2);
        seqs.insert(s);
        auto verts = bvt_decode(q, s);
        CHECK(verts.size() == 3);
        CHECK(convex_combination(a, verts).has_value());
        CHECK(oracle::in_hull(a, verts));
    }
    CHECK(seqs.size() <= 36);
    // Every vertex, the pivot included.
    for (const auto& v : enumerate_vertices(q)) CHECK(oracle::in_hull(v, bvt_decode(q, bvt_encode(q, v))));
}

TEST_CASE("bvt handles implicit equalities") {
    // Segment x + y = 1, 0 <= x <= 1 embedded in R^2 via two opposite rows.
    Polytope q = Polytope::from_rows(2, {{Scalar(1), Scalar(1)}, {Scalar(-1), Scalar(-1)}, {Scalar(1), Scalar(0)}, {Scalar(-1), Scalar(0)}},
                                     {Scalar(1), Scalar(-1), Scalar(1), Scalar(0)});
    Point a{Scalar(1, 4), Scalar(3, 4)};
    auto s = bvt_encode(q, a);
    CHECK(s.size() == 1);
    CHECK(oracle::in_hull(a, bvt_decode(q, s)));
}

TEST_CASE("cover_by_simplices") {
    Polytope q = hexagon();
    auto cover = cover_by_simplices(q);
    CHECK(cover.simplices.size() <= 36);
    CHECK(cover.simplices.size() == cover.sequences.size());
    auto verts = enumerate_vertices(q);
    for (const auto& s : cover.simplices)
        for (const auto& v : s.vertices) CHECK(std::find(verts.begin(), verts.end(), v) != verts.end());
    std::mt19937_64 rng(41);
    for (int t = 0; t < 1000; ++t) {
        Point a = random_point_in(q, rng);
        bool hit = std::any_of(cover.simplices.begin(), cover.simplices.end(), [&](const Simplex& s) { return s.contains(a); });
        CHECK(hit);
    }

    Polytope tri = Polytope::from_rows(2, {{Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(-1)}, {Scalar(1), Scalar(1)}},
                                       {Scalar(0), Scalar(0), Scalar(1)});
    CHECK(cover_by_simplices(tri).simplices.size() == 1);
}

TEST_CASE("bvt round trip on random polytopes in R^2 and R^3") {
    std::mt19937_64 rng(43);
    for (int d = 2; d <= 3; ++d)
        for (int t = 0; t < 8; ++t) {
            Polytope q = random_polytope(d, 3, rng);
            std::set<BvtSequence> seqs;
            for (int r = 0; r < 25; ++r) {
                Point a = random_point_in(q, rng);
                auto s = bvt_encode(q, a);
                CHECK(s.size() == static_cast<std::size_t>(d));
                seqs.insert(s);
                CHECK(oracle::in_hull(a, bvt_decode(q, s)));
            }
            std::size_t bound = 1;
            for (int j = 0; j < d; ++j) bound *= q.size();
            CHECK(seqs.size() <= bound);
            CHECK(cover_by_simplices(q).simplices.size() <= bound);
        }
}

TEST_CASE("affine hull dimension") {
    CHECK(affine_hull_dim({{Scalar(0), Scalar(0)}}) == 0);
    CHECK(affine_hull_dim({{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(1)}, {Scalar(2), Scalar(2)}}) == 1);
    CHECK(affine_hull_dim({{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}}) == 2);
}
