#include "csd/geom.hpp"
#include "csd/lp.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace csd;

namespace {

Domain line(int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({Scalar(i)});
    return Domain(1, pts);
}

Domain grid(int side) {
    std::vector<Point> pts;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) pts.push_back({Scalar(i), Scalar(j)});
    return Domain(2, pts);
}

Domain random_domain(int n, int d, std::mt19937_64& rng, int range = 7) {
    std::set<Point> seen;
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < n) {
        Point p;
        for (int j = 0; j < d; ++j) p.push_back(Scalar(static_cast<long>(rng() % static_cast<unsigned>(range))));
        if (seen.insert(p).second) pts.push_back(p);
    }
    return Domain(d, pts);
}

PointSet random_subset(std::size_t n, std::mt19937_64& rng) {
    PointSet s;
    for (std::size_t i = 0; i < n; ++i)
        if (rng() % 3 == 0) s.push_back(static_cast<int>(i));
    if (s.empty()) s.push_back(static_cast<int>(rng() % n));
    return s;
}

}  // namespace

TEST_CASE("scalar strings round trip in lowest terms") {
    Scalar a(6, 4), b(-4, 2);
    a.canonicalize();
    b.canonicalize();
    CHECK(to_string(a) == "3/2");
    CHECK(to_string(b) == "-2");
    CHECK(parse_scalar("-0.25") == Scalar(-1, 4));
    CHECK(parse_scalar("10/-4") == Scalar(-5, 2));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Scalar s(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(1 + rng() % 999));
        s.canonicalize();
        CHECK(parse_scalar(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_scalar("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scalar("abc"), std::invalid_argument);
}

TEST_CASE("bit widths") {
    CHECK(bits_for(Integer(1)) == 0);
    CHECK(bits_for(Integer(2)) == 1);
    CHECK(bits_for(Integer(800)) == 10);
    CHECK(bits_for(Integer(26)) == 5);
    CHECK(ceil_log2(Scalar(1)) == 0);
    CHECK(ceil_log2(Scalar(5)) == 3);
}

TEST_CASE("domain validation") {
    CHECK_THROWS(Domain(1, {{Scalar(0)}, {Scalar(0)}}));
    CHECK_THROWS(Domain(2, {{Scalar(0)}}));
    CHECK_THROWS(Domain(1, {}));
    CHECK_THROWS(Halfspace({Scalar(0), Scalar(0)}, Scalar(1), false));
}

TEST_CASE("lp_feasible on intervals") {
    Polytope unit = Polytope::from_rows(1, {{Scalar(1)}, {Scalar(-1)}}, {Scalar(1), Scalar(0)});
    auto f = lp_feasible(unit);
    REQUIRE(f.feasible);
    CHECK(unit.contains(f.witness));

    Polytope empty = Polytope::from_rows(1, {{Scalar(1)}, {Scalar(-1)}}, {Scalar(0), Scalar(-1)});
    auto g = lp_feasible(empty);
    REQUIRE_FALSE(g.feasible);
    REQUIRE(g.certificate.size() == 2);
    // y >= 0, y^T W = 0, y^T h < 0.
    Scalar wsum = 0, hsum = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(g.certificate[i] >= 0);
        wsum += g.certificate[i] * empty.rows[i].normal[0];
        hsum += g.certificate[i] * empty.rows[i].bound;
    }
    CHECK(wsum == 0);
    CHECK(hsum < 0);

    CHECK_THROWS(Polytope(2, {{{Scalar(1)}, Scalar(0), 0}}));
}

TEST_CASE("lp_feasible agrees with vertex enumeration on random triangles") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        Mat w;
        Vec h;
        for (int i = 0; i < 3; ++i) {
            w.push_back({Scalar(static_cast<long>(rng() % 7) - 3), Scalar(static_cast<long>(rng() % 7) - 3)});
            h.push_back(Scalar(static_cast<long>(rng() % 9) - 4));
        }
        // Box rows keep the region bounded so nonempty ⇔ it has a vertex.
        for (int j = 0; j < 2; ++j)
            for (int s : {1, -1}) {
                Vec r(2, Scalar(0));
                r[static_cast<std::size_t>(j)] = s;
                w.push_back(r);
                h.push_back(10);
            }
        auto f = lp_feasible(Polytope::from_rows(2, w, h));
        CHECK(f.feasible == !oracle::vertices(w, h).empty());
        if (f.feasible) CHECK(Polytope::from_rows(2, w, h).contains(f.witness));
    }
}

TEST_CASE("hulls_intersect examples") {
    Domain u = line(4);
    auto a = hulls_intersect(u, {0}, {0});
    CHECK(a.intersecting);
    CHECK(a.witness == Point{Scalar(0)});

    Domain v(2, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(0)}, {Scalar(1, 2), Scalar(0)}});
    auto b = hulls_intersect(v, {0, 1}, {2});
    REQUIRE(b.intersecting);
    CHECK(b.witness == Point{Scalar(1, 2), Scalar(0)});
    Scalar sx = 0, sy = 0;
    for (auto& [i, c] : b.x_coeffs) {
        CHECK(c > 0);
        sx += c;
    }
    for (auto& [i, c] : b.y_coeffs) sy += c;
    CHECK(sx == 1);
    CHECK(sy == 1);

    CHECK_THROWS(hulls_intersect(u, {}, {1}));
}

TEST_CASE("1D hulls intersect unless one interval lies strictly left of the other") {
    Domain u = line(6);
    for (unsigned xm = 1; xm < 64; ++xm)
        for (unsigned ym = 1; ym < 64; ++ym) {
            PointSet x, y;
            for (int i = 0; i < 6; ++i) {
                if (xm >> i & 1u) x.push_back(i);
                if (ym >> i & 1u) y.push_back(i);
            }
            bool apart = x.back() < y.front() || y.back() < x.front();
            CHECK(hulls_intersect(u, x, y).intersecting == !apart);
        }
}

TEST_CASE("hulls_intersect and separate agree with the brute-force oracle") {
    std::mt19937_64 rng(3);
    for (int d = 1; d <= 3; ++d)
        for (int t = 0; t < 60; ++t) {
            Domain u = random_domain(7, d, rng);
            PointSet x = random_subset(u.size(), rng), y = random_subset(u.size(), rng);
            bool expect = oracle::hulls_intersect(u, x, y);
            auto hi = hulls_intersect(u, x, y);
            CHECK(hi.intersecting == expect);
            auto sep = separate(u, x, y);
            CHECK(sep.has_value() == !expect);
            if (hi.intersecting) {
                CHECK(oracle::in_hull(hi.witness, oracle::pick(u, x)));
                CHECK(oracle::in_hull(hi.witness, oracle::pick(u, y)));
            }
            if (sep) {
                CHECK(sep->margin > 0);
                for (int i : x) CHECK(sep->halfspace.contains(u.points[static_cast<std::size_t>(i)]));
                for (int i : y) CHECK_FALSE(sep->halfspace.contains(u.points[static_cast<std::size_t>(i)]));
            }
        }
}

TEST_CASE("separate examples") {
    auto s = separate(line(2), {0}, {1});
    REQUIRE(s);
    CHECK(s->halfspace.normal == Vec{Scalar(1)});
    CHECK(s->halfspace.bias == Scalar(1, 2));
    CHECK_FALSE(s->halfspace.closed);

    Domain u(2, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}});
    auto t = separate(u, {0}, {1, 2});
    REQUIRE(t);
    CHECK(t->halfspace.contains(u.points[0]));
    CHECK_FALSE(t->halfspace.contains(u.points[1]));
    CHECK_FALSE(t->halfspace.contains(u.points[2]));

    CHECK_FALSE(separate(line(3), {0, 1}, {1}));
    CHECK_THROWS(separate(line(3), {}, {1}));
}

TEST_CASE("trace semantics") {
    Domain u = line(2);
    CHECK(trace(Halfspace({Scalar(1)}, Scalar(1, 2), false), u) == PointSet{0});
    // Boundary points flip exactly with the closed flag.
    Domain g = grid(4);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Vec a{Scalar(static_cast<long>(rng() % 5) - 2), Scalar(static_cast<long>(rng() % 5) - 2)};
        if (a[0] == 0 && a[1] == 0) a[0] = 1;
        Scalar b(static_cast<long>(rng() % 7) - 3);
        PointSet open = trace(Halfspace(a, b, false), g), closed = trace(Halfspace(a, b, true), g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            Scalar v = dot(a, g.points[i]);
            bool in_open = std::binary_search(open.begin(), open.end(), static_cast<int>(i));
            bool in_closed = std::binary_search(closed.begin(), closed.end(), static_cast<int>(i));
            CHECK(in_open == (v < b));
            CHECK(in_closed == (v >= b));
            if (v == b) CHECK(in_open != in_closed);
        }
    }
}

TEST_CASE("halfspace traces on the line") {
    auto tr = enumerate_halfspace_traces(line(3));
    std::set<PointSet> got;
    for (const auto& t : tr) got.insert(t.members);
    std::set<PointSet> want{{}, {0}, {0, 1}, {0, 1, 2}, {2}, {1, 2}};
    CHECK(got == want);
    CHECK(tr.size() == 6);
    CHECK(enumerate_halfspace_traces(Domain(2, {{Scalar(1), Scalar(1)}})).size() == 2);
}

TEST_CASE("halfspace traces match brute-force separability") {
    std::mt19937_64 rng(9);
    std::vector<Domain> doms{line(5), grid(3), Domain(2, {{Scalar(0), Scalar(0)}, {Scalar(2), Scalar(0)}, {Scalar(0), Scalar(2)}, {Scalar(2), Scalar(2)}})};
    for (int t = 0; t < 6; ++t) doms.push_back(random_domain(6, 2, rng));
    for (int t = 0; t < 3; ++t) doms.push_back(random_domain(6, 3, rng, 4));
    // Collinear points in the plane exercise the lower-dimensional frame.
    doms.push_back(Domain(2, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(1)}, {Scalar(3), Scalar(3)}, {Scalar(4), Scalar(4)}}));
    for (const auto& u : doms) {
        auto tr = enumerate_halfspace_traces(u);
        std::set<PointSet> got;
        for (const auto& t : tr) {
            got.insert(t.members);
            CHECK(trace(t.realizer, u) == t.members);
        }
        CHECK(got.size() == tr.size());
        auto expect = oracle::halfspace_traces(u);
        CHECK(got == std::set<PointSet>(expect.begin(), expect.end()));
        Integer bound = 2;
        for (int j = 0; j < u.dim; ++j) bound *= static_cast<unsigned long>(u.size());
        CHECK(Integer(static_cast<unsigned long>(tr.size())) <= bound);
        // Canonical order: cardinality, then lexicographic.
        for (std::size_t i = 1; i < tr.size(); ++i) {
            const auto& a = tr[i - 1].members;
            const auto& b = tr[i].members;
            CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
        }
    }
}

TEST_CASE("four points in convex position realise every singleton and complement") {
    Domain u(2, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(1)}, {Scalar(2), Scalar(4)}, {Scalar(3), Scalar(9)}});
    std::set<PointSet> got;
    for (const auto& t : enumerate_halfspace_traces(u)) got.insert(t.members);
    for (int i = 0; i < 4; ++i) {
        CHECK(got.count({i}));
        PointSet rest;
        for (int j = 0; j < 4; ++j)
            if (j != i) rest.push_back(j);
        CHECK(got.count(rest));
    }
}

TEST_CASE("trace enumeration respects its cap") {
    CHECK_THROWS_AS(enumerate_halfspace_traces(grid(4), 10), CapExceeded);
}

TEST_CASE("convex_combination reconstructs") {
    std::vector<Point> pts{{Scalar(0), Scalar(0)}, {Scalar(4), Scalar(0)}, {Scalar(0), Scalar(4)}};
    auto c = convex_combination({Scalar(1), Scalar(1)}, pts);
    REQUIRE(c);
    Point back(2, Scalar(0));
    Scalar s = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK((*c)[i] >= 0);
        s += (*c)[i];
        for (int j = 0; j < 2; ++j) back[static_cast<std::size_t>(j)] += (*c)[i] * pts[i][static_cast<std::size_t>(j)];
    }
    CHECK(s == 1);
    CHECK(back == Point{Scalar(1), Scalar(1)});
    CHECK_FALSE(convex_combination({Scalar(3), Scalar(3)}, pts));
}

TEST_CASE("lexmin_point returns the lexicographically smallest vertex") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 40; ++t) {
        Mat w;
        Vec h;
        for (int j = 0; j < 2; ++j)
            for (int s : {1, -1}) {
                Vec r(2, Scalar(0));
                r[static_cast<std::size_t>(j)] = s;
                w.push_back(r);
                h.push_back(3);
            }
        for (int i = 0; i < 3; ++i) {
            w.push_back({Scalar(static_cast<long>(rng() % 5) - 2), Scalar(static_cast<long>(rng() % 5) - 2)});
            h.push_back(Scalar(static_cast<long>(1 + rng() % 4)));
        }
        auto verts = oracle::vertices(w, h);
        REQUIRE_FALSE(verts.empty());
        auto r = lp::lexmin_point(w, h, {}, Vec(2, Scalar(0)));
        CHECK(r.x == verts.front());
    }
}
