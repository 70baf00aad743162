#include "csd/hardness.hpp"
#include "csd/protocols.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <functional>
#include <set>

using namespace csd;

namespace {

Bits bits_of(unsigned v, int len) {
    Bits b;
    for (int i = len - 1; i >= 0; --i) b.push_back(static_cast<int>(v >> i & 1u));
    return b;
}

// Orientation of (p, q, r); positive for a left turn.
Scalar orient(const Point& p, const Point& q, const Point& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

// Fewest groups of lines whose unions fit in `size` points, by plain assignment search.
bool cover_exists(const ProjectivePlane& p, std::size_t size, std::size_t groups) {
    std::vector<std::set<int>> unions(groups);
    std::function<bool(std::size_t)> place = [&](std::size_t line) {
        if (line == p.lines.size()) return true;
        for (std::size_t g = 0; g < groups; ++g) {
            auto saved = unions[g];
            unions[g].insert(p.lines[line].begin(), p.lines[line].end());
            if (unions[g].size() <= size && place(line + 1)) return true;
            unions[g] = saved;
            if (saved.empty()) break;  // empty groups are interchangeable
        }
        return false;
    };
    return place(0);
}

}  // namespace

TEST_CASE("disj") {
    CHECK(disj({0, 0, 1, 0}, {0, 1, 0, 1}) == 1);
    CHECK(disj({1}, {1}) == 0);
    CHECK_THROWS(disj({1, 0}, {1}));
}

TEST_CASE("planar gadget is in strictly convex position") {
    for (int k = 1; k <= 4; ++k) {
        GadgetDomain g = convex_position_gadget(k);
        const std::size_t n = std::size_t{1} << k;
        REQUIRE(g.domain.size() == n);
        for (std::size_t i = 0; i + 2 < n; ++i) CHECK(orient(g.domain.points[i], g.domain.points[i + 1], g.domain.points[i + 2]) > 0);
        for (unsigned w = 0; w < n; ++w) CHECK(g.word[static_cast<std::size_t>(g.index(0, w))] == w);
    }
    GadgetDomain two = convex_position_gadget(1);
    CHECK(separate(two.domain, {0}, {1}).has_value());

    GadgetDomain four = convex_position_gadget(2);
    std::set<PointSet> traces;
    for (const auto& t : enumerate_halfspace_traces(four.domain)) traces.insert(t.members);
    for (int i = 0; i < 4; ++i) {
        PointSet rest;
        for (int j = 0; j < 4; ++j)
            if (j != i) rest.push_back(j);
        CHECK(traces.count({i}));
        CHECK(traces.count(rest));
    }
    CHECK_THROWS_AS(convex_position_gadget(13), CapExceeded);
    CHECK_THROWS(convex_position_gadget(0));
}

TEST_CASE("the four-bit instance with no common one") {
    Bits x{0, 0, 1, 0}, y{0, 1, 0, 1};
    PromiseInstance pi = disj_to_promise_csd(x, y);
    REQUIRE(pi.alice.size() == 1);
    CHECK(pi.gadget.word[static_cast<std::size_t>(pi.alice[0])] == 2u);
    CHECK(disj(x, y) == 1);
    CHECK_FALSE(oracle::hulls_intersect(pi.gadget.domain, pi.alice, pi.bob));
    CHECK(in_promise(pi.gadget.domain, pi.alice, pi.bob));
}

TEST_CASE("single shared bit") {
    PromiseInstance pi = disj_to_promise_csd({1}, {1});
    CHECK(std::includes(pi.bob.begin(), pi.bob.end(), pi.alice.begin(), pi.alice.end()));
    CHECK(run_promise_csd(pi.gadget.domain, pi.alice, pi.bob).decision == 0);
}

TEST_CASE("planar reduction, exhaustive at k = 3") {
    ProtocolEngine engine;
    std::size_t mismatches = 0;
    for (unsigned xv = 0; xv < 8; ++xv)
        for (unsigned yv = 0; yv < 8; ++yv) {
            Bits x = bits_of(xv, 3), y = bits_of(yv, 3);
            PromiseInstance pi = disj_to_promise_csd(x, y);
            CHECK(pi.alice.size() == 1);
            CHECK(in_promise(pi.gadget.domain, pi.alice, pi.bob));
            int expect = oracle::disj(x, y);
            bool shared = std::includes(pi.bob.begin(), pi.bob.end(), pi.alice.begin(), pi.alice.end());
            CHECK(shared == (expect == 0));
            if (pi.bob.empty()) continue;  // Bob holds nothing: trivially disjoint
            CHECK(oracle::hulls_intersect(pi.gadget.domain, pi.alice, pi.bob) == (expect == 0));
            if (run_promise_csd(pi.gadget.domain, pi.alice, pi.bob, engine).decision != expect) ++mismatches;
        }
    CHECK(mismatches == 0);
    CHECK_THROWS(disj_to_promise_csd({1, 0}, {1}));
}

TEST_CASE("lift") {
    CHECK(lift({Scalar(3), Scalar(9)}, 1, 1) == Point{Scalar(3), Scalar(9), Scalar(1)});
    CHECK(lift({Scalar(1), Scalar(2)}, 2, 2) == Point{Scalar(0), Scalar(0), Scalar(0), Scalar(1), Scalar(2), Scalar(1)});
    CHECK_THROWS(lift({Scalar(1), Scalar(2)}, 0, 2));
    CHECK_THROWS(lift({Scalar(1), Scalar(2)}, 3, 2));
}

TEST_CASE("block separators recombine") {
    const int k = 2, c = 2;
    GadgetDomain planar = convex_position_gadget(k);
    for (unsigned xv = 0; xv < 16; ++xv)
        for (unsigned yv = 0; yv < 16; ++yv) {
            Bits x = bits_of(xv, c * k), y = bits_of(yv, c * k);
            if (oracle::disj(x, y) == 0) continue;
            PromiseInstance full = disj_to_csd_full(x, y, k, c);
            std::vector<Halfspace> blocks;
            for (int j = 0; j < c; ++j) {
                Bits xb(x.begin() + j * k, x.begin() + (j + 1) * k), yb(y.begin() + j * k, y.begin() + (j + 1) * k);
                PromiseInstance b = disj_to_promise_csd(xb, yb);
                if (b.bob.empty()) {
                    // Anything holding Alice's point will do.
                    const Point& p = planar.domain.points[static_cast<std::size_t>(b.alice[0])];
                    blocks.emplace_back(Vec{Scalar(1), Scalar(0)}, p[0] + 1, false);
                } else {
                    auto s = separate(planar.domain, b.alice, b.bob);
                    REQUIRE(s);
                    blocks.push_back(s->halfspace);
                }
            }
            Halfspace l = compose_block_separators(blocks);
            for (int i : full.alice) CHECK(l.contains(full.gadget.domain.points[static_cast<std::size_t>(i)]));
            for (int i : full.bob) CHECK_FALSE(l.contains(full.gadget.domain.points[static_cast<std::size_t>(i)]));
        }
}

TEST_CASE("composed reduction, exhaustive at c = 2, k = 2") {
    ProtocolEngine engine;
    std::size_t mismatches = 0, runs = 0;
    for (unsigned xv = 0; xv < 16; ++xv)
        for (unsigned yv = 0; yv < 16; ++yv) {
            Bits x = bits_of(xv, 4), y = bits_of(yv, 4);
            PromiseInstance pi = disj_to_csd_full(x, y, 2, 2);
            CHECK(pi.gadget.domain.size() == 8);
            CHECK(pi.gadget.domain.dim == 6);
            CHECK(pi.alice.size() == 2);
            CHECK(in_promise(pi.gadget.domain, pi.alice, pi.bob));
            int expect = oracle::disj(x, y);
            if (pi.bob.empty()) {
                CHECK(expect == 1);
                continue;
            }
            CHECK(oracle::hulls_intersect(pi.gadget.domain, pi.alice, pi.bob) == (expect == 0));
            if (run_promise_csd(pi.gadget.domain, pi.alice, pi.bob, engine).decision != expect) ++mismatches;
            ++runs;
        }
    CHECK(runs > 0);
    CHECK(mismatches == 0);
}

TEST_CASE("one block reduces to the planar gadget") {
    PromiseInstance a = disj_to_csd_full({1, 0}, {0, 1}, 2, 1);
    PromiseInstance b = disj_to_promise_csd({1, 0}, {0, 1});
    CHECK(a.alice == b.alice);
    CHECK(a.bob == b.bob);
    CHECK_THROWS(disj_to_csd_full({1, 0, 1}, {0, 1, 1}, 2, 2));
}

TEST_CASE("projective planes") {
    for (int q : {2, 3, 5}) {
        ProjectivePlane p = projective_plane_lines(q);
        const std::size_t n = static_cast<std::size_t>(q * q + q + 1);
        CHECK(p.points == n);
        REQUIRE(p.lines.size() == n);
        for (const auto& l : p.lines) CHECK(l.size() == static_cast<std::size_t>(q + 1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                PointSet meet;
                std::set_intersection(p.lines[i].begin(), p.lines[i].end(), p.lines[j].begin(), p.lines[j].end(),
                                      std::back_inserter(meet));
                CHECK(meet.size() == 1);
            }
        for (int a = 0; a < static_cast<int>(n); ++a)
            for (int b = a + 1; b < static_cast<int>(n); ++b) {
                int through = 0;
                for (const auto& l : p.lines)
                    if (std::binary_search(l.begin(), l.end(), a) && std::binary_search(l.begin(), l.end(), b)) ++through;
                CHECK(through == 1);
            }
    }
    CHECK_THROWS(projective_plane_lines(4));
    CHECK_THROWS(projective_plane_lines(1));
}

TEST_CASE("container cover demo matches an independent search") {
    for (int q : {2, 3})
        for (Scalar eps : {Scalar(0), Scalar(1, 7), Scalar(1, 4)}) {
            CoverDemo d = container_cover_demo(q, eps);
            ProjectivePlane p = projective_plane_lines(q);
            CHECK(d.points == p.points);
            // Every line sits inside one container of the reported cover.
            std::vector<int> seen(p.lines.size(), 0);
            for (const auto& group : d.cover) {
                std::set<int> pts;
                for (int l : group) {
                    ++seen[static_cast<std::size_t>(l)];
                    pts.insert(p.lines[static_cast<std::size_t>(l)].begin(), p.lines[static_cast<std::size_t>(l)].end());
                }
                CHECK(pts.size() <= d.container_size);
            }
            for (int s : seen) CHECK(s >= 1);
            CHECK(d.cover.size() == d.min_cover);
            if (q == 2) {
                CHECK(cover_exists(p, d.container_size, d.min_cover));
                CHECK_FALSE(cover_exists(p, d.container_size, d.min_cover - 1));
            }
        }
    // With no slack each container holds a single line.
    CHECK(container_cover_demo(3, 0).min_cover == 13);
}
