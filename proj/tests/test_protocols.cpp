#include "csd/experiment.hpp"
#include "csd/protocols.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace csd;

namespace {

Domain line(int n, int start = 0) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({Scalar(start + i)});
    return Domain(1, pts);
}

Domain parabola(int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({Scalar(i), Scalar(i * i)});
    return Domain(2, pts);
}

PointSet from_bits(unsigned m, int n) {
    PointSet s;
    for (int i = 0; i < n; ++i)
        if (m >> i & 1u) s.push_back(i);
    return s;
}

bool shares_point(const PointSet& x, const PointSet& y) {
    PointSet both;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
    return !both.empty();
}

// The labelling puts X on -1 and Y on +1.
bool labels_valid(const std::vector<int>& h, const PointSet& x, const PointSet& y) {
    for (int i : x)
        if (h[static_cast<std::size_t>(i)] != -1) return false;
    for (int i : y)
        if (h[static_cast<std::size_t>(i)] != 1) return false;
    return true;
}

// Shrinkage, round count and the preserved intersection.
void check_structure(const ProtocolOutcome& o, std::size_t n) {
    const auto& r = o.rounds;
    REQUIRE_FALSE(r.empty());
    CHECK(r.front().u_size == n);
    const double limit = std::ceil(std::log(static_cast<double>(n)) / std::log(4.0 / 3.0)) + 1;
    CHECK(static_cast<double>(r.size()) <= limit);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        CHECK(4 * r[i + 1].u_size <= 3 * r[i].u_size);
        CHECK(r[i + 1].shared == r[i].shared);
        CHECK(r[i].chooser.has_value());
    }
    std::size_t sum = 0;
    for (const auto& m : o.transcript.messages) sum += m.payload.size();
    CHECK(sum == o.transcript.total_bits);
    CHECK(transcript_bits(o) == sum);
}

void split_sample(const std::vector<int>& labels, std::mt19937_64& rng, Sample& a, Sample& b) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto r = rng() % 3;
        if (r == 0) a.push_back({static_cast<int>(i), labels[i]});
        if (r == 1) b.push_back({static_cast<int>(i), labels[i]});
    }
}

void check_consistent(const LearningOutcome& lo, const Sample& a, const Sample& b) {
    REQUIRE(lo.ok);
    for (const auto& s : {a, b})
        for (auto [i, y] : s) CHECK(lo.hypothesis.labels[static_cast<std::size_t>(i)] == y);
}

}  // namespace

TEST_CASE("transcript bookkeeping") {
    Transcript t;
    CHECK(transcript_bits(t) == 0);
    t.append({Party::Alice, {true, false, true}, "x"});
    t.append({Party::Bob, {false}, "y"});
    CHECK(t.total_bits == 4);
    Transcript u;
    u.append({Party::Bob, {true, true}, "z"});
    t.extend(u);
    CHECK(t.total_bits == 6);
    CHECK(t.messages.size() == 3);
}

TEST_CASE("epsilon above a quarter is refused") {
    ProtocolConfig cfg;
    cfg.epsilon = Scalar(1, 2);
    CHECK_THROWS(ProtocolEngine{cfg});
}

TEST_CASE("shared singleton decides 0") {
    Domain u = line(8);
    for (int p = 0; p < 8; ++p) {
        auto o = run_promise_csd(u, {p}, {p});
        CHECK(o.decision == 0);
        CHECK_FALSE(o.labels.has_value());
        check_structure(o, 8);
    }
}

TEST_CASE("far apart sets on a line decide 1") {
    Domain u = line(8, 1);
    auto o = run_promise_csd(u, {0, 1}, {6, 7});
    REQUIRE(o.decision == 1);
    REQUIRE(o.labels);
    CHECK(labels_valid(*o.labels, {0, 1}, {6, 7}));
    auto sep = separate(u, {0, 1}, {6, 7});
    CHECK(sep.has_value());
    check_structure(o, 8);
}

TEST_CASE("messages alternate and cost two control bits plus a code") {
    Domain u = parabola(8);
    ProtocolEngine engine;
    PromiseCsdSession s(u, {0, 1}, {5, 6, 7}, engine);
    std::vector<Party> senders;
    while (!s.done()) senders.push_back(s.step().sender);
    for (std::size_t i = 0; i < senders.size(); ++i) CHECK(senders[i] == (i % 2 == 0 ? Party::Alice : Party::Bob));
    auto o = s.outcome();
    CHECK(o.decision == 1);
    for (const auto& r : o.rounds) {
        if (r.chooser) CHECK(r.payload_bits == 2 + r.code_bits);
        else CHECK(r.payload_bits == 2);
    }
    CHECK_THROWS(s.step());
}

TEST_CASE("promise protocol matches the oracle, exhaustive on small domains") {
    ProtocolEngine engine;
    for (const Domain& u : {line(6), parabola(6)}) {
        const int n = static_cast<int>(u.size());
        std::size_t runs = 0, mismatches = 0;
        for (unsigned xm = 1; xm < (1u << n); ++xm)
            for (unsigned ym = 1; ym < (1u << n); ++ym) {
                PointSet x = from_bits(xm, n), y = from_bits(ym, n);
                bool meet = oracle::hulls_intersect(u, x, y);
                if (meet && !shares_point(x, y)) continue;  // outside the promise
                auto o = run_promise_csd(u, x, y, engine);
                ++runs;
                if (o.decision != (meet ? 0 : 1)) ++mismatches;
                if (o.decision == 1) CHECK(labels_valid(*o.labels, x, y));
                check_structure(o, u.size());
            }
        CHECK(runs > 0);
        CHECK(mismatches == 0);
    }
}

TEST_CASE("protocol is deterministic") {
    Domain u = parabola(8);
    auto a = run_promise_csd(u, {0, 3}, {5, 7});
    auto b = run_promise_csd(u, {0, 3}, {5, 7});
    REQUIRE(a.transcript.messages.size() == b.transcript.messages.size());
    for (std::size_t i = 0; i < a.transcript.messages.size(); ++i)
        CHECK(a.transcript.messages[i].payload == b.transcript.messages[i].payload);
    CHECK(a.labels == b.labels);
}

TEST_CASE("auxiliary domain") {
    Domain three = line(3);
    Domain v = build_auxiliary_domain(three);
    for (int i = 0; i < 3; ++i) CHECK(v.points[static_cast<std::size_t>(i)] == three.points[static_cast<std::size_t>(i)]);
    CHECK(v.size() == 3);

    Domain one(2, {{Scalar(1), Scalar(2)}});
    CHECK(build_auxiliary_domain(one).points == one.points);

    Domain six = make_domain("random", 6, 2, 61);
    Domain aux = build_auxiliary_domain(six);
    CHECK(aux.size() <= 20736);
    CHECK(aux.size() >= six.size());
    // Witnesses are convex combinations of U.
    for (const auto& p : aux.points) CHECK(oracle::in_hull(p, six.points));

    CHECK_THROWS_AS(build_auxiliary_domain(six, 10), CapExceeded);
}

TEST_CASE("full CSD examples") {
    Domain u = line(3);
    auto o = run_csd(u, {0, 2}, {1});
    CHECK(o.decision == 0);
    auto s = run_csd(line(8), {0, 1, 2}, {5, 6});
    REQUIRE(s.decision == 1);
    REQUIRE(s.labels);
    CHECK(s.labels->size() == 8);
    CHECK(labels_valid(*s.labels, {0, 1, 2}, {5, 6}));
    CHECK(s.promise.transcript.total_bits > 0);
}

TEST_CASE("full CSD matches the oracle on random planar instances") {
    ProtocolEngine engine;
    std::mt19937_64 rng(67);
    std::size_t mismatches = 0;
    for (int t = 0; t < 4; ++t) {
        Domain u = make_domain("random", 6, 2, 1000 + static_cast<std::uint64_t>(t));
        for (int r = 0; r < 15; ++r) {
            PointSet x, y;
            while (x.empty() || y.empty()) {
                x.clear();
                y.clear();
                for (int i = 0; i < 6; ++i) {
                    auto c = rng() % 4;
                    if (c == 0 || c == 3) x.push_back(i);
                    if (c == 1 || c == 3) y.push_back(i);
                }
            }
            auto o = run_csd(u, x, y, engine);
            bool meet = oracle::hulls_intersect(u, x, y);
            if (o.decision != (meet ? 0 : 1)) ++mismatches;
            if (o.decision == 1) CHECK(labels_valid(*o.labels, x, y));
            // Mapped sets contain the originals.
            CHECK(std::includes(o.alice_mapped.begin(), o.alice_mapped.end(), x.begin(), x.end()));
            CHECK(std::includes(o.bob_mapped.begin(), o.bob_mapped.end(), y.begin(), y.end()));
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("learning: all positive") {
    Domain u = line(6);
    Sample a{{0, 1}, {2, 1}}, b{{5, 1}};
    auto lo = run_learning(a, b, u);
    check_consistent(lo, a, b);
    for (int v : lo.hypothesis.labels) CHECK(v == 1);
}

TEST_CASE("learning: interleaved 1D sample") {
    Domain u = line(8);
    Sample a{{1, -1}, {5, 1}}, b{{2, -1}, {6, 1}};
    auto lo = run_learning(a, b, u);
    check_consistent(lo, a, b);
    // 2 * ceil(log2(2 * 8)) indicator bits.
    CHECK(lo.indicator_bits == 8);
    CHECK(lo.transcript.total_bits == lo.promise_bits[0] + lo.promise_bits[1] + lo.indicator_bits);
}

TEST_CASE("learning: pairwise separable, not globally") {
    // XOR on the unit square: Alice holds (0,0)+ and (1,0)-, Bob holds (1,1)+ and (0,1)-.
    Domain u(2, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(0)}, {Scalar(1), Scalar(1)}, {Scalar(0), Scalar(1)}, {Scalar(2), Scalar(2)}});
    Sample a{{0, 1}, {1, -1}}, b{{2, 1}, {3, -1}};
    std::vector<Point> pos{u.points[0], u.points[2]}, neg{u.points[1], u.points[3]};
    REQUIRE(oracle::hulls_intersect(pos, neg));
    auto lo = run_learning(a, b, u);
    check_consistent(lo, a, b);
}

TEST_CASE("learning: random realisable samples") {
    ProtocolEngine engine;
    std::mt19937_64 rng(71);
    for (int d = 1; d <= 2; ++d)
        for (int t = 0; t < 15; ++t) {
            Domain u = make_domain("random", 10, d, 500 + static_cast<std::uint64_t>(t));
            auto labels = random_halfspace_labels(u, rng);
            Sample a, b;
            split_sample(labels, rng, a, b);
            auto lo = run_learning(a, b, u, engine);
            check_consistent(lo, a, b);
            Integer count = 2;
            for (int j = 0; j < d; ++j) count *= 10;
            CHECK(lo.indicator_bits == 2 * bits_for(count));
            CHECK(lo.transcript.total_bits == lo.promise_bits[0] + lo.promise_bits[1] + lo.indicator_bits);
        }
}

TEST_CASE("learning reports non-realisable input") {
    Domain u = line(4);
    // The same point carries both labels.
    Sample a{{1, -1}, {3, -1}}, b{{1, 1}};
    auto lo = run_learning(a, b, u);
    CHECK_FALSE(lo.ok);
}

TEST_CASE("outside the promise the raw protocol can err; the reduction cannot") {
    // 1 lies between Alice's two points, yet no point is shared.
    Domain u = line(4);
    PointSet x{0, 3}, y{1};
    REQUIRE(oracle::hulls_intersect(u, x, y));
    CHECK(run_promise_csd(u, x, y).decision == 1);
    CHECK(run_csd(u, x, y).decision == 0);
}
