#include "csd/hardness.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace csd {

int disj(const Bits& x, const Bits& y) {
    if (x.size() != y.size()) throw std::invalid_argument("bit vectors differ in length");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] && y[i]) return 0;
    return 1;
}

namespace {

unsigned word_of(const Bits& x, std::size_t from, int k) {
    unsigned w = 0;
    for (int i = 0; i < k; ++i) {
        int b = x[from + static_cast<std::size_t>(i)];
        if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
        w = (w << 1) | static_cast<unsigned>(b);
    }
    return w;
}

void check_size(int k, int c, std::size_t cap) {
    if (k < 1 || c < 1) throw std::invalid_argument("k and c must be positive");
    if (k > 20 || (std::size_t{1} << k) * static_cast<std::size_t>(c) > cap) throw CapExceeded("gadget exceeds cap");
}

}  // namespace

GadgetDomain convex_position_gadget(int k, std::size_t cap) {
    check_size(k, 1, cap);
    GadgetDomain g;
    g.k = k;
    std::vector<Point> pts;
    for (unsigned t = 0; t < (1u << k); ++t) {
        pts.push_back({Scalar(t), Scalar(static_cast<unsigned long>(t) * t)});
        g.block.push_back(0);
        g.word.push_back(t);
    }
    g.domain = Domain(2, std::move(pts));
    return g;
}

Point lift(const Point& p, int j, int c) {
    if (p.size() != 2) throw std::invalid_argument("lift expects a planar point");
    if (c < 1 || j < 1 || j > c) throw std::invalid_argument("block index out of range");
    Point out(static_cast<std::size_t>(3 * c), Scalar(0));
    auto base = static_cast<std::size_t>(3 * (j - 1));
    out[base] = p[0];
    out[base + 1] = p[1];
    out[base + 2] = 1;
    return out;
}

GadgetDomain lifted_gadget(int k, int c, std::size_t cap) {
    check_size(k, c, cap);
    GadgetDomain planar = convex_position_gadget(k, cap);
    GadgetDomain g;
    g.k = k;
    g.blocks = c;
    std::vector<Point> pts;
    for (int j = 1; j <= c; ++j)
        for (std::size_t t = 0; t < planar.domain.size(); ++t) {
            pts.push_back(lift(planar.domain.points[t], j, c));
            g.block.push_back(j - 1);
            g.word.push_back(planar.word[t]);
        }
    g.domain = Domain(3 * c, std::move(pts));
    return g;
}

namespace {

// Alice's and Bob's point sets for one block, as words.
void block_sets(const Bits& x, const Bits& y, std::size_t from, int k, std::vector<unsigned>& a,
                std::vector<unsigned>& b) {
    a.push_back(word_of(x, from, k));
    unsigned yw = word_of(y, from, k);
    for (unsigned z = 0; z < (1u << k); ++z)
        if (z & yw) b.push_back(z);
}

}  // namespace

PromiseInstance disj_to_promise_csd(const Bits& x, const Bits& y) {
    if (x.size() != y.size()) throw std::invalid_argument("bit vectors differ in length");
    const int k = static_cast<int>(x.size());
    PromiseInstance inst{convex_position_gadget(k), {}, {}};
    std::vector<unsigned> a, b;
    block_sets(x, y, 0, k, a, b);
    for (unsigned w : a) inst.alice.push_back(inst.gadget.index(0, w));
    for (unsigned w : b) inst.bob.push_back(inst.gadget.index(0, w));
    inst.alice = normalize_set(inst.alice, inst.gadget.domain.size());
    inst.bob = normalize_set(inst.bob, inst.gadget.domain.size());
    return inst;
}

PromiseInstance disj_to_csd_full(const Bits& x, const Bits& y, int k, int c) {
    if (x.size() != y.size() || x.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(c))
        throw std::invalid_argument("bit vectors must have length c*k");
    PromiseInstance inst{lifted_gadget(k, c), {}, {}};
    for (int j = 0; j < c; ++j) {
        std::vector<unsigned> a, b;
        block_sets(x, y, static_cast<std::size_t>(j * k), k, a, b);
        for (unsigned w : a) inst.alice.push_back(inst.gadget.index(j, w));
        for (unsigned w : b) inst.bob.push_back(inst.gadget.index(j, w));
    }
    inst.alice = normalize_set(inst.alice, inst.gadget.domain.size());
    inst.bob = normalize_set(inst.bob, inst.gadget.domain.size());
    return inst;
}

bool in_promise(const Domain& u, const PointSet& x, const PointSet& y) {
    PointSet xs = normalize_set(x, u.size()), ys = normalize_set(y, u.size());
    for (int i : xs)
        if (std::binary_search(ys.begin(), ys.end(), i)) return true;
    if (xs.empty() || ys.empty()) return true;
    return !hulls_intersect(u, xs, ys).intersecting;
}

Halfspace compose_block_separators(const std::vector<Halfspace>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("no blocks");
    Vec normal;
    for (const auto& h : blocks) {
        if (h.normal.size() != 2 || h.closed) throw std::invalid_argument("block separators must be open planar halfspaces");
        normal.push_back(h.normal[0]);
        normal.push_back(h.normal[1]);
        normal.push_back(-h.bias);
    }
    return Halfspace(std::move(normal), Scalar(0), false);
}

ProjectivePlane projective_plane_lines(int q) {
    if (q < 2) throw std::invalid_argument("q must be prime");
    for (int p = 2; p * p <= q; ++p)
        if (q % p == 0) throw std::invalid_argument("q must be prime");
    if (q > 31) throw CapExceeded("projective plane order too large");
    // Normalised homogeneous triples: first nonzero coordinate equal to 1.
    std::vector<std::array<int, 3>> pts;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c) {
                std::array<int, 3> v{a, b, c};
                int lead = v[0] ? v[0] : v[1] ? v[1] : v[2];
                if (lead == 1) pts.push_back(v);
            }
    ProjectivePlane plane;
    plane.q = q;
    plane.points = pts.size();
    // Lines are indexed by the same triples (duality).
    for (const auto& l : pts) {
        PointSet line;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if ((l[0] * pts[i][0] + l[1] * pts[i][1] + l[2] * pts[i][2]) % q == 0) line.push_back(static_cast<int>(i));
        plane.lines.push_back(std::move(line));
    }
    return plane;
}

namespace {

struct CoverSearch {
    std::size_t lines = 0;
    std::vector<Mask> groups;                 // feasible line groups (maximal ones suffice)
    std::vector<std::vector<int>> by_line;    // groups containing each line
    std::vector<int> best, cur;

    void run(Mask covered) {
        if (!best.empty() && cur.size() + 1 > best.size() && covered.count() < lines) return;
        std::size_t first = lines;
        for (std::size_t i = 0; i < lines; ++i)
            if (!covered.test(i)) {
                first = i;
                break;
            }
        if (first == lines) {
            if (best.empty() || cur.size() < best.size()) best = cur;
            return;
        }
        // Lower bound: remaining lines over the largest group.
        std::size_t biggest = 0;
        for (const auto& g : groups) biggest = std::max(biggest, g.count());
        std::size_t remaining = lines - covered.count();
        std::size_t lb = (remaining + biggest - 1) / biggest;
        if (!best.empty() && cur.size() + lb >= best.size()) return;
        for (int gi : by_line[first]) {
            cur.push_back(gi);
            run(covered | groups[static_cast<std::size_t>(gi)]);
            cur.pop_back();
        }
    }
};

void extend_groups(const ProjectivePlane& p, std::size_t limit, std::size_t next, Mask chosen, Mask pts,
                   std::vector<Mask>& out) {
    bool extended = false;
    for (std::size_t l = next; l < p.lines.size(); ++l) {
        Mask u = pts | to_mask(p.lines[l], p.points);
        if (u.count() > limit) continue;
        Mask c = chosen;
        c.set(l);
        extend_groups(p, limit, l + 1, c, u, out);
        extended = true;
    }
    if (!extended && chosen.any()) out.push_back(chosen);
}

}  // namespace

CoverDemo container_cover_demo(int q, const Scalar& eps) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon must lie in [0, 1]");
    ProjectivePlane p = projective_plane_lines(q);
    if (p.points > 64) throw CapExceeded("cover search is limited to q <= 7");
    CoverDemo d;
    d.q = q;
    d.points = p.points;
    Scalar slack = eps * Scalar(static_cast<unsigned long>(p.points));
    Integer fl = slack.get_num() / slack.get_den();
    d.container_size = static_cast<std::size_t>(q + 1) + fl.get_ui();

    std::vector<Mask> groups;
    extend_groups(p, d.container_size, 0, Mask(p.lines.size()), Mask(p.points), groups);
    // Keep only maximal groups (the search may stop early otherwise but never needs subsets).
    std::vector<Mask> maximal;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < groups.size() && !dominated; ++j)
            if (i != j && groups[i].subset_of(groups[j]) && groups[i] != groups[j]) dominated = true;
        if (!dominated) maximal.push_back(groups[i]);
    }
    std::sort(maximal.begin(), maximal.end(), Mask::canonical_less);
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
    for (const auto& g : maximal) d.max_lines_per_container = std::max(d.max_lines_per_container, g.count());

    CoverSearch s;
    s.lines = p.lines.size();
    s.groups = maximal;
    s.by_line.resize(s.lines);
    for (std::size_t gi = 0; gi < maximal.size(); ++gi)
        for (int l : maximal[gi].indices()) s.by_line[static_cast<std::size_t>(l)].push_back(static_cast<int>(gi));
    s.run(Mask(s.lines));
    d.min_cover = s.best.size();
    for (int gi : s.best) d.cover.push_back(maximal[static_cast<std::size_t>(gi)].indices());
    return d;
}

}  // namespace csd
