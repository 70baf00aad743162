#pragma once

#include "csd/geom.hpp"

#include <cstddef>
#include <vector>

namespace csd {

using Bits = std::vector<int>;  // entries 0/1

// 1 when no index carries a 1 in both vectors.
int disj(const Bits& x, const Bits& y);

struct GadgetDomain {
    Domain domain;
    int k = 0;                 // bits per block
    int blocks = 1;            // c; 1 for the planar gadget
    std::vector<int> block;    // block of each point
    std::vector<unsigned> word;  // bit-string value of each point, x_1 most significant
    int index(int block, unsigned word) const { return block * (1 << k) + static_cast<int>(word); }
};

// 2^k points (t, t^2), t = 0..2^k-1, indexed by the binary value of the bit string.
GadgetDomain convex_position_gadget(int k, std::size_t cap = 1u << 12);

// (x1, x2) placed in coordinates 3(j-1)+1..3j as (x1, x2, 1); j is 1-based.
Point lift(const Point& p, int j, int c);
GadgetDomain lifted_gadget(int k, int c, std::size_t cap = 1u << 12);

struct PromiseInstance {
    GadgetDomain gadget;
    PointSet alice, bob;
};

// Alice: the point of x; Bob: every point whose bit string shares a 1 with y.
PromiseInstance disj_to_promise_csd(const Bits& x, const Bits& y);
// Block-wise composition over U ⊂ R^{3c}; x and y have length c*k.
PromiseInstance disj_to_csd_full(const Bits& x, const Bits& y, int k, int c);

// X ∩ Y nonempty or the hulls are disjoint.
bool in_promise(const Domain& u, const PointSet& x, const PointSet& y);

// Block separators {<a_j, x> < b_j} in the plane combined into one open halfspace of R^{3c}
// whose value on lift(p, j) equals <a_j, p> - b_j.
Halfspace compose_block_separators(const std::vector<Halfspace>& blocks);

struct ProjectivePlane {
    int q = 0;
    std::size_t points = 0;
    std::vector<PointSet> lines;
};

// PG(2, q) over GF(q); throws std::invalid_argument unless q is prime.
ProjectivePlane projective_plane_lines(int q);

struct CoverDemo {
    int q = 0;
    std::size_t points = 0;
    std::size_t container_size = 0;        // |line| + floor(eps * N)
    std::size_t max_lines_per_container = 0;
    std::size_t min_cover = 0;             // fewest containers holding every line
    std::vector<std::vector<int>> cover;   // line indices grouped per container
};

// Exact minimum number of eps-containers for the family of lines, by exhaustive search.
CoverDemo container_cover_demo(int q, const Scalar& eps);

}  // namespace csd
