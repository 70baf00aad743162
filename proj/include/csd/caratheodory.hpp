#pragma once

#include "csd/geom.hpp"

#include <map>
#include <vector>

namespace csd {

struct Simplex {
    std::vector<Point> vertices;
    bool contains(const Point& x) const;
};

// Inequality ids of the source polytope, one per tightening step.
using BvtSequence = std::vector<int>;

struct Combination {
    PointSet support;  // indices into the input set/domain
    Vec coeffs;        // positive, summing to 1
};

// At most d+1 points of Y whose hull holds x. Throws std::invalid_argument if x is outside conv(Y).
Combination caratheodory_reduce(const Point& x, const Domain& u, const PointSet& y);
// Same, starting from a given convex representation x = sum coeffs[i] * pts[i].
Combination caratheodory_reduce(const std::vector<Point>& pts, const Vec& coeffs);

struct SymmetricSupport {
    PointSet s1, s2;
    Vec c1, c2;
    Point witness;  // sum c1 * X[s1] = sum c2 * Y[s2]
};

// Throws std::invalid_argument when the hulls are disjoint.
SymmetricSupport symmetric_caratheodory(const Domain& u, const PointSet& x, const PointSet& y);
// From a given shared point: sum lx[i] xs[i] = sum ly[j] ys[j], both convex.
SymmetricSupport symmetric_caratheodory(const std::vector<Point>& xs, const std::vector<Point>& ys, Vec lx, Vec ly);

// Vertices by solving every dim-subset of rows; exact, desk scale only.
std::vector<Point> enumerate_vertices(const Polytope& q);
int affine_hull_dim(const std::vector<Point>& pts);

Point bottom_vertex(const Polytope& q);
BvtSequence bvt_encode(const Polytope& q, const Point& a);
std::vector<Point> bvt_decode(const Polytope& q, const BvtSequence& s);

struct SimplexCover {
    std::vector<Simplex> simplices;
    std::vector<BvtSequence> sequences;  // the tightening chain of each simplex
};
SimplexCover cover_by_simplices(const Polytope& q);

// Ray-shooting triangulation over {x : w x <= h} with cached pivots per face.
// Positions double as ids here; the Polytope-level functions translate ids.
class BvtEngine {
public:
    // `implicit_eq` lists rows tight on the whole region; `dim` is its affine dimension;
    // `inside` is any point of the region.
    BvtEngine(Mat w, Vec h, std::vector<int> ids, int dim, std::vector<int> implicit_eq, Point inside);

    struct Encoding {
        std::vector<int> seq;          // row positions
        std::vector<Point> vertices;   // x_0..x_dim
    };
    Encoding encode(const Point& a);
    // Throws std::invalid_argument on an empty face or bad position.
    std::vector<Point> decode(const std::vector<int>& seq);
    const Point& pivot(const std::vector<int>& eq_sorted, const Point& start);
    int dim() const { return dim_; }
    std::size_t rows() const { return w_.size(); }
    const std::vector<int>& ids() const { return ids_; }

private:
    bool is_facet(const std::vector<int>& eq, int cur_dim, int j, const Point& p);
    Mat w_;
    Vec h_;
    std::vector<int> ids_;
    int dim_;
    std::vector<int> base_eq_;
    Point inside_;
    std::map<std::vector<int>, Point> pivots_;
};

}  // namespace csd
