#pragma once

#include "csd/mask.hpp"
#include "csd/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csd {

using Point = Vec;

// Raised when a desk-scale enumeration would exceed its configured size.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Domain {
    int dim = 0;
    std::vector<Point> points;

    Domain() = default;
    // Validates dimension, coordinate counts and distinctness.
    Domain(int dim, std::vector<Point> points);
    std::size_t size() const { return points.size(); }
    Domain subdomain(const std::vector<int>& idx) const;
};

// Sorted, duplicate-free indices into a Domain.
using PointSet = std::vector<int>;

PointSet normalize_set(PointSet s, std::size_t n);
Mask to_mask(const PointSet& s, std::size_t n);
PointSet to_set(const Mask& m);

// closed: {x : <normal,x> >= bias}; open: {x : <normal,x> < bias}.
struct Halfspace {
    Vec normal;
    Scalar bias;
    bool closed = false;

    Halfspace() = default;
    Halfspace(Vec normal, Scalar bias, bool closed);
    bool contains(const Point& x) const;
};

struct Inequality {
    Vec normal;   // <normal, x> <= bound
    Scalar bound;
    int id = 0;
};

struct Polytope {
    int dim = 0;
    std::vector<Inequality> rows;

    Polytope() = default;
    Polytope(int dim, std::vector<Inequality> rows);
    // Rows numbered 0..m-1 in the given order.
    static Polytope from_rows(int dim, const Mat& normals, const Vec& bounds);
    std::size_t size() const { return rows.size(); }
    Mat normals() const;
    Vec bounds() const;
    int position_of(int id) const;  // -1 if absent
    bool contains(const Point& x) const;
};

struct Feasibility {
    bool feasible = false;
    Point witness;      // satisfies every inequality when feasible
    Vec certificate;    // y >= 0 per row with y^T W = 0 and y^T c < 0 when infeasible
};

Feasibility lp_feasible(const Polytope& poly);

struct HullIntersection {
    bool intersecting = false;
    Point witness;  // lexicographically smallest point of conv(X) ∩ conv(Y)
    std::vector<std::pair<int, Scalar>> x_coeffs;  // nonzero convex coefficients
    std::vector<std::pair<int, Scalar>> y_coeffs;
};

HullIntersection hulls_intersect(const Domain& u, const PointSet& x, const PointSet& y);
HullIntersection hulls_intersect(const std::vector<Point>& x, const std::vector<Point>& y);

struct Separation {
    Halfspace halfspace;  // open halfspace containing X, disjoint from Y
    Scalar margin;        // optimal margin with ||(normal,bias)||_inf <= 1
};

// Max-margin separator; nullopt iff the hulls intersect.
std::optional<Separation> separate(const Domain& u, const PointSet& x, const PointSet& y);
std::optional<Separation> separate(const std::vector<Point>& x, const std::vector<Point>& y);

PointSet trace(const Halfspace& h, const Domain& u);

struct TraceEntry {
    PointSet members;
    Halfspace realizer;
};

inline constexpr std::size_t kDefaultTraceCap = 2'000'000;

// Every halfspace trace on U, duplicate-free, in canonical order (cardinality, then lexicographic).
std::vector<TraceEntry> enumerate_halfspace_traces(const Domain& u, std::size_t cap = kDefaultTraceCap);

// Convex coefficients of x over pts (basic solution), or nullopt if x lies outside the hull.
std::optional<Vec> convex_combination(const Point& x, const std::vector<Point>& pts);

// --- Affine frames: intrinsic integer coordinates of a point set -------------------------

using IVec = std::vector<Integer>;

struct AffineFrame {
    int ambient = 0;
    int dim = 0;                // affine dimension k
    std::vector<int> coords;    // k coordinate indices; projection onto them is injective on the hull
    Integer scale = 1;          // common denominator of the selected coordinates
    std::vector<IVec> points;   // scale * p[coords]

    // Normal in ambient coordinates for a frame functional with normal a.
    Vec lift_normal(const Vec& a) const;
};

AffineFrame make_frame(const std::vector<Point>& pts);

// A trace in frame coordinates: g(u) = <a,u> - b is negative exactly on `members`, and
// |g(u)| >= lower_bound on every frame point.
struct FrameTrace {
    Mask members;
    Vec a;
    Scalar b;
    Scalar lower_bound;
};

// Input points must be integer and affinely span R^k (k = point dimension).
std::vector<FrameTrace> enumerate_frame_traces(const std::vector<IVec>& pts, std::size_t cap = kDefaultTraceCap);

Halfspace lift_frame_trace(const AffineFrame& frame, const FrameTrace& t, const Domain& u);

}  // namespace csd
