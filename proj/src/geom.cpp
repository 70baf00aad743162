#include "csd/geom.hpp"

#include "csd/lp.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace csd {

Domain::Domain(int dim_, std::vector<Point> pts) : dim(dim_), points(std::move(pts)) {
    if (dim < 1) throw std::invalid_argument("domain dimension must be positive");
    if (points.empty()) throw std::invalid_argument("domain must contain at least one point");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("point has wrong dimension");
    std::vector<const Point*> sorted;
    for (const auto& p : points) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const Point* a, const Point* b) { return *a < *b; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (*sorted[i] == *sorted[i - 1]) throw std::invalid_argument("duplicate point in domain");
}

Domain Domain::subdomain(const std::vector<int>& idx) const {
    std::vector<Point> pts;
    for (int i : idx) pts.push_back(points.at(static_cast<std::size_t>(i)));
    return Domain(dim, std::move(pts));
}

PointSet normalize_set(PointSet s, std::size_t n) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int i : s)
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw std::out_of_range("point index out of range");
    return s;
}

Mask to_mask(const PointSet& s, std::size_t n) { return Mask::from_indices(n, s); }
PointSet to_set(const Mask& m) { return m.indices(); }

Halfspace::Halfspace(Vec n, Scalar b, bool c) : normal(std::move(n)), bias(std::move(b)), closed(c) {
    if (std::all_of(normal.begin(), normal.end(), [](const Scalar& s) { return s == 0; }))
        throw std::invalid_argument("halfspace normal must be nonzero");
}

bool Halfspace::contains(const Point& x) const {
    Scalar v = dot(normal, x);
    return closed ? v >= bias : v < bias;
}

Polytope::Polytope(int d, std::vector<Inequality> r) : dim(d), rows(std::move(r)) {
    for (const auto& q : rows)
        if (static_cast<int>(q.normal.size()) != dim) throw std::invalid_argument("inequality dimension mismatch");
}

Polytope Polytope::from_rows(int d, const Mat& normals, const Vec& bounds) {
    std::vector<Inequality> rows;
    for (std::size_t i = 0; i < normals.size(); ++i) rows.push_back({normals[i], bounds.at(i), static_cast<int>(i)});
    return Polytope(d, std::move(rows));
}

Mat Polytope::normals() const {
    Mat w;
    for (const auto& r : rows) w.push_back(r.normal);
    return w;
}

Vec Polytope::bounds() const {
    Vec h;
    for (const auto& r : rows) h.push_back(r.bound);
    return h;
}

int Polytope::position_of(int id) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].id == id) return static_cast<int>(i);
    return -1;
}

bool Polytope::contains(const Point& x) const {
    for (const auto& r : rows)
        if (dot(r.normal, x) > r.bound) return false;
    return true;
}

Feasibility lp_feasible(const Polytope& poly) {
    const std::size_t m = poly.size(), d = static_cast<std::size_t>(poly.dim);
    // W x+ - W x- + s = c with all variables nonnegative.
    Mat a(m, Vec(2 * d + m, Scalar(0)));
    Vec b(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            a[i][j] = poly.rows[i].normal[j];
            a[i][d + j] = -poly.rows[i].normal[j];
        }
        a[i][2 * d + i] = 1;
        b[i] = poly.rows[i].bound;
    }
    Feasibility out;
    auto res = lp::solve_standard(a, b, {});
    if (res.status == lp::Status::Optimal) {
        out.feasible = true;
        out.witness.resize(d);
        for (std::size_t j = 0; j < d; ++j) out.witness[j] = res.x[j] - res.x[d + j];
        return out;
    }
    // Farkas alternative: y >= 0, W^T y = 0, c^T y = -1.
    Mat alt(d + 1, Vec(m));
    Vec rhs(d + 1, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) alt[j][i] = poly.rows[i].normal[j];
        alt[d][i] = poly.rows[i].bound;
    }
    rhs[d] = -1;
    auto cert = lp::solve_standard(alt, rhs, {});
    if (cert.status != lp::Status::Optimal) throw std::logic_error("lp_feasible: no certificate for infeasible system");
    out.certificate = cert.x;
    return out;
}

HullIntersection hulls_intersect(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("hulls_intersect: empty input set");
    const std::size_t d = xs[0].size(), nx = xs.size(), ny = ys.size();
    Mat a(d + 2, Vec(nx + ny, Scalar(0)));
    Vec b(d + 2, Scalar(0));
    for (std::size_t t = 0; t < d; ++t) {
        for (std::size_t i = 0; i < nx; ++i) a[t][i] = xs[i][t];
        for (std::size_t j = 0; j < ny; ++j) a[t][nx + j] = -ys[j][t];
    }
    for (std::size_t i = 0; i < nx; ++i) a[d][i] = 1;
    for (std::size_t j = 0; j < ny; ++j) a[d + 1][nx + j] = 1;
    b[d] = 1;
    b[d + 1] = 1;
    std::vector<Vec> obj(d, Vec(nx + ny, Scalar(0)));
    for (std::size_t t = 0; t < d; ++t)
        for (std::size_t i = 0; i < nx; ++i) obj[t][i] = xs[i][t];
    auto res = lp::solve_standard(a, b, obj);
    HullIntersection out;
    if (res.status != lp::Status::Optimal) return out;
    out.intersecting = true;
    out.witness.assign(d, Scalar(0));
    for (std::size_t i = 0; i < nx; ++i) {
        if (res.x[i] == 0) continue;
        out.x_coeffs.emplace_back(static_cast<int>(i), res.x[i]);
        for (std::size_t t = 0; t < d; ++t) out.witness[t] += res.x[i] * xs[i][t];
    }
    for (std::size_t j = 0; j < ny; ++j)
        if (res.x[nx + j] != 0) out.y_coeffs.emplace_back(static_cast<int>(j), res.x[nx + j]);
    return out;
}

namespace {
std::vector<Point> gather(const Domain& u, const PointSet& s) {
    std::vector<Point> out;
    for (int i : normalize_set(s, u.size())) out.push_back(u.points[static_cast<std::size_t>(i)]);
    return out;
}
}  // namespace

HullIntersection hulls_intersect(const Domain& u, const PointSet& x, const PointSet& y) {
    PointSet xs = normalize_set(x, u.size()), ys = normalize_set(y, u.size());
    auto res = hulls_intersect(gather(u, xs), gather(u, ys));
    for (auto& c : res.x_coeffs) c.first = xs[static_cast<std::size_t>(c.first)];
    for (auto& c : res.y_coeffs) c.first = ys[static_cast<std::size_t>(c.first)];
    return res;
}

std::optional<Separation> separate(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("separate: empty input set");
    const std::size_t d = xs[0].size();
    // Variables (a_1..a_d, b, t): maximise t, then lexicographically smallest (a, b).
    const std::size_t nv = d + 2;
    Mat w;
    Vec h;
    for (const auto& x : xs) {
        Vec r(nv, Scalar(0));
        for (std::size_t j = 0; j < d; ++j) r[j] = x[j];
        r[d] = -1;
        r[d + 1] = 1;
        w.push_back(r);
        h.push_back(0);
    }
    for (const auto& y : ys) {
        Vec r(nv, Scalar(0));
        for (std::size_t j = 0; j < d; ++j) r[j] = -y[j];
        r[d] = 1;
        r[d + 1] = 1;
        w.push_back(r);
        h.push_back(0);
    }
    for (std::size_t j = 0; j <= d; ++j)
        for (int s : {1, -1}) {
            Vec r(nv, Scalar(0));
            r[j] = s;
            w.push_back(r);
            h.push_back(1);
        }
    std::vector<Vec> obj;
    Vec first(nv, Scalar(0));
    first[d + 1] = -1;
    obj.push_back(first);
    for (std::size_t j = 0; j <= d; ++j) {
        Vec e(nv, Scalar(0));
        e[j] = 1;
        obj.push_back(e);
    }
    auto res = lp::lexmin_vertex(w, h, {}, obj, Vec(nv, Scalar(0)));
    if (res.x[d + 1] <= 0) return std::nullopt;
    Vec a(res.x.begin(), res.x.begin() + static_cast<long>(d));
    return Separation{Halfspace(a, res.x[d], false), res.x[d + 1]};
}

std::optional<Separation> separate(const Domain& u, const PointSet& x, const PointSet& y) {
    return separate(gather(u, x), gather(u, y));
}

PointSet trace(const Halfspace& h, const Domain& u) {
    if (h.normal.size() != static_cast<std::size_t>(u.dim)) throw std::invalid_argument("trace: dimension mismatch");
    PointSet out;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (h.contains(u.points[i])) out.push_back(static_cast<int>(i));
    return out;
}

std::optional<Vec> convex_combination(const Point& x, const std::vector<Point>& pts) {
    if (pts.empty()) return std::nullopt;
    const std::size_t d = x.size(), n = pts.size();
    Mat a(d + 1, Vec(n));
    Vec b(d + 1);
    for (std::size_t t = 0; t < d; ++t) {
        for (std::size_t i = 0; i < n; ++i) a[t][i] = pts[i][t];
        b[t] = x[t];
    }
    for (std::size_t i = 0; i < n; ++i) a[d][i] = 1;
    b[d] = 1;
    auto res = lp::solve_standard(a, b, {});
    if (res.status != lp::Status::Optimal) return std::nullopt;
    return res.x;
}

// --- frames -------------------------------------------------------------------------------

Vec AffineFrame::lift_normal(const Vec& a) const {
    Vec out(static_cast<std::size_t>(ambient), Scalar(0));
    for (std::size_t t = 0; t < coords.size(); ++t) out[static_cast<std::size_t>(coords[t])] = a[t] * Scalar(scale);
    return out;
}

AffineFrame make_frame(const std::vector<Point>& pts) {
    if (pts.empty()) throw std::invalid_argument("make_frame: no points");
    AffineFrame f;
    f.ambient = static_cast<int>(pts[0].size());
    Mat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec r(pts[i].size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = pts[i][j] - pts[0][j];
        diffs.push_back(std::move(r));
    }
    if (!diffs.empty()) {
        auto piv = lp::rref(diffs, static_cast<std::size_t>(f.ambient));
        for (auto p : piv) f.coords.push_back(static_cast<int>(p));
    }
    f.dim = static_cast<int>(f.coords.size());
    Integer l = 1;
    for (const auto& p : pts)
        for (int c : f.coords) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p[static_cast<std::size_t>(c)].get_den_mpz_t());
    f.scale = l;
    for (const auto& p : pts) {
        IVec q;
        for (int c : f.coords) {
            const Scalar& v = p[static_cast<std::size_t>(c)];
            q.push_back(v.get_num() * (l / v.get_den()));
        }
        f.points.push_back(std::move(q));
    }
    return f;
}

namespace {

Integer det_bareiss(std::vector<IVec> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sgn_flip = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[p], m[k]);
            sgn_flip = -sgn_flip;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sgn_flip * m[n - 1][n - 1];
}

// Normal of the hyperplane through the given k points of Z^k; zero if they are affinely dependent.
IVec hyperplane_normal(const std::vector<const IVec*>& pts, std::size_t k) {
    IVec normal(k);
    if (k == 1) {
        normal[0] = 1;
        return normal;
    }
    std::vector<IVec> rows;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        IVec r(k);
        for (std::size_t j = 0; j < k; ++j) r[j] = (*pts[i])[j] - (*pts[0])[j];
        rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<IVec> minor;
        for (const auto& r : rows) {
            IVec mr;
            for (std::size_t c = 0; c < k; ++c)
                if (c != j) mr.push_back(r[c]);
            minor.push_back(std::move(mr));
        }
        Integer det = det_bareiss(std::move(minor));
        normal[j] = (j % 2 == 0) ? det : Integer(-det);
    }
    return normal;
}

Scalar pow2_inverse_at_most(const Scalar& limit) {
    // Largest 2^-e not exceeding 1/(2*limit), i.e. 2^e >= 2*limit.
    unsigned e = ceil_log2(2 * limit);
    Integer p = 1;
    p <<= e;
    return Scalar(1) / Scalar(p);
}

}  // namespace

std::vector<FrameTrace> enumerate_frame_traces(const std::vector<IVec>& pts, std::size_t cap) {
    const std::size_t n = pts.size();
    if (n == 0) throw std::invalid_argument("enumerate_frame_traces: no points");
    const std::size_t k = pts[0].size();
    std::vector<FrameTrace> out;
    if (k == 0) {
        Mask none(n), all = Mask::full(n);
        out.push_back({none, Vec{}, Scalar(-1), Scalar(1)});
        out.push_back({all, Vec{}, Scalar(1), Scalar(1)});
        return out;
    }
    Integer big = 1;
    for (const auto& p : pts)
        for (const auto& c : p)
            if (abs(c) > big) big = abs(c);
    std::unordered_map<Mask, std::size_t, MaskHash> seen;
    auto emit = [&](Mask m, Vec a, Scalar b, Scalar lb) {
        if (seen.count(m)) return;
        if (out.size() >= cap) throw CapExceeded("halfspace trace enumeration exceeds cap");
        seen.emplace(m, out.size());
        out.push_back({std::move(m), std::move(a), std::move(b), std::move(lb)});
    };
    {
        Vec a(k, Scalar(0));
        a[0] = 1;
        emit(Mask::full(n), a, Scalar(big + 1), Scalar(1));
        a[0] = -1;
        emit(Mask(n), a, Scalar(-(big + 1)), Scalar(1));
    }
    std::unordered_map<Mask, bool, MaskHash> planes;
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    if (n >= k) {
        for (;;) {
            std::vector<const IVec*> sel;
            for (auto c : comb) sel.push_back(&pts[c]);
            IVec normal = hyperplane_normal(sel, k);
            bool nonzero = std::any_of(normal.begin(), normal.end(), [](const Integer& z) { return z != 0; });
            if (nonzero) {
                Integer b0 = 0;
                for (std::size_t j = 0; j < k; ++j) b0 += normal[j] * (*sel[0])[j];
                Mask neg(n), zero(n), pos(n);
                for (std::size_t i = 0; i < n; ++i) {
                    Integer v = -b0;
                    for (std::size_t j = 0; j < k; ++j) v += normal[j] * pts[i][j];
                    int s = sgn(v);
                    (s < 0 ? neg : s > 0 ? pos : zero).set(i);
                }
                if (!planes.count(zero)) {
                    planes.emplace(zero, true);
                    auto on = zero.indices();
                    std::vector<Point> on_pts;
                    for (int i : on) {
                        Point q;
                        for (const auto& c : pts[static_cast<std::size_t>(i)]) q.push_back(Scalar(c));
                        on_pts.push_back(std::move(q));
                    }
                    AffineFrame sub = make_frame(on_pts);
                    auto subs = enumerate_frame_traces(sub.points, cap);
                    for (int orient : {1, -1}) {
                        const Mask& side = orient > 0 ? neg : pos;
                        for (const auto& st : subs) {
                            Mask m = side;
                            for (int li : st.members.indices()) m.set(static_cast<std::size_t>(on[static_cast<std::size_t>(li)]));
                            if (seen.count(m)) continue;
                            Vec a_sub(k, Scalar(0));
                            Scalar norm1 = 0;
                            for (std::size_t t = 0; t < sub.coords.size(); ++t) {
                                a_sub[static_cast<std::size_t>(sub.coords[t])] = st.a[t];
                                norm1 += abs_value(st.a[t]);
                            }
                            Scalar bound = norm1 * Scalar(big) + abs_value(st.b);
                            Scalar delta = pow2_inverse_at_most(bound);
                            Vec a(k);
                            for (std::size_t j = 0; j < k; ++j) a[j] = Scalar(orient * normal[j]) + delta * a_sub[j];
                            Scalar b = Scalar(orient * b0) + delta * st.b;
                            Scalar lb = std::min(Scalar(1, 2), Scalar(delta * st.lower_bound));
                            emit(std::move(m), std::move(a), std::move(b), std::move(lb));
                        }
                    }
                }
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++comb[i - 1];
            for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const FrameTrace& x, const FrameTrace& y) { return Mask::canonical_less(x.members, y.members); });
    return out;
}

Halfspace lift_frame_trace(const AffineFrame& frame, const FrameTrace& t, const Domain& u) {
    if (frame.dim == 0) {
        // A single point: threshold the first coordinate around it.
        Vec e(static_cast<std::size_t>(u.dim), Scalar(0));
        e[0] = 1;
        const Scalar& x0 = u.points[0][0];
        return Halfspace(e, t.members.any() ? Scalar(x0 + 1) : Scalar(x0 - 1), false);
    }
    return Halfspace(frame.lift_normal(t.a), t.b, false);
}

std::vector<TraceEntry> enumerate_halfspace_traces(const Domain& u, std::size_t cap) {
    AffineFrame frame = make_frame(u.points);
    auto traces = enumerate_frame_traces(frame.points, cap);
    std::vector<TraceEntry> out;
    out.reserve(traces.size());
    for (const auto& t : traces) out.push_back({t.members.indices(), lift_frame_trace(frame, t, u)});
    return out;
}

}  // namespace csd
