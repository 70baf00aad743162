#include "csd/caratheodory.hpp"

#include "csd/lp.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace csd {

bool Simplex::contains(const Point& x) const { return convex_combination(x, vertices).has_value(); }

Combination caratheodory_reduce(const std::vector<Point>& pts, const Vec& coeffs) {
    if (pts.empty()) throw std::invalid_argument("caratheodory_reduce: empty set");
    const std::size_t d = pts[0].size();
    std::vector<int> sup;
    Vec c;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (coeffs[i] > 0) {
            sup.push_back(static_cast<int>(i));
            c.push_back(coeffs[i]);
        }
    while (sup.size() > d + 1) {
        // Affine dependence among the support: sum a_i p_i = 0, sum a_i = 0.
        Mat m(d + 1, Vec(sup.size()));
        for (std::size_t i = 0; i < sup.size(); ++i) {
            for (std::size_t t = 0; t < d; ++t) m[t][i] = pts[static_cast<std::size_t>(sup[i])][t];
            m[d][i] = 1;
        }
        Vec a = lp::null_space(m, sup.size()).front();
        Scalar step;
        bool have = false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > 0 && (!have || c[i] / a[i] < step)) {
                step = c[i] / a[i];
                have = true;
            }
        std::vector<int> ns;
        Vec nc;
        for (std::size_t i = 0; i < sup.size(); ++i) {
            Scalar v = c[i] - step * a[i];
            if (v != 0) {
                ns.push_back(sup[i]);
                nc.push_back(v);
            }
        }
        sup = std::move(ns);
        c = std::move(nc);
    }
    return {sup, c};
}

Combination caratheodory_reduce(const Point& x, const Domain& u, const PointSet& y) {
    PointSet ys = normalize_set(y, u.size());
    if (ys.empty()) throw std::invalid_argument("caratheodory_reduce: empty set");
    std::vector<Point> pts;
    for (int i : ys) pts.push_back(u.points[static_cast<std::size_t>(i)]);
    auto coeffs = convex_combination(x, pts);
    if (!coeffs) throw std::invalid_argument("caratheodory_reduce: point outside the hull");
    auto r = caratheodory_reduce(pts, *coeffs);
    for (auto& i : r.support) i = ys[static_cast<std::size_t>(i)];
    return r;
}

SymmetricSupport symmetric_caratheodory(const std::vector<Point>& xs, const std::vector<Point>& ys, Vec lx,
                                        Vec ly) {
    const std::size_t d = xs.at(0).size();
    std::vector<int> ix, iy;
    Vec cx, cy;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (lx[i] > 0) {
            ix.push_back(static_cast<int>(i));
            cx.push_back(lx[i]);
        }
    for (std::size_t j = 0; j < ys.size(); ++j)
        if (ly[j] > 0) {
            iy.push_back(static_cast<int>(j));
            cy.push_back(ly[j]);
        }
    while (ix.size() + iy.size() > d + 2) {
        // sum a_i x_i - sum b_j y_j = 0, sum a = 0, sum b = 0 has a nonzero solution.
        const std::size_t nx = ix.size(), ny = iy.size();
        Mat m(d + 2, Vec(nx + ny, Scalar(0)));
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t t = 0; t < d; ++t) m[t][i] = xs[static_cast<std::size_t>(ix[i])][t];
            m[d][i] = 1;
        }
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t t = 0; t < d; ++t) m[t][nx + j] = -ys[static_cast<std::size_t>(iy[j])][t];
            m[d + 1][nx + j] = 1;
        }
        Vec dir = lp::null_space(m, nx + ny).front();
        Vec coef = cx;
        coef.insert(coef.end(), cy.begin(), cy.end());
        // For each orientation, the largest step keeping coefficients nonnegative and the
        // positions it zeroes; prefer the orientation that zeroes the smallest position.
        std::size_t best_first = coef.size();
        Scalar best_step;
        int best_sign = 0;
        for (int s : {1, -1}) {
            Scalar step;
            bool have = false;
            for (std::size_t i = 0; i < coef.size(); ++i) {
                Scalar di = s * dir[i];
                if (di < 0 && (!have || coef[i] / -di < step)) {
                    step = coef[i] / -di;
                    have = true;
                }
            }
            if (!have) continue;
            std::size_t first = coef.size();
            for (std::size_t i = 0; i < coef.size(); ++i)
                if (coef[i] + step * s * dir[i] == 0) {
                    first = i;
                    break;
                }
            if (first < best_first) {
                best_first = first;
                best_step = step;
                best_sign = s;
            }
        }
        std::vector<int> nix, niy;
        Vec ncx, ncy;
        for (std::size_t i = 0; i < coef.size(); ++i) {
            Scalar v = coef[i] + best_step * best_sign * dir[i];
            if (v == 0) continue;
            if (i < nx) {
                nix.push_back(ix[i]);
                ncx.push_back(v);
            } else {
                niy.push_back(iy[i - nx]);
                ncy.push_back(v);
            }
        }
        ix = std::move(nix);
        iy = std::move(niy);
        cx = std::move(ncx);
        cy = std::move(ncy);
    }
    SymmetricSupport out;
    out.s1 = ix;
    out.s2 = iy;
    out.c1 = cx;
    out.c2 = cy;
    out.witness.assign(d, Scalar(0));
    for (std::size_t i = 0; i < ix.size(); ++i)
        for (std::size_t t = 0; t < d; ++t) out.witness[t] += cx[i] * xs[static_cast<std::size_t>(ix[i])][t];
    return out;
}

SymmetricSupport symmetric_caratheodory(const Domain& u, const PointSet& x, const PointSet& y) {
    PointSet xs = normalize_set(x, u.size()), ys = normalize_set(y, u.size());
    auto hit = hulls_intersect(u, xs, ys);
    if (!hit.intersecting) throw std::invalid_argument("symmetric_caratheodory: hulls are disjoint");
    std::vector<Point> px, py;
    for (int i : xs) px.push_back(u.points[static_cast<std::size_t>(i)]);
    for (int j : ys) py.push_back(u.points[static_cast<std::size_t>(j)]);
    Vec lx(xs.size(), Scalar(0)), ly(ys.size(), Scalar(0));
    for (auto& [i, c] : hit.x_coeffs) lx[static_cast<std::size_t>(std::find(xs.begin(), xs.end(), i) - xs.begin())] = c;
    for (auto& [j, c] : hit.y_coeffs) ly[static_cast<std::size_t>(std::find(ys.begin(), ys.end(), j) - ys.begin())] = c;
    auto r = symmetric_caratheodory(px, py, lx, ly);
    for (auto& i : r.s1) i = xs[static_cast<std::size_t>(i)];
    for (auto& j : r.s2) j = ys[static_cast<std::size_t>(j)];
    return r;
}

// --- vertices and bottom-vertex triangulation ----------------------------------------------

std::vector<Point> enumerate_vertices(const Polytope& q) {
    const std::size_t d = static_cast<std::size_t>(q.dim), m = q.size();
    std::vector<Point> out;
    if (m < d) return out;
    std::set<Point> seen;
    std::vector<std::size_t> comb(d);
    std::iota(comb.begin(), comb.end(), 0);
    for (;;) {
        Mat a;
        Vec b;
        for (auto c : comb) {
            a.push_back(q.rows[c].normal);
            b.push_back(q.rows[c].bound);
        }
        auto x = lp::solve_square(a, b);
        if (x && q.contains(*x) && seen.insert(*x).second) out.push_back(*x);
        std::size_t i = d;
        while (i > 0 && comb[i - 1] == m - d + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < d; ++j) comb[j] = comb[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

int affine_hull_dim(const std::vector<Point>& pts) {
    if (pts.empty()) return -1;
    Mat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec r(pts[i].size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = pts[i][j] - pts[0][j];
        diffs.push_back(r);
    }
    return static_cast<int>(lp::rank(diffs));
}

namespace {

void require_bounded(const Polytope& q, const Point& inside) {
    Mat w = q.normals();
    Vec h = q.bounds();
    for (int j = 0; j < q.dim; ++j)
        for (int s : {1, -1}) {
            Vec c(static_cast<std::size_t>(q.dim), Scalar(0));
            c[static_cast<std::size_t>(j)] = s;
            lp::lexmin_vertex(w, h, {}, {c}, inside);  // throws if unbounded
        }
}

Point feasible_point(const Polytope& q) {
    auto f = lp_feasible(q);
    if (!f.feasible) throw std::invalid_argument("polytope is empty");
    return f.witness;
}

BvtEngine engine_for(const Polytope& q) {
    Point inside = feasible_point(q);
    try {
        require_bounded(q, inside);
    } catch (const lp::UnboundedError&) {
        throw std::invalid_argument("polytope is unbounded");
    }
    auto verts = enumerate_vertices(q);
    std::vector<int> eq;
    for (std::size_t i = 0; i < q.size(); ++i) {
        bool all = true;
        for (const auto& v : verts)
            if (dot(q.rows[i].normal, v) != q.rows[i].bound) {
                all = false;
                break;
            }
        if (all) eq.push_back(static_cast<int>(i));
    }
    std::vector<int> ids;
    for (const auto& r : q.rows) ids.push_back(r.id);
    return BvtEngine(q.normals(), q.bounds(), ids, affine_hull_dim(verts), eq, inside);
}

}  // namespace

Point bottom_vertex(const Polytope& q) {
    Point inside = feasible_point(q);
    try {
        require_bounded(q, inside);
        return lp::lexmin_point(q.normals(), q.bounds(), {}, inside).x;
    } catch (const lp::UnboundedError&) {
        throw std::invalid_argument("polytope is unbounded");
    }
}

BvtSequence bvt_encode(const Polytope& q, const Point& a) {
    if (!q.contains(a)) throw std::invalid_argument("bvt_encode: point outside the polytope");
    BvtEngine eng = engine_for(q);
    auto enc = eng.encode(a);
    BvtSequence s;
    for (int p : enc.seq) s.push_back(q.rows[static_cast<std::size_t>(p)].id);
    return s;
}

std::vector<Point> bvt_decode(const Polytope& q, const BvtSequence& s) {
    BvtEngine eng = engine_for(q);
    std::vector<int> pos;
    for (int id : s) {
        int p = q.position_of(id);
        if (p < 0) throw std::invalid_argument("bvt_decode: unknown inequality id");
        pos.push_back(p);
    }
    return eng.decode(pos);
}

SimplexCover cover_by_simplices(const Polytope& q) {
    BvtEngine eng = engine_for(q);  // validates non-emptiness and boundedness
    auto verts = enumerate_vertices(q);
    const std::size_t m = q.size();
    auto tight = [&](const Point& v, std::size_t r) { return dot(q.rows[r].normal, v) == q.rows[r].bound; };
    SimplexCover out;
    std::vector<Point> chain;
    BvtSequence seq;
    auto rec = [&](auto&& self, const std::vector<Point>& face, int fdim) -> void {
        Point x = *std::min_element(face.begin(), face.end());
        chain.push_back(x);
        if (fdim == 0) {
            out.simplices.push_back({chain});
            out.sequences.push_back(seq);
        } else {
            // Facets of the face not containing its pivot; duplicate rows collapse to the smallest id.
            std::vector<std::pair<int, std::size_t>> by_id;
            for (std::size_t r = 0; r < m; ++r) by_id.emplace_back(q.rows[r].id, r);
            std::sort(by_id.begin(), by_id.end());
            std::set<std::vector<Point>> done;
            for (auto [id, r] : by_id) {
                if (tight(x, r)) continue;
                std::vector<Point> sub;
                for (const auto& v : face)
                    if (tight(v, r)) sub.push_back(v);
                if (sub.empty() || affine_hull_dim(sub) != fdim - 1) continue;
                if (!done.insert(sub).second) continue;
                seq.push_back(id);
                self(self, sub, fdim - 1);
                seq.pop_back();
            }
        }
        chain.pop_back();
    };
    rec(rec, verts, eng.dim());
    return out;
}

BvtEngine::BvtEngine(Mat w, Vec h, std::vector<int> ids, int dim, std::vector<int> implicit_eq, Point inside)
    : w_(std::move(w)), h_(std::move(h)), ids_(std::move(ids)), dim_(dim), base_eq_(std::move(implicit_eq)),
      inside_(std::move(inside)) {
    std::sort(base_eq_.begin(), base_eq_.end());
}

const Point& BvtEngine::pivot(const std::vector<int>& eq_sorted, const Point& start) {
    auto it = pivots_.find(eq_sorted);
    if (it != pivots_.end()) return it->second;
    auto res = lp::lexmin_point(w_, h_, eq_sorted, start);
    return pivots_.emplace(eq_sorted, std::move(res.x)).first->second;
}

bool BvtEngine::is_facet(const std::vector<int>& eq, int cur_dim, int j, const Point& p) {
    const std::size_t m = w_.size();
    std::vector<int> implicit = eq;
    implicit.push_back(j);
    std::sort(implicit.begin(), implicit.end());
    std::vector<int> others;
    for (std::size_t l = 0; l < m; ++l) {
        int li = static_cast<int>(l);
        if (std::binary_search(implicit.begin(), implicit.end(), li)) continue;
        if (dot(w_[l], p) == h_[l]) others.push_back(li);
    }
    for (int l : others) {
        auto res = lp::lexmin_vertex(w_, h_, implicit, {w_[static_cast<std::size_t>(l)]}, p);
        if (dot(w_[static_cast<std::size_t>(l)], res.x) == h_[static_cast<std::size_t>(l)]) {
            implicit.push_back(l);
            std::sort(implicit.begin(), implicit.end());
        }
    }
    Mat rows;
    for (int l : implicit) rows.push_back(w_[static_cast<std::size_t>(l)]);
    int face_dim = static_cast<int>(w_.empty() ? 0 : w_[0].size()) - static_cast<int>(lp::rank(rows));
    return face_dim == cur_dim - 1;
}

BvtEngine::Encoding BvtEngine::encode(const Point& a) {
    const std::size_t m = w_.size();
    std::vector<int> eq = base_eq_;
    Encoding enc;
    Point x = pivot(eq, a);
    enc.vertices.push_back(x);
    Point cur = a;
    auto by_id = [&](std::vector<int>& v) {
        std::sort(v.begin(), v.end(), [&](int p, int q) { return ids_[static_cast<std::size_t>(p)] < ids_[static_cast<std::size_t>(q)]; });
    };
    for (int cur_dim = dim_; cur_dim > 0; --cur_dim) {
        std::vector<int> cands;
        Point next;
        if (cur == x) {
            for (std::size_t l = 0; l < m; ++l)
                if (!std::binary_search(eq.begin(), eq.end(), static_cast<int>(l)) && dot(w_[l], cur) == h_[l])
                    cands.push_back(static_cast<int>(l));
            next = cur;
        } else {
            Vec dir(cur.size());
            for (std::size_t t = 0; t < dir.size(); ++t) dir[t] = cur[t] - x[t];
            Scalar best;
            for (std::size_t l = 0; l < m; ++l) {
                if (std::binary_search(eq.begin(), eq.end(), static_cast<int>(l))) continue;
                Scalar wd = dot(w_[l], dir);
                if (wd <= 0) continue;
                Scalar t = (h_[l] - dot(w_[l], x)) / wd;
                if (cands.empty() || t < best) {
                    cands.assign(1, static_cast<int>(l));
                    best = t;
                } else if (t == best) {
                    cands.push_back(static_cast<int>(l));
                }
            }
            if (cands.empty()) throw std::logic_error("bvt: ray does not leave the polytope");
            next.resize(cur.size());
            for (std::size_t t = 0; t < dir.size(); ++t) next[t] = x[t] + best * dir[t];
        }
        by_id(cands);
        // Fast path: a single row tight at the exit point outside the current equalities is a facet.
        std::size_t tight_outside = 0;
        for (std::size_t l = 0; l < m; ++l)
            if (!std::binary_search(eq.begin(), eq.end(), static_cast<int>(l)) && dot(w_[l], next) == h_[l])
                ++tight_outside;
        int chosen = -1;
        if (tight_outside == 1 && cands.size() == 1) {
            chosen = cands[0];
        } else {
            for (int j : cands)
                if (is_facet(eq, cur_dim, j, next)) {
                    chosen = j;
                    break;
                }
        }
        if (chosen < 0) throw std::logic_error("bvt: no facet at the exit point");
        enc.seq.push_back(chosen);
        eq.push_back(chosen);
        std::sort(eq.begin(), eq.end());
        x = pivot(eq, next);
        enc.vertices.push_back(x);
        cur = next;
    }
    return enc;
}

std::vector<Point> BvtEngine::decode(const std::vector<int>& seq) {
    std::vector<int> eq = base_eq_;
    std::vector<Point> out;
    Point x = pivot(eq, inside_);
    out.push_back(x);
    for (int j : seq) {
        if (j < 0 || static_cast<std::size_t>(j) >= w_.size()) throw std::invalid_argument("bvt_decode: bad row");
        if (std::binary_search(eq.begin(), eq.end(), j)) throw std::invalid_argument("bvt_decode: row already tight");
        std::vector<int> next_eq = eq;
        next_eq.push_back(j);
        std::sort(next_eq.begin(), next_eq.end());
        auto it = pivots_.find(next_eq);
        if (it == pivots_.end()) {
            // The tightened face is nonempty iff row j attains its bound on the current face.
            Vec c = w_[static_cast<std::size_t>(j)];
            for (auto& v : c) v = -v;
            auto res = lp::lexmin_vertex(w_, h_, eq, {c}, x);
            if (dot(w_[static_cast<std::size_t>(j)], res.x) != h_[static_cast<std::size_t>(j)])
                throw std::invalid_argument("bvt_decode: tightening yields an empty face");
            x = pivot(next_eq, res.x);
        } else {
            x = it->second;
        }
        out.push_back(x);
        eq = std::move(next_eq);
    }
    return out;
}

}  // namespace csd
