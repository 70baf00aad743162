#include "csd/lp.hpp"

#include <algorithm>

namespace csd::lp {

std::vector<std::size_t> rref(Mat& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[row]);
        Scalar inv = 1 / a[row][c];
        for (std::size_t j = c; j < a[row].size(); ++j) a[row][j] *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) continue;
            Scalar f = a[r][c];
            for (std::size_t j = c; j < a[r].size(); ++j)
                if (a[row][j] != 0) a[r][j] -= f * a[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t rank(Mat a) {
    if (a.empty()) return 0;
    return rref(a, a[0].size()).size();
}

std::vector<Vec> null_space(const Mat& a, std::size_t cols) {
    Mat m = a;
    auto pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(cols, Scalar(0));
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve_square(Mat a, Vec b) {
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    auto pivots = rref(a, n);
    if (pivots.size() < n) return std::nullopt;
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

std::optional<Mat> inverse(const Mat& a) {
    std::size_t n = a.size();
    Mat m = a;
    for (std::size_t i = 0; i < n; ++i) {
        m[i].resize(2 * n, Scalar(0));
        m[i][n + i] = 1;
    }
    auto pivots = rref(m, n);
    if (pivots.size() < n) return std::nullopt;
    Mat inv(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

namespace {

struct Tableau {
    Mat t;                  // rows x (cols + 1); last column is the right-hand side
    std::vector<std::size_t> basis;
    std::size_t cols = 0;

    void pivot(std::size_t r, std::size_t c) {
        Scalar inv = 1 / t[r][c];
        for (auto& v : t[r])
            if (v != 0) v *= inv;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0) continue;
            Scalar f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    Vec reduced_costs(const Vec& c) const {
        Vec r(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            Scalar v = j < c.size() ? c[j] : Scalar(0);
            for (std::size_t i = 0; i < t.size(); ++i)
                if (t[i][j] != 0 && basis[i] < c.size() && c[basis[i]] != 0) v -= c[basis[i]] * t[i][j];
            r[j] = v;
        }
        return r;
    }

    // Bland's rule; returns false if unbounded.
    bool optimise(const Vec& c, const std::vector<bool>& allowed) {
        for (;;) {
            Vec r = reduced_costs(c);
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (allowed[j] && r[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;
            std::size_t leave = t.size();
            Scalar best;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][enter] <= 0) continue;
                Scalar ratio = t[i][cols] / t[i][enter];
                if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == t.size()) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

StdResult solve_standard(const Mat& a, const Vec& b, const std::vector<Vec>& objectives) {
    std::size_t m = a.size();
    std::size_t n = m ? a[0].size() : (objectives.empty() ? 0 : objectives[0].size());
    Tableau tab;
    tab.cols = n + m;
    tab.t.assign(m, Vec(n + m + 1, Scalar(0)));
    tab.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        bool neg = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = neg ? Scalar(-a[i][j]) : a[i][j];
        tab.t[i][n + i] = 1;
        tab.t[i][n + m] = neg ? Scalar(-b[i]) : b[i];
        tab.basis[i] = n + i;
    }
    Vec phase1(n + m, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
    std::vector<bool> allowed(n + m, true);
    tab.optimise(phase1, allowed);
    Scalar infeas = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= n) infeas += tab.t[i][n + m];
    StdResult res;
    if (infeas != 0) {
        res.status = Status::Infeasible;
        return res;
    }
    // Drive zero-valued artificials out of the basis; rows that cannot be pivoted are redundant.
    for (std::size_t i = 0; i < tab.t.size();) {
        if (tab.basis[i] < n) {
            ++i;
            continue;
        }
        std::size_t c = n;
        for (std::size_t j = 0; j < n; ++j)
            if (tab.t[i][j] != 0) {
                c = j;
                break;
            }
        if (c == n) {
            tab.t.erase(tab.t.begin() + static_cast<long>(i));
            tab.basis.erase(tab.basis.begin() + static_cast<long>(i));
            continue;
        }
        tab.pivot(i, c);
        ++i;
    }
    for (auto& row : tab.t) {
        Scalar rhs = row[n + m];
        row.resize(n);
        row.push_back(rhs);
    }
    tab.cols = n;
    std::vector<bool> free_col(n, true);
    for (const auto& c : objectives) {
        if (!tab.optimise(c, free_col)) {
            res.status = Status::Unbounded;
            return res;
        }
        Vec r = tab.reduced_costs(c);
        for (std::size_t j = 0; j < n; ++j)
            if (r[j] > 0) free_col[j] = false;
    }
    res.status = Status::Optimal;
    res.x.assign(n, Scalar(0));
    for (std::size_t i = 0; i < tab.t.size(); ++i) res.x[tab.basis[i]] = tab.t[i][n];
    return res;
}

namespace {

Scalar row_dot(const Vec& row, const Vec& x) {
    Scalar s = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) s += row[j] * x[j];
    return s;
}

int lex_sign(const Vec& v) {
    for (const auto& s : v) {
        int g = sgn(s);
        if (g) return g;
    }
    return 0;
}

bool independent_of(const Mat& rows, const Vec& r) {
    Mat m = rows;
    m.push_back(r);
    return rank(m) == rows.size() + 1;
}

}  // namespace

VertexResult lexmin_vertex(const Mat& w, const Vec& h, const std::vector<int>& eq,
                           const std::vector<Vec>& objectives, Vec x) {
    const std::size_t dim = x.size();
    const std::size_t m = w.size();
    std::vector<bool> is_eq(m, false);
    for (int e : eq) is_eq[static_cast<std::size_t>(e)] = true;

    std::vector<int> basis;
    Mat brows;
    auto add_row = [&](int id) {
        basis.push_back(id);
        brows.push_back(w[static_cast<std::size_t>(id)]);
    };
    auto absorb_tight = [&](bool only_eq) {
        for (std::size_t l = 0; l < m && basis.size() < dim; ++l) {
            if (only_eq && !is_eq[l]) continue;
            if (std::find(basis.begin(), basis.end(), static_cast<int>(l)) != basis.end()) continue;
            if (row_dot(w[l], x) != h[l]) continue;
            if (independent_of(brows, w[l])) add_row(static_cast<int>(l));
        }
    };
    absorb_tight(true);
    absorb_tight(false);

    // Walk to a vertex: move inside the current tight subspace until a new row becomes tight.
    while (basis.size() < dim) {
        auto ns = null_space(brows, dim);
        Vec d = ns.front();
        Vec obj(objectives.size());
        for (std::size_t r = 0; r < objectives.size(); ++r) obj[r] = dot(objectives[r], d);
        int s = lex_sign(obj);
        if (s > 0)
            for (auto& v : d) v = -v;
        bool moved = false;
        for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
            int hit = -1;
            Scalar best;
            for (std::size_t l = 0; l < m; ++l) {
                Scalar wd = row_dot(w[l], d);
                if (wd <= 0) continue;
                Scalar t = (h[l] - row_dot(w[l], x)) / wd;
                if (hit < 0 || t < best) {
                    hit = static_cast<int>(l);
                    best = t;
                }
            }
            if (hit >= 0) {
                for (std::size_t j = 0; j < dim; ++j) x[j] += best * d[j];
                add_row(hit);
                absorb_tight(false);
                moved = true;
            } else if (s == 0) {
                for (auto& v : d) v = -v;
            } else {
                throw UnboundedError("lexmin_vertex: objective unbounded");
            }
        }
        if (!moved) throw UnboundedError("lexmin_vertex: region has a line");
    }

    for (;;) {
        auto inv = inverse(brows);
        if (!inv) throw std::logic_error("lexmin_vertex: singular basis");
        const Mat& mi = *inv;
        // Multiplier of basis row i for objective r: sum_j mi[j][i] * c_r[j].
        int leave_pos = -1;
        for (std::size_t i = 0; i < dim; ++i) {
            if (is_eq[static_cast<std::size_t>(basis[i])]) continue;
            Vec mu(objectives.size());
            for (std::size_t r = 0; r < objectives.size(); ++r) {
                Scalar v = 0;
                for (std::size_t j = 0; j < dim; ++j)
                    if (objectives[r][j] != 0 && mi[j][i] != 0) v += mi[j][i] * objectives[r][j];
                mu[r] = v;
            }
            if (lex_sign(mu) > 0 && (leave_pos < 0 || basis[i] < basis[static_cast<std::size_t>(leave_pos)]))
                leave_pos = static_cast<int>(i);
        }
        if (leave_pos < 0) return {x, basis};
        Vec d(dim);
        for (std::size_t j = 0; j < dim; ++j) d[j] = -mi[j][static_cast<std::size_t>(leave_pos)];
        int enter = -1;
        Scalar best;
        for (std::size_t l = 0; l < m; ++l) {
            if (std::find(basis.begin(), basis.end(), static_cast<int>(l)) != basis.end()) continue;
            Scalar wd = row_dot(w[l], d);
            if (wd <= 0) continue;
            Scalar t = (h[l] - row_dot(w[l], x)) / wd;
            if (enter < 0 || t < best) {
                enter = static_cast<int>(l);
                best = t;
            }
        }
        if (enter < 0) throw UnboundedError("lexmin_vertex: objective unbounded");
        for (std::size_t j = 0; j < dim; ++j) x[j] += best * d[j];
        basis[static_cast<std::size_t>(leave_pos)] = enter;
        brows[static_cast<std::size_t>(leave_pos)] = w[static_cast<std::size_t>(enter)];
    }
}

VertexResult lexmin_point(const Mat& w, const Vec& h, const std::vector<int>& eq, Vec x0) {
    std::size_t dim = x0.size();
    std::vector<Vec> obj(dim, Vec(dim, Scalar(0)));
    for (std::size_t i = 0; i < dim; ++i) obj[i][i] = 1;
    return lexmin_vertex(w, h, eq, obj, std::move(x0));
}

}  // namespace csd::lp
