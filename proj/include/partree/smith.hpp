#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "partree/errors.hpp"

// Exact integer linear algebra: Smith normal form (dense, with unimodular
// transforms, and a sparse variant reporting rank and invariant factors only)
// plus an independent rational-rank routine used to cross-check the integer
// path. Pivot rule everywhere: nonzero entry of minimal absolute value,
// ties broken by lowest row, then lowest column.

namespace partree::smith {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

struct DenseMat {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<Int>> a;  // a[r][c]

    DenseMat() = default;
    DenseMat(int r, int c) : rows(r), cols(c), a(r, std::vector<Int>(c, 0)) {}

    static DenseMat identity(int n) {
        DenseMat m(n, n);
        for (int i = 0; i < n; ++i) m.a[i][i] = 1;
        return m;
    }

    Int& at(int r, int c) { return a[r][c]; }
    const Int& at(int r, int c) const { return a[r][c]; }

    bool operator==(const DenseMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

inline DenseMat mul(const DenseMat& x, const DenseMat& y) {
    if (x.cols != y.rows) fail("ShapeMismatch", "matrix product shapes disagree");
    DenseMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.a[i][k] == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                if (y.a[k][j] != 0) z.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return z;
}

// Fraction-free Bareiss determinant; used by tests to certify that the
// transform matrices returned by decompose() are unimodular.
inline Int determinant(DenseMat m) {
    if (m.rows != m.cols) fail("ShapeMismatch", "determinant of non-square matrix");
    const int n = m.rows;
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.a[k][k] == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r)
                if (m.a[r][k] != 0) { swap_row = r; break; }
            if (swap_row < 0) return 0;
            std::swap(m.a[k], m.a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m.a[i][j] = (m.a[i][j] * m.a[k][k] - m.a[i][k] * m.a[k][j]) / prev;
            m.a[i][k] = 0;
        }
        prev = m.a[k][k];
    }
    return sign * m.a[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Dense Smith normal form with transforms: m = u * s * v
// ---------------------------------------------------------------------------

struct SmithDecomposition {
    DenseMat u;  // rows x rows, unimodular
    DenseMat s;  // rows x cols, diagonal, d_i | d_{i+1}, d_i >= 0
    DenseMat v;  // cols x cols, unimodular
    std::vector<Int> diagonal;
    int rank = 0;
};

namespace detail {

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Pivot among entries of s with row >= t and col >= t.
inline bool find_pivot(const DenseMat& s, int t, int& pr, int& pc) {
    bool found = false;
    Int best = 0;
    for (int r = t; r < s.rows; ++r)
        for (int c = t; c < s.cols; ++c) {
            const Int& e = s.a[r][c];
            if (e == 0) continue;
            Int ae = abs_int(e);
            if (!found || ae < best) {
                found = true;
                best = ae;
                pr = r;
                pc = c;
                if (best == 1) return true;
            }
        }
    return found;
}

inline void row_axpy(DenseMat& s, DenseMat& u, int dst, int src, const Int& k) {
    // row dst += k * row src; compensate u by col src -= k * col dst
    for (int c = 0; c < s.cols; ++c) s.a[dst][c] += k * s.a[src][c];
    for (int r = 0; r < u.rows; ++r) u.a[r][src] -= k * u.a[r][dst];
}

inline void col_axpy(DenseMat& s, DenseMat& v, int dst, int src, const Int& k) {
    // col dst += k * col src; compensate v by row src -= k * row dst
    for (int r = 0; r < s.rows; ++r) s.a[r][dst] += k * s.a[r][src];
    for (int c = 0; c < v.cols; ++c) v.a[src][c] -= k * v.a[dst][c];
}

inline void row_swap(DenseMat& s, DenseMat& u, int i, int j) {
    if (i == j) return;
    std::swap(s.a[i], s.a[j]);
    for (int r = 0; r < u.rows; ++r) std::swap(u.a[r][i], u.a[r][j]);
}

inline void col_swap(DenseMat& s, DenseMat& v, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < s.rows; ++r) std::swap(s.a[r][i], s.a[r][j]);
    std::swap(v.a[i], v.a[j]);
}

inline void row_negate(DenseMat& s, DenseMat& u, int i) {
    for (int c = 0; c < s.cols; ++c) s.a[i][c] = -s.a[i][c];
    for (int r = 0; r < u.rows; ++r) u.a[r][i] = -u.a[r][i];
}

}  // namespace detail

inline SmithDecomposition decompose(const DenseMat& m) {
    using namespace detail;
    SmithDecomposition out;
    out.u = DenseMat::identity(m.rows);
    out.v = DenseMat::identity(m.cols);
    out.s = m;
    DenseMat& s = out.s;
    DenseMat& u = out.u;
    DenseMat& v = out.v;

    const int bound = std::min(m.rows, m.cols);
    int t = 0;
    while (t < bound) {
        int pr = -1, pc = -1;
        if (!find_pivot(s, t, pr, pc)) break;
        row_swap(s, u, t, pr);
        col_swap(s, v, t, pc);

        // Reduce until the pivot divides its whole row and column, then clear.
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int r = t + 1; r < s.rows; ++r) {
                if (s.a[r][t] == 0) continue;
                Int q = s.a[r][t] / s.a[t][t];
                row_axpy(s, u, r, t, -q);
                if (s.a[r][t] != 0) {
                    row_swap(s, u, t, r);  // remainder is strictly smaller
                    clean = false;
                }
            }
            if (!clean) continue;
            for (int c = t + 1; c < s.cols; ++c) {
                if (s.a[t][c] == 0) continue;
                Int q = s.a[t][c] / s.a[t][t];
                col_axpy(s, v, c, t, -q);
                if (s.a[t][c] != 0) {
                    col_swap(s, v, t, c);
                    clean = false;
                }
            }
            if (!clean) continue;
            // Divisibility over the remaining submatrix: fold a bad row in and
            // keep reducing with the same corner.
            for (int r = t + 1; r < s.rows && clean; ++r)
                for (int c = t + 1; c < s.cols && clean; ++c)
                    if (s.a[r][c] % s.a[t][t] != 0) {
                        row_axpy(s, u, t, r, Int(1));
                        clean = false;
                    }
        }
        if (s.a[t][t] < 0) row_negate(s, u, t);
        ++t;
    }
    out.rank = t;
    out.diagonal.reserve(t);
    for (int i = 0; i < t; ++i) out.diagonal.push_back(s.a[i][i]);
    return out;
}

// ---------------------------------------------------------------------------
// Sparse matrices (row-major maps) and sparse invariant factors
// ---------------------------------------------------------------------------

struct SparseMat {
    int rows = 0;
    int cols = 0;
    std::vector<std::map<int, Int>> row;  // row[r]: col -> nonzero value

    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c), row(r) {}

    void add(int r, int c, const Int& v) {
        if (v == 0) return;
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            fail("ShapeMismatch", "sparse entry out of range");
        auto it = row[r].find(c);
        if (it == row[r].end()) {
            row[r].emplace(c, v);
        } else {
            it->second += v;
            if (it->second == 0) row[r].erase(it);
        }
    }

    Int get(int r, int c) const {
        auto it = row[r].find(c);
        return it == row[r].end() ? Int(0) : it->second;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& m : row) n += m.size();
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    DenseMat to_dense() const {
        DenseMat d(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (const auto& [c, val] : row[r]) d.a[r][c] = val;
        return d;
    }

    static SparseMat from_dense(const DenseMat& d) {
        SparseMat s(d.rows, d.cols);
        for (int r = 0; r < d.rows; ++r)
            for (int c = 0; c < d.cols; ++c)
                if (d.a[r][c] != 0) s.row[r].emplace(c, d.a[r][c]);
        return s;
    }
};

inline SparseMat mul(const SparseMat& x, const SparseMat& y) {
    if (x.cols != y.rows) fail("ShapeMismatch", "matrix product shapes disagree");
    SparseMat z(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
        for (const auto& [k, xv] : x.row[r])
            for (const auto& [c, yv] : y.row[k]) z.add(r, c, xv * yv);
    return z;
}

struct SnfSummary {
    int rank = 0;
    std::vector<Int> factors;  // positive, d_i | d_{i+1}
};

namespace detail {

// Sort a positive diagonal into an invariant-factor chain by repeated
// gcd/lcm exchanges (valid for diagonal matrices).
inline void divisibility_fixup(std::vector<Int>& d) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                if (d[j] % d[i] == 0) continue;
                Int g = boost::multiprecision::gcd(d[i], d[j]);
                Int l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
                changed = true;
            }
    }
}

}  // namespace detail

// Rank and invariant factors of a sparse integer matrix. Transform matrices
// are not tracked; rows and columns are discarded as pivots settle.
inline SnfSummary invariant_factors(const SparseMat& m) {
    using detail::abs_int;
    const int nr = m.rows;
    std::vector<std::map<int, Int>> rows = m.row;
    std::vector<std::vector<int>> col_rows(m.cols);  // col -> rows touching it (lazily compacted)
    for (int r = 0; r < nr; ++r)
        for (const auto& [c, v] : rows[r]) col_rows[c].push_back(r);
    std::vector<bool> row_alive(nr, true), col_alive(m.cols, true);

    auto col_entries = [&](int c) {
        // compact stale indices lazily
        std::vector<int> live;
        live.reserve(col_rows[c].size());
        for (int r : col_rows[c])
            if (row_alive[r] && rows[r].count(c)) live.push_back(r);
        std::sort(live.begin(), live.end());
        live.erase(std::unique(live.begin(), live.end()), live.end());
        col_rows[c] = live;
        return live;
    };

    auto row_axpy = [&](int dst, int src, const Int& k) {
        for (const auto& [c, v] : rows[src]) {
            auto it = rows[dst].find(c);
            if (it == rows[dst].end()) {
                rows[dst].emplace(c, k * v);
                col_rows[c].push_back(dst);
            } else {
                it->second += k * v;
                if (it->second == 0) rows[dst].erase(it);
            }
        }
    };

    SnfSummary out;
    std::vector<Int> diag;

    for (;;) {
        // Pivot scan: minimal |value|, ties lowest row then column. Early exit
        // on the first unit entry met in row-major order.
        int pr = -1, pc = -1;
        Int best = 0;
        bool found = false;
        for (int r = 0; r < nr && !(found && best == 1); ++r) {
            if (!row_alive[r]) continue;
            for (const auto& [c, v] : rows[r]) {
                if (!col_alive[c]) continue;
                Int av = abs_int(v);
                if (!found || av < best) {
                    found = true;
                    best = av;
                    pr = r;
                    pc = c;
                    if (best == 1) break;
                }
            }
        }
        if (!found) break;

        const Int a = rows[pr][pc];
        // Column phase: reduce every other entry in the pivot column.
        bool remainder = false;
        for (int r : col_entries(pc)) {
            if (r == pr) continue;
            Int b = rows[r][pc];
            Int q = b / a;  // truncated; remainder |b - qa| < |a|
            if (q != 0) row_axpy(r, pr, -q);
            if (rows[r].count(pc)) remainder = true;
        }
        if (remainder) continue;  // smaller entries exist; re-select pivot

        // Row phase: the pivot column is clear, so column operations touch
        // only the pivot row; reduce its entries in place.
        bool row_remainder = false;
        for (auto it = rows[pr].begin(); it != rows[pr].end();) {
            if (it->first == pc || !col_alive[it->first]) {
                ++it;
                continue;
            }
            Int rem = it->second % a;  // truncated division remainder
            if (rem == 0) {
                it = rows[pr].erase(it);
            } else {
                it->second = rem;
                row_remainder = true;
                ++it;
            }
        }
        if (row_remainder) continue;

        diag.push_back(abs_int(a));
        row_alive[pr] = false;
        col_alive[pc] = false;
        rows[pr].clear();
    }

    detail::divisibility_fixup(diag);
    std::sort(diag.begin(), diag.end());
    out.rank = static_cast<int>(diag.size());
    out.factors = std::move(diag);
    return out;
}

// Rank over the rationals by plain Gaussian elimination with exact
// arithmetic. Deliberately shares no code with the integer elimination.
inline int rank_over_rationals(const SparseMat& m) {
    std::vector<std::map<int, Rat>> rows(m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (const auto& [c, v] : m.row[r]) rows[r].emplace(c, Rat(v));

    std::vector<bool> used(m.rows, false);
    int rank = 0;
    for (int c = 0; c < m.cols; ++c) {
        int pivot = -1;
        for (int r = 0; r < m.rows; ++r) {
            if (used[r]) continue;
            auto it = rows[r].find(c);
            if (it != rows[r].end() && it->second != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        used[pivot] = true;
        ++rank;
        const Rat pv = rows[pivot][c];
        for (int r = 0; r < m.rows; ++r) {
            if (r == pivot || used[r]) continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end() || it->second == 0) continue;
            Rat f = it->second / pv;
            for (const auto& [cc, vv] : rows[pivot]) {
                auto jt = rows[r].find(cc);
                if (jt == rows[r].end()) {
                    rows[r].emplace(cc, -f * vv);
                } else {
                    jt->second -= f * vv;
                    if (jt->second == 0) rows[r].erase(jt);
                }
            }
        }
    }
    return rank;
}

}  // namespace partree::smith
