#ifndef TENSORCERT_LINALG_HPP
#define TENSORCERT_LINALG_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tensorcert/field.hpp"
#include "tensorcert/subsets.hpp"

namespace tensorcert {

template <class F>
using Vec = std::vector<typename F::Elem>;

/// Dense row-major matrix over an exact field.
template <class F>
struct Matrix {
    using Elem = typename F::Elem;

    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, Elem fill) : rows(r), cols(c), a(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<Elem> entries) : rows(r), cols(c), a(std::move(entries)) {
        if (a.size() != rows * cols) throw std::invalid_argument("Matrix: entry count does not match rows*cols");
    }

    Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Ordered multiset of vectors sharing one ambient dimension.
template <class F>
struct VectorList {
    std::size_t dim = 0;
    std::vector<Vec<F>> vecs;

    VectorList() = default;
    VectorList(std::size_t d, std::vector<Vec<F>> v) : dim(d), vecs(std::move(v)) {
        for (const auto& x : vecs)
            if (x.size() != dim) throw std::invalid_argument("VectorList: vector length does not match dim");
    }
    std::size_t size() const { return vecs.size(); }
};

template <class F>
Matrix<F> zero_matrix(const F& f, std::size_t r, std::size_t c) {
    return Matrix<F>(r, c, f.zero());
}

template <class F>
Matrix<F> identity_matrix(const F& f, std::size_t n) {
    Matrix<F> m = zero_matrix(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
}

template <class F>
Matrix<F> transpose(const F&, const Matrix<F>& m) {
    Matrix<F> t;
    t.rows = m.cols;
    t.cols = m.rows;
    t.a.resize(m.a.size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t.a[j * m.rows + i] = m.at(i, j);
    return t;
}

template <class F>
Matrix<F> matrix_from_rows(const F& f, const std::vector<Vec<F>>& rows) {
    if (rows.empty()) return zero_matrix(f, 0, 0);
    Matrix<F> m;
    m.rows = rows.size();
    m.cols = rows[0].size();
    m.a.reserve(m.rows * m.cols);
    for (const auto& r : rows) {
        if (r.size() != m.cols) throw std::invalid_argument("matrix_from_rows: ragged rows");
        m.a.insert(m.a.end(), r.begin(), r.end());
    }
    return m;
}

template <class F>
Matrix<F> matrix_from_columns(const F& f, const std::vector<Vec<F>>& cols) {
    return transpose(f, matrix_from_rows(f, cols));
}

template <class F>
bool vec_is_zero(const F& f, const Vec<F>& v) {
    for (const auto& x : v)
        if (!f.is_zero(x)) return false;
    return true;
}

template <class F>
Vec<F> vec_add(const F& f, const Vec<F>& a, const Vec<F>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add: length mismatch");
    Vec<F> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
    return r;
}

template <class F>
Vec<F> vec_scale(const F& f, const typename F::Elem& c, const Vec<F>& a) {
    Vec<F> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(c, a[i]);
    return r;
}

// r -= c * a
template <class F>
void vec_submul(const F& f, Vec<F>& r, const typename F::Elem& c, const Vec<F>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.sub(r[i], f.mul(c, a[i]));
}

namespace detail {

// Rank over GF(p) by ordinary Gaussian elimination.
template <class F>
std::size_t rank_gauss(const F& f, Matrix<F> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && f.is_zero(m.at(piv, c))) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = c; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        auto pinv = f.inv(m.at(r, c));
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            if (f.is_zero(m.at(i, c))) continue;
            auto t = f.mul(m.at(i, c), pinv);
            m.at(i, c) = f.zero();
            for (std::size_t j = c + 1; j < m.cols; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(t, m.at(r, j)));
        }
        ++r;
    }
    return r;
}

// Rank over Q by fraction-free (Bareiss) elimination on a denominator-cleared
// integer matrix. Intermediate entries stay integral: after k steps each entry
// is a (k+1)x(k+1) minor of the cleared input, so the division is exact.
inline std::size_t rank_bareiss(const Matrix<Rationals>& m) {
    std::vector<std::vector<BigInt>> w(m.rows, std::vector<BigInt>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < m.cols; ++j) l = boost::multiprecision::lcm(l, denominator(m.at(i, j)));
        for (std::size_t j = 0; j < m.cols; ++j) w[i][j] = numerator(m.at(i, j)) * (l / denominator(m.at(i, j)));
    }
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && w[piv][c] == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r) std::swap(w[piv], w[r]);
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            for (std::size_t j = c + 1; j < m.cols; ++j) w[i][j] = (w[r][c] * w[i][j] - w[i][c] * w[r][j]) / prev;
            w[i][c] = 0;
        }
        prev = w[r][c];
        ++r;
    }
    return r;
}

}  // namespace detail

/// Exact rank. Fraction-free elimination over Q, Gaussian elimination over GF(p).
template <class F>
std::size_t rank(const F& f, const Matrix<F>& m) {
    if constexpr (F::is_prime_field) {
        return detail::rank_gauss(f, m);
    } else {
        return detail::rank_bareiss(m);
    }
}

/// Exact determinant of a square matrix (Gaussian elimination with division).
template <class F>
typename F::Elem determinant(const F& f, Matrix<F> m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant: matrix not square");
    std::size_t n = m.rows;
    auto det = f.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && f.is_zero(m.at(piv, c))) ++piv;
        if (piv == n) return f.zero();
        if (piv != c) {
            for (std::size_t j = c; j < n; ++j) std::swap(m.at(c, j), m.at(piv, j));
            det = f.neg(det);
        }
        det = f.mul(det, m.at(c, c));
        auto pinv = f.inv(m.at(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (f.is_zero(m.at(i, c))) continue;
            auto t = f.mul(m.at(i, c), pinv);
            for (std::size_t j = c; j < n; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(t, m.at(c, j)));
        }
    }
    return det;
}

template <class F>
std::size_t span_dim(const F& f, const VectorList<F>& v) {
    if (v.vecs.empty()) return 0;
    return rank(f, matrix_from_rows(f, v.vecs));
}

/// True iff span(A) and span(B) intersect trivially, i.e. the joint span has
/// dimension span_dim(A) + span_dim(B). Empty sides are vacuously fine.
template <class F>
bool direct_sum_check(const F& f, const VectorList<F>& a, const VectorList<F>& b) {
    if (!a.vecs.empty() && !b.vecs.empty() && a.dim != b.dim)
        throw std::invalid_argument("direct_sum_check: ambient dimension mismatch");
    std::vector<Vec<F>> joint = a.vecs;
    joint.insert(joint.end(), b.vecs.begin(), b.vecs.end());
    std::size_t dim = a.vecs.empty() ? b.dim : a.dim;
    return span_dim(f, VectorList<F>(dim, joint)) == span_dim(f, a) + span_dim(f, b);
}

/// Matrix of all s x s minors, rows and columns indexed by the size-s subsets
/// of row/column indices in lexicographic order.
template <class F>
Matrix<F> compound_matrix(const F& f, const Matrix<F>& m, std::size_t s) {
    if (s < 1 || s > std::min(m.rows, m.cols))
        throw std::invalid_argument("compound_matrix: order s out of range");
    std::vector<IndexSet> rsets, csets;
    for_each_combination(m.rows, s, [&](const IndexSet& r) { rsets.push_back(r); });
    for_each_combination(m.cols, s, [&](const IndexSet& c) { csets.push_back(c); });
    Matrix<F> out = zero_matrix(f, rsets.size(), csets.size());
    Matrix<F> sub = zero_matrix(f, s, s);
    for (std::size_t ri = 0; ri < rsets.size(); ++ri) {
        for (std::size_t ci = 0; ci < csets.size(); ++ci) {
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = 0; j < s; ++j) sub.at(i, j) = m.at(rsets[ri][i], csets[ci][j]);
            out.at(ri, ci) = determinant(f, sub);
        }
    }
    return out;
}

/// Column-wise Kronecker product: column c of the result is col_c(A) (x) col_c(B).
template <class F>
Matrix<F> khatri_rao(const F& f, const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols != b.cols) throw std::invalid_argument("khatri_rao: column count mismatch");
    Matrix<F> out = zero_matrix(f, a.rows * b.rows, a.cols);
    for (std::size_t c = 0; c < a.cols; ++c)
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < b.rows; ++j) out.at(i * b.rows + j, c) = f.mul(a.at(i, c), b.at(j, c));
    return out;
}

/// Coordinate vector of v_1 (x) ... (x) v_k, modes left to right, last index
/// fastest.
template <class F>
Vec<F> kron_vec(const F& f, const std::vector<Vec<F>>& vs) {
    if (vs.empty()) throw std::invalid_argument("kron_vec: empty factor list");
    Vec<F> acc = vs[0];
    for (std::size_t k = 1; k < vs.size(); ++k) {
        Vec<F> next(acc.size() * vs[k].size());
        std::size_t pos = 0;
        for (const auto& x : acc)
            for (const auto& y : vs[k]) next[pos++] = f.mul(x, y);
        acc = std::move(next);
    }
    return acc;
}

/// Incremental echelon-form span tracker. Vectors are pushed one at a time;
/// the solver can report the current rank, test membership, and express a
/// vector as a combination of the pushed originals (used for fundamental
/// circuits).
template <class F>
class SpanSolver {
  public:
    using Elem = typename F::Elem;

    SpanSolver(const F& f, std::size_t dim) : f_(&f), dim_(dim) {}

    std::size_t rank() const { return rows_.size(); }
    std::size_t pushed() const { return pushed_; }

    /// Returns true if the vector increased the span.
    bool push(const Vec<F>& v) {
        auto [w, mu] = reduce(v);
        ++pushed_;
        std::size_t piv = first_nonzero(w);
        if (piv == dim_) return false;
        for (auto& c : mu) c = f_->neg(c);
        mu.resize(pushed_, f_->zero());
        mu[pushed_ - 1] = f_->one();
        rows_.push_back(Row{std::move(w), std::move(mu), piv});
        return true;
    }

    bool in_span(const Vec<F>& v) const {
        auto [w, mu] = reduce(v);
        (void)mu;
        return first_nonzero(w) == dim_;
    }

    /// Coordinates of v in terms of the pushed originals, if v lies in the
    /// current span. Dependent originals always get coefficient zero.
    std::optional<std::vector<Elem>> coords(const Vec<F>& v) const {
        auto [w, mu] = reduce(v);
        if (first_nonzero(w) != dim_) return std::nullopt;
        mu.resize(pushed_, f_->zero());
        return mu;
    }

  private:
    struct Row {
        Vec<F> v;
        std::vector<Elem> comb;  // v as combination of pushed originals
        std::size_t pivot;
    };

    std::size_t first_nonzero(const Vec<F>& w) const {
        for (std::size_t i = 0; i < dim_; ++i)
            if (!f_->is_zero(w[i])) return i;
        return dim_;
    }

    // Returns the reduced residual w and coefficients mu with
    // v = w + sum_k mu[k] * original_k.
    std::pair<Vec<F>, std::vector<Elem>> reduce(const Vec<F>& v) const {
        if (v.size() != dim_) throw std::invalid_argument("SpanSolver: vector length mismatch");
        Vec<F> w = v;
        std::vector<Elem> mu(pushed_, f_->zero());
        for (const auto& row : rows_) {
            if (f_->is_zero(w[row.pivot])) continue;
            auto t = f_->div(w[row.pivot], row.v[row.pivot]);
            vec_submul(*f_, w, t, row.v);
            for (std::size_t k = 0; k < row.comb.size(); ++k) mu[k] = f_->add(mu[k], f_->mul(t, row.comb[k]));
        }
        return {std::move(w), std::move(mu)};
    }

    const F* f_;
    std::size_t dim_;
    std::vector<Row> rows_;
    std::size_t pushed_ = 0;
};

/// Solution of A x = b: consistency flag, one particular solution (free
/// variables set to zero) and a nullspace basis.
template <class F>
struct LinearSolution {
    bool consistent = false;
    Vec<F> particular;
    std::vector<Vec<F>> nullspace;
};

template <class F>
LinearSolution<F> solve_linear(const F& f, const Matrix<F>& a, const Vec<F>& b) {
    if (b.size() != a.rows) throw std::invalid_argument("solve_linear: rhs length mismatch");
    std::size_t n = a.cols;
    Matrix<F> m = zero_matrix(f, a.rows, n + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = a.at(i, j);
        m.at(i, n) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && f.is_zero(m.at(piv, c))) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = c; j <= n; ++j) std::swap(m.at(r, j), m.at(piv, j));
        auto pinv = f.inv(m.at(r, c));
        for (std::size_t j = c; j <= n; ++j) m.at(r, j) = f.mul(pinv, m.at(r, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || f.is_zero(m.at(i, c))) continue;
            auto t = m.at(i, c);
            for (std::size_t j = c; j <= n; ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(t, m.at(r, j)));
        }
        pivot_col.push_back(c);
        ++r;
    }
    LinearSolution<F> sol;
    for (std::size_t i = r; i < m.rows; ++i)
        if (!f.is_zero(m.at(i, n))) return sol;  // inconsistent
    sol.consistent = true;
    sol.particular.assign(n, f.zero());
    for (std::size_t i = 0; i < pivot_col.size(); ++i) sol.particular[pivot_col[i]] = m.at(i, n);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        Vec<F> k(n, f.zero());
        k[c] = f.one();
        for (std::size_t i = 0; i < pivot_col.size(); ++i) k[pivot_col[i]] = f.neg(m.at(i, c));
        sol.nullspace.push_back(std::move(k));
    }
    return sol;
}

}  // namespace tensorcert

#endif
