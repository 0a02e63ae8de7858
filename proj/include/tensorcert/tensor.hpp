#ifndef TENSORCERT_TENSOR_HPP
#define TENSORCERT_TENSOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tensorcert/linalg.hpp"

namespace tensorcert {

/// Hard cap on n for full-subset enumerations (2^n exact-rank computations).
/// Callers may raise it explicitly; the CLI honors KRUSKAL_CERT_MAX_SUBSET_N.
inline constexpr std::size_t kDefaultSubsetCap = 22;

inline void check_subset_cap(std::size_t n, std::size_t cap) {
    if (n > cap)
        throw std::invalid_argument("subset enumeration over n=" + std::to_string(n) +
                                    " elements exceeds the cap of " + std::to_string(cap) +
                                    " (raise the cap explicitly to override)");
}

/// One product tensor x = coeff * (factor_1 (x) ... (x) factor_m).
/// Factors must be nonzero and the coefficient nonzero; the coefficient is
/// kept separate from the factors so symmetric families keep literally equal
/// factors across modes.
template <class F>
struct ProductTensor {
    std::vector<Vec<F>> factors;
    typename F::Elem coeff;
};

template <class F>
void validate_tensor(const F& f, const ProductTensor<F>& t, const std::vector<std::size_t>& mode_dims) {
    if (t.factors.size() != mode_dims.size()) throw std::invalid_argument("ProductTensor: wrong number of factors");
    if (f.is_zero(t.coeff)) throw std::invalid_argument("ProductTensor: zero coefficient");
    for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (t.factors[j].size() != mode_dims[j]) throw std::invalid_argument("ProductTensor: factor length mismatch in mode " + std::to_string(j + 1));
        if (vec_is_zero(f, t.factors[j])) throw std::invalid_argument("ProductTensor: zero factor in mode " + std::to_string(j + 1));
    }
}

/// Ordered multiset of product tensors over shared mode dimensions.
template <class F>
struct ProductFamily {
    F field;
    std::vector<std::size_t> mode_dims;
    std::vector<ProductTensor<F>> tensors;

    ProductFamily(F fld, std::vector<std::size_t> dims, std::vector<ProductTensor<F>> ts)
        : field(std::move(fld)), mode_dims(std::move(dims)), tensors(std::move(ts)) {
        if (mode_dims.size() < 2) throw std::invalid_argument("ProductFamily: need at least 2 modes");
        if (tensors.empty()) throw std::invalid_argument("ProductFamily: need at least 1 tensor");
        for (auto d : mode_dims)
            if (d == 0) throw std::invalid_argument("ProductFamily: zero mode dimension");
        for (const auto& t : tensors) validate_tensor(field, t, mode_dims);
    }

    std::size_t n() const { return tensors.size(); }
    std::size_t m() const { return mode_dims.size(); }
    std::size_t ambient_dim() const {
        std::size_t d = 1;
        for (auto x : mode_dims) d *= x;
        return d;
    }
};

template <class F>
Vec<F> assemble(const F& f, const ProductTensor<F>& t) {
    return vec_scale(f, t.coeff, kron_vec(f, t.factors));
}

template <class F>
Vec<F> family_sum(const ProductFamily<F>& fam) {
    const F& f = fam.field;
    Vec<F> acc(fam.ambient_dim(), f.zero());
    for (const auto& t : fam.tensors) {
        Vec<F> v = assemble(f, t);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], v[i]);
    }
    return acc;
}

template <class F>
std::vector<Vec<F>> assembled_vectors(const ProductFamily<F>& fam) {
    std::vector<Vec<F>> out;
    out.reserve(fam.n());
    for (const auto& t : fam.tensors) out.push_back(assemble(fam.field, t));
    return out;
}

/// Mode-j matricization of a dense coordinate vector (last index fastest).
template <class F>
Matrix<F> flattening_matrix(const F& f, const Vec<F>& v, const std::vector<std::size_t>& mode_dims, std::size_t j) {
    if (j >= mode_dims.size()) throw std::invalid_argument("flattening_matrix: mode index out of range");
    std::size_t total = 1;
    for (auto d : mode_dims) total *= d;
    if (v.size() != total) throw std::invalid_argument("flattening_matrix: coordinate length mismatch");
    std::size_t dj = mode_dims[j];
    Matrix<F> m = zero_matrix(f, dj, total / dj);
    std::size_t inner = 1;  // product of dims after mode j
    for (std::size_t k = j + 1; k < mode_dims.size(); ++k) inner *= mode_dims[k];
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t ij = (idx / inner) % dj;
        std::size_t outer = idx / (inner * dj);
        m.at(ij, outer * inner + idx % inner) = v[idx];
    }
    return m;
}

template <class F>
std::size_t flattening_rank(const F& f, const Vec<F>& v, const std::vector<std::size_t>& mode_dims, std::size_t j) {
    return rank(f, flattening_matrix(f, v, mode_dims, j));
}

/// max_j rank_j(v)
template <class F>
std::size_t flattening_rank_max(const F& f, const Vec<F>& v, const std::vector<std::size_t>& mode_dims) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < mode_dims.size(); ++j) best = std::max(best, flattening_rank(f, v, mode_dims, j));
    return best;
}

inline std::uint32_t mask_of(const IndexSet& s) {
    std::uint32_t m = 0;
    for (auto i : s) {
        if (i >= 32) throw std::invalid_argument("mask_of: index exceeds the 32-bit subset mask");
        m |= (1u << i);
    }
    return m;
}

inline IndexSet set_of(std::uint32_t mask, std::size_t n) {
    IndexSet s;
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) s.push_back(i);
    return s;
}

/// Memoized span dimensions d_J^S = dim span{ (x)_{j in J} x_{a,j} : a in S }.
template <class F>
class DimTable {
  public:
    explicit DimTable(const ProductFamily<F>& fam) : fam_(&fam) {}

    std::size_t query(const IndexSet& S, const IndexSet& J) {
        if (S.empty() || J.empty()) throw std::invalid_argument("DimTable: empty subset");
        std::uint64_t key = (static_cast<std::uint64_t>(mask_of(S)) << 32) | mask_of(J);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const F& f = fam_->field;
        std::vector<Vec<F>> vecs;
        vecs.reserve(S.size());
        for (auto a : S) {
            std::vector<Vec<F>> parts;
            parts.reserve(J.size());
            for (auto j : J) parts.push_back(fam_->tensors[a].factors[j]);
            vecs.push_back(kron_vec(f, parts));
        }
        std::size_t d = rank(f, matrix_from_rows(f, vecs));
        cache_.emplace(key, d);
        return d;
    }

    std::size_t query_mode(const IndexSet& S, std::size_t j) { return query(S, IndexSet{j}); }

    const ProductFamily<F>& family() const { return *fam_; }

  private:
    const ProductFamily<F>* fam_;
    std::unordered_map<std::uint64_t, std::size_t> cache_;
};

/// Kruskal rank: the largest k such that every k-subset spans dimension k.
/// Computed incrementally (k = 2, 3, ...) with early exit on the first
/// deficient subset.
template <class F>
std::size_t k_rank(const F& f, const VectorList<F>& v) {
    std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("k_rank: empty vector list");
    for (const auto& x : v.vecs)
        if (vec_is_zero(f, x)) throw std::invalid_argument("k_rank: zero vector");
    for (std::size_t k = 2; k <= n; ++k) {
        bool deficient = for_each_combination(n, k, [&](const IndexSet& s) -> bool {
            std::vector<Vec<F>> sub;
            sub.reserve(k);
            for (auto i : s) sub.push_back(v.vecs[i]);
            return rank(f, matrix_from_rows(f, sub)) < k;
        });
        if (deficient) return k - 1;
    }
    return n;
}

template <class F>
VectorList<F> mode_vectors(const ProductFamily<F>& fam, std::size_t j) {
    std::vector<Vec<F>> vs;
    vs.reserve(fam.n());
    for (const auto& t : fam.tensors) vs.push_back(t.factors[j]);
    return VectorList<F>(fam.mode_dims[j], vs);
}

/// Vectors (x)_{j in J} x_{a,j} for all a, modes in ascending order within J.
template <class F>
VectorList<F> grouped_vectors(const ProductFamily<F>& fam, const IndexSet& J) {
    if (J.empty()) throw std::invalid_argument("grouped_vectors: empty mode set");
    std::size_t dim = 1;
    for (auto j : J) dim *= fam.mode_dims[j];
    std::vector<Vec<F>> vs;
    vs.reserve(fam.n());
    for (const auto& t : fam.tensors) {
        std::vector<Vec<F>> parts;
        for (auto j : J) parts.push_back(t.factors[j]);
        vs.push_back(kron_vec(fam.field, parts));
    }
    return VectorList<F>(dim, vs);
}

struct KRankProfile {
    std::vector<std::size_t> per_mode;
    std::map<std::uint32_t, std::size_t> grouped;  // mode-set mask -> k_J
};

template <class F>
KRankProfile k_rank_profile(const ProductFamily<F>& fam) {
    KRankProfile p;
    for (std::size_t j = 0; j < fam.m(); ++j) p.per_mode.push_back(k_rank(fam.field, mode_vectors(fam, j)));
    return p;
}

template <class F>
std::size_t k_rank_grouped(const ProductFamily<F>& fam, const IndexSet& J) {
    return k_rank(fam.field, grouped_vectors(fam, J));
}

template <class F>
std::vector<std::size_t> mode_span_dims(const ProductFamily<F>& fam) {
    std::vector<std::size_t> d;
    for (std::size_t j = 0; j < fam.m(); ++j) d.push_back(span_dim(fam.field, mode_vectors(fam, j)));
    return d;
}

/// Regroup modes: each partition block becomes a single mode whose factors
/// are the Kronecker products of the original factors (block-internal mode
/// order ascending). Blocks are taken in the order given.
template <class F>
ProductFamily<F> mode_group(const ProductFamily<F>& fam, const std::vector<IndexSet>& partition) {
    std::vector<bool> seen(fam.m(), false);
    std::size_t covered = 0;
    for (const auto& block : partition) {
        if (block.empty()) throw std::invalid_argument("mode_group: empty partition block");
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (block[i] >= fam.m()) throw std::invalid_argument("mode_group: mode index out of range");
            if (i > 0 && block[i] <= block[i - 1]) throw std::invalid_argument("mode_group: block indices must be ascending");
            if (seen[block[i]]) throw std::invalid_argument("mode_group: partition blocks overlap");
            seen[block[i]] = true;
            ++covered;
        }
    }
    if (covered != fam.m()) throw std::invalid_argument("mode_group: partition does not cover all modes");
    if (partition.size() < 2) throw std::invalid_argument("mode_group: grouped family needs at least 2 modes");
    std::vector<std::size_t> dims;
    for (const auto& block : partition) {
        std::size_t d = 1;
        for (auto j : block) d *= fam.mode_dims[j];
        dims.push_back(d);
    }
    std::vector<ProductTensor<F>> ts;
    ts.reserve(fam.n());
    for (const auto& t : fam.tensors) {
        ProductTensor<F> g;
        g.coeff = t.coeff;
        for (const auto& block : partition) {
            std::vector<Vec<F>> parts;
            for (auto j : block) parts.push_back(t.factors[j]);
            g.factors.push_back(kron_vec(fam.field, parts));
        }
        ts.push_back(std::move(g));
    }
    return ProductFamily<F>(fam.field, dims, ts);
}

/// Symmetric decomposition data: v = sum_a alpha_a * base_a^{(x) m}.
/// Requires characteristic 0 or > m.
template <class F>
struct SymmetricFamily {
    F field;
    std::vector<Vec<F>> base_vectors;
    std::vector<typename F::Elem> coeffs;
    std::size_t power;  // m

    SymmetricFamily(F fld, std::vector<Vec<F>> base, std::vector<typename F::Elem> cs, std::size_t m)
        : field(std::move(fld)), base_vectors(std::move(base)), coeffs(std::move(cs)), power(m) {
        if (power < 2) throw std::invalid_argument("SymmetricFamily: power m must be >= 2");
        if (base_vectors.empty()) throw std::invalid_argument("SymmetricFamily: empty base");
        if (coeffs.size() != base_vectors.size()) throw std::invalid_argument("SymmetricFamily: coefficient count mismatch");
        std::uint64_t ch = field.characteristic();
        if (ch != 0 && ch <= power)
            throw std::invalid_argument("SymmetricFamily: field characteristic must be 0 or > m");
        std::size_t d = base_vectors[0].size();
        for (const auto& v : base_vectors) {
            if (v.size() != d) throw std::invalid_argument("SymmetricFamily: base vector length mismatch");
            if (vec_is_zero(field, v)) throw std::invalid_argument("SymmetricFamily: zero base vector");
        }
        for (const auto& c : coeffs)
            if (field.is_zero(c)) throw std::invalid_argument("SymmetricFamily: zero coefficient");
    }

    std::size_t n() const { return base_vectors.size(); }
    std::size_t base_dim() const { return base_vectors[0].size(); }
    std::size_t span() const { return span_dim(field, VectorList<F>(base_dim(), base_vectors)); }
    std::size_t kruskal() const { return k_rank(field, VectorList<F>(base_dim(), base_vectors)); }
};

template <class F>
ProductFamily<F> symmetric_lift(const SymmetricFamily<F>& s) {
    std::vector<std::size_t> dims(s.power, s.base_dim());
    std::vector<ProductTensor<F>> ts;
    ts.reserve(s.n());
    for (std::size_t a = 0; a < s.n(); ++a) {
        ProductTensor<F> t;
        t.coeff = s.coeffs[a];
        t.factors.assign(s.power, s.base_vectors[a]);
        ts.push_back(std::move(t));
    }
    return ProductFamily<F>(s.field, dims, ts);
}

/// Canonical form: every factor is scaled so its first nonzero entry is 1 and
/// the residual scale is folded into the coefficient. Idempotent.
template <class F>
ProductTensor<F> canonical_tensor(const F& f, const ProductTensor<F>& t) {
    ProductTensor<F> c = t;
    for (auto& fac : c.factors) {
        std::size_t lead = 0;
        while (lead < fac.size() && f.is_zero(fac[lead])) ++lead;
        if (lead == fac.size()) throw std::invalid_argument("canonical_tensor: zero factor");
        auto s = fac[lead];
        if (f.eq(s, f.one())) continue;
        auto sinv = f.inv(s);
        for (auto& x : fac) x = f.mul(sinv, x);
        c.coeff = f.mul(c.coeff, s);
    }
    return c;
}

template <class F>
bool elem_less(const F&, const typename F::Elem& a, const typename F::Elem& b) {
    return a < b;
}

/// Deterministic total order on canonical tensors (factors lex, then coeff).
template <class F>
bool canonical_tensor_less(const F& f, const ProductTensor<F>& a, const ProductTensor<F>& b) {
    for (std::size_t j = 0; j < std::min(a.factors.size(), b.factors.size()); ++j) {
        const auto& x = a.factors[j];
        const auto& y = b.factors[j];
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
            if (!f.eq(x[i], y[i])) return elem_less(f, x[i], y[i]);
        }
        if (x.size() != y.size()) return x.size() < y.size();
    }
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
    if (!f.eq(a.coeff, b.coeff)) return elem_less(f, a.coeff, b.coeff);
    return false;
}

template <class F>
bool tensor_equal(const F& f, const ProductTensor<F>& a, const ProductTensor<F>& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (std::size_t j = 0; j < a.factors.size(); ++j) {
        if (a.factors[j].size() != b.factors[j].size()) return false;
        for (std::size_t i = 0; i < a.factors[j].size(); ++i)
            if (!f.eq(a.factors[j][i], b.factors[j][i])) return false;
    }
    return f.eq(a.coeff, b.coeff);
}

/// True iff the two product tensors are equal as tensors (coefficients folded
/// in); per-mode scalars may be rebalanced arbitrarily.
template <class F>
bool projective_equal(const F& f, const ProductTensor<F>& a, const ProductTensor<F>& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (std::size_t j = 0; j < a.factors.size(); ++j)
        if (a.factors[j].size() != b.factors[j].size()) return false;
    return tensor_equal(f, canonical_tensor(f, a), canonical_tensor(f, b));
}

/// Multiset equality of two tensor lists under projective_equal.
template <class F>
bool multiset_projective_equal(const F& f, std::vector<ProductTensor<F>> a, std::vector<ProductTensor<F>> b) {
    if (a.size() != b.size()) return false;
    for (auto& t : a) t = canonical_tensor(f, t);
    for (auto& t : b) t = canonical_tensor(f, t);
    auto less = [&](const ProductTensor<F>& x, const ProductTensor<F>& y) { return canonical_tensor_less(f, x, y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!tensor_equal(f, a[i], b[i])) return false;
    return true;
}

}  // namespace tensorcert

#endif
