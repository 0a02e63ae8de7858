#ifndef TENSORCERT_GENERATORS_HPP
#define TENSORCERT_GENERATORS_HPP

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tensorcert/criteria.hpp"
#include "tensorcert/matroid.hpp"
#include "tensorcert/tensor.hpp"

namespace tensorcert {

template <class F>
Vec<F> unit_vec(const F& f, std::size_t dim, std::size_t i) {
    Vec<F> v(dim, f.zero());
    v[i] = f.one();
    return v;
}

/// Target parameters for a circuit of product tensors: n = sum_j (d_j-1) + 2
/// members whose per-mode spans and k-ranks reach d_j.
struct CircuitSpec {
    std::vector<std::size_t> dims;
    std::size_t n;
    bool symmetric = false;

    CircuitSpec(std::vector<std::size_t> d, bool sym = false) : dims(std::move(d)), symmetric(sym) {
        if (dims.size() < 2) throw std::invalid_argument("CircuitSpec: need at least 2 modes");
        std::size_t s = 2;
        for (auto dj : dims) {
            if (dj == 0) throw std::invalid_argument("CircuitSpec: zero dimension");
            s += dj - 1;
        }
        n = s;
        if (symmetric)
            for (auto dj : dims)
                if (dj != dims[0]) throw std::invalid_argument("CircuitSpec: symmetric circuits need equal dimensions");
    }
};

namespace detail {

template <class F>
typename F::Elem random_elem(const F& f, std::mt19937_64& rng) {
    if constexpr (F::is_prime_field) {
        std::uniform_int_distribution<std::uint64_t> d(0, f.modulus() - 1);
        return d(rng);
    } else {
        std::uniform_int_distribution<long long> d(-4, 4);
        return f.from_long(d(rng));
    }
}

template <class F>
Vec<F> random_nonzero_vec(const F& f, std::size_t dim, std::mt19937_64& rng) {
    while (true) {
        Vec<F> v(dim);
        for (auto& x : v) x = random_elem(f, rng);
        if (!vec_is_zero(f, v)) return v;
    }
}

template <class F>
Matrix<F> random_invertible(const F& f, std::size_t n, std::mt19937_64& rng) {
    while (true) {
        Matrix<F> m = zero_matrix(f, n, n);
        for (auto& x : m.a) x = random_elem(f, rng);
        if (!f.is_zero(determinant(f, m))) return m;
    }
}

// n distinct field elements (needs |F| >= n over GF(p)).
template <class F>
std::vector<typename F::Elem> distinct_scalars(const F& f, std::size_t n, std::mt19937_64& rng) {
    std::vector<typename F::Elem> out;
    if constexpr (F::is_prime_field) {
        if (f.modulus() < n) throw std::invalid_argument("distinct_scalars: field too small");
        std::vector<std::uint64_t> all(f.modulus());
        std::iota(all.begin(), all.end(), std::uint64_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        out.assign(all.begin(), all.begin() + n);
    } else {
        std::vector<long long> pool;
        for (long long v = -(long long)(2 * n); v <= (long long)(2 * n); ++v) pool.push_back(v);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < n; ++i) out.push_back(f.from_long(pool[i]));
    }
    return out;
}

template <class F>
Vec<F> apply_matrix(const F& f, const Matrix<F>& m, const Vec<F>& v) {
    Vec<F> out(m.rows, f.zero());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] = f.add(out[i], f.mul(m.at(i, j), v[j]));
    return out;
}

template <class F>
bool circuit_meets_spec(const F& f, const ProductFamily<F>& fam, const CircuitSpec& spec) {
    if (!is_circuit(f, family_as_vectors(fam))) return false;
    for (std::size_t j = 0; j < fam.m(); ++j) {
        auto mv = mode_vectors(fam, j);
        if (span_dim(f, mv) < spec.dims[j]) return false;
        if (k_rank(f, mv) < spec.dims[j]) return false;
    }
    if (spec.symmetric) {
        for (const auto& t : fam.tensors)
            for (std::size_t j = 1; j < t.factors.size(); ++j)
                if (t.factors[j] != t.factors[0]) return false;
    }
    return true;
}

}  // namespace detail

/// Randomized circuit search. Candidates are drawn either as fully random
/// factor families or as points on randomly twisted polynomial curves (the
/// latter land on circuits with high probability); every candidate is
/// verified from scratch with is_circuit plus span/k-rank recomputation, so
/// nothing is trusted from the construction. Returns nullopt when the
/// attempt budget runs out.
template <class F>
std::optional<ProductFamily<F>> find_circuit(const F& f, const CircuitSpec& spec, std::size_t attempts = 64,
                                             std::uint64_t seed = 1) {
    if (spec.symmetric && f.characteristic() != 0 && f.characteristic() <= spec.dims.size())
        throw std::invalid_argument("find_circuit: symmetric circuits need characteristic 0 or > m");
    std::mt19937_64 rng(seed);
    std::size_t m = spec.dims.size();
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        std::vector<ProductTensor<F>> ts;
        if (attempt < 2) {
            // unstructured random sampling (almost never a circuit, kept as
            // the honest first try)
            for (std::size_t a = 0; a < spec.n; ++a) {
                ProductTensor<F> t;
                t.coeff = f.one();
                for (std::size_t j = 0; j < m; ++j) t.factors.push_back(detail::random_nonzero_vec(f, spec.dims[j], rng));
                ts.push_back(std::move(t));
            }
        } else {
            // random curve ansatz: factor j of member a is M_j * (1, t_a,
            // t_a^2, ...), with random distinct t_a and random invertible M_j
            auto tvals = detail::distinct_scalars(f, spec.n, rng);
            std::vector<Matrix<F>> twists;
            for (std::size_t j = 0; j < m; ++j) {
                if (spec.symmetric && j > 0) {
                    twists.push_back(twists[0]);
                } else {
                    twists.push_back(detail::random_invertible(f, spec.dims[j], rng));
                }
            }
            for (std::size_t a = 0; a < spec.n; ++a) {
                ProductTensor<F> t;
                t.coeff = f.one();
                for (std::size_t j = 0; j < m; ++j) {
                    Vec<F> moment(spec.dims[j]);
                    auto acc = f.one();
                    for (std::size_t i = 0; i < spec.dims[j]; ++i) {
                        moment[i] = acc;
                        acc = f.mul(acc, tvals[a]);
                    }
                    t.factors.push_back(detail::apply_matrix(f, twists[j], moment));
                }
                ts.push_back(std::move(t));
            }
        }
        try {
            ProductFamily<F> fam(f, spec.dims, ts);
            if (detail::circuit_meets_spec(f, fam, spec)) return fam;
        } catch (const std::invalid_argument&) {
            // zero factor from an unlucky draw; try again
        }
    }
    return std::nullopt;
}

/// The unique (up to scale) linear dependency of a circuit's assembled
/// tensors; every coefficient is nonzero.
template <class F>
std::vector<typename F::Elem> circuit_dependency(const F& f, const ProductFamily<F>& fam) {
    auto vecs = assembled_vectors(fam);
    Matrix<F> m = matrix_from_columns(f, vecs);
    auto sol = solve_linear(f, m, Vec<F>(fam.ambient_dim(), f.zero()));
    if (sol.nullspace.size() != 1) throw std::invalid_argument("circuit_dependency: input is not a circuit");
    for (const auto& c : sol.nullspace[0])
        if (f.is_zero(c)) throw std::invalid_argument("circuit_dependency: dependency not fully supported");
    return sol.nullspace[0];
}

/// A pair of families E, F with an exactly verified relation
/// sum_a e_coeffs[a] * E[a] = sum_b f_coeffs[b] * F[b], witnessing tightness
/// of a rank bound.
template <class F>
struct SharpnessInstance {
    ProductFamily<F> e_family;
    ProductFamily<F> f_family;
    std::vector<typename F::Elem> e_coeffs;
    std::vector<typename F::Elem> f_coeffs;
    std::map<std::string, long long> params;
    bool near_sharp = false;
};

template <class F>
void verify_equal_sums(const F& f, const SharpnessInstance<F>& inst) {
    Vec<F> lhs(inst.e_family.ambient_dim(), f.zero());
    Vec<F> rhs(inst.f_family.ambient_dim(), f.zero());
    for (std::size_t a = 0; a < inst.e_family.n(); ++a) {
        auto v = assemble(f, inst.e_family.tensors[a]);
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = f.add(lhs[i], f.mul(inst.e_coeffs[a], v[i]));
    }
    for (std::size_t b = 0; b < inst.f_family.n(); ++b) {
        auto v = assemble(f, inst.f_family.tensors[b]);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = f.add(rhs[i], f.mul(inst.f_coeffs[b], v[i]));
    }
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (!f.eq(lhs[i], rhs[i])) throw std::logic_error("SharpnessInstance: equal-sum relation failed to verify");
}

/// Builds the tensor-rank sharpness instance from a verified circuit with
/// per-mode spans and k-ranks k_j: extend with d_i - k_i product tensors to
/// reach spans d_j, then split into E (first n - d_i + k_i circuit members
/// plus the extension) and F (the rest plus the extension). The mu-bound on E
/// equals |F| exactly.
template <class F>
SharpnessInstance<F> build_sharpness_tensor_instance(const F& f, const ProductFamily<F>& circuit,
                                                     const std::vector<std::size_t>& target_dims, std::size_t mode_i,
                                                     std::size_t n, std::uint64_t seed = 1,
                                                     std::size_t attempts = 64) {
    std::size_t m = circuit.m();
    if (target_dims.size() != m) throw std::invalid_argument("build_sharpness_tensor_instance: dimension count mismatch");
    if (mode_i >= m) throw std::invalid_argument("build_sharpness_tensor_instance: mode index out of range");
    std::vector<std::size_t> ks(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto mv = mode_vectors(circuit, j);
        ks[j] = k_rank(f, mv);
        if (span_dim(f, mv) != ks[j])
            throw std::invalid_argument("build_sharpness_tensor_instance: circuit must have span = k-rank per mode");
        if (target_dims[j] < ks[j] || target_dims[j] > n)
            throw std::invalid_argument("build_sharpness_tensor_instance: need k_j <= d_j <= n");
    }
    long long lambda = 2;
    for (auto k : ks) lambda += static_cast<long long>(k) - 1;
    if (static_cast<long long>(circuit.n()) != lambda)
        throw std::invalid_argument("build_sharpness_tensor_instance: circuit size must be sum(k_j-1)+2");
    long long gap = static_cast<long long>(target_dims[mode_i]) - static_cast<long long>(ks[mode_i]);
    // mu = 2 (d_i - k_i) requires the two largest gaps to be equal to gap_i
    long long mu = 0;
    std::vector<long long> gaps(m);
    for (std::size_t j = 0; j < m; ++j) gaps[j] = static_cast<long long>(target_dims[j]) - static_cast<long long>(ks[j]);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) mu = std::max(mu, gaps[a] + gaps[b]);
    if (mu != 2 * gap) throw std::invalid_argument("build_sharpness_tensor_instance: condition mu = 2(d_i - k_i) violated");
    long long kmax = 0, ksum = 0;
    for (auto k : ks) {
        kmax = std::max<long long>(kmax, k);
        ksum += static_cast<long long>(k) - 1;
    }
    for (std::size_t i2 = 0; i2 < m; ++i2)
        if (static_cast<long long>(ks[i2]) > ksum - (static_cast<long long>(ks[i2]) - 1) + 1)
            throw std::invalid_argument("build_sharpness_tensor_instance: balance condition violated");
    if (!(kmax + gap + 1 <= static_cast<long long>(n) && static_cast<long long>(n) <= gap + lambda))
        throw std::invalid_argument("build_sharpness_tensor_instance: n outside the admissible range");

    std::mt19937_64 rng(seed);
    auto embed = [&](const Vec<F>& v, std::size_t dim) {
        Vec<F> out(dim, f.zero());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
        return out;
    };
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        // circuit members, embedded into the target dimensions
        std::vector<ProductTensor<F>> members;
        for (const auto& t : circuit.tensors) {
            ProductTensor<F> e;
            e.coeff = t.coeff;
            for (std::size_t j = 0; j < m; ++j) e.factors.push_back(embed(t.factors[j], target_dims[j]));
            members.push_back(std::move(e));
        }
        // extension tensors raising each mode span from k_j to d_j
        std::vector<ProductTensor<F>> ext;
        for (long long q = 0; q < gap; ++q) {
            ProductTensor<F> t;
            t.coeff = f.one();
            for (std::size_t j = 0; j < m; ++j) {
                if (q < gaps[j]) {
                    t.factors.push_back(unit_vec(f, target_dims[j], ks[j] + static_cast<std::size_t>(q)));
                } else {
                    // generic vector inside the existing span keeps d_j fixed
                    Vec<F> v(target_dims[j], f.zero());
                    for (std::size_t i = 0; i < ks[j]; ++i) v[i] = detail::random_elem(f, rng);
                    if (vec_is_zero(f, v)) v[0] = f.one();
                    t.factors.push_back(std::move(v));
                }
            }
            ext.push_back(std::move(t));
        }
        std::size_t n0 = n - static_cast<std::size_t>(gap);  // circuit members in E
        std::vector<ProductTensor<F>> e_tensors(members.begin(), members.begin() + n0);
        e_tensors.insert(e_tensors.end(), ext.begin(), ext.end());
        std::vector<ProductTensor<F>> f_tensors(members.begin() + n0, members.end());
        f_tensors.insert(f_tensors.end(), ext.begin(), ext.end());
        ProductFamily<F> e_fam(f, target_dims, e_tensors);
        // readbacks must match the declared parameters exactly
        bool good = true;
        for (std::size_t j = 0; j < m && good; ++j) {
            auto mv = mode_vectors(e_fam, j);
            good = span_dim(f, mv) == target_dims[j] && k_rank(f, mv) == ks[j];
        }
        if (!good) continue;
        ProductFamily<F> f_fam(f, target_dims, f_tensors);
        auto dep = circuit_dependency(f, circuit);
        SharpnessInstance<F> inst{std::move(e_fam), std::move(f_fam), {}, {}, {}, false};
        for (std::size_t a = 0; a < n0; ++a) inst.e_coeffs.push_back(dep[a]);
        for (long long q = 0; q < gap; ++q) inst.e_coeffs.push_back(f.one());
        for (std::size_t a = n0; a < circuit.n(); ++a) inst.f_coeffs.push_back(f.neg(dep[a]));
        for (long long q = 0; q < gap; ++q) inst.f_coeffs.push_back(f.one());
        inst.params = {{"n", (long long)n},
                       {"m", (long long)m},
                       {"mu", mu},
                       {"lambda", lambda},
                       {"f_size", static_cast<long long>(inst.f_family.n())},
                       {"mode_i", static_cast<long long>(mode_i + 1)}};
        verify_equal_sums(f, inst);
        return inst;
    }
    throw generation_failure("build_sharpness_tensor_instance: extension resampling budget exhausted");
}

/// Symmetric sharpness instance data: two symmetric families with equal
/// weighted sums.
template <class F>
struct SymmetricSharpnessInstance {
    SymmetricFamily<F> e_family;
    SymmetricFamily<F> f_family;
    std::map<std::string, long long> params;
    bool near_sharp = false;
};

template <class F>
void verify_equal_sums_symmetric(const F& f, const SymmetricSharpnessInstance<F>& inst) {
    auto le = symmetric_lift(inst.e_family);
    auto lf = symmetric_lift(inst.f_family);
    Vec<F> a = family_sum(le), b = family_sum(lf);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!f.eq(a[i], b[i])) throw std::logic_error("SymmetricSharpnessInstance: equal-sum relation failed to verify");
}

/// Exactly sharp symmetric instance: n + r = m + 2d - 2. A size-(m+2)
/// symmetric circuit in dimension 2 is split between E and F; for d >= 3 both
/// sides share d - 2 extra directions raising the span to d.
template <class F>
SymmetricSharpnessInstance<F> build_sharpness_symmetric_instance(const F& f, std::size_t m, std::size_t d, std::size_t n,
                                                                 std::size_t r, std::uint64_t seed = 1,
                                                                 std::size_t attempts = 64) {
    if (m < 2 || d < 2) throw std::invalid_argument("build_sharpness_symmetric_instance: need m >= 2 and d >= 2");
    if (n < d) throw std::invalid_argument("build_sharpness_symmetric_instance: need n >= d");
    if (r + 2 < d) throw std::invalid_argument("build_sharpness_symmetric_instance: need r >= d - 2");
    if (n + r != m + 2 * d - 2) throw std::invalid_argument("build_sharpness_symmetric_instance: need n + r = m + 2d - 2");
    CircuitSpec spec(std::vector<std::size_t>(m, 2), true);
    auto circ = find_circuit(f, spec, attempts, seed);
    if (!circ) throw generation_failure("build_sharpness_symmetric_instance: circuit search failed");
    auto dep = circuit_dependency(f, *circ);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    auto embed = [&](const Vec<F>& v) {
        Vec<F> out(d, f.zero());
        out[0] = v[0];
        out[1] = v[1];
        return out;
    };
    std::size_t split = n - d + 2;  // circuit members on the E side
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Vec<F>> extras;
        for (std::size_t i = 2; i < d; ++i) {
            Vec<F> v = unit_vec(f, d, i);
            // generic tilt keeps k-rank >= 2 plausible; verified below
            v[0] = detail::random_elem(f, rng);
            v[1] = detail::random_elem(f, rng);
            extras.push_back(std::move(v));
        }
        std::vector<Vec<F>> e_base, f_base;
        std::vector<typename F::Elem> e_coeffs, f_coeffs;
        for (std::size_t a = 0; a < split; ++a) {
            e_base.push_back(embed(circ->tensors[a].factors[0]));
            e_coeffs.push_back(dep[a]);
        }
        for (std::size_t a = split; a < m + 2; ++a) {
            f_base.push_back(embed(circ->tensors[a].factors[0]));
            f_coeffs.push_back(f.neg(dep[a]));
        }
        for (const auto& v : extras) {
            e_base.push_back(v);
            e_coeffs.push_back(f.one());
            f_base.push_back(v);
            f_coeffs.push_back(f.one());
        }
        if (e_base.size() != n || f_base.size() != r) throw std::logic_error("build_sharpness_symmetric_instance: size bookkeeping");
        SymmetricFamily<F> e_fam(f, e_base, e_coeffs, m);
        if (e_fam.span() != d || e_fam.kruskal() < 2) continue;
        SymmetricFamily<F> f_fam(f, f_base, f_coeffs, m);
        SymmetricSharpnessInstance<F> inst{std::move(e_fam), std::move(f_fam), {}, false};
        inst.params = {{"m", (long long)m}, {"d", (long long)d}, {"n", (long long)n}, {"r", (long long)r}};
        verify_equal_sums_symmetric(f, inst);
        return inst;
    }
    throw generation_failure("build_sharpness_symmetric_instance: resampling budget exhausted");
}

/// Near-sharp variant with base k-rank pinned to k: n = d + 1, r = m + d - 1
/// for 3 <= k < d (bound exceeded by 2), and the exactly sharp n = d,
/// r = m + d - 2 instance for k = d.
template <class F>
SymmetricSharpnessInstance<F> build_sharpness_symmetric_near(const F& f, std::size_t m, std::size_t d, std::size_t k,
                                                             std::uint64_t seed = 1, std::size_t attempts = 64) {
    if (m < 2 || d < 3) throw std::invalid_argument("build_sharpness_symmetric_near: need m >= 2 and d >= 3");
    if (k < 3 || k > d) throw std::invalid_argument("build_sharpness_symmetric_near: need 3 <= k <= d");
    CircuitSpec spec(std::vector<std::size_t>(m, 2), true);
    auto circ = find_circuit(f, spec, attempts, seed);
    if (!circ) throw generation_failure("build_sharpness_symmetric_near: circuit search failed");
    auto dep = circuit_dependency(f, *circ);
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbull);
    auto embed = [&](const Vec<F>& v) {
        Vec<F> out(d, f.zero());
        out[0] = v[0];
        out[1] = v[1];
        return out;
    };
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        // v_1..v_{m+2}: circuit bases; v_{m+3}..v_{m+d}: extras
        std::vector<Vec<F>> vs;
        for (std::size_t a = 0; a < m + 2; ++a) vs.push_back(embed(circ->tensors[a].factors[0]));
        for (std::size_t i = 2; i < d; ++i) {
            Vec<F> v = unit_vec(f, d, i);
            v[0] = detail::random_elem(f, rng);
            v[1] = detail::random_elem(f, rng);
            vs.push_back(std::move(v));
        }
        // sum of k members of E's own independent block: the single extra
        // vector that pins k-rank(E) to exactly k
        Vec<F> ksum(d, f.zero());
        for (std::size_t a = m; a < m + k; ++a)
            for (std::size_t i = 0; i < d; ++i) ksum[i] = f.add(ksum[i], vs[a][i]);
        std::vector<Vec<F>> e_base, f_base;
        std::vector<typename F::Elem> e_coeffs, f_coeffs;
        // E: {v_a : a in [d+m] \ [m]}  (+ sum term if k < d)
        for (std::size_t a = m; a < m + d; ++a) {
            e_base.push_back(vs[a]);
            e_coeffs.push_back(a < m + 2 ? dep[a] : f.one());
        }
        // F: {v_a : a in [m]} + {v_a : a in [d+m] \ [m+2]}  (+ sum term)
        for (std::size_t a = 0; a < m; ++a) {
            f_base.push_back(vs[a]);
            f_coeffs.push_back(f.neg(dep[a]));
        }
        for (std::size_t a = m + 2; a < m + d; ++a) {
            f_base.push_back(vs[a]);
            f_coeffs.push_back(f.one());
        }
        bool near = k < d;
        if (near) {
            e_base.push_back(ksum);
            e_coeffs.push_back(f.one());
            f_base.push_back(ksum);
            f_coeffs.push_back(f.one());
        }
        SymmetricFamily<F> e_fam(f, e_base, e_coeffs, m);
        if (e_fam.span() != d || e_fam.kruskal() != k) continue;
        SymmetricFamily<F> f_fam(f, f_base, f_coeffs, m);
        SymmetricSharpnessInstance<F> inst{std::move(e_fam), std::move(f_fam), {}, near};
        inst.params = {{"m", (long long)m}, {"d", (long long)d}, {"k", (long long)k},
                       {"n", static_cast<long long>(inst.e_family.n())},
                       {"r", static_cast<long long>(inst.f_family.n())}};
        verify_equal_sums_symmetric(f, inst);
        return inst;
    }
    throw generation_failure("build_sharpness_symmetric_near: resampling budget exhausted");
}

// ---------------------------------------------------------------------------
// Fixture catalog: the worked examples, reconstructed and self-checked.
// ---------------------------------------------------------------------------

template <class F>
ProductFamily<F> fixture_identity(const F& f, std::size_t n, std::size_t m) {
    if (n < 1 || m < 2) throw std::invalid_argument("fixture_identity: need n >= 1, m >= 2");
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < n; ++a) {
        ProductTensor<F> t;
        t.coeff = f.one();
        t.factors.assign(m, unit_vec(f, n, a));
        ts.push_back(std::move(t));
    }
    return ProductFamily<F>(f, std::vector<std::size_t>(m, n), ts);
}

template <class F>
SymmetricFamily<F> fixture_identity_symmetric(const F& f, std::size_t n, std::size_t m) {
    std::vector<Vec<F>> base;
    std::vector<typename F::Elem> coeffs;
    for (std::size_t a = 0; a < n; ++a) {
        base.push_back(unit_vec(f, n, a));
        coeffs.push_back(f.one());
    }
    return SymmetricFamily<F>(f, base, coeffs, m);
}

namespace detail {

template <class F>
Vec<F> lincomb_units(const F& f, std::size_t dim, std::initializer_list<std::size_t> idx) {
    Vec<F> v(dim, f.zero());
    for (auto i : idx) v[i] = f.one();
    return v;
}

}  // namespace detail

/// Five product tensors in (F^4)^{(x)3} with k-ranks (2,2,2), spans (4,4,4):
/// certified by the generalized criterion, out of reach of Kruskal's theorem,
/// and inside the threshold regime where the DLS criteria are inapplicable.
template <class F>
ProductFamily<F> fixture_example_8_1(const F& f, const std::vector<typename F::Elem>& alphas = {}) {
    std::vector<typename F::Elem> cs = alphas;
    if (cs.empty()) cs.assign(5, f.one());
    if (cs.size() != 5) throw std::invalid_argument("fixture_example_8_1: need 5 coefficients");
    auto u = [&](std::size_t i) { return unit_vec(f, 4, i); };
    auto uu = [&](std::size_t i, std::size_t j) { return detail::lincomb_units(f, 4, {i, j}); };
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < 4; ++a) ts.push_back(ProductTensor<F>{{u(a), u(a), u(a)}, cs[a]});
    ts.push_back(ProductTensor<F>{{uu(1, 2), uu(1, 3), uu(0, 3)}, cs[4]});
    return ProductFamily<F>(f, {4, 4, 4}, ts);
}

/// Four tensors whose mu-corrected bound is 4 while the flattening bound
/// tops out at 3.
template <class F>
ProductFamily<F> fixture_bound_four(const F& f) {
    auto u = [&](std::size_t i) { return unit_vec(f, 3, i); };
    auto s12 = detail::lincomb_units(f, 3, {0, 1});
    auto s123 = detail::lincomb_units(f, 3, {0, 1, 2});
    std::vector<ProductTensor<F>> ts;
    ts.push_back(ProductTensor<F>{{u(0), u(0), u(0)}, f.one()});
    ts.push_back(ProductTensor<F>{{u(1), u(1), u(1)}, f.one()});
    ts.push_back(ProductTensor<F>{{s12, s12, u(2)}, f.one()});
    ts.push_back(ProductTensor<F>{{u(2), u(2), s123}, f.one()});
    return ProductFamily<F>(f, {3, 3, 3}, ts);
}

/// Example 8.1 with unit coefficients: subset bound 5, mu bound 4.
template <class F>
ProductFamily<F> fixture_bound_five(const F& f) {
    return fixture_example_8_1(f);
}

/// Six tensors violating the k-rank balance condition (rank 5, while the
/// unbalanced mu formula would claim 7).
template <class F>
ProductFamily<F> fixture_ex_independent(const F& f) {
    auto u = [&](std::size_t i) { return unit_vec(f, 6, i); };
    Vec<F> p = detail::lincomb_units(f, 6, {0, 1});  // e1 + e2
    Vec<F> q(6, f.zero());
    q[0] = f.one();
    q[1] = f.neg(f.one());  // e1 - e2
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < 4; ++a) ts.push_back(ProductTensor<F>{{u(a), u(a), u(a)}, f.one()});
    ts.push_back(ProductTensor<F>{{u(4), p, p}, f.one()});
    ts.push_back(ProductTensor<F>{{u(5), q, q}, f.one()});
    return ProductFamily<F>(f, {6, 6, 6}, ts);
}

inline std::vector<std::string> fixture_names() {
    return {"identity", "example_8_1", "bound_four", "bound_five", "ex_independent"};
}

template <class F>
ProductFamily<F> make_fixture(const F& f, const std::string& name, std::size_t n = 3, std::size_t m = 3) {
    if (name == "identity") return fixture_identity(f, n, m);
    if (name == "example_8_1") return fixture_example_8_1(f);
    if (name == "bound_four") return fixture_bound_four(f);
    if (name == "bound_five") return fixture_bound_five(f);
    if (name == "ex_independent") return fixture_ex_independent(f);
    throw std::invalid_argument("make_fixture: unknown fixture '" + name + "'");
}

/// Recomputes the documented properties of a named fixture; throws on any
/// mismatch.
template <class F>
void fixture_selfcheck(const F& f, const std::string& name, const ProductFamily<F>& fam) {
    auto expect = [&](bool ok, const char* what) {
        if (!ok) throw std::logic_error("fixture_selfcheck(" + name + "): " + what);
    };
    if (name == "example_8_1" || name == "bound_five") {
        auto ks = k_rank_profile(fam).per_mode;
        auto ds = mode_span_dims(fam);
        expect(ks == std::vector<std::size_t>({2, 2, 2}), "k-ranks must be (2,2,2)");
        expect(ds == std::vector<std::size_t>({4, 4, 4}), "spans must be (4,4,4)");
        expect(check_kgen(fam).status == Status::Certified, "generalized criterion must certify");
        expect(check_kruskal(fam).status == Status::HypothesisFails, "Kruskal hypothesis must fail");
        expect(dls_threshold(fam), "must sit in the DLS-inapplicable regime");
    } else if (name == "bound_four") {
        expect(tensor_rank_lb_mu(fam).lower_bound == 4, "mu bound must be 4");
        expect(flattening_rank_max(f, family_sum(fam), fam.mode_dims) == 3, "flattening bound must be 3");
    } else if (name == "ex_independent") {
        expect(!tensor_rank_lb_mu(fam).applicable, "balance condition must fail");
    } else if (name == "identity") {
        auto ks = k_rank_profile(fam).per_mode;
        for (auto k : ks) expect(k == fam.n(), "identity k-ranks equal n");
    } else {
        throw std::invalid_argument("fixture_selfcheck: unknown fixture '" + name + "'");
    }
}

}  // namespace tensorcert

#endif
