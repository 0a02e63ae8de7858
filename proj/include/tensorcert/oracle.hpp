#ifndef TENSORCERT_ORACLE_HPP
#define TENSORCERT_ORACLE_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "tensorcert/criteria.hpp"
#include "tensorcert/matroid.hpp"
#include "tensorcert/tensor.hpp"

namespace tensorcert {
namespace oracle {

using GF = PrimeField;
using GFVec = std::vector<std::uint64_t>;

/// Explicit search budget. Enumeration nodes are counted against
/// max_candidates and overruns raise budget_exceeded; there is no silent
/// truncation.
struct SearchBudget {
    std::uint64_t max_candidates = 4'000'000;
    std::size_t max_rank = 8;
    std::optional<double> time_limit_seconds;
};

class BudgetMeter {
  public:
    explicit BudgetMeter(const SearchBudget& b) : b_(&b), start_(std::chrono::steady_clock::now()) {}

    void charge(std::uint64_t k = 1) {
        nodes_ += k;
        if (nodes_ > b_->max_candidates)
            throw budget_exceeded("oracle: enumeration exceeded max_candidates = " + std::to_string(b_->max_candidates));
        if (b_->time_limit_seconds && (nodes_ & 0xfff) == 0) {
            double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (sec > *b_->time_limit_seconds) throw budget_exceeded("oracle: time limit exceeded");
        }
    }
    std::uint64_t used() const { return nodes_; }

  private:
    const SearchBudget* b_;
    std::uint64_t nodes_ = 0;
    std::chrono::steady_clock::time_point start_;
};

/// Canonical projective representatives of F^d \ {0} (first nonzero entry 1):
/// pivot position ascending, then the trailing digits in lexicographic order.
inline std::vector<GFVec> projective_points(const GF& f, std::size_t d) {
    std::uint64_t p = f.modulus();
    std::vector<GFVec> pts;
    for (std::size_t lead = 0; lead < d; ++lead) {
        std::size_t tail = d - lead - 1;
        GFVec v(d, 0);
        v[lead] = 1;
        std::vector<std::uint64_t> digits(tail, 0);
        while (true) {
            for (std::size_t i = 0; i < tail; ++i) v[lead + 1 + i] = digits[i];
            pts.push_back(v);
            bool done = true;
            for (std::size_t i = tail; i-- > 0;) {
                if (++digits[i] < p) {
                    done = false;
                    break;
                }
                digits[i] = 0;
            }
            if (done) break;
        }
    }
    return pts;
}

inline std::uint64_t projective_count(const GF& f, std::size_t d) {
    std::uint64_t p = f.modulus(), num = 1;
    for (std::size_t i = 0; i < d; ++i) num *= p;
    return (num - 1) / (p - 1);
}

/// One representative per projective class of product tensors, all mode
/// combinations, coefficient 1.
inline std::vector<ProductTensor<GF>> enumerate_product_directions(const GF& f, const std::vector<std::size_t>& mode_dims,
                                                                   const SearchBudget& budget = {}) {
    std::uint64_t count = 1;
    for (auto d : mode_dims) {
        count *= projective_count(f, d);
        if (count > budget.max_candidates)
            throw budget_exceeded("enumerate_product_directions: " + std::to_string(count) + "+ directions exceed the budget");
    }
    std::vector<std::vector<GFVec>> per_mode;
    for (auto d : mode_dims) per_mode.push_back(projective_points(f, d));
    std::vector<ProductTensor<GF>> out;
    out.reserve(count);
    std::vector<std::size_t> idx(mode_dims.size(), 0);
    while (true) {
        ProductTensor<GF> t;
        t.coeff = 1;
        for (std::size_t j = 0; j < mode_dims.size(); ++j) t.factors.push_back(per_mode[j][idx[j]]);
        out.push_back(std::move(t));
        std::size_t j = mode_dims.size();
        while (j > 0) {
            --j;
            if (++idx[j] < per_mode[j].size()) break;
            idx[j] = 0;
            if (j == 0) return out;
        }
    }
}

namespace detail {

// Extracts v as a single weighted product term over modes j0.. if possible.
// Factors come out in canonical (leading-one) form.
inline std::optional<ProductTensor<GF>> as_single_term(const GF& f, const GFVec& v, const std::vector<std::size_t>& dims,
                                                       std::size_t j0) {
    std::size_t total = 1;
    for (std::size_t j = j0; j < dims.size(); ++j) total *= dims[j];
    std::size_t star = total;
    for (std::size_t i = 0; i < total; ++i)
        if (v[i] != 0) { star = i; break; }
    if (star == total) return std::nullopt;
    std::size_t m = dims.size() - j0;
    std::vector<std::size_t> strides(m, 1);
    for (std::size_t j = m; j-- > 1;) strides[j - 1] = strides[j] * dims[j0 + j];
    ProductTensor<GF> t;
    t.factors.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t dj = dims[j0 + j];
        std::size_t base = star - ((star / strides[j]) % dj) * strides[j];
        GFVec fac(dj);
        for (std::size_t i = 0; i < dj; ++i) fac[i] = v[base + i * strides[j]];
        t.factors[j] = std::move(fac);
    }
    t.coeff = 1;
    t = canonical_tensor(f, t);
    // coefficient so the assembled candidate matches at the leading slot
    GFVec probe = kron_vec(f, t.factors);
    if (probe[star] == 0) return std::nullopt;
    t.coeff = f.div(v[star], probe[star]);
    for (std::size_t i = 0; i < total; ++i)
        if (f.mul(t.coeff, probe[i]) != v[i]) return std::nullopt;
    return t;
}

}  // namespace detail

/// Complete enumeration of decompositions over GF(p). Solutions are
/// collapsed-canonical: pairwise non-parallel weighted product terms (any
/// decomposition with parallel terms collapses to a strictly shorter one, so
/// these represent all decompositions up to parallel splitting).
class DecompositionSearch {
  public:
    using Term = ProductTensor<GF>;
    using Solution = std::vector<Term>;
    // Sink returns true to stop the whole search.
    using Sink = std::function<bool(Solution&&)>;

    DecompositionSearch(const GF& f, std::vector<std::size_t> dims, const SearchBudget& budget)
        : f_(f), orig_dims_(std::move(dims)), meter_(budget) {
        // Modes are processed in descending-dimension order: grouping by the
        // largest mode first keeps the per-class linear systems full rank and
        // away from the expensive kernel fallback.
        perm_.resize(orig_dims_.size());
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        std::stable_sort(perm_.begin(), perm_.end(), [&](std::size_t a, std::size_t b) { return orig_dims_[a] > orig_dims_[b]; });
        for (auto j : perm_) dims_.push_back(orig_dims_[j]);
        for (auto d : dims_) points_.push_back(projective_points(f_, d));
        tail_total_.assign(dims_.size() + 1, 1);
        for (std::size_t j = dims_.size(); j-- > 0;) tail_total_[j] = tail_total_[j + 1] * dims_[j];
        // coordinate relabeling between the original and permuted layouts
        std::size_t total = tail_total_[0];
        index_map_.resize(total);
        std::vector<std::size_t> orig_stride(orig_dims_.size(), 1);
        for (std::size_t j = orig_dims_.size(); j-- > 1;) orig_stride[j - 1] = orig_stride[j] * orig_dims_[j];
        for (std::size_t i = 0; i < total; ++i) {
            std::size_t out = 0;
            for (std::size_t k = 0; k < perm_.size(); ++k) {
                std::size_t digit = (i / orig_stride[perm_[k]]) % orig_dims_[perm_[k]];
                out = out * dims_[k] + digit;
            }
            index_map_[i] = out;
        }
    }

    /// Enumerate decompositions of v into exactly t pairwise non-parallel
    /// terms. Returns true if the sink stopped the search.
    bool enumerate_exact(const GFVec& v, std::size_t t, const Sink& sink) {
        GFVec w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[index_map_[i]] = v[i];
        return rec(0, w, t, [&](Solution&& s) {
            for (auto& term : s) {
                std::vector<GFVec> orig(term.factors.size());
                for (std::size_t k = 0; k < perm_.size(); ++k) orig[perm_[k]] = std::move(term.factors[k]);
                term.factors = std::move(orig);
            }
            return sink(std::move(s));
        });
    }

    std::uint64_t nodes_used() const { return meter_.used(); }

  private:
    const GF f_;
    std::vector<std::size_t> orig_dims_;
    std::vector<std::size_t> dims_;      // permuted, descending
    std::vector<std::size_t> perm_;      // dims_[k] == orig_dims_[perm_[k]]
    std::vector<std::size_t> index_map_;
    std::vector<std::vector<GFVec>> points_;
    std::vector<std::size_t> tail_total_;  // product of dims from mode j on
    BudgetMeter meter_;

    bool rec(std::size_t j0, const GFVec& v, std::size_t t, const Sink& sink) {
        meter_.charge();
        bool zero = true;
        for (auto x : v)
            if (x != 0) { zero = false; break; }
        if (t == 0) {
            if (!zero) return false;
            Solution empty;
            return sink(std::move(empty));
        }
        if (t == 1) {
            auto one = detail::as_single_term(f_, v, dims_, j0);
            if (!one) return false;
            Solution s;
            s.push_back(std::move(*one));
            return sink(std::move(s));
        }
        if (j0 + 1 == dims_.size()) return vector_case(j0, v, t, sink);
        // rank cut: t product terms cannot produce a flattening rank above t
        if (!zero) {
            std::vector<std::size_t> sub(dims_.begin() + j0, dims_.end());
            for (std::size_t jj = 0; jj < sub.size(); ++jj)
                if (flattening_rank(f_, v, sub, jj) > t) return false;
        }
        return grouped_case(j0, v, t, sink);
    }

    // Single remaining mode: choose t distinct projective points and solve
    // for coefficients; all coefficients must be nonzero.
    bool vector_case(std::size_t j0, const GFVec& v, std::size_t t, const Sink& sink) {
        const auto& pts = points_[j0];
        if (t > pts.size()) return false;
        std::size_t d = dims_[j0];
        return for_each_combination(pts.size(), t, [&](const IndexSet& sel) -> bool {
            meter_.charge();
            Matrix<GF> u = zero_matrix(f_, d, t);
            for (std::size_t c = 0; c < t; ++c)
                for (std::size_t i = 0; i < d; ++i) u.at(i, c) = pts[sel[c]][i];
            auto sol = solve_linear(f_, u, v);
            if (!sol.consistent) return false;
            std::size_t nu = sol.nullspace.size();
            std::uint64_t combos = 1;
            for (std::size_t i = 0; i < nu; ++i) combos *= f_.modulus();
            std::vector<std::uint64_t> mult(nu, 0);
            for (std::uint64_t c = 0; c < combos; ++c) {
                meter_.charge();
                GFVec coeffs = sol.particular;
                for (std::size_t i = 0; i < nu; ++i)
                    if (mult[i] != 0)
                        for (std::size_t k = 0; k < t; ++k)
                            coeffs[k] = f_.add(coeffs[k], f_.mul(mult[i], sol.nullspace[i][k]));
                bool all_nonzero = true;
                for (auto x : coeffs)
                    if (x == 0) { all_nonzero = false; break; }
                if (all_nonzero) {
                    Solution s;
                    for (std::size_t k = 0; k < t; ++k) {
                        Term term;
                        term.factors.push_back(pts[sel[k]]);
                        term.coeff = coeffs[k];
                        s.push_back(std::move(term));
                    }
                    if (sink(std::move(s))) return true;
                }
                // advance odometer over nullspace multipliers
                for (std::size_t i = nu; i-- > 0;) {
                    if (++mult[i] < f_.modulus()) break;
                    mult[i] = 0;
                }
            }
            return false;
        });
    }

    // Group terms by their mode-j0 direction, solve the per-class slices, and
    // recurse on the remaining modes.
    bool grouped_case(std::size_t j0, const GFVec& v, std::size_t t, const Sink& sink) {
        const auto& pts = points_[j0];
        std::size_t rest = tail_total_[j0 + 1];
        std::vector<std::size_t> choice(t, 0);
        // nondecreasing index tuples = multisets of mode-j0 directions
        std::function<bool(std::size_t, std::size_t)> iterate = [&](std::size_t pos, std::size_t lo) -> bool {
            if (pos == t) return handle_multiset(j0, v, rest, choice, sink);
            for (std::size_t i = lo; i < pts.size(); ++i) {
                choice[pos] = i;
                if (iterate(pos + 1, i)) return true;
            }
            return false;
        };
        return iterate(0, 0);
    }

    bool handle_multiset(std::size_t j0, const GFVec& v, std::size_t rest, const std::vector<std::size_t>& choice,
                         const Sink& sink) {
        meter_.charge();
        const auto& pts = points_[j0];
        std::size_t d = dims_[j0];
        // classes: distinct directions with multiplicities
        std::vector<std::size_t> cls_pt, cls_mult;
        for (std::size_t i = 0; i < choice.size(); ++i) {
            if (!cls_pt.empty() && cls_pt.back() == choice[i]) {
                ++cls_mult.back();
            } else {
                cls_pt.push_back(choice[i]);
                cls_mult.push_back(1);
            }
        }
        std::size_t g = cls_pt.size();
        // RREF of [U | I] with U the d x g matrix of class directions.
        Matrix<GF> aug = zero_matrix(f_, d, g + d);
        for (std::size_t c = 0; c < g; ++c)
            for (std::size_t i = 0; i < d; ++i) aug.at(i, c) = pts[cls_pt[c]][i];
        for (std::size_t i = 0; i < d; ++i) aug.at(i, g + i) = 1;
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < g && r < d; ++c) {
            std::size_t piv = r;
            while (piv < d && aug.at(piv, c) == 0) ++piv;
            if (piv == d) continue;
            if (piv != r)
                for (std::size_t j = 0; j < g + d; ++j) std::swap(aug.at(r, j), aug.at(piv, j));
            auto pinv = f_.inv(aug.at(r, c));
            for (std::size_t j = 0; j < g + d; ++j) aug.at(r, j) = f_.mul(pinv, aug.at(r, j));
            for (std::size_t i = 0; i < d; ++i) {
                if (i == r || aug.at(i, c) == 0) continue;
                auto tt = aug.at(i, c);
                for (std::size_t j = 0; j < g + d; ++j) aug.at(i, j) = f_.sub(aug.at(i, j), f_.mul(tt, aug.at(r, j)));
            }
            pivots.push_back(c);
            ++r;
        }
        // consistency of every slice + particular solutions
        std::vector<GFVec> n0(g, GFVec(rest, 0));
        for (std::size_t rho = 0; rho < rest; ++rho) {
            GFVec b(d);
            for (std::size_t i = 0; i < d; ++i) b[i] = v[i * rest + rho];
            for (std::size_t row = r; row < d; ++row) {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < d; ++i) acc = f_.add(acc, f_.mul(aug.at(row, g + i), b[i]));
                if (acc != 0) return false;  // slice not in the column span
            }
            for (std::size_t row = 0; row < r; ++row) {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < d; ++i) acc = f_.add(acc, f_.mul(aug.at(row, g + i), b[i]));
                n0[pivots[row]][rho] = acc;
            }
        }
        // kernel basis of U
        std::vector<bool> is_piv(g, false);
        for (auto c : pivots) is_piv[c] = true;
        std::vector<GFVec> kernel;
        for (std::size_t c = 0; c < g; ++c) {
            if (is_piv[c]) continue;
            GFVec k(g, 0);
            k[c] = 1;
            for (std::size_t row = 0; row < r; ++row) k[pivots[row]] = f_.neg(aug.at(row, c));
            kernel.push_back(std::move(k));
        }

        if (kernel.empty()) return resolve_classes(j0, rest, cls_pt, cls_mult, n0, sink);

        if (kernel.size() == 1) {
            const GFVec& gamma = kernel[0];
            std::size_t pivot_class = g;
            for (std::size_t c = 0; c < g; ++c)
                if (cls_mult[c] == 1 && gamma[c] != 0) { pivot_class = c; break; }
            if (pivot_class < g) {
                return pin_pivot_class(j0, rest, cls_pt, cls_mult, n0, gamma, pivot_class, sink);
            }
        }
        // generic fallback: enumerate the kernel-parameter space directly
        std::uint64_t combos = 1;
        for (std::size_t i = 0; i < kernel.size() * rest; ++i) {
            combos *= f_.modulus();
            if (combos > 262144)
                throw budget_exceeded("oracle: kernel parameter space too large for exhaustive resolution");
        }
        std::vector<std::uint64_t> digits(kernel.size() * rest, 0);
        for (std::uint64_t c = 0; c < combos; ++c) {
            meter_.charge();
            std::vector<GFVec> n(g);
            for (std::size_t cidx = 0; cidx < g; ++cidx) {
                n[cidx] = n0[cidx];
                for (std::size_t kk = 0; kk < kernel.size(); ++kk) {
                    if (kernel[kk][cidx] == 0) continue;
                    for (std::size_t rho = 0; rho < rest; ++rho)
                        n[cidx][rho] = f_.add(n[cidx][rho], f_.mul(kernel[kk][cidx], digits[kk * rest + rho]));
                }
            }
            if (resolve_classes(j0, rest, cls_pt, cls_mult, n, sink)) return true;
            for (std::size_t i = digits.size(); i-- > 0;) {
                if (++digits[i] < f_.modulus()) break;
                digits[i] = 0;
            }
        }
        return false;
    }

    // Kernel dimension one with a singleton pivot class: that class's slice
    // must itself be a weighted product term w, which pins the kernel
    // parameter. Enumerate all candidate w.
    bool pin_pivot_class(std::size_t j0, std::size_t rest, const std::vector<std::size_t>& cls_pt,
                         const std::vector<std::size_t>& cls_mult, const std::vector<GFVec>& n0, const GFVec& gamma,
                         std::size_t pivot_class, const Sink& sink) {
        std::size_t g = cls_pt.size();
        std::uint64_t ginv = f_.inv(gamma[pivot_class]);
        // iterate product directions of the remaining modes
        std::size_t m_rest = dims_.size() - j0 - 1;
        std::vector<std::size_t> idx(m_rest, 0);
        while (true) {
            std::vector<GFVec> facs(m_rest);
            for (std::size_t j = 0; j < m_rest; ++j) facs[j] = points_[j0 + 1 + j][idx[j]];
            GFVec dir = kron_vec(f_, facs);
            for (std::uint64_t coeff = 1; coeff < f_.modulus(); ++coeff) {
                meter_.charge();
                // lambda = (w - n0[pivot]) / gamma[pivot]
                GFVec lambda(rest);
                for (std::size_t rho = 0; rho < rest; ++rho)
                    lambda[rho] = f_.mul(f_.sub(f_.mul(coeff, dir[rho]), n0[pivot_class][rho]), ginv);
                std::vector<GFVec> n(g);
                for (std::size_t c = 0; c < g; ++c) {
                    n[c] = n0[c];
                    if (gamma[c] != 0)
                        for (std::size_t rho = 0; rho < rest; ++rho)
                            n[c][rho] = f_.add(n[c][rho], f_.mul(gamma[c], lambda[rho]));
                }
                Term pinned;
                pinned.factors = facs;
                pinned.coeff = coeff;
                if (resolve_classes(j0, rest, cls_pt, cls_mult, n, sink, pivot_class, &pinned)) return true;
            }
            bool done = true;
            for (std::size_t j = m_rest; j-- > 0;) {
                if (++idx[j] < points_[j0 + 1 + j].size()) {
                    done = false;
                    break;
                }
                idx[j] = 0;
            }
            if (done) return false;
        }
    }

    // All class slices are fixed; recurse per class and combine.
    bool resolve_classes(std::size_t j0, std::size_t rest, const std::vector<std::size_t>& cls_pt,
                         const std::vector<std::size_t>& cls_mult, const std::vector<GFVec>& n, const Sink& sink,
                         std::size_t pinned_class = static_cast<std::size_t>(-1), const Term* pinned = nullptr) {
        (void)rest;
        std::size_t g = cls_pt.size();
        std::vector<std::vector<Solution>> lists(g);
        // cheap classes first so infeasible multisets die early
        std::vector<std::size_t> order(g);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cls_mult[a] < cls_mult[b]; });
        for (auto c : order) {
            if (c == pinned_class) {
                lists[c].push_back(Solution{*pinned});
                continue;
            }
            rec(j0 + 1, n[c], cls_mult[c], [&](Solution&& s) {
                lists[c].push_back(std::move(s));
                return false;
            });
            if (lists[c].empty()) return false;
        }
        // Cartesian product of the class solution lists
        std::vector<std::size_t> pick(g, 0);
        const auto& pts = points_[j0];
        while (true) {
            Solution full;
            for (std::size_t c = 0; c < g; ++c) {
                for (const Term& rt : lists[c][pick[c]]) {
                    Term t;
                    t.factors.reserve(rt.factors.size() + 1);
                    t.factors.push_back(pts[cls_pt[c]]);
                    for (const auto& fct : rt.factors) t.factors.push_back(fct);
                    t.coeff = rt.coeff;
                    full.push_back(std::move(t));
                }
            }
            if (sink(std::move(full))) return true;
            std::size_t c = g;
            while (c > 0) {
                --c;
                if (++pick[c] < lists[c].size()) break;
                pick[c] = 0;
                if (c == 0) return false;
            }
        }
    }
};

/// All decompositions of a target into at most r pairwise non-parallel
/// weighted product terms, canonicalized and deduplicated.
struct DecompositionSet {
    GFVec target;
    std::size_t r = 0;
    std::vector<std::vector<ProductTensor<GF>>> solutions;
    std::uint64_t nodes_used = 0;
};

inline std::vector<ProductTensor<GF>> canonical_solution(const GF& f, std::vector<ProductTensor<GF>> terms) {
    for (auto& t : terms) t = canonical_tensor(f, t);
    std::sort(terms.begin(), terms.end(),
              [&](const ProductTensor<GF>& a, const ProductTensor<GF>& b) { return canonical_tensor_less(f, a, b); });
    return terms;
}

inline DecompositionSet all_decompositions(const GF& f, const GFVec& v, const std::vector<std::size_t>& mode_dims,
                                           std::size_t r, const SearchBudget& budget = {}) {
    DecompositionSearch search(f, mode_dims, budget);
    DecompositionSet out;
    out.target = v;
    out.r = r;
    for (std::size_t t = 0; t <= r; ++t) {
        search.enumerate_exact(v, t, [&](DecompositionSearch::Solution&& s) {
            out.solutions.push_back(canonical_solution(f, std::move(s)));
            return false;
        });
    }
    std::sort(out.solutions.begin(), out.solutions.end(),
              [&](const std::vector<ProductTensor<GF>>& a, const std::vector<ProductTensor<GF>>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  for (std::size_t i = 0; i < a.size(); ++i) {
                      if (canonical_tensor_less(f, a[i], b[i])) return true;
                      if (canonical_tensor_less(f, b[i], a[i])) return false;
                  }
                  return false;
              });
    out.solutions.erase(std::unique(out.solutions.begin(), out.solutions.end(),
                                    [&](const auto& a, const auto& b) {
                                        if (a.size() != b.size()) return false;
                                        for (std::size_t i = 0; i < a.size(); ++i)
                                            if (!tensor_equal(f, a[i], b[i])) return false;
                                        return true;
                                    }),
                        out.solutions.end());
    out.nodes_used = search.nodes_used();
    return out;
}

/// Exact tensor rank by exhaustive search of increasing sizes. m = 2 reduces
/// to matrix rank. On budget exhaustion only the lower bound established so
/// far is reported.
struct RankReport {
    std::optional<std::size_t> exact;
    std::size_t lower_bound = 0;
    std::uint64_t nodes_used = 0;
};

inline RankReport brute_force_rank(const GF& f, const GFVec& v, const std::vector<std::size_t>& mode_dims,
                                   const SearchBudget& budget = {}) {
    RankReport rep;
    bool zero = true;
    for (auto x : v)
        if (x != 0) { zero = false; break; }
    if (zero) {
        rep.exact = 0;
        rep.lower_bound = 0;
        return rep;
    }
    if (mode_dims.size() == 2) {
        Matrix<GF> m = zero_matrix(f, mode_dims[0], mode_dims[1]);
        for (std::size_t i = 0; i < mode_dims[0]; ++i)
            for (std::size_t j = 0; j < mode_dims[1]; ++j) m.at(i, j) = v[i * mode_dims[1] + j];
        rep.exact = rank(f, m);
        rep.lower_bound = *rep.exact;
        return rep;
    }
    DecompositionSearch search(f, mode_dims, budget);
    for (std::size_t t = 1; t <= budget.max_rank; ++t) {
        rep.lower_bound = t;
        bool found = false;
        try {
            found = search.enumerate_exact(v, t, [&](DecompositionSearch::Solution&&) { return true; });
        } catch (const budget_exceeded&) {
            rep.nodes_used = search.nodes_used();
            return rep;  // exact unknown; lower_bound holds (sizes < t exhausted)
        }
        if (found) {
            rep.exact = t;
            rep.nodes_used = search.nodes_used();
            return rep;
        }
    }
    rep.lower_bound = budget.max_rank + 1;
    rep.nodes_used = search.nodes_used();
    return rep;
}

/// Uniqueness by exhaustion: does the family sum admit any decomposition
/// into at most r_max terms other than the family itself?
struct UniquenessReport {
    bool unique = false;
    bool family_found = false;  // sanity: the family itself shows up
    std::optional<std::vector<ProductTensor<GF>>> other;
    std::uint64_t nodes_used = 0;
};

inline UniquenessReport uniqueness_bruteforce(const ProductFamily<GF>& fam, std::size_t r_max,
                                              const SearchBudget& budget = {}) {
    const GF& f = fam.field;
    UniquenessReport rep;
    GFVec v = family_sum(fam);
    auto base = canonical_solution(f, fam.tensors);
    auto equal_base = [&](const std::vector<ProductTensor<GF>>& s) {
        if (s.size() != base.size()) return false;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!tensor_equal(f, s[i], base[i])) return false;
        return true;
    };
    DecompositionSearch search(f, fam.mode_dims, budget);
    bool violated = false;
    for (std::size_t t = 0; t <= r_max && !violated; ++t) {
        search.enumerate_exact(v, t, [&](DecompositionSearch::Solution&& s) {
            auto canon = canonical_solution(f, std::move(s));
            if (equal_base(canon)) {
                rep.family_found = true;
                return false;
            }
            rep.other = std::move(canon);
            violated = true;
            return true;
        });
    }
    rep.unique = !violated;
    rep.nodes_used = search.nodes_used();
    return rep;
}

/// Symmetric-decomposition uniqueness by exhaustion over symmetric product
/// directions, honoring the k-rank >= 2 exemption verbatim: candidate
/// decompositions whose base vectors have k-rank 1 (a parallel pair, or a
/// single term) never count as violations.
inline UniquenessReport symmetric_uniqueness_bruteforce(const SymmetricFamily<GF>& sym, std::size_t r_max,
                                                        const SearchBudget& budget = {}) {
    const GF& f = sym.field;
    BudgetMeter meter(budget);
    UniquenessReport rep;
    auto lifted = symmetric_lift(sym);
    GFVec v = family_sum(lifted);
    auto base = canonical_solution(f, lifted.tensors);
    auto pts = projective_points(f, sym.base_dim());
    std::size_t m = sym.power;

    std::vector<GFVec> powers;  // assembled u^{(x)m} per projective point
    powers.reserve(pts.size());
    for (const auto& u : pts) powers.push_back(kron_vec(f, std::vector<GFVec>(m, u)));

    bool violated = false;
    for (std::size_t t = 2; t <= r_max && !violated; ++t) {
        if (t > pts.size()) break;
        for_each_combination(pts.size(), t, [&](const IndexSet& sel) -> bool {
            meter.charge();
            Matrix<GF> u = zero_matrix(f, v.size(), t);
            for (std::size_t c = 0; c < t; ++c)
                for (std::size_t i = 0; i < v.size(); ++i) u.at(i, c) = powers[sel[c]][i];
            auto sol = solve_linear(f, u, v);
            if (!sol.consistent) return false;
            std::uint64_t combos = 1;
            for (std::size_t i = 0; i < sol.nullspace.size(); ++i) combos *= f.modulus();
            std::vector<std::uint64_t> mult(sol.nullspace.size(), 0);
            for (std::uint64_t c = 0; c < combos; ++c) {
                meter.charge();
                GFVec coeffs = sol.particular;
                for (std::size_t i = 0; i < sol.nullspace.size(); ++i)
                    if (mult[i] != 0)
                        for (std::size_t k = 0; k < t; ++k) coeffs[k] = f.add(coeffs[k], f.mul(mult[i], sol.nullspace[i][k]));
                bool all_nonzero = true;
                for (auto x : coeffs)
                    if (x == 0) { all_nonzero = false; break; }
                if (all_nonzero) {
                    std::vector<ProductTensor<GF>> cand;
                    for (std::size_t k = 0; k < t; ++k) {
                        ProductTensor<GF> term;
                        term.factors.assign(m, pts[sel[k]]);
                        term.coeff = coeffs[k];
                        cand.push_back(std::move(term));
                    }
                    cand = canonical_solution(f, std::move(cand));
                    bool same = cand.size() == base.size();
                    if (same)
                        for (std::size_t i = 0; i < cand.size(); ++i)
                            if (!tensor_equal(f, cand[i], base[i])) { same = false; break; }
                    if (same) {
                        rep.family_found = true;
                    } else {
                        rep.other = std::move(cand);
                        violated = true;
                        return true;
                    }
                }
                for (std::size_t i = mult.size(); i-- > 0;) {
                    if (++mult[i] < f.modulus()) break;
                    mult[i] = 0;
                }
            }
            return false;
        });
    }
    rep.unique = !violated;
    rep.nodes_used = meter.used();
    return rep;
}

/// Condition U by exhaustion over all coefficient vectors alpha in GF(p)^n.
struct ConditionUReport {
    bool holds = false;
    std::optional<GFVec> violating_alpha;
    std::uint64_t nodes_used = 0;
};

inline ConditionUReport condition_U_bruteforce(const ProductFamily<GF>& fam, const SearchBudget& budget = {}) {
    if (fam.m() != 3) throw std::invalid_argument("condition_U_bruteforce: needs exactly 3 modes");
    const GF& f = fam.field;
    ConditionUReport rep;
    std::size_t n = fam.n();
    if (k_rank(f, mode_vectors(fam, 0)) < 2) {
        rep.holds = false;
        return rep;
    }
    long long d1 = static_cast<long long>(span_dim(f, mode_vectors(fam, 0)));
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= f.modulus();
        if (total > budget.max_candidates)
            throw budget_exceeded("condition_U_bruteforce: p^n exceeds the budget");
    }
    BudgetMeter meter(budget);
    std::size_t d2 = fam.mode_dims[1], d3 = fam.mode_dims[2];
    GFVec alpha(n, 0);
    for (std::uint64_t c = 1; c < total; ++c) {
        // advance odometer (alpha enumerates GF(p)^n \ {0})
        for (std::size_t i = n; i-- > 0;) {
            if (++alpha[i] < f.modulus()) break;
            alpha[i] = 0;
        }
        meter.charge();
        std::size_t omega = 0;
        for (auto x : alpha)
            if (x != 0) ++omega;
        Matrix<GF> m = zero_matrix(f, d2, d3);
        for (std::size_t a = 0; a < n; ++a) {
            if (alpha[a] == 0) continue;
            const auto& y = fam.tensors[a].factors[1];
            const auto& z = fam.tensors[a].factors[2];
            auto w = f.mul(alpha[a], fam.tensors[a].coeff);
            for (std::size_t i = 0; i < d2; ++i) {
                if (y[i] == 0) continue;
                auto wy = f.mul(w, y[i]);
                for (std::size_t j = 0; j < d3; ++j) m.at(i, j) = f.add(m.at(i, j), f.mul(wy, z[j]));
            }
        }
        long long need = std::min<long long>(static_cast<long long>(omega), static_cast<long long>(n) - d1 + 2);
        if (static_cast<long long>(rank(f, m)) < need) {
            rep.violating_alpha = alpha;
            rep.nodes_used = meter.used();
            return rep;
        }
    }
    rep.holds = true;
    rep.nodes_used = meter.used();
    return rep;
}

/// Quantified sub-condition 3c of the DLS synthesis, checked by exhaustion:
/// with Pi any fixed map whose kernel is exactly span{x_{a,1} : a in S} (all
/// such maps give the same verdict), no alpha with omega(alpha) >= 2 may make
/// sum_a alpha_a (Pi x_{a,1}) (x) x_{a,3} expressible as (Pi x_{b,1}) (x) z.
struct Condition3cReport {
    bool holds = false;
    std::optional<GFVec> violating_alpha;
    std::uint64_t nodes_used = 0;
};

inline Condition3cReport condition_3c_bruteforce(const ProductFamily<GF>& fam, const IndexSet& S,
                                                 const SearchBudget& budget = {}) {
    if (fam.m() != 3) throw std::invalid_argument("condition_3c_bruteforce: needs exactly 3 modes");
    const GF& f = fam.field;
    std::size_t n = fam.n();
    std::size_t d1 = fam.mode_dims[0], d3 = fam.mode_dims[2];
    // Pi = reduction modulo an echelon basis of span{x_{a,1} : a in S}; its
    // kernel is exactly that span, and any other map with the same kernel
    // differs by an injective factor, so the verdict is unchanged.
    std::vector<GFVec> span_rows;
    {
        SpanSolver<GF> tmp(f, d1);
        for (auto a : S) {
            if (a >= n) throw std::invalid_argument("condition_3c_bruteforce: subset index out of range");
            if (tmp.push(fam.tensors[a].factors[0])) span_rows.push_back(fam.tensors[a].factors[0]);
        }
    }
    IndexSet outside = complement_of(S, n);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < outside.size(); ++i) {
        total *= f.modulus();
        if (total > budget.max_candidates) throw budget_exceeded("condition_3c_bruteforce: p^(n-|S|) exceeds the budget");
    }
    Matrix<GF> ech = span_rows.empty() ? zero_matrix(f, 0, d1) : matrix_from_rows(f, span_rows);
    std::size_t er = 0;
    std::vector<std::size_t> epiv;
    for (std::size_t c = 0; c < d1 && er < ech.rows; ++c) {
        std::size_t piv = er;
        while (piv < ech.rows && ech.at(piv, c) == 0) ++piv;
        if (piv == ech.rows) continue;
        if (piv != er)
            for (std::size_t j = 0; j < d1; ++j) std::swap(ech.at(er, j), ech.at(piv, j));
        auto pinv = f.inv(ech.at(er, c));
        for (std::size_t j = 0; j < d1; ++j) ech.at(er, j) = f.mul(pinv, ech.at(er, j));
        for (std::size_t i = 0; i < ech.rows; ++i) {
            if (i == er || ech.at(i, c) == 0) continue;
            auto t = ech.at(i, c);
            for (std::size_t j = 0; j < d1; ++j) ech.at(i, j) = f.sub(ech.at(i, j), f.mul(t, ech.at(er, j)));
        }
        epiv.push_back(c);
        ++er;
    }
    auto reduce_vec = [&](const GFVec& x) {
        GFVec w = x;
        for (std::size_t rI = 0; rI < er; ++rI) {
            auto c = epiv[rI];
            if (w[c] == 0) continue;
            auto t = w[c];
            for (std::size_t j = 0; j < d1; ++j) w[j] = f.sub(w[j], f.mul(t, ech.at(rI, j)));
        }
        return w;
    };
    std::vector<GFVec> px(outside.size());
    for (std::size_t i = 0; i < outside.size(); ++i) px[i] = reduce_vec(fam.tensors[outside[i]].factors[0]);

    Condition3cReport rep;
    BudgetMeter meter(budget);
    GFVec alpha(outside.size(), 0);
    for (std::uint64_t c = 1; c < total; ++c) {
        for (std::size_t i = alpha.size(); i-- > 0;) {
            if (++alpha[i] < f.modulus()) break;
            alpha[i] = 0;
        }
        meter.charge();
        std::size_t omega = 0;
        for (auto x : alpha)
            if (x != 0) ++omega;
        if (omega < 2) continue;
        Matrix<GF> m = zero_matrix(f, d1, d3);
        for (std::size_t i = 0; i < outside.size(); ++i) {
            if (alpha[i] == 0) continue;
            auto w = f.mul(alpha[i], fam.tensors[outside[i]].coeff);
            const auto& z = fam.tensors[outside[i]].factors[2];
            for (std::size_t row = 0; row < d1; ++row) {
                if (px[i][row] == 0) continue;
                auto wr = f.mul(w, px[i][row]);
                for (std::size_t col = 0; col < d3; ++col) m.at(row, col) = f.add(m.at(row, col), f.mul(wr, z[col]));
            }
        }
        bool zero = true;
        for (const auto& x : m.a)
            if (x != 0) { zero = false; break; }
        bool expressible = false;
        if (zero) {
            expressible = true;  // z = 0 works for any b
        } else if (rank(f, m) == 1) {
            // column space generator
            GFVec colgen(d1, 0);
            for (std::size_t col = 0; col < d3 && vec_is_zero(f, colgen); ++col)
                for (std::size_t row = 0; row < d1; ++row) colgen[row] = m.at(row, col);
            for (std::size_t i = 0; i < outside.size() && !expressible; ++i) {
                if (vec_is_zero(f, px[i])) continue;
                // colgen parallel to px[i]?
                std::size_t lead = 0;
                while (lead < d1 && px[i][lead] == 0) ++lead;
                if (colgen[lead] == 0) continue;
                auto t = f.div(colgen[lead], px[i][lead]);
                bool par = true;
                for (std::size_t row = 0; row < d1; ++row)
                    if (colgen[row] != f.mul(t, px[i][row])) { par = false; break; }
                if (par) expressible = true;
            }
        }
        if (expressible) {
            rep.violating_alpha = alpha;
            rep.nodes_used = meter.used();
            return rep;
        }
    }
    rep.holds = true;
    rep.nodes_used = meter.used();
    return rep;
}

/// (s,l)-subpartition search between two decompositions of the same tensor.
struct SubpartitionWitness {
    std::vector<IndexSet> q_blocks;
    std::vector<IndexSet> r_blocks;
    std::size_t s = 0, l = 0;
};

struct SubpartitionReport {
    std::optional<SubpartitionWitness> witness;
    bool reducible = false;
    std::optional<std::pair<IndexSet, IndexSet>> reducing_pair;
    std::uint64_t nodes_used = 0;
};

template <class F>
SubpartitionReport subpartition_verify(const ProductFamily<F>& fx, const ProductFamily<F>& fy, std::size_t s,
                                       std::size_t l, const SearchBudget& budget = {}) {
    if (!(fx.field == fy.field) || fx.mode_dims != fy.mode_dims)
        throw std::invalid_argument("subpartition_verify: families live in different spaces");
    const F& f = fx.field;
    std::size_t n = fx.n(), r = fy.n();
    if (n + r > 16) throw budget_exceeded("subpartition_verify: exhaustive search capped at n + r <= 16");
    Vec<F> sx = family_sum(fx), sy = family_sum(fy);
    for (std::size_t i = 0; i < sx.size(); ++i)
        if (!f.eq(sx[i], sy[i])) throw std::invalid_argument("subpartition_verify: family sums differ");
    if (s < 1) throw std::invalid_argument("subpartition_verify: s must be positive");

    BudgetMeter meter(budget);
    auto xs = assembled_vectors(fx);
    auto ys = assembled_vectors(fy);
    std::size_t len = sx.size();
    auto subset_sum = [&](const std::vector<Vec<F>>& vv, const IndexSet& idx) {
        Vec<F> acc(len, f.zero());
        for (auto i : idx)
            for (std::size_t c = 0; c < len; ++c) acc[c] = f.add(acc[c], vv[i][c]);
        return acc;
    };

    SubpartitionReport rep;
    // reducibility scan: any |Q| > |R| with equal sums
    for_each_subset_sized(r, 0, r, [&](const IndexSet& R) -> bool {
        Vec<F> target = subset_sum(ys, R);
        return for_each_subset_sized(n, R.size() + 1, n, [&](const IndexSet& Q) -> bool {
            meter.charge();
            Vec<F> qs = subset_sum(xs, Q);
            bool eq = true;
            for (std::size_t c = 0; c < len; ++c)
                if (!f.eq(qs[c], target[c])) { eq = false; break; }
            if (eq) {
                rep.reducible = true;
                rep.reducing_pair = {Q, R};
                return true;
            }
            return false;
        });
    });

    // candidate blocks: Q of size 1..s, R of size 0..|Q| with equal sums
    struct Block {
        IndexSet q, r;
    };
    std::vector<Block> blocks;
    for_each_subset_sized(n, 1, std::min(s, n), [&](const IndexSet& Q) {
        Vec<F> qs = subset_sum(xs, Q);
        for_each_subset_sized(r, 0, Q.size(), [&](const IndexSet& R) {
            meter.charge();
            Vec<F> rs = subset_sum(ys, R);
            bool eq = true;
            for (std::size_t c = 0; c < len; ++c)
                if (!f.eq(qs[c], rs[c])) { eq = false; break; }
            if (eq) blocks.push_back(Block{Q, R});
        });
    });

    // choose l pairwise disjoint blocks (both sides disjoint)
    std::vector<std::size_t> chosen;
    std::function<bool(std::size_t, std::uint32_t, std::uint32_t)> dfs = [&](std::size_t start, std::uint32_t qused,
                                                                             std::uint32_t rused) -> bool {
        if (chosen.size() == l) return true;
        for (std::size_t i = start; i < blocks.size(); ++i) {
            meter.charge();
            std::uint32_t qm = mask_of(blocks[i].q), rm = mask_of(blocks[i].r);
            if ((qm & qused) || (rm & rused)) continue;
            chosen.push_back(i);
            if (dfs(i + 1, qused | qm, rused | rm)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (l == 0) throw std::invalid_argument("subpartition_verify: l must be positive");
    if (dfs(0, 0, 0)) {
        SubpartitionWitness w;
        w.s = s;
        w.l = l;
        for (auto i : chosen) {
            w.q_blocks.push_back(blocks[i].q);
            w.r_blocks.push_back(blocks[i].r);
        }
        rep.witness = w;
    }
    rep.nodes_used = meter.used();
    return rep;
}

/// First subset S (r_tilde <= |S| <= n-1, size then lex order) whose partial
/// sum has brute-force rank below r_tilde.
struct RankDeficientReport {
    std::optional<IndexSet> subset;
    std::uint64_t nodes_used = 0;
};

inline RankDeficientReport rank_deficient_subset_search(const ProductFamily<GF>& fam, std::size_t r_tilde,
                                                        const SearchBudget& budget = {}) {
    std::size_t n = fam.n();
    if (r_tilde < 1 || r_tilde > n - 1)
        throw std::invalid_argument("rank_deficient_subset_search: need 1 <= r_tilde <= n-1");
    const GF& f = fam.field;
    auto xs = assembled_vectors(fam);
    RankDeficientReport rep;
    std::uint64_t nodes = 0;
    for_each_subset_sized(n, r_tilde, n - 1, [&](const IndexSet& S) -> bool {
        GFVec acc(xs[0].size(), 0);
        for (auto i : S)
            for (std::size_t c = 0; c < acc.size(); ++c) acc[c] = f.add(acc[c], xs[i][c]);
        SearchBudget sub = budget;
        sub.max_rank = r_tilde;  // only need to distinguish < r_tilde
        auto rk = brute_force_rank(f, acc, fam.mode_dims, sub);
        nodes += rk.nodes_used;
        if (rk.exact && *rk.exact < r_tilde) {
            rep.subset = S;
            return true;
        }
        if (!rk.exact && rk.lower_bound < r_tilde)
            throw budget_exceeded("rank_deficient_subset_search: rank search inconclusive under budget");
        return false;
    });
    rep.nodes_used = nodes;
    return rep;
}

}  // namespace oracle
}  // namespace tensorcert

#endif
