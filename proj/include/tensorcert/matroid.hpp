#ifndef TENSORCERT_MATROID_HPP
#define TENSORCERT_MATROID_HPP

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tensorcert/tensor.hpp"

namespace tensorcert {

namespace detail {

template <class F>
void reject_zero_vectors(const F& f, const VectorList<F>& v, const char* where) {
    for (const auto& x : v.vecs)
        if (vec_is_zero(f, x)) throw std::invalid_argument(std::string(where) + ": zero vector");
}

// Rewrites the vectors in coordinates of a basis of their span. All rank and
// span queries are preserved, and subsequent subset scans run on vectors of
// length rank instead of the ambient dimension.
template <class F>
VectorList<F> compress(const F& f, const VectorList<F>& v) {
    SpanSolver<F> span(f, v.dim);
    std::vector<std::size_t> basis;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (span.push(v.vecs[i])) basis.push_back(i);
    std::size_t r = basis.size();
    if (r == v.dim) return v;
    SpanSolver<F> basis_only(f, v.dim);
    for (auto i : basis) basis_only.push(v.vecs[i]);
    std::vector<Vec<F>> out;
    out.reserve(v.size());
    for (const auto& x : v.vecs) {
        auto c = basis_only.coords(x);
        out.push_back(std::move(*c));
    }
    return VectorList<F>(r, out);
}

struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Index subsets T_1,...,T_t (0-based, each ascending, ordered by smallest
/// element) forming the connected-component partition.
using ComponentPartition = std::vector<IndexSet>;

/// Ordered circuits C_1,...,C_t of an ear decomposition.
using EarDecomposition = std::vector<IndexSet>;

/// Searches for a separator: a subset S with span(S) (+) span(S^c) spanning
/// everything. Returns the lexicographically smallest index set among
/// minimal-size separators, or nullopt iff the multiset is connected.
template <class F>
std::optional<IndexSet> separator_search(const F& f, const VectorList<F>& v) {
    std::size_t n = v.size();
    if (n < 2) throw std::invalid_argument("separator_search: need at least 2 vectors");
    detail::reject_zero_vectors(f, v, "separator_search");
    VectorList<F> w = detail::compress(f, v);
    std::size_t total = w.dim;  // compress makes span full-dimensional
    std::optional<IndexSet> found;
    for (std::size_t k = 1; k <= n / 2 && !found; ++k) {
        for_each_combination(n, k, [&](const IndexSet& s) -> bool {
            IndexSet c = complement_of(s, n);
            std::vector<Vec<F>> sv, cv;
            for (auto i : s) sv.push_back(w.vecs[i]);
            for (auto i : c) cv.push_back(w.vecs[i]);
            std::size_t ds = rank(f, matrix_from_rows(f, sv));
            std::size_t dc = rank(f, matrix_from_rows(f, cv));
            if (ds + dc == total) {
                found = s;
                return true;
            }
            return false;
        });
    }
    return found;
}

template <class F>
bool is_connected(const F& f, const VectorList<F>& v) {
    if (v.size() < 2) {
        detail::reject_zero_vectors(f, v, "is_connected");
        return true;
    }
    return !separator_search(f, v).has_value();
}

/// Reference implementation by recursive bipartition: split on any separator
/// and recurse on both sides. Exponential, but independent of any
/// matroid-theoretic shortcut; used as the verification fallback and as the
/// test oracle.
template <class F>
ComponentPartition exhaustive_components(const F& f, const VectorList<F>& v) {
    detail::reject_zero_vectors(f, v, "exhaustive_components");
    std::vector<IndexSet> out;
    struct Frame {
        VectorList<F> vecs;
        IndexSet idx;
    };
    std::vector<Frame> stack;
    IndexSet all(v.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    stack.push_back(Frame{v, all});
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.vecs.size() == 1) {
            out.push_back(fr.idx);
            continue;
        }
        auto sep = separator_search(f, fr.vecs);
        if (!sep) {
            out.push_back(fr.idx);
            continue;
        }
        IndexSet comp = complement_of(*sep, fr.vecs.size());
        auto pick = [&](const IndexSet& part) {
            Frame nf;
            nf.vecs.dim = fr.vecs.dim;
            for (auto i : part) {
                nf.vecs.vecs.push_back(fr.vecs.vecs[i]);
                nf.idx.push_back(fr.idx[i]);
            }
            return nf;
        };
        stack.push_back(pick(comp));
        stack.push_back(pick(*sep));
    }
    std::sort(out.begin(), out.end(), [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
    return out;
}

/// Connected components via fundamental circuits over a greedy basis, with a
/// built-in verification pass (direct-sum identity, and per-block
/// connectivity for blocks small enough to scan). Falls back to the
/// exhaustive recursion if verification fails.
template <class F>
ComponentPartition connected_components(const F& f, const VectorList<F>& v, std::size_t verify_block_cap = 12) {
    detail::reject_zero_vectors(f, v, "connected_components");
    std::size_t n = v.size();
    if (n == 1) return {IndexSet{0}};
    VectorList<F> w = detail::compress(f, v);
    SpanSolver<F> span(f, w.dim);
    for (std::size_t i = 0; i < n; ++i) span.push(w.vecs[i]);
    detail::Dsu dsu(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto mu = span.coords(w.vecs[i]);
        // mu is supported on the greedy basis; joins i with every basis
        // element appearing in its fundamental circuit.
        for (std::size_t k = 0; k < n; ++k)
            if (k != i && !f.is_zero((*mu)[k])) dsu.join(i, k);
    }
    std::vector<IndexSet> blocks;
    {
        std::vector<long> root_to_block(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = dsu.find(i);
            if (root_to_block[r] < 0) {
                root_to_block[r] = static_cast<long>(blocks.size());
                blocks.emplace_back();
            }
            blocks[root_to_block[r]].push_back(i);
        }
    }
    std::sort(blocks.begin(), blocks.end(), [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });

    // Verification: spans of blocks must add up to the total span, and small
    // blocks must be connected.
    bool ok = true;
    std::size_t sum = 0;
    for (const auto& b : blocks) {
        std::vector<Vec<F>> bv;
        for (auto i : b) bv.push_back(w.vecs[i]);
        sum += rank(f, matrix_from_rows(f, bv));
    }
    if (sum != w.dim) ok = false;
    if (ok) {
        for (const auto& b : blocks) {
            if (b.size() < 2 || b.size() > verify_block_cap) continue;
            std::vector<Vec<F>> bv;
            for (auto i : b) bv.push_back(w.vecs[i]);
            if (separator_search(f, VectorList<F>(w.dim, bv)).has_value()) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) return exhaustive_components(f, v);
    return blocks;
}

/// True iff the multiset is minimally dependent: rank = n-1 and every proper
/// subset is linearly independent.
template <class F>
bool is_circuit(const F& f, const VectorList<F>& v) {
    std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("is_circuit: empty list");
    detail::reject_zero_vectors(f, v, "is_circuit");
    VectorList<F> w = detail::compress(f, v);
    if (w.dim != n - 1) return false;
    for (std::size_t drop = 0; drop < n; ++drop) {
        std::vector<Vec<F>> rest;
        for (std::size_t i = 0; i < n; ++i)
            if (i != drop) rest.push_back(w.vecs[i]);
        if (rank(f, matrix_from_rows(f, rest)) != n - 1) return false;
    }
    return true;
}

/// Ear decomposition of a connected multiset, following the greedy sequential
/// construction with ascending-index tie-breaking. Throws if the input is not
/// connected.
template <class F>
EarDecomposition ear_decomposition(const F& f, const VectorList<F>& v) {
    std::size_t n = v.size();
    if (n < 2) throw std::invalid_argument("ear_decomposition: need at least 2 vectors");
    detail::reject_zero_vectors(f, v, "ear_decomposition");
    VectorList<F> w = detail::compress(f, v);

    std::vector<bool> covered(n, false);
    std::size_t covered_count = 0;
    EarDecomposition circuits;

    // First circuit: scan ascending; the first element dependent on the
    // greedy prefix closes a fundamental circuit.
    {
        SpanSolver<F> span(f, w.dim);
        std::optional<IndexSet> c1;
        for (std::size_t i = 0; i < n && !c1; ++i) {
            if (span.in_span(w.vecs[i])) {
                auto mu = span.coords(w.vecs[i]);
                IndexSet circ;
                for (std::size_t k = 0; k < i; ++k)
                    if (!f.is_zero((*mu)[k])) circ.push_back(k);
                circ.push_back(i);
                c1 = circ;
            } else {
                span.push(w.vecs[i]);
            }
        }
        if (!c1) throw std::invalid_argument("ear_decomposition: input is not connected (linearly independent)");
        circuits.push_back(*c1);
        for (auto i : *c1) {
            covered[i] = true;
            ++covered_count;
        }
    }

    while (covered_count < n) {
        // Greedy basis of the covered span.
        SpanSolver<F> basis(f, w.dim);
        IndexSet basis_idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (!covered[i]) continue;
            if (basis.push(w.vecs[i])) basis_idx.push_back(i);
        }
        // Extend with uncovered vectors, keeping the u-set independent, until
        // the joint span is deficient by exactly one.
        SpanSolver<F> u_only(f, w.dim);
        SpanSolver<F> joint(f, w.dim);
        for (auto i : basis_idx) joint.push(w.vecs[i]);
        IndexSet u_idx;
        bool closed = false;
        for (std::size_t i = 0; i < n && !closed; ++i) {
            if (covered[i]) continue;
            if (u_only.in_span(w.vecs[i])) continue;  // would break u-set independence
            if (joint.in_span(w.vecs[i])) {
                auto mu = joint.coords(w.vecs[i]);
                IndexSet circ;
                for (std::size_t k = 0; k < basis_idx.size(); ++k)
                    if (!f.is_zero((*mu)[k])) circ.push_back(basis_idx[k]);
                for (std::size_t k = 0; k < u_idx.size(); ++k)
                    if (!f.is_zero((*mu)[basis_idx.size() + k])) circ.push_back(u_idx[k]);
                circ.push_back(i);
                std::sort(circ.begin(), circ.end());
                circuits.push_back(circ);
                for (auto e : circ) {
                    if (!covered[e]) {
                        covered[e] = true;
                        ++covered_count;
                    }
                }
                closed = true;
            } else {
                u_only.push(w.vecs[i]);
                joint.push(w.vecs[i]);
                u_idx.push_back(i);
            }
        }
        if (!closed) throw std::invalid_argument("ear_decomposition: input is not connected");
    }
    return circuits;
}

template <class F>
VectorList<F> family_as_vectors(const ProductFamily<F>& fam) {
    return VectorList<F>(fam.ambient_dim(), assembled_vectors(fam));
}

template <class F>
ComponentPartition family_components(const ProductFamily<F>& fam) {
    return connected_components(fam.field, family_as_vectors(fam));
}

template <class F>
std::optional<IndexSet> family_separator_search(const ProductFamily<F>& fam) {
    return separator_search(fam.field, family_as_vectors(fam));
}

}  // namespace tensorcert

#endif
