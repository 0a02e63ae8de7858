#ifndef TENSORCERT_CRITERIA_HPP
#define TENSORCERT_CRITERIA_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tensorcert/matroid.hpp"
#include "tensorcert/tensor.hpp"

namespace tensorcert {

enum class Status { Certified, HypothesisFails, NotApplicable };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Certified: return "certified";
        case Status::HypothesisFails: return "hypothesis-fails";
        case Status::NotApplicable: return "not-applicable";
    }
    return "?";
}

/// Witness data attached to a certificate. Index sets are 0-based internally;
/// serialization renders them 1-based to match the usual convention.
struct Witness {
    std::optional<IndexSet> subset;                       // violating / relevant tensor subset S
    std::optional<std::vector<std::size_t>> subset_dims;  // d_j^S for that subset
    std::optional<IndexSet> separator;
    std::optional<std::vector<IndexSet>> mode_partition;
    std::vector<std::pair<IndexSet, std::vector<IndexSet>>> subset_partitions;  // S -> mode partition
    std::optional<std::vector<std::size_t>> kranks;
    std::optional<std::vector<std::size_t>> dims;
    std::optional<long long> bound;
    std::map<std::string, long long> params;
};

struct Certificate {
    std::string criterion;
    Status status = Status::NotApplicable;
    Witness witness;
    std::string notes;
};

/// Result of a rank lower-bound computation.
struct BoundResult {
    long long lower_bound = 0;
    std::string method;
    bool applicable = true;
    std::optional<std::size_t> violating_mode;  // balance violation (mu bound)
    std::optional<long long> mu;
    std::optional<long long> lambda;
    std::map<std::string, long long> params;
};

inline long long ceil_div_ll(long long a, long long b) { return (a + b - 1) / b; }

namespace detail {

template <class F>
long long subset_dim_slack(DimTable<F>& dt, const IndexSet& s) {
    // sum_j (d_j^S - 1) + 1
    long long sum = 0;
    for (std::size_t j = 0; j < dt.family().m(); ++j) sum += static_cast<long long>(dt.query_mode(s, j));
    return sum - static_cast<long long>(dt.family().m()) + 1;
}

template <class F>
std::vector<std::size_t> subset_dims_of(DimTable<F>& dt, const IndexSet& s) {
    std::vector<std::size_t> d;
    for (std::size_t j = 0; j < dt.family().m(); ++j) d.push_back(dt.query_mode(s, j));
    return d;
}

inline void record_family_params(Witness& w, const std::vector<std::size_t>& ks, const std::vector<std::size_t>& ds, std::size_t n) {
    w.kranks = ks;
    w.dims = ds;
    w.params["n"] = static_cast<long long>(n);
}

}  // namespace detail

/// Kruskal's theorem: 2n <= sum_j (k_j - 1) + 1 certifies a unique tensor
/// rank decomposition.
template <class F>
Certificate check_kruskal(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() < 3) throw std::invalid_argument("check_kruskal: needs at least 3 modes");
    if (fam.n() < 2) throw std::invalid_argument("check_kruskal: needs at least 2 tensors");
    check_subset_cap(fam.n(), cap);  // k-rank sweeps are subset enumerations too
    Certificate c;
    c.criterion = "kruskal";
    auto ks = k_rank_profile(fam).per_mode;
    long long rhs = 1;
    for (auto k : ks) rhs += static_cast<long long>(k) - 1;
    c.witness.kranks = ks;
    c.witness.params["n"] = static_cast<long long>(fam.n());
    c.witness.params["threshold"] = rhs;
    c.status = (2 * static_cast<long long>(fam.n()) <= rhs) ? Status::Certified : Status::HypothesisFails;
    return c;
}

/// Generalized Kruskal criterion: 2|S| <= sum_j (d_j^S - 1) + 1 for every
/// subset S with 2 <= |S| <= n.
template <class F>
Certificate check_kgen(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() < 3) throw std::invalid_argument("check_kgen: needs at least 3 modes");
    if (fam.n() < 2) throw std::invalid_argument("check_kgen: needs at least 2 tensors");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "kgen";
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(fam.n(), 2, fam.n(), [&](const IndexSet& s) -> bool {
        if (2 * static_cast<long long>(s.size()) > detail::subset_dim_slack(dt, s)) {
            bad = s;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
    }
    c.witness.params["n"] = static_cast<long long>(fam.n());
    return c;
}

/// Reshaped generalized Kruskal criterion: for each S some partition of the
/// modes must satisfy 2|S| <= sum_i (d_{J_i}^S - 1) + 1. The partition may
/// differ per subset. Either an explicit partition list is supplied or all
/// set partitions are tried (m <= 8).
template <class F>
Certificate check_reshaped_kgen(const ProductFamily<F>& fam,
                                const std::optional<std::vector<std::vector<IndexSet>>>& strategy = std::nullopt,
                                std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() < 3) throw std::invalid_argument("check_reshaped_kgen: needs at least 3 modes");
    if (fam.n() < 2) throw std::invalid_argument("check_reshaped_kgen: needs at least 2 tensors");
    if (!strategy && fam.m() > 8) throw std::invalid_argument("check_reshaped_kgen: exhaustive partition search capped at m <= 8");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "reshaped-kgen";
    DimTable<F> dt(fam);

    auto partition_ok = [&](const IndexSet& s, const std::vector<IndexSet>& blocks) {
        long long sum = 1;
        for (const auto& b : blocks) sum += static_cast<long long>(dt.query(s, b)) - 1;
        return 2 * static_cast<long long>(s.size()) <= sum;
    };
    std::vector<IndexSet> singletons;
    for (std::size_t j = 0; j < fam.m(); ++j) singletons.push_back(IndexSet{j});

    std::optional<IndexSet> bad;
    for_each_subset_sized(fam.n(), 2, fam.n(), [&](const IndexSet& s) -> bool {
        std::optional<std::vector<IndexSet>> found;
        if (strategy) {
            for (const auto& blocks : *strategy) {
                if (partition_ok(s, blocks)) {
                    found = blocks;
                    break;
                }
            }
        } else if (partition_ok(s, singletons)) {
            found = singletons;
        } else {
            for_each_set_partition(fam.m(), [&](const std::vector<IndexSet>& blocks) -> bool {
                if (partition_ok(s, blocks)) {
                    found = blocks;
                    return true;
                }
                return false;
            });
        }
        if (!found) {
            bad = s;
            return true;
        }
        // Only partitions beyond the default all-singletons one are recorded.
        if (found->size() != fam.m()) c.witness.subset_partitions.emplace_back(s, *found);
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
        c.notes = "no mode partition satisfies the reshaped inequality for the recorded subset";
    } else {
        c.status = Status::Certified;
        c.notes = "subsets without a recorded partition are certified by the all-singletons partition";
    }
    c.witness.params["n"] = static_cast<long long>(fam.n());
    return c;
}

/// Reshaped Kruskal: some tripartition J|K|L of the modes satisfies
/// 2n <= k_J + k_K + k_L - 2.
template <class F>
Certificate check_reshaped_kruskal(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() < 3) throw std::invalid_argument("check_reshaped_kruskal: needs at least 3 modes");
    if (fam.m() > 12) throw std::invalid_argument("check_reshaped_kruskal: tripartition search capped at m <= 12");
    if (fam.n() < 2) throw std::invalid_argument("check_reshaped_kruskal: needs at least 2 tensors");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "reshaped-kruskal";
    std::map<std::uint32_t, std::size_t> kcache;
    auto k_of = [&](const IndexSet& J) {
        std::uint32_t m = mask_of(J);
        auto it = kcache.find(m);
        if (it != kcache.end()) return it->second;
        std::size_t k = k_rank_grouped(fam, J);
        kcache.emplace(m, k);
        return k;
    };
    std::optional<std::vector<IndexSet>> winner;
    for_each_tripartition(fam.m(), [&](const std::vector<IndexSet>& blocks) -> bool {
        long long sum = 0;
        for (const auto& b : blocks) sum += static_cast<long long>(k_of(b));
        if (2 * static_cast<long long>(fam.n()) <= sum - 2) {
            winner = blocks;
            return true;
        }
        return false;
    });
    if (winner) {
        c.status = Status::Certified;
        c.witness.mode_partition = *winner;
    } else {
        c.status = Status::HypothesisFails;
        c.notes = "all tripartitions of the modes exhausted";
    }
    c.witness.params["n"] = static_cast<long long>(fam.n());
    return c;
}

/// Splitting corollary: n <= sum_j (d_j - 1) + 1 implies the family splits.
/// When certified, the separator is computed and attached.
template <class F>
Certificate check_split_corollary(const ProductFamily<F>& fam) {
    if (fam.n() < 2) throw std::invalid_argument("check_split_corollary: needs at least 2 tensors");
    Certificate c;
    c.criterion = "split-corollary";
    auto ds = mode_span_dims(fam);
    long long rhs = 1;
    for (auto d : ds) rhs += static_cast<long long>(d) - 1;
    c.witness.dims = ds;
    c.witness.params["n"] = static_cast<long long>(fam.n());
    c.witness.params["threshold"] = rhs;
    if (static_cast<long long>(fam.n()) <= rhs) {
        c.status = Status::Certified;
        auto sep = family_separator_search(fam);
        if (!sep) throw std::logic_error("check_split_corollary: theorem guarantees a separator but none was found");
        c.witness.separator = *sep;
    } else {
        c.status = Status::HypothesisFails;
    }
    return c;
}

/// Low-rank uniqueness: |S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1 for all S.
/// r = 0 is the linear-independence criterion, r = 1 the only-product-tensors
/// criterion, r = n the generalized Kruskal criterion.
template <class F>
Certificate check_low_rank_uniqueness(const ProductFamily<F>& fam, std::size_t r, std::size_t cap = kDefaultSubsetCap) {
    if (fam.n() < 2) throw std::invalid_argument("check_low_rank_uniqueness: needs at least 2 tensors");
    if (r > fam.n()) throw std::invalid_argument("check_low_rank_uniqueness: r out of range");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "low-rank-uniqueness";
    c.witness.params["r"] = static_cast<long long>(r);
    c.witness.params["n"] = static_cast<long long>(fam.n());
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(fam.n(), 2, fam.n(), [&](const IndexSet& s) -> bool {
        long long lhs = static_cast<long long>(s.size()) + std::min<long long>(s.size(), r);
        if (lhs > detail::subset_dim_slack(dt, s)) {
            bad = s;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
    }
    return c;
}

/// Subset lower bound on tensor rank: the largest r such that
/// |S| + min(|S|, r) <= sum_j (d_j^S - 1) + 1 holds for every S gives
/// rank >= r + 1. Also reports the k-rank specialization
/// min(n, sum_j (k_j - 1) + 2 - n).
template <class F>
BoundResult tensor_rank_lb_subset(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    if (fam.n() < 2) throw std::invalid_argument("tensor_rank_lb_subset: needs at least 2 tensors");
    check_subset_cap(fam.n(), cap);
    BoundResult b;
    b.method = "subset";
    DimTable<F> dt(fam);
    long long n = static_cast<long long>(fam.n());
    long long rmax = n - 1;
    for_each_subset_sized(fam.n(), 2, fam.n(), [&](const IndexSet& s) -> bool {
        long long slack = detail::subset_dim_slack(dt, s) - static_cast<long long>(s.size());
        if (slack < static_cast<long long>(s.size())) rmax = std::min(rmax, slack);
        return rmax < 0;
    });
    if (rmax >= 0) {
        b.lower_bound = rmax + 1;
    } else {
        b.lower_bound = vec_is_zero(fam.field, family_sum(fam)) ? 0 : 1;  // criterion gives nothing
    }
    b.params["r_max"] = rmax;
    auto ks = k_rank_profile(fam).per_mode;
    long long ksum = 2 - n;
    for (auto k : ks) ksum += static_cast<long long>(k) - 1;
    b.params["krank_specialization"] = std::min(n, ksum);
    return b;
}

/// Mu-corrected lower bound on tensor rank:
/// rank >= min(n, mu + sum_j (k_j - 1) + 2 - n) provided the k-ranks are
/// balanced (k_i <= sum_{j != i} (k_j - 1) + 1 for every i).
template <class F>
BoundResult tensor_rank_lb_mu(const ProductFamily<F>& fam) {
    if (fam.n() < 2) throw std::invalid_argument("tensor_rank_lb_mu: needs at least 2 tensors");
    BoundResult b;
    b.method = "mu";
    auto ks = k_rank_profile(fam).per_mode;
    auto ds = mode_span_dims(fam);
    long long ksum_all = 0;
    for (auto k : ks) ksum_all += static_cast<long long>(k) - 1;
    for (std::size_t i = 0; i < fam.m(); ++i) {
        long long others = ksum_all - (static_cast<long long>(ks[i]) - 1);
        if (static_cast<long long>(ks[i]) > others + 1) {
            b.applicable = false;
            b.violating_mode = i;
            b.lower_bound = 0;
            return b;
        }
    }
    long long mu = 0;
    for (std::size_t i = 0; i < fam.m(); ++i)
        for (std::size_t j = i + 1; j < fam.m(); ++j)
            mu = std::max(mu, static_cast<long long>(ds[i]) - static_cast<long long>(ks[i]) +
                                  static_cast<long long>(ds[j]) - static_cast<long long>(ks[j]));
    long long n = static_cast<long long>(fam.n());
    long long raw = mu + ksum_all + 2 - n;
    long long bound = std::min(n, raw);
    b.mu = mu;
    b.lambda = ksum_all + 2;
    b.params["raw"] = raw;
    if (bound < 1) bound = vec_is_zero(fam.field, family_sum(fam)) ? std::max<long long>(bound, 0) : 1;
    b.lower_bound = bound;
    return b;
}

/// Waring rank lower bound: WaringRank >= min(n, 2d + (m-2)(k-1) - n).
template <class F>
BoundResult waring_rank_lb(const SymmetricFamily<F>& sym) {
    BoundResult b;
    b.method = "waring";
    long long n = static_cast<long long>(sym.n());
    long long d = static_cast<long long>(sym.span());
    long long k = static_cast<long long>(sym.kruskal());
    long long m = static_cast<long long>(sym.power);
    long long raw = 2 * d + (m - 2) * (k - 1) - n;
    long long bound = std::min(n, raw);
    b.params["d"] = d;
    b.params["k"] = k;
    b.params["m"] = m;
    b.params["raw"] = raw;
    if (bound < 1) {
        auto lifted = symmetric_lift(sym);
        bound = vec_is_zero(sym.field, family_sum(lifted)) ? std::max<long long>(bound, 0) : 1;
    }
    b.lower_bound = bound;
    return b;
}

/// Subpartition interpolation: min(2|S|, |S| + r) <= sum_j (d_j^S - 1) + 1
/// for all S with s+1 <= |S| <= n. Certifies that qualifying pairs of
/// decompositions admit an (s, ceil(|S|/s))-partition.
template <class F>
Certificate check_subpartition_interp(const ProductFamily<F>& fam, std::size_t s, std::size_t r, std::size_t cap = kDefaultSubsetCap) {
    if (fam.n() < 2) throw std::invalid_argument("check_subpartition_interp: needs at least 2 tensors");
    if (s < 1 || s > fam.n() - 1) throw std::invalid_argument("check_subpartition_interp: s out of range");
    if (r > fam.n()) throw std::invalid_argument("check_subpartition_interp: r out of range");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "subpartition-interp";
    c.witness.params["s"] = static_cast<long long>(s);
    c.witness.params["r"] = static_cast<long long>(r);
    c.witness.params["n"] = static_cast<long long>(fam.n());
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(fam.n(), s + 1, fam.n(), [&](const IndexSet& sub) -> bool {
        long long lhs = std::min<long long>(2 * sub.size(), static_cast<long long>(sub.size()) + r);
        if (lhs > detail::subset_dim_slack(dt, sub)) {
            bad = sub;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
        c.notes = "qualifying pairs admit an (s, ceil(|S|/s))-partition";
    }
    return c;
}

/// Non-rank uniqueness, irreducible pairs: for r in [n+1, n + ceil((n-q)/s)],
/// every S with s+1 <= |S| <= n must satisfy
/// 2|S| + max(0, (r-n) - ceil((n-q+s)/|S|) + 1) <= sum_j (d_j^S - 1) + 1.
/// Conclusion: irreducible pairs of decompositions have an (s, floor(q/s))-
/// subpartition.
template <class F>
Certificate check_nonrank_irreducible(const ProductFamily<F>& fam, std::size_t q, std::size_t s, std::size_t r,
                                      std::size_t cap = kDefaultSubsetCap) {
    std::size_t n = fam.n();
    if (n < 2) throw std::invalid_argument("check_nonrank_irreducible: needs at least 2 tensors");
    if (q < 1 || q > n - 1) throw std::invalid_argument("check_nonrank_irreducible: q out of range");
    if (s < 1 || s > q) throw std::invalid_argument("check_nonrank_irreducible: s out of range");
    long long rmax = static_cast<long long>(n) + ceil_div_ll(static_cast<long long>(n - q), static_cast<long long>(s));
    if (static_cast<long long>(r) < static_cast<long long>(n) + 1 || static_cast<long long>(r) > rmax)
        throw std::invalid_argument("check_nonrank_irreducible: r out of range");
    check_subset_cap(n, cap);
    Certificate c;
    c.criterion = "nonrank-irreducible";
    c.witness.params = {{"q", (long long)q}, {"s", (long long)s}, {"r", (long long)r}, {"l", (long long)(q / s)}, {"n", (long long)n}};
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(n, s + 1, n, [&](const IndexSet& sub) -> bool {
        long long extra = static_cast<long long>(r) - static_cast<long long>(n) -
                          ceil_div_ll(static_cast<long long>(n - q + s), static_cast<long long>(sub.size())) + 1;
        long long lhs = 2 * static_cast<long long>(sub.size()) + std::max<long long>(0, extra);
        if (lhs > detail::subset_dim_slack(dt, sub)) {
            bad = sub;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
        c.notes = "irreducible pairs of decompositions into n and r terms admit an (s, floor(q/s))-subpartition";
    }
    return c;
}

/// Non-rank uniqueness without the irreducibility assumption (stricter
/// inequality; r in [n+1, ceil(((s+1)/s)(n-q+s)) - 1]).
template <class F>
Certificate check_nonrank_general(const ProductFamily<F>& fam, std::size_t q, std::size_t s, std::size_t r,
                                  std::size_t cap = kDefaultSubsetCap) {
    std::size_t n = fam.n();
    if (n < 2) throw std::invalid_argument("check_nonrank_general: needs at least 2 tensors");
    if (q < 1 || q > n - 1) throw std::invalid_argument("check_nonrank_general: q out of range");
    if (s < 1 || s > q) throw std::invalid_argument("check_nonrank_general: s out of range");
    long long rmax = ceil_div_ll(static_cast<long long>((s + 1) * (n - q + s)), static_cast<long long>(s)) - 1;
    if (static_cast<long long>(r) < static_cast<long long>(n) + 1 || static_cast<long long>(r) > rmax)
        throw std::invalid_argument("check_nonrank_general: r out of range");
    check_subset_cap(n, cap);
    Certificate c;
    c.criterion = "nonrank-general";
    c.witness.params = {{"q", (long long)q}, {"s", (long long)s}, {"r", (long long)r}, {"l", (long long)(q / s)}, {"n", (long long)n}};
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(n, s + 1, n, [&](const IndexSet& sub) -> bool {
        long long extra = static_cast<long long>(r) - static_cast<long long>(n) + static_cast<long long>(q) -
                          static_cast<long long>(s) -
                          ceil_div_ll(static_cast<long long>(n - q + s), static_cast<long long>(sub.size())) + 1;
        long long lhs = 2 * static_cast<long long>(sub.size()) + std::max<long long>(0, extra);
        if (lhs > detail::subset_dim_slack(dt, sub)) {
            bad = sub;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
        c.notes = "all pairs of decompositions into n and r terms admit an (s, floor(q/s))-subpartition";
    }
    return c;
}

/// Symmetric non-rank uniqueness: with base k-rank >= 2, the decomposition is
/// the unique symmetric decomposition into at most r terms iff
/// n + r + 1 <= m + 2d - 2.
template <class F>
Certificate check_symmetric_nonrank(const SymmetricFamily<F>& sym, std::size_t r) {
    if (sym.n() < 2) throw std::invalid_argument("check_symmetric_nonrank: needs at least 2 terms");
    if (r < sym.n()) throw std::invalid_argument("check_symmetric_nonrank: r must be at least n");
    Certificate c;
    c.criterion = "symmetric-nonrank";
    long long n = static_cast<long long>(sym.n());
    long long m = static_cast<long long>(sym.power);
    long long d = static_cast<long long>(sym.span());
    long long k = static_cast<long long>(sym.kruskal());
    c.witness.params = {{"n", n}, {"m", m}, {"d", d}, {"k", k}, {"r", (long long)r}};
    if (k < 2) {
        c.status = Status::NotApplicable;
        c.notes = "base vectors have k-rank 1";
        return c;
    }
    c.status = (n + static_cast<long long>(r) + 1 <= m + 2 * d - 2) ? Status::Certified : Status::HypothesisFails;
    if (c.status == Status::Certified)
        c.notes = (static_cast<long long>(r) == n) ? "unique Waring rank decomposition"
                                                   : "unique symmetric decomposition into at most r terms";
    return c;
}

/// Condition S (m = 3): identical to the generalized Kruskal inequality.
template <class F>
Certificate check_condition_S(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() != 3) throw std::invalid_argument("check_condition_S: needs exactly 3 modes");
    Certificate c = check_kgen(fam, cap);
    c.criterion = "condition-s";
    return c;
}

/// Condition H (m = 3, pivot mode plays the distinguished role):
/// k_pivot >= 2 and d_2^S + d_3^S - |S| >= min(|S|, n - d_1 + 2) for all S.
template <class F>
Certificate check_condition_H(const ProductFamily<F>& fam, std::size_t pivot_mode = 0, std::size_t cap = kDefaultSubsetCap) {
    if (fam.m() != 3) throw std::invalid_argument("check_condition_H: needs exactly 3 modes");
    if (pivot_mode >= 3) throw std::invalid_argument("check_condition_H: pivot mode out of range");
    if (fam.n() < 2) throw std::invalid_argument("check_condition_H: needs at least 2 tensors");
    check_subset_cap(fam.n(), cap);
    Certificate c;
    c.criterion = "condition-h";
    c.witness.params["pivot"] = static_cast<long long>(pivot_mode + 1);
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < 3; ++j)
        if (j != pivot_mode) others.push_back(j);
    std::size_t k1 = k_rank(fam.field, mode_vectors(fam, pivot_mode));
    c.witness.params["k_pivot"] = static_cast<long long>(k1);
    if (k1 < 2) {
        c.status = Status::HypothesisFails;
        c.notes = "pivot mode k-rank is 1";
        return c;
    }
    long long d1 = static_cast<long long>(span_dim(fam.field, mode_vectors(fam, pivot_mode)));
    long long n = static_cast<long long>(fam.n());
    DimTable<F> dt(fam);
    std::optional<IndexSet> bad;
    for_each_subset_sized(fam.n(), 2, fam.n(), [&](const IndexSet& s) -> bool {
        long long lhs = static_cast<long long>(dt.query_mode(s, others[0])) +
                        static_cast<long long>(dt.query_mode(s, others[1])) - static_cast<long long>(s.size());
        long long rhs = std::min<long long>(static_cast<long long>(s.size()), n - d1 + 2);
        if (lhs < rhs) {
            bad = s;
            return true;
        }
        return false;
    });
    if (bad) {
        c.status = Status::HypothesisFails;
        c.witness.subset = *bad;
        c.witness.subset_dims = detail::subset_dims_of(dt, *bad);
    } else {
        c.status = Status::Certified;
    }
    return c;
}

/// Tries every pivot mode; certified if any pivot makes Condition H hold.
template <class F>
Certificate check_condition_H_any(const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    Certificate last;
    for (std::size_t pivot = 0; pivot < 3; ++pivot) {
        Certificate c = check_condition_H(fam, pivot, cap);
        if (c.status == Status::Certified) {
            c.criterion = "condition-h-any";
            return c;
        }
        last = c;
    }
    last.criterion = "condition-h-any";
    last.notes = "no pivot mode satisfies Condition H; witness refers to the last pivot tried";
    return last;
}

/// Condition C (m = 3): k_pivot >= 2, min(d_2, d_3) >= n - d_1 + 2, and the
/// Khatri-Rao product of the s-th compound matrices of the non-pivot factor
/// matrices has full column rank for s = n - d_1 + 2.
template <class F>
Certificate check_condition_C(const ProductFamily<F>& fam, std::size_t pivot_mode = 0,
                              std::uint64_t entry_budget = 8'000'000) {
    if (fam.m() != 3) throw std::invalid_argument("check_condition_C: needs exactly 3 modes");
    if (pivot_mode >= 3) throw std::invalid_argument("check_condition_C: pivot mode out of range");
    if (fam.n() < 2) throw std::invalid_argument("check_condition_C: needs at least 2 tensors");
    Certificate c;
    c.criterion = "condition-c";
    c.witness.params["pivot"] = static_cast<long long>(pivot_mode + 1);
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < 3; ++j)
        if (j != pivot_mode) others.push_back(j);
    const F& f = fam.field;
    std::size_t k1 = k_rank(f, mode_vectors(fam, pivot_mode));
    c.witness.params["k_pivot"] = static_cast<long long>(k1);
    if (k1 < 2) {
        c.status = Status::HypothesisFails;
        c.notes = "pivot mode k-rank is 1";
        return c;
    }
    long long n = static_cast<long long>(fam.n());
    long long d1 = static_cast<long long>(span_dim(f, mode_vectors(fam, pivot_mode)));
    long long d2 = static_cast<long long>(span_dim(f, mode_vectors(fam, others[0])));
    long long d3 = static_cast<long long>(span_dim(f, mode_vectors(fam, others[1])));
    long long s = n - d1 + 2;
    c.witness.params["s"] = s;
    if (std::min(d2, d3) < s) {
        c.status = Status::HypothesisFails;
        c.notes = "min(d_2, d_3) < n - d_1 + 2";
        return c;
    }
    std::uint64_t rows = binomial(fam.mode_dims[others[0]], s) * binomial(fam.mode_dims[others[1]], s);
    std::uint64_t cols = binomial(fam.n(), s);
    if (rows * cols > entry_budget)
        throw budget_exceeded("check_condition_C: compound matrix of " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " entries exceeds the budget");
    Matrix<F> x2 = matrix_from_columns(f, [&] {
        std::vector<Vec<F>> cs;
        for (const auto& t : fam.tensors) cs.push_back(t.factors[others[0]]);
        return cs;
    }());
    Matrix<F> x3 = matrix_from_columns(f, [&] {
        std::vector<Vec<F>> cs;
        for (const auto& t : fam.tensors) cs.push_back(t.factors[others[1]]);
        return cs;
    }());
    Matrix<F> cs_mat = khatri_rao(f, compound_matrix(f, x2, s), compound_matrix(f, x3, s));
    std::size_t got = rank(f, cs_mat);
    c.witness.params["rank"] = static_cast<long long>(got);
    c.witness.params["full_rank"] = static_cast<long long>(cols);
    c.status = (got == cols) ? Status::Certified : Status::HypothesisFails;
    return c;
}

/// DLS threshold (m = 3): true iff all three inequalities of the k-rank-large
/// regime hold, i.e. the DLS criteria are inapplicable.
template <class F>
bool dls_threshold(const ProductFamily<F>& fam) {
    if (fam.m() != 3) throw std::invalid_argument("dls_threshold: needs exactly 3 modes");
    auto ks = k_rank_profile(fam).per_mode;
    auto ds = mode_span_dims(fam);
    long long n = static_cast<long long>(fam.n());
    auto mn = [&](std::size_t a, std::size_t b) { return std::min<long long>(ks[a], ks[b]); };
    return mn(1, 2) <= n - static_cast<long long>(ds[0]) + 1 && mn(0, 2) <= n - static_cast<long long>(ds[1]) + 1 &&
           mn(0, 1) <= n - static_cast<long long>(ds[2]) + 1;
}

/// Computable side conditions of the DLS synthesis theorem. Conditions 2 and
/// 6 quantify over all coefficient vectors and are not implemented here
/// (oracle-only over small prime fields). A certified side condition does NOT
/// by itself imply uniqueness; Condition U is additionally required.
template <class F>
Certificate check_dls_side_condition(const ProductFamily<F>& fam, int which,
                                     const std::optional<std::vector<std::size_t>>& tau = std::nullopt,
                                     const std::optional<IndexSet>& subset = std::nullopt) {
    if (fam.m() != 3) throw std::invalid_argument("check_dls_side_condition: needs exactly 3 modes");
    if (which == 2 || which == 6)
        throw std::invalid_argument("check_dls_side_condition: conditions 2 and 6 quantify over all coefficient vectors; use the finite-field oracle");
    if (which != 1 && which != 3 && which != 4 && which != 5)
        throw std::invalid_argument("check_dls_side_condition: condition must be one of 1, 3, 4, 5");
    const F& f = fam.field;
    Certificate c;
    c.criterion = "dls-side-" + std::to_string(which);
    c.notes = "side condition of the DLS synthesis only; uniqueness additionally requires Condition U";
    std::size_t n = fam.n();
    auto ks = k_rank_profile(fam).per_mode;
    auto ds = mode_span_dims(fam);
    c.witness.kranks = ks;
    c.witness.dims = ds;
    c.witness.params["n"] = static_cast<long long>(n);

    if (which == 1) {
        long long lhs = static_cast<long long>(ks[0]) + std::min<long long>(ks[1], static_cast<long long>(ks[2]) - 1);
        c.status = (lhs >= static_cast<long long>(n) + 1) ? Status::Certified : Status::HypothesisFails;
        c.witness.params["lhs"] = lhs;
        return c;
    }
    if (which == 3) {
        DimTable<F> dt(fam);
        auto sat = [&](const IndexSet& s) {
            std::size_t d1s = s.empty() ? 0 : dt.query_mode(s, 0);
            IndexSet comp = complement_of(s, n);
            std::size_t d2c = comp.empty() ? 0 : dt.query_mode(comp, 1);
            return d1s == s.size() && d2c == n - s.size();
        };
        if (subset) {
            if (subset->size() > static_cast<std::size_t>(ds[0]))
                throw std::invalid_argument("check_dls_side_condition: subset larger than d_1");
            c.witness.subset = *subset;
            c.status = sat(*subset) ? Status::Certified : Status::HypothesisFails;
        } else {
            std::optional<IndexSet> found;
            for_each_subset_sized(n, 0, std::min<std::size_t>(ds[0], n), [&](const IndexSet& s) -> bool {
                if (sat(s)) {
                    found = s;
                    return true;
                }
                return false;
            });
            if (found) {
                c.status = Status::Certified;
                c.witness.subset = *found;
            } else {
                c.status = Status::HypothesisFails;
            }
        }
        c.notes += "; quantified sub-condition 3c is oracle-only";
        return c;
    }
    if (which == 5) {
        c.status = (ks[0] == ds[0]) ? Status::Certified : Status::HypothesisFails;
        return c;
    }

    // Condition 4 via the reduced-row-echelon-form characterization: columns
    // of X_1 permuted by tau must RREF to [I | Z] with every trailing
    // submatrix (rows a..d_1, columns a..n) of k-rank >= 2.
    auto cond4_for = [&](const std::vector<std::size_t>& perm) -> bool {
        std::size_t d1 = ds[0];
        std::vector<Vec<F>> cols;
        for (auto a : perm) cols.push_back(fam.tensors[a].factors[0]);
        Matrix<F> x = matrix_from_columns(f, cols);
        // RREF in place.
        std::size_t r = 0;
        std::vector<std::size_t> pivots;
        for (std::size_t cidx = 0; cidx < x.cols && r < x.rows; ++cidx) {
            std::size_t piv = r;
            while (piv < x.rows && f.is_zero(x.at(piv, cidx))) ++piv;
            if (piv == x.rows) continue;
            if (piv != r)
                for (std::size_t j = 0; j < x.cols; ++j) std::swap(x.at(r, j), x.at(piv, j));
            auto pinv = f.inv(x.at(r, cidx));
            for (std::size_t j = 0; j < x.cols; ++j) x.at(r, j) = f.mul(pinv, x.at(r, j));
            for (std::size_t i = 0; i < x.rows; ++i) {
                if (i == r || f.is_zero(x.at(i, cidx))) continue;
                auto t = x.at(i, cidx);
                for (std::size_t j = 0; j < x.cols; ++j) x.at(i, j) = f.sub(x.at(i, j), f.mul(t, x.at(r, j)));
            }
            pivots.push_back(cidx);
            ++r;
        }
        if (r != d1) return false;
        for (std::size_t i = 0; i < d1; ++i)
            if (pivots[i] != i) return false;  // leading block must be the identity
        // k-rank >= 2 of each trailing submatrix: no zero column, no parallel pair.
        for (std::size_t a = 0; a + 1 < d1; ++a) {
            std::vector<Vec<F>> sub;
            for (std::size_t cidx = a; cidx < x.cols; ++cidx) {
                Vec<F> col;
                for (std::size_t i = a; i < d1; ++i) col.push_back(x.at(i, cidx));
                if (vec_is_zero(f, col)) return false;
                sub.push_back(std::move(col));
            }
            VectorList<F> vl(d1 - a, sub);
            if (k_rank(f, vl) < 2) return false;
        }
        return true;
    };

    if (tau) {
        if (tau->size() != n) throw std::invalid_argument("check_dls_side_condition: tau must be a permutation of all tensors");
        std::vector<bool> seen(n, false);
        for (auto a : *tau) {
            if (a >= n || seen[a]) throw std::invalid_argument("check_dls_side_condition: tau is not a permutation");
            seen[a] = true;
        }
        c.status = cond4_for(*tau) ? Status::Certified : Status::HypothesisFails;
        c.witness.subset = *tau;
        return c;
    }
    if (n > 8) throw std::invalid_argument("check_dls_side_condition: exhaustive permutation search capped at n <= 8; pass tau explicitly");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        if (cond4_for(perm)) {
            c.status = Status::Certified;
            c.witness.subset = perm;
            return c;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    c.status = Status::HypothesisFails;
    return c;
}

/// Re-checks the recorded inequalities of a certificate against the family:
/// for a failing certificate the recorded witness subset must still violate,
/// and a full re-run must reproduce the status.
template <class F>
bool revalidate(const Certificate& cert, const ProductFamily<F>& fam, std::size_t cap = kDefaultSubsetCap) {
    auto param = [&](const std::string& k) -> long long {
        auto it = cert.witness.params.find(k);
        if (it == cert.witness.params.end()) throw std::invalid_argument("revalidate: missing parameter " + k);
        return it->second;
    };
    Certificate re;
    const std::string& id = cert.criterion;
    if (id == "kruskal") re = check_kruskal(fam, cap);
    else if (id == "kgen") re = check_kgen(fam, cap);
    else if (id == "condition-s") re = check_condition_S(fam, cap);
    else if (id == "reshaped-kgen") re = check_reshaped_kgen(fam, std::nullopt, cap);
    else if (id == "reshaped-kruskal") re = check_reshaped_kruskal(fam, cap);
    else if (id == "split-corollary") re = check_split_corollary(fam);
    else if (id == "low-rank-uniqueness") re = check_low_rank_uniqueness(fam, param("r"), cap);
    else if (id == "subpartition-interp") re = check_subpartition_interp(fam, param("s"), param("r"), cap);
    else if (id == "nonrank-irreducible") re = check_nonrank_irreducible(fam, param("q"), param("s"), param("r"), cap);
    else if (id == "nonrank-general") re = check_nonrank_general(fam, param("q"), param("s"), param("r"), cap);
    else if (id == "condition-h") re = check_condition_H(fam, param("pivot") - 1, cap);
    else if (id == "condition-h-any") re = check_condition_H_any(fam, cap);
    else if (id == "condition-c") re = check_condition_C(fam, param("pivot") - 1);
    else if (id == "dls-side-1") re = check_dls_side_condition(fam, 1);
    else if (id == "dls-side-3") re = check_dls_side_condition(fam, 3);
    else if (id == "dls-side-4") re = check_dls_side_condition(fam, 4);
    else if (id == "dls-side-5") re = check_dls_side_condition(fam, 5);
    else throw std::invalid_argument("revalidate: unknown criterion " + id);
    if (re.status != cert.status) return false;
    if (cert.status == Status::HypothesisFails && cert.witness.subset && re.witness.subset)
        return *cert.witness.subset == *re.witness.subset;
    return true;
}

}  // namespace tensorcert

#endif
