#ifndef TENSORCERT_SUBSETS_HPP
#define TENSORCERT_SUBSETS_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tensorcert {

/// Subsets are passed around as sorted 0-based index lists. The global
/// enumeration order is: increasing cardinality, then lexicographic on the
/// index list (the same order used for compound-matrix rows and columns).
using IndexSet = std::vector<std::size_t>;

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Visit every k-subset of {0,...,n-1} in lexicographic order. The callback
/// may return bool to stop early; void callbacks run to completion.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return false;
    IndexSet idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        if constexpr (std::is_convertible_v<decltype(fn(idx)), bool>) {
            if (fn(idx)) return true;
        } else {
            fn(idx);
        }
        if (k == 0) return false;
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] + (k - i) < n) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
    }
}

/// Visit subsets of sizes lo..hi in the global (size, lex) order.
template <class Fn>
bool for_each_subset_sized(std::size_t n, std::size_t lo, std::size_t hi, Fn&& fn) {
    for (std::size_t k = lo; k <= hi && k <= n; ++k) {
        bool stopped = for_each_combination(n, k, [&](const IndexSet& s) -> bool {
            if constexpr (std::is_convertible_v<decltype(fn(s)), bool>) {
                return fn(s);
            } else {
                fn(s);
                return false;
            }
        });
        if (stopped) return true;
    }
    return false;
}

inline IndexSet complement_of(const IndexSet& s, std::size_t n) {
    IndexSet c;
    c.reserve(n - s.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < s.size() && s[j] == i) {
            ++j;
        } else {
            c.push_back(i);
        }
    }
    return c;
}

/// Visit all set partitions of {0,...,n-1} as block lists, in lexicographic
/// order of the restricted-growth string. Blocks are ordered by smallest
/// element; elements within a block are ascending.
template <class Fn>
bool for_each_set_partition(std::size_t n, Fn&& fn) {
    if (n == 0) return false;
    std::vector<std::size_t> rgs(n, 0), maxv(n, 0);
    auto emit = [&]() -> bool {
        std::size_t t = maxv[n - 1] + 1;
        std::vector<IndexSet> blocks(t);
        for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
        if constexpr (std::is_convertible_v<decltype(fn(blocks)), bool>) {
            return fn(blocks);
        } else {
            fn(blocks);
            return false;
        }
    };
    while (true) {
        if (emit()) return true;
        std::size_t i = n;
        bool advanced = false;
        while (i > 1) {
            --i;
            if (rgs[i] <= maxv[i - 1]) {
                ++rgs[i];
                maxv[i] = std::max(maxv[i - 1], rgs[i]);
                for (std::size_t j = i + 1; j < n; ++j) {
                    rgs[j] = 0;
                    maxv[j] = maxv[i];
                }
                advanced = true;
                break;
            }
        }
        if (!advanced) return false;
    }
}

/// Visit all partitions of {0,...,n-1} into exactly three nonempty unordered
/// blocks. Requires n >= 3.
template <class Fn>
bool for_each_tripartition(std::size_t n, Fn&& fn) {
    if (n < 3) throw std::invalid_argument("for_each_tripartition: need at least 3 elements");
    return for_each_set_partition(n, [&](const std::vector<IndexSet>& blocks) -> bool {
        if (blocks.size() != 3) return false;
        if constexpr (std::is_convertible_v<decltype(fn(blocks)), bool>) {
            return fn(blocks);
        } else {
            fn(blocks);
            return false;
        }
    });
}

}  // namespace tensorcert

#endif
