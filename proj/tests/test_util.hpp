#ifndef TENSORCERT_TEST_UTIL_HPP
#define TENSORCERT_TEST_UTIL_HPP

#include <random>

#include "tensorcert/tensor.hpp"

namespace tctest {

using namespace tensorcert;

template <class F>
Vec<F> ev(const F& f, std::size_t dim, std::size_t i) {
    Vec<F> v(dim, f.zero());
    v[i] = f.one();
    return v;
}

template <class F>
Vec<F> mkvec(const F& f, std::initializer_list<long long> xs) {
    Vec<F> v;
    for (auto x : xs) v.push_back(f.from_long(x));
    return v;
}

template <class F>
Matrix<F> mkmat(const F& f, std::size_t rows, std::size_t cols, std::initializer_list<long long> xs) {
    std::vector<typename F::Elem> e;
    for (auto x : xs) e.push_back(f.from_long(x));
    return Matrix<F>(rows, cols, std::move(e));
}

template <class F>
typename F::Elem rnd_elem(const F& f, std::mt19937_64& rng) {
    if constexpr (F::is_prime_field) {
        std::uniform_int_distribution<std::uint64_t> d(0, f.modulus() - 1);
        return d(rng);
    } else {
        std::uniform_int_distribution<long long> d(-3, 3);
        return f.from_long(d(rng));
    }
}

template <class F>
Vec<F> rnd_nonzero_vec(const F& f, std::size_t dim, std::mt19937_64& rng) {
    while (true) {
        Vec<F> v(dim);
        for (auto& x : v) x = rnd_elem(f, rng);
        if (!vec_is_zero(f, v)) return v;
    }
}

template <class F>
Matrix<F> rnd_matrix(const F& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    Matrix<F> m = zero_matrix(f, rows, cols);
    for (auto& x : m.a) x = rnd_elem(f, rng);
    return m;
}

/// Random product family; factors are drawn from small per-mode direction
/// pools so that repeated directions, small spans, and interesting k-ranks
/// all occur.
template <class F>
ProductFamily<F> rnd_pool_family(const F& f, std::size_t n, std::vector<std::size_t> dims, std::size_t pool_size,
                                 std::mt19937_64& rng) {
    std::vector<std::vector<Vec<F>>> pools(dims.size());
    for (std::size_t j = 0; j < dims.size(); ++j)
        for (std::size_t k = 0; k < pool_size; ++k) pools[j].push_back(rnd_nonzero_vec(f, dims[j], rng));
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < n; ++a) {
        ProductTensor<F> t;
        t.coeff = f.one();
        for (std::size_t j = 0; j < dims.size(); ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
            t.factors.push_back(pools[j][pick(rng)]);
        }
        ts.push_back(std::move(t));
    }
    return ProductFamily<F>(f, dims, ts);
}

/// Fully random product family (factors independent and dense).
template <class F>
ProductFamily<F> rnd_family(const F& f, std::size_t n, std::vector<std::size_t> dims, std::mt19937_64& rng) {
    std::vector<ProductTensor<F>> ts;
    for (std::size_t a = 0; a < n; ++a) {
        ProductTensor<F> t;
        t.coeff = f.one();
        for (std::size_t j = 0; j < dims.size(); ++j) t.factors.push_back(rnd_nonzero_vec(f, dims[j], rng));
        ts.push_back(std::move(t));
    }
    return ProductFamily<F>(f, dims, ts);
}

}  // namespace tctest

#endif
