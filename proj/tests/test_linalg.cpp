#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "tensorcert/linalg.hpp"
#include "test_util.hpp"

using namespace tensorcert;
using namespace tctest;

namespace {

// Independent determinant oracle: straight permutation expansion. Used to
// cross-check the elimination-based minors in compound_matrix.
template <class F>
typename F::Elem det_by_permutation_expansion(const F& f, const Matrix<F>& m) {
    REQUIRE(m.rows == m.cols);
    std::vector<std::size_t> perm(m.rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto det = f.zero();
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inversions;
        auto term = f.one();
        for (std::size_t i = 0; i < perm.size(); ++i) term = f.mul(term, m.at(i, perm[i]));
        det = (inversions % 2 == 0) ? f.add(det, term) : f.sub(det, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

template <class F>
Matrix<F> permute_rows(const F& f, const Matrix<F>& m, const std::vector<std::size_t>& perm) {
    Matrix<F> out = zero_matrix(f, m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(perm[i], j);
    return out;
}

}  // namespace

TEST_CASE("rank: pinned examples over Q and GF(p)") {
    Rationals q;
    CHECK(rank(q, identity_matrix(q, 3)) == 3);
    CHECK(rank(q, zero_matrix(q, 2, 4)) == 0);
    CHECK(rank(q, mkmat(q, 3, 3, {1, 0, 0, 0, 1, 0, 1, 1, 0})) == 2);  // rows e1, e2, e1+e2

    PrimeField g5(5);
    CHECK(rank(g5, identity_matrix(g5, 3)) == 3);
    CHECK(rank(g5, zero_matrix(g5, 2, 4)) == 0);
    CHECK(rank(g5, mkmat(g5, 3, 3, {1, 0, 0, 0, 1, 0, 1, 1, 0})) == 2);
}

TEST_CASE("rank: characteristic matters") {
    // rows (1,1), (1,-1) are dependent exactly in characteristic 2
    Rationals q;
    PrimeField g2(2), g3(3);
    CHECK(rank(q, mkmat(q, 2, 2, {1, 1, 1, -1})) == 2);
    CHECK(rank(g3, mkmat(g3, 2, 2, {1, 1, 1, -1})) == 2);
    CHECK(rank(g2, mkmat(g2, 2, 2, {1, 1, 1, -1})) == 1);
}

TEST_CASE("rank: transpose, row permutation and row scaling invariance") {
    std::mt19937_64 rng(42);
    Rationals q;
    PrimeField g7(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto mq = rnd_matrix(q, 4, 5, rng);
        CHECK(rank(q, mq) == rank(q, transpose(q, mq)));
        auto mg = rnd_matrix(g7, 4, 5, rng);
        CHECK(rank(g7, mg) == rank(g7, transpose(g7, mg)));

        std::vector<std::size_t> perm{2, 0, 3, 1};
        CHECK(rank(q, permute_rows(q, mq, perm)) == rank(q, mq));
        CHECK(rank(g7, permute_rows(g7, mg, perm)) == rank(g7, mg));

        Matrix<Rationals> scaled = mq;
        for (std::size_t j = 0; j < scaled.cols; ++j) scaled.at(1, j) = q.mul(q.from_long(-7), scaled.at(1, j));
        CHECK(rank(q, scaled) == rank(q, mq));
    }
}

TEST_CASE("rank: fraction-free path handles rational entries") {
    Rationals q;
    Matrix<Rationals> m(2, 2, {BigRat(1, 2), BigRat(1, 3), BigRat(1, 5), BigRat(1)});
    CHECK(rank(q, m) == 2);
    // second row is 3x the first -> rank 1
    Matrix<Rationals> dep(2, 2, {BigRat(1, 2), BigRat(1, 3), BigRat(3, 2), BigRat(1)});
    CHECK(rank(q, dep) == 1);
}

TEST_CASE("span_dim and direct_sum_check") {
    Rationals q;
    CHECK(span_dim(q, VectorList<Rationals>(3, {})) == 0);
    CHECK(span_dim(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {2, 0})})) == 1);
    CHECK(span_dim(q, VectorList<Rationals>(3, {mkvec(q, {1, 0, 0}), mkvec(q, {0, 1, 0}), mkvec(q, {1, 1, 0}), mkvec(q, {0, 0, 1})})) == 3);

    VectorList<Rationals> a(2, {mkvec(q, {1, 0})});
    VectorList<Rationals> b(2, {mkvec(q, {0, 1})});
    CHECK(direct_sum_check(q, a, b));
    VectorList<Rationals> ab(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1})});
    VectorList<Rationals> c(2, {mkvec(q, {1, 1})});
    CHECK_FALSE(direct_sum_check(q, ab, c));
    CHECK(direct_sum_check(q, VectorList<Rationals>(2, {}), c));
    VectorList<Rationals> wrong(3, {mkvec(q, {1, 0, 0})});
    CHECK_THROWS_AS(direct_sum_check(q, a, wrong), std::invalid_argument);
}

TEST_CASE("span submodularity: dim(A u B) <= dim A + dim B") {
    std::mt19937_64 rng(7);
    PrimeField g3(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec<PrimeField>> av, bv;
        std::uniform_int_distribution<int> cnt(0, 4);
        for (int i = cnt(rng); i > 0; --i) av.push_back(rnd_nonzero_vec(g3, 4, rng));
        for (int i = cnt(rng); i > 0; --i) bv.push_back(rnd_nonzero_vec(g3, 4, rng));
        auto joint = av;
        joint.insert(joint.end(), bv.begin(), bv.end());
        CHECK(span_dim(g3, VectorList<PrimeField>(4, joint)) <=
              span_dim(g3, VectorList<PrimeField>(4, av)) + span_dim(g3, VectorList<PrimeField>(4, bv)));
    }
}

TEST_CASE("compound_matrix: order 1 and full order") {
    PrimeField g7(7);
    auto m = mkmat(g7, 2, 2, {1, 2, 3, 4});
    auto c1 = compound_matrix(g7, m, 1);
    CHECK(c1.rows == 2);
    CHECK(c1.cols == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(c1.at(i, j) == m.at(i, j));
    auto c2 = compound_matrix(g7, m, 2);
    CHECK(c2.rows == 1);
    CHECK(c2.cols == 1);
    CHECK(c2.at(0, 0) == g7.from_long(1 * 4 - 2 * 3));
    CHECK_THROWS_AS(compound_matrix(g7, m, 3), std::invalid_argument);
    CHECK_THROWS_AS(compound_matrix(g7, m, 0), std::invalid_argument);
}

TEST_CASE("compound_matrix: every entry matches the permutation-expansion minor oracle") {
    std::mt19937_64 rng(2024);
    PrimeField g7(7);
    auto m = rnd_matrix(g7, 3, 4, rng);
    auto c = compound_matrix(g7, m, 2);
    CHECK(c.rows == 3);   // C(3,2)
    CHECK(c.cols == 6);   // C(4,2)
    std::vector<IndexSet> rsets, csets;
    for_each_combination(3, 2, [&](const IndexSet& s) { rsets.push_back(s); });
    for_each_combination(4, 2, [&](const IndexSet& s) { csets.push_back(s); });
    for (std::size_t ri = 0; ri < rsets.size(); ++ri) {
        for (std::size_t ci = 0; ci < csets.size(); ++ci) {
            Matrix<PrimeField> sub = zero_matrix(g7, 2, 2);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) sub.at(i, j) = m.at(rsets[ri][i], csets[ci][j]);
            CHECK(c.at(ri, ci) == det_by_permutation_expansion(g7, sub));
        }
    }
}

TEST_CASE("compound_matrix of a rank-r matrix vanishes for s > r") {
    std::mt19937_64 rng(11);
    Rationals q;
    // build a rank-2 4x4 matrix as an outer-product sum
    auto u1 = rnd_nonzero_vec(q, 4, rng), v1 = rnd_nonzero_vec(q, 4, rng);
    auto u2 = rnd_nonzero_vec(q, 4, rng), v2 = rnd_nonzero_vec(q, 4, rng);
    Matrix<Rationals> m = zero_matrix(q, 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = q.add(q.mul(u1[i], v1[j]), q.mul(u2[i], v2[j]));
    REQUIRE(rank(q, m) <= 2);
    auto c3 = compound_matrix(q, m, 3);
    for (const auto& x : c3.a) CHECK(q.is_zero(x));
}

TEST_CASE("khatri_rao: pinned examples and the column-wise Kronecker oracle") {
    Rationals q;
    auto a = mkmat(q, 1, 1, {3});
    auto kr = khatri_rao(q, a, a);
    CHECK(kr.at(0, 0) == q.from_long(9));

    auto i2 = identity_matrix(q, 2);
    auto kr2 = khatri_rao(q, i2, i2);
    CHECK(kr2.rows == 4);
    CHECK(kr2.cols == 2);
    CHECK(kr2.at(0, 0) == q.one());  // e1 (x) e1
    CHECK(kr2.at(3, 1) == q.one());  // e2 (x) e2
    CHECK(kr2.at(1, 0) == q.zero());

    std::mt19937_64 rng(5);
    auto x = rnd_matrix(q, 2, 3, rng);
    auto y = rnd_matrix(q, 3, 3, rng);
    auto z = khatri_rao(q, x, y);
    for (std::size_t c = 0; c < 3; ++c) {
        Vec<Rationals> xc, yc;
        for (std::size_t i = 0; i < 2; ++i) xc.push_back(x.at(i, c));
        for (std::size_t i = 0; i < 3; ++i) yc.push_back(y.at(i, c));
        auto k = kron_vec(q, {xc, yc});
        for (std::size_t i = 0; i < 6; ++i) CHECK(z.at(i, c) == k[i]);
    }
    CHECK_THROWS_AS(khatri_rao(q, x, mkmat(q, 2, 2, {1, 0, 0, 1})), std::invalid_argument);
}

TEST_CASE("kron_vec: coordinate layout is last-index-fastest") {
    Rationals q;
    auto e1 = mkvec(q, {1, 0}), e2 = mkvec(q, {0, 1});
    CHECK(kron_vec(q, {e1}) == e1);
    auto k = kron_vec(q, {e1, e2});
    CHECK(k == mkvec(q, {0, 1, 0, 0}));
    CHECK(kron_vec(q, {mkvec(q, {1, 1}), mkvec(q, {1, 2})}) == mkvec(q, {1, 2, 1, 2}));
    CHECK_THROWS_AS(kron_vec(q, {}), std::invalid_argument);
}

TEST_CASE("SpanSolver tracks rank and expresses dependencies over the pushed originals") {
    Rationals q;
    SpanSolver<Rationals> s(q, 3);
    CHECK(s.push(mkvec(q, {1, 0, 0})));
    CHECK(s.push(mkvec(q, {0, 1, 0})));
    CHECK_FALSE(s.push(mkvec(q, {1, 1, 0})));
    CHECK(s.rank() == 2);
    auto mu = s.coords(mkvec(q, {2, -3, 0}));
    REQUIRE(mu.has_value());
    CHECK((*mu)[0] == q.from_long(2));
    CHECK((*mu)[1] == q.from_long(-3));
    CHECK_FALSE(s.coords(mkvec(q, {0, 0, 1})).has_value());
}

TEST_CASE("solve_linear: particular solutions and nullspace") {
    PrimeField g5(5);
    // x + y = 3, 2x + 2y = 2 -> inconsistent (2*3 = 1 over GF(5))
    auto bad = solve_linear(g5, mkmat(g5, 2, 2, {1, 1, 2, 2}), mkvec(g5, {3, 2}));
    CHECK_FALSE(bad.consistent);
    // x + y = 3 with one free variable
    auto ok = solve_linear(g5, mkmat(g5, 1, 2, {1, 1}), mkvec(g5, {3}));
    REQUIRE(ok.consistent);
    CHECK(ok.nullspace.size() == 1);
    CHECK(g5.add(ok.particular[0], ok.particular[1]) == 3);
    auto k = ok.nullspace[0];
    CHECK(g5.add(k[0], k[1]) == 0);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = rnd_matrix(g5, 3, 4, rng);
        Vec<PrimeField> x(4);
        for (auto& v : x) v = rnd_elem(g5, rng);
        Vec<PrimeField> b(3, 0);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) b[i] = g5.add(b[i], g5.mul(a.at(i, j), x[j]));
        auto sol = solve_linear(g5, a, b);
        REQUIRE(sol.consistent);
        for (std::size_t i = 0; i < 3; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < 4; ++j) acc = g5.add(acc, g5.mul(a.at(i, j), sol.particular[j]));
            CHECK(acc == b[i]);
        }
    }
}

TEST_CASE("PrimeField construction checks primality and size") {
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(1ull << 61), std::invalid_argument);
    PrimeField g((1ull << 61) - 1);  // Mersenne prime
    CHECK(g.mul(g.from_long(-1), g.from_long(-1)) == 1);
    PrimeField g2(2);
    CHECK(g2.inv(1) == 1);
    CHECK_THROWS_AS(g2.inv(0), std::invalid_argument);
}
