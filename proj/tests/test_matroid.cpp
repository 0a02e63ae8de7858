#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tensorcert/generators.hpp"
#include "tensorcert/matroid.hpp"
#include "test_util.hpp"

using namespace tensorcert;
using namespace tctest;

namespace {

// Brute-force oracle: scan every bipartition for a separator.
template <class F>
bool splits_by_bruteforce(const F& f, const VectorList<F>& v) {
    std::size_t n = v.size();
    std::size_t total = span_dim(f, v);
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<Vec<F>> sv, cv;
        for (std::size_t i = 0; i < n; ++i)
            ((mask >> i) & 1 ? sv : cv).push_back(v.vecs[i]);
        if (span_dim(f, VectorList<F>(v.dim, sv)) + span_dim(f, VectorList<F>(v.dim, cv)) == total) return true;
    }
    return false;
}

template <class F>
VectorList<F> rvl(const F& f, std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    std::vector<Vec<F>> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(rnd_nonzero_vec(f, dim, rng));
    return VectorList<F>(dim, vs);
}

// Two families embedded in disjoint coordinate blocks per mode; the result
// splits by construction and satisfies the splitting-theorem hypothesis.
template <class F>
ProductFamily<F> disjoint_union(const F& f, const ProductFamily<F>& a, const ProductFamily<F>& b) {
    REQUIRE(a.m() == b.m());
    std::vector<std::size_t> dims;
    for (std::size_t j = 0; j < a.m(); ++j) dims.push_back(a.mode_dims[j] + b.mode_dims[j]);
    std::vector<ProductTensor<F>> ts;
    auto pad = [&](const ProductTensor<F>& t, bool left) {
        ProductTensor<F> out;
        out.coeff = t.coeff;
        for (std::size_t j = 0; j < a.m(); ++j) {
            Vec<F> v(dims[j], f.zero());
            std::size_t off = left ? 0 : a.mode_dims[j];
            for (std::size_t i = 0; i < t.factors[j].size(); ++i) v[off + i] = t.factors[j][i];
            out.factors.push_back(std::move(v));
        }
        return out;
    };
    for (const auto& t : a.tensors) ts.push_back(pad(t, true));
    for (const auto& t : b.tensors) ts.push_back(pad(t, false));
    return ProductFamily<F>(f, dims, ts);
}

}  // namespace

TEST_CASE("separator_search: pinned examples") {
    Rationals q;
    auto pair = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1})});
    auto sep = separator_search(q, pair);
    REQUIRE(sep.has_value());
    CHECK(*sep == IndexSet{0});

    auto circuit = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1}), mkvec(q, {1, 1})});
    CHECK_FALSE(separator_search(q, circuit).has_value());

    // coloop e3 (1-based index 4): frozen from the bipartition brute force
    auto coloop = VectorList<Rationals>(3, {mkvec(q, {1, 0, 0}), mkvec(q, {0, 1, 0}), mkvec(q, {1, 1, 0}), mkvec(q, {0, 0, 1})});
    REQUIRE(splits_by_bruteforce(q, coloop));
    auto s2 = separator_search(q, coloop);
    REQUIRE(s2.has_value());
    CHECK(*s2 == IndexSet{3});

    CHECK_THROWS_AS(separator_search(q, VectorList<Rationals>(2, {mkvec(q, {1, 0})})), std::invalid_argument);
    CHECK_THROWS_AS(separator_search(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 0})})),
                    std::invalid_argument);
}

TEST_CASE("separator_search agrees with the exhaustive bipartition oracle") {
    std::mt19937_64 rng(71);
    PrimeField g3(3);
    int connected_seen = 0, split_seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::uniform_int_distribution<std::size_t> nn(2, 6), dd(2, 4);
        auto v = rvl(g3, nn(rng), dd(rng), rng);
        bool oracle = splits_by_bruteforce(g3, v);
        auto got = separator_search(g3, v);
        CHECK(got.has_value() == oracle);
        if (got) {
            ++split_seen;
            IndexSet comp = complement_of(*got, v.size());
            std::vector<Vec<PrimeField>> sv, cv;
            for (auto i : *got) sv.push_back(v.vecs[i]);
            for (auto i : comp) cv.push_back(v.vecs[i]);
            CHECK(direct_sum_check(g3, VectorList<PrimeField>(v.dim, sv), VectorList<PrimeField>(v.dim, cv)));
        } else {
            ++connected_seen;
        }
    }
    CHECK(connected_seen > 20);
    CHECK(split_seen > 20);
}

TEST_CASE("connectivity is invariant under nonzero rescaling") {
    std::mt19937_64 rng(73);
    PrimeField g5(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto v = rvl(g5, 5, 3, rng);
        auto w = v;
        std::uniform_int_distribution<std::uint64_t> nz(1, 4);
        for (auto& x : w.vecs) x = vec_scale(g5, nz(rng), x);
        auto sa = separator_search(g5, v);
        auto sb = separator_search(g5, w);
        CHECK(sa == sb);
    }
}

TEST_CASE("connected_components: pinned examples") {
    Rationals q;
    auto indep = VectorList<Rationals>(3, {mkvec(q, {1, 0, 0}), mkvec(q, {0, 1, 0}), mkvec(q, {0, 0, 1})});
    auto blocks = connected_components(q, indep);
    REQUIRE(blocks.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(blocks[i] == IndexSet{i});

    // two dependent triples in disjoint coordinates
    auto two = VectorList<Rationals>(4, {mkvec(q, {1, 0, 0, 0}), mkvec(q, {0, 1, 0, 0}), mkvec(q, {1, 1, 0, 0}),
                                         mkvec(q, {0, 0, 1, 0}), mkvec(q, {0, 0, 0, 1}), mkvec(q, {0, 0, 1, 1})});
    auto blocks2 = connected_components(q, two);
    REQUIRE(blocks2.size() == 2);
    CHECK(blocks2[0] == IndexSet{0, 1, 2});
    CHECK(blocks2[1] == IndexSet{3, 4, 5});
    auto oracle = exhaustive_components(q, two);
    CHECK(blocks2 == oracle);

    auto circ = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1}), mkvec(q, {1, 1})});
    CHECK(connected_components(q, circ).size() == 1);
}

TEST_CASE("connected_components agrees with the exhaustive recursion oracle") {
    std::mt19937_64 rng(79);
    PrimeField g3(3);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> nn(1, 8), dd(2, 4);
        auto v = rvl(g3, nn(rng), dd(rng), rng);
        auto fast = connected_components(g3, v);
        auto slow = exhaustive_components(g3, v);
        CHECK(fast == slow);
        // direct-sum identity across blocks
        std::size_t total = 0;
        for (const auto& b : fast) {
            std::vector<Vec<PrimeField>> bv;
            for (auto i : b) bv.push_back(v.vecs[i]);
            total += span_dim(g3, VectorList<PrimeField>(v.dim, bv));
        }
        CHECK(total == span_dim(g3, v));
    }
}

TEST_CASE("is_circuit: pinned examples") {
    Rationals q;
    CHECK(is_circuit(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1}), mkvec(q, {1, 1})})));
    CHECK_FALSE(is_circuit(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1})})));
    CHECK_FALSE(is_circuit(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {2, 0}), mkvec(q, {0, 1})})));
    // parallel pair alone IS a circuit
    CHECK(is_circuit(q, VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {2, 0})})));
    CHECK_THROWS_AS(is_circuit(q, VectorList<Rationals>(2, {})), std::invalid_argument);
}

TEST_CASE("ear_decomposition: pinned examples") {
    Rationals q;
    auto tri = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1}), mkvec(q, {1, 1})});
    auto ears = ear_decomposition(q, tri);
    REQUIRE(ears.size() == 1);
    CHECK(ears[0] == IndexSet{0, 1, 2});

    auto four = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1}), mkvec(q, {1, 1}), mkvec(q, {1, -1})});
    auto ears2 = ear_decomposition(q, four);
    REQUIRE(ears2.size() == 2);
    CHECK(ears2[0] == IndexSet{0, 1, 2});
    CHECK(std::find(ears2[1].begin(), ears2[1].end(), 3) != ears2[1].end());

    auto indep = VectorList<Rationals>(2, {mkvec(q, {1, 0}), mkvec(q, {0, 1})});
    CHECK_THROWS_AS(ear_decomposition(q, indep), std::invalid_argument);
}

TEST_CASE("ear_decomposition satisfies both defining properties and the telescoping count") {
    std::mt19937_64 rng(83);
    PrimeField g5(5);
    int tested = 0;
    int attempts = 0;
    while (tested < 120 && attempts < 5000) {
        ++attempts;
        std::uniform_int_distribution<std::size_t> nn(2, 7), dd(2, 3);
        auto v = rvl(g5, nn(rng), dd(rng), rng);
        if (separator_search(g5, v).has_value()) continue;  // need connected input
        ++tested;
        auto ears = ear_decomposition(g5, v);
        REQUIRE(!ears.empty());
        std::vector<bool> covered(v.size(), false);
        std::vector<Vec<PrimeField>> acc;
        std::size_t prev_dim = 0;
        for (std::size_t p = 0; p < ears.size(); ++p) {
            // every ear is a circuit
            std::vector<Vec<PrimeField>> cv;
            for (auto i : ears[p]) cv.push_back(v.vecs[i]);
            CHECK(is_circuit(g5, VectorList<PrimeField>(v.dim, cv)));
            // property 1: meets the previous union
            if (p > 0) {
                bool meets = false;
                for (auto i : ears[p])
                    if (covered[i]) meets = true;
                CHECK(meets);
            }
            std::size_t added = 0;
            for (auto i : ears[p]) {
                if (!covered[i]) {
                    covered[i] = true;
                    acc.push_back(v.vecs[i]);
                    ++added;
                }
            }
            std::size_t dim = span_dim(g5, VectorList<PrimeField>(v.dim, acc));
            // property 2 (with the first circuit spanning |C_1| - 1 dims)
            CHECK(dim - prev_dim == added - 1);
            prev_dim = dim;
        }
        for (bool c : covered) CHECK(c);
        // telescoping: number of ears = n - dim span
        CHECK(ears.size() == v.size() - span_dim(g5, v));
    }
    CHECK(tested == 120);
}

TEST_CASE("family_components: products split per tensor, circuits stay whole") {
    Rationals q;
    ProductTensor<Rationals> t11{{ev(q, 2, 0), ev(q, 2, 0)}, q.one()};
    ProductTensor<Rationals> t22{{ev(q, 2, 1), ev(q, 2, 1)}, q.one()};
    ProductFamily<Rationals> diag(q, {2, 2}, {t11, t22});
    auto blocks = family_components(diag);
    REQUIRE(blocks.size() == 2);

    auto circ = find_circuit(q, CircuitSpec({2, 2}), 32, 5);
    REQUIRE(circ.has_value());
    CHECK(is_circuit(q, family_as_vectors(*circ)));
    CHECK(family_components(*circ).size() == 1);
}

TEST_CASE("connected families have connected per-mode factor lists") {
    std::mt19937_64 rng(89);
    PrimeField g5(5);
    int connected_seen = 0;
    for (int trial = 0; trial < 3000 && connected_seen < 12; ++trial) {
        auto fam = rnd_pool_family(g5, 4, {2, 2}, 2, rng);
        auto vl = family_as_vectors(fam);
        if (separator_search(fam.field, vl).has_value()) continue;
        ++connected_seen;
        for (std::size_t j = 0; j < fam.m(); ++j) {
            auto mv = mode_vectors(fam, j);
            CHECK_FALSE(separator_search(fam.field, mv).has_value());
        }
    }
    CHECK(connected_seen >= 12);
}

TEST_CASE("splitting theorem sweep (small): families under the span threshold always split") {
    std::mt19937_64 rng(97);
    PrimeField g5(5), g7(7);
    int qualifying = 0;
    for (int trial = 0; trial < 300; ++trial) {
        // structured generation: disjoint unions qualify by construction
        auto a = rnd_pool_family(g5, 3, {2, 2}, 2, rng);
        auto b = rnd_pool_family(g5, 3, {2, 2}, 2, rng);
        auto fam = disjoint_union(g5, a, b);
        auto ds = mode_span_dims(fam);
        std::size_t thresh = 0;
        for (auto d : ds) thresh += d - 1;
        auto vl = family_as_vectors(fam);
        if (span_dim(g5, vl) <= thresh) {
            ++qualifying;
            CHECK(separator_search(g5, vl).has_value());
        }
        // plain random families over GF(7) qualify whenever dim span <= threshold
        auto r = rnd_family(g7, 5, {3, 3, 2}, rng);
        auto ds2 = mode_span_dims(r);
        std::size_t t2 = 0;
        for (auto d : ds2) t2 += d - 1;
        auto vl2 = family_as_vectors(r);
        if (span_dim(g7, vl2) <= t2) {
            ++qualifying;
            CHECK(separator_search(g7, vl2).has_value());
        }
    }
    CHECK(qualifying > 200);
}

TEST_CASE("exhaustive mini-universe: every connected family meets the span bound") {
    // every 3-subset of the product directions of GF(2)^2 (x) GF(2)^2:
    // connected ones must satisfy dim span >= sum_j (d_j - 1) + 1
    PrimeField g2(2);
    std::vector<ProductTensor<PrimeField>> dirs;
    std::vector<Vec<PrimeField>> pts{mkvec(g2, {1, 0}), mkvec(g2, {0, 1}), mkvec(g2, {1, 1})};
    for (const auto& a : pts)
        for (const auto& b : pts) dirs.push_back(ProductTensor<PrimeField>{{a, b}, g2.one()});
    std::size_t connected_seen = 0;
    for_each_combination(dirs.size(), 3, [&](const IndexSet& sel) {
        std::vector<ProductTensor<PrimeField>> ts;
        for (auto i : sel) ts.push_back(dirs[i]);
        ProductFamily<PrimeField> fam(g2, {2, 2}, ts);
        auto vl = family_as_vectors(fam);
        if (separator_search(g2, vl).has_value()) return;
        ++connected_seen;
        auto ds = mode_span_dims(fam);
        CHECK(span_dim(g2, vl) >= ds[0] + ds[1] - 1);
    });
    CHECK(connected_seen > 0);
}

TEST_CASE("two-mode connected families satisfy dim span >= d1 + d2 - 1") {
    std::mt19937_64 rng(101);
    PrimeField g5(5);
    int connected_seen = 0;
    for (int trial = 0; trial < 3000 && connected_seen < 40; ++trial) {
        auto fam = rnd_pool_family(g5, 4, {2, 2}, 2, rng);
        auto vl = family_as_vectors(fam);
        if (separator_search(g5, vl).has_value()) continue;
        ++connected_seen;
        auto ds = mode_span_dims(fam);
        CHECK(span_dim(g5, vl) >= ds[0] + ds[1] - 1);
    }
    CHECK(connected_seen >= 20);
}
