#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tensorcert/generators.hpp"
#include "tensorcert/oracle.hpp"
#include "test_util.hpp"

using namespace tensorcert;
using namespace tctest;

TEST_CASE("CircuitSpec: size is pinned to sum(d_j - 1) + 2") {
    CircuitSpec s({2, 2});
    CHECK(s.n == 4);
    CircuitSpec s2({3, 3, 2});
    CHECK(s2.n == 7);
    CHECK_THROWS_AS(CircuitSpec({2}), std::invalid_argument);
    CHECK_THROWS_AS(CircuitSpec({2, 3}, true), std::invalid_argument);  // symmetric needs equal dims
}

TEST_CASE("find_circuit: verified circuits over GF(7), GF(101) and Q") {
    PrimeField g7(7);
    auto c1 = find_circuit(g7, CircuitSpec({2, 2}), 64, 1);
    REQUIRE(c1.has_value());
    CHECK(c1->n() == 4);
    CHECK(is_circuit(g7, family_as_vectors(*c1)));
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(span_dim(g7, mode_vectors(*c1, j)) == 2);
        CHECK(k_rank(g7, mode_vectors(*c1, j)) == 2);
    }

    Rationals q;
    auto c2 = find_circuit(q, CircuitSpec({3, 2, 2}), 64, 2);
    REQUIRE(c2.has_value());
    CHECK(c2->n() == 6);
    CHECK(is_circuit(q, family_as_vectors(*c2)));

    PrimeField g101(101);
    auto c3 = find_circuit(g101, CircuitSpec({2, 2, 2}, true), 64, 3);
    REQUIRE(c3.has_value());
    for (const auto& t : c3->tensors) {
        CHECK(t.factors[1] == t.factors[0]);
        CHECK(t.factors[2] == t.factors[0]);
    }

    // unstructured-only attempt budget exhausts quietly
    auto miss = find_circuit(g7, CircuitSpec({2, 2}), 2, 4);
    CHECK_FALSE(miss.has_value());
}

TEST_CASE("find_circuit outputs satisfy the circuit corollary bounds") {
    PrimeField g101(101);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        for (const auto& dims : {std::vector<std::size_t>{2, 2}, {2, 2, 2}, {3, 2, 2}}) {
            auto c = find_circuit(g101, CircuitSpec(dims), 64, seed);
            REQUIRE(c.has_value());
            // d_j > 1 in at most n - 2 modes
            std::size_t rich = 0;
            for (std::size_t j = 0; j < c->m(); ++j)
                if (span_dim(g101, mode_vectors(*c, j)) > 1) ++rich;
            CHECK(rich <= c->n() - 2);
            // splitting corollary misses by exactly one
            auto cert = check_split_corollary(*c);
            CHECK(cert.status == Status::HypothesisFails);
            CHECK(static_cast<long long>(c->n()) == cert.witness.params.at("threshold") + 1);
        }
    }
}

TEST_CASE("circuit_dependency: full support, exact relation") {
    PrimeField g101(101);
    auto c = find_circuit(g101, CircuitSpec({2, 2, 2}), 64, 7);
    REQUIRE(c.has_value());
    auto dep = circuit_dependency(g101, *c);
    REQUIRE(dep.size() == c->n());
    std::vector<std::uint64_t> acc(c->ambient_dim(), 0);
    for (std::size_t a = 0; a < c->n(); ++a) {
        CHECK(dep[a] != 0);
        auto v = assemble(g101, c->tensors[a]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = g101.add(acc[i], g101.mul(dep[a], v[i]));
    }
    for (auto x : acc) CHECK(x == 0);
}

TEST_CASE("build_sharpness_tensor_instance: the mu bound is met with equality") {
    PrimeField g101(101);
    auto circ = find_circuit(g101, CircuitSpec({2, 2, 2}), 64, 11);
    REQUIRE(circ.has_value());
    // targets: k = (2,2,2), d = (3,3,2), distinguished mode 1, n = 5
    auto inst = build_sharpness_tensor_instance(g101, *circ, {3, 3, 2}, 0, 5, 11);
    CHECK(inst.e_family.n() == 5);
    CHECK(inst.f_family.n() == 2);
    verify_equal_sums(g101, inst);
    auto b = tensor_rank_lb_mu(inst.e_family);
    REQUIRE(b.applicable);
    CHECK(b.lower_bound == static_cast<long long>(inst.f_family.n()));
    CHECK(*b.mu == 2);

    // degenerate mu = 0 instance: d_j = k_j everywhere
    auto inst0 = build_sharpness_tensor_instance(g101, *circ, {2, 2, 2}, 0, 4, 13);
    CHECK(inst0.f_family.n() == 1);
    verify_equal_sums(g101, inst0);
    auto b0 = tensor_rank_lb_mu(inst0.e_family);
    CHECK(b0.lower_bound == 1);

    // parameter validation: n outside the admissible window
    CHECK_THROWS_AS(build_sharpness_tensor_instance(g101, *circ, {3, 3, 2}, 0, 3, 11), std::invalid_argument);
    CHECK_THROWS_AS(build_sharpness_tensor_instance(g101, *circ, {3, 3, 2}, 0, 7, 11), std::invalid_argument);
    // mu = 2(d_i - k_i) violated: single nonzero gap
    CHECK_THROWS_AS(build_sharpness_tensor_instance(g101, *circ, {3, 2, 2}, 0, 5, 11), std::invalid_argument);
}

TEST_CASE("build_sharpness_symmetric_instance: exact-sharp boundary behavior") {
    Rationals q;
    for (std::size_t m = 2; m <= 5; ++m) {
        // d = 2: n + r = m + 2
        std::size_t n = 2, r = m;
        auto inst = build_sharpness_symmetric_instance(q, m, 2, n, r, m);
        CHECK(inst.e_family.n() == n);
        CHECK(inst.f_family.n() == r);
        verify_equal_sums_symmetric(q, inst);
        CHECK(inst.e_family.kruskal() >= 2);
        CHECK(inst.e_family.span() == 2);
        if (r >= n + 1) {
            // the engine must reject uniqueness claims at r (a second
            // decomposition with r terms exists by construction) ...
            CHECK(check_symmetric_nonrank(inst.e_family, r).status == Status::HypothesisFails);
            // ... and certify at r - 1 (the bound is sharp, not beatable)
            if (r - 1 >= n) CHECK(check_symmetric_nonrank(inst.e_family, r - 1).status == Status::Certified);
        }
    }
    // d = 3 with extras shared across both sides
    auto inst3 = build_sharpness_symmetric_instance(q, 3, 3, 4, 3, 17);
    CHECK(inst3.e_family.n() == 4);
    CHECK(inst3.f_family.n() == 3);
    verify_equal_sums_symmetric(q, inst3);
    CHECK(inst3.e_family.span() == 3);

    CHECK_THROWS_AS(build_sharpness_symmetric_instance(q, 3, 2, 2, 2, 1), std::invalid_argument);  // n+r != m+2d-2
}

TEST_CASE("build_sharpness_symmetric_near: k-rank pinned variants") {
    Rationals q;
    // k = d: exactly sharp with n = d, r = m + d - 2
    auto exact = build_sharpness_symmetric_near(q, 3, 3, 3, 19);
    CHECK_FALSE(exact.near_sharp);
    CHECK(exact.e_family.n() == 3);
    CHECK(exact.f_family.n() == 4);
    CHECK(exact.e_family.kruskal() == 3);
    verify_equal_sums_symmetric(q, exact);

    // 3 <= k < d: near-sharp with n = d+1, r = m+d-1 and |E|+|F| = 2d+m
    auto near = build_sharpness_symmetric_near(q, 3, 4, 3, 23);
    CHECK(near.near_sharp);
    CHECK(near.e_family.n() == 5);
    CHECK(near.f_family.n() == 6);
    CHECK(near.e_family.kruskal() == 3);
    verify_equal_sums_symmetric(q, near);

    CHECK_THROWS_AS(build_sharpness_symmetric_near(q, 3, 4, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_sharpness_symmetric_near(q, 3, 4, 5, 1), std::invalid_argument);
}

TEST_CASE("fixture catalog: every named fixture passes its self-check") {
    Rationals q;
    for (const auto& name : fixture_names()) {
        auto fam = make_fixture(q, name, 4, 3);
        fixture_selfcheck(q, name, fam);
    }
    CHECK_THROWS_AS(make_fixture(q, "nope"), std::invalid_argument);

    PrimeField g101(101);
    fixture_selfcheck(g101, "example_8_1", fixture_example_8_1(g101));
}
