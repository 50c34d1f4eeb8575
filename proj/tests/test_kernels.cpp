#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "radstein/kernel.hpp"
#include "radstein/rng.hpp"
#include "support/oracles.hpp"

using namespace radstein;

TEST_CASE("make_kernel symmetrizes implicitly and stores sorted tuples") {
    const Kernel f = make_kernel(2, 4, {{{1, 2}, 0.5}});
    CHECK(f.value({1, 2}) == 0.5);
    CHECK(f.value({2, 1}) == 0.5);
    CHECK(f.value({1, 3}) == 0.0);
    CHECK(f.value({2, 2}) == 0.0);
    CHECK(f.entries().size() == 1);
}

TEST_CASE("make_kernel rejects bad input") {
    CHECK_THROWS_AS(make_kernel(2, 4, {{{1, 1}, 0.3}}), std::invalid_argument);  // diagonal
    CHECK_THROWS_AS(make_kernel(2, 4, {{{2, 1}, 0.3}}), std::invalid_argument);  // unsorted
    CHECK_THROWS_AS(make_kernel(2, 4, {{{1, 5}, 0.3}}), std::invalid_argument);  // out of bounds
    CHECK_THROWS_AS(make_kernel(2, 4, {{{0, 1}, 0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel(2, 4, {{{1, 2}, 0.3}, {{1, 2}, 0.4}}),
                    std::invalid_argument);  // duplicate
    CHECK_THROWS_AS(make_kernel(2, 4, {{{1, 2}, std::nan("")}}), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel(1, 4, {{{1, 2}, 0.3}}), std::invalid_argument);  // length
    // zero entries are dropped, not stored
    CHECK(make_kernel(2, 4, {{{1, 2}, 0.0}}).empty());
}

TEST_CASE("order-3 tuple materializes to 3! equal cells") {
    const Kernel f = make_kernel(3, 3, {{{1, 2, 3}, 1.0}});
    const auto dense = oracles::materialize(f);
    int nonzero = 0;
    for (double c : dense.cells) {
        if (c != 0.0) {
            CHECK(c == 1.0);
            ++nonzero;
        }
    }
    CHECK(nonzero == 6);
}

TEST_CASE("inner product matches paper normalization") {
    const Kernel f1 = builtin_family("example2", 1);
    CHECK(2.0 * inner_product(f1, f1) == doctest::Approx(1.0).epsilon(1e-14));

    const Kernel a = make_kernel(1, 2, {{{1}, 1.0}, {{2}, 2.0}});
    const Kernel b = make_kernel(1, 2, {{{1}, 3.0}, {{2}, -1.0}});
    CHECK(inner_product(a, b) == doctest::Approx(1.0));

    CHECK_THROWS_AS(inner_product(a, f1), std::invalid_argument);
}

TEST_CASE("inner product agrees with dense materialization on random kernels") {
    CounterRng rng(2024);
    for (int rep = 0; rep < 10; ++rep) {
        const Kernel f = oracles::random_kernel(rng, 2, 7, 20);
        const Kernel g = oracles::random_kernel(rng, 2, 7, 20);
        const auto df = oracles::materialize(f);
        const auto dg = oracles::materialize(g);
        CHECK(inner_product(f, g) ==
              doctest::Approx(oracles::dense_inner(df, dg)).epsilon(1e-12));
        CHECK(inner_product(f, f) ==
              doctest::Approx(oracles::dense_inner(df, df)).epsilon(1e-12));
        // symmetry and bilinearity
        CHECK(inner_product(f, g) == doctest::Approx(inner_product(g, f)).epsilon(1e-13));
        CHECK(inner_product(f.scaled(2.5), g) ==
              doctest::Approx(2.5 * inner_product(f, g)).epsilon(1e-12));
    }
}

TEST_CASE("star contraction of the order-2 family") {
    const Kernel f1 = builtin_family("example2", 1);
    const SparseTensor t = star_contract(f1, f1, 1);
    CHECK(t.value({1, 1}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(t.value({2, 2}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(t.value({1, 2}) == 0.0);
    CHECK(norm(t) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("contraction closed form holds up to n = 1000") {
    for (int n : {1, 2, 5, 10, 100, 531, 1000}) {
        const Kernel f = builtin_family("example2", n);
        const double expected = 1.0 / (2.0 * std::sqrt(2.0 * n));
        CHECK(norm(star_contract(f, f, 1)) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("r = 0 contraction is the tensor product") {
    CounterRng rng(77);
    const Kernel f = oracles::random_kernel(rng, 2, 5, 6);
    const Kernel g = oracles::random_kernel(rng, 1, 5, 3);
    const SparseTensor t = star_contract(f, g, 0);
    const auto df = oracles::materialize(f);
    const auto dg = oracles::materialize(g);
    IndexTuple buf;
    oracles::enumerate_tuples(3, 5, buf, [&](const IndexTuple& idx) {
        const double expect = df.at({idx[0], idx[1]}) * dg.at({idx[2]});
        CHECK(t.value(idx) == doctest::Approx(expect).epsilon(1e-13));
    });
}

TEST_CASE("full contraction of order-1 kernels is the inner product") {
    const Kernel a = make_kernel(1, 3, {{{1}, 1.0}, {{2}, 2.0}, {{3}, -0.5}});
    const Kernel b = make_kernel(1, 3, {{{1}, 0.5}, {{3}, 4.0}});
    const SparseTensor t = star_contract(a, b, 1);
    CHECK(t.total_order() == 0);
    CHECK(t.value({}) == doctest::Approx(inner_product(a, b)).epsilon(1e-14));
}

TEST_CASE("star contraction agrees with dense brute force") {
    CounterRng rng(5150);
    for (int rep = 0; rep < 8; ++rep) {
        const int order = 1 + rep % 3;
        const Kernel f = oracles::random_kernel(rng, order, 6, 5);
        const Kernel g = oracles::random_kernel(rng, order, 6, 5);
        for (int r = 0; r <= order; ++r) {
            const SparseTensor t = star_contract(f, g, r);
            const auto dt = oracles::materialize(t, 6);
            const auto brute =
                oracles::dense_contract(oracles::materialize(f), oracles::materialize(g), r, 6);
            REQUIRE(dt.cells.size() == brute.cells.size());
            for (std::size_t i = 0; i < dt.cells.size(); ++i) {
                CHECK(dt.cells[i] == doctest::Approx(brute.cells[i]).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("contraction outputs are symmetric within blocks") {
    CounterRng rng(31);
    const Kernel f = oracles::random_kernel(rng, 3, 5, 8);
    const SparseTensor t = star_contract(f, f, 1);  // blocks (2, 2)
    IndexTuple buf;
    oracles::enumerate_tuples(4, 5, buf, [&](const IndexTuple& idx) {
        const double v = t.value(idx);
        CHECK(t.value({idx[1], idx[0], idx[2], idx[3]}) == doctest::Approx(v).epsilon(1e-12));
        CHECK(t.value({idx[0], idx[1], idx[3], idx[2]}) == doctest::Approx(v).epsilon(1e-12));
    });
}

TEST_CASE("contraction inequality: equality at f = g, r = 0, order 1") {
    const Kernel f = make_kernel(1, 3, {{{1}, 0.7}, {{2}, -0.4}});
    const auto c = contraction_inequality_holds(f, f, 0);
    CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-13));
    CHECK(c.holds);
}

TEST_CASE("contraction inequality on the order-2 family and random pairs") {
    for (int n = 1; n <= 10; ++n) {
        const Kernel f = builtin_family("example2", n);
        CHECK(contraction_inequality_holds(f, f, 1).holds);
    }
    CounterRng rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        const Kernel f = oracles::random_kernel(rng, 2, 8, 6);
        const Kernel g = oracles::random_kernel(rng, 2, 8, 6);
        for (int r = 0; r <= 2; ++r) {
            CHECK(contraction_inequality_holds(f, g, r).holds);
        }
    }
    CHECK_THROWS_AS(contraction_inequality_holds(builtin_family("sum1", 2),
                                                 builtin_family("example2", 2), 1),
                    std::invalid_argument);
}

TEST_CASE("builtin families") {
    const Kernel e1 = builtin_family("example2", 1);
    REQUIRE(e1.entries().size() == 1);
    CHECK(e1.entries().begin()->first == IndexTuple{1, 2});
    CHECK(e1.entries().begin()->second == 0.5);

    const Kernel s4 = builtin_family("sum1", 4);
    CHECK(s4.entries().size() == 4);
    for (const auto& [idx, v] : s4.entries()) CHECK(v == 0.5);
    CHECK(norm(s4) == doctest::Approx(1.0).epsilon(1e-15));

    for (int k = 1; k <= 20; ++k) {
        for (int l = k + 1; l <= 20; ++l) {
            CHECK(inner_product(builtin_family("example2", k), builtin_family("example2", l)) ==
                  0.0);
        }
    }

    CHECK_THROWS_AS(builtin_family("nope", 3), std::invalid_argument);
    CHECK_THROWS_AS(builtin_family("sum1", 0), std::invalid_argument);
}

TEST_CASE("kernel JSON round trip is lossless") {
    CounterRng rng(4242);
    for (int rep = 0; rep < 10; ++rep) {
        const Kernel f = oracles::random_kernel(rng, 1 + rep % 3, 9, 7);
        const Kernel back = kernel_from_json(kernel_to_json(f));
        CHECK(back.order() == f.order());
        CHECK(back.support_bound() == f.support_bound());
        REQUIRE(back.entries().size() == f.entries().size());
        auto it = f.entries().begin();
        for (const auto& [idx, v] : back.entries()) {
            CHECK(idx == it->first);
            CHECK(v == it->second);  // bit-exact
            ++it;
        }
        // serialized text parses back to the same doubles
        const auto j = nlohmann::json::parse(kernel_to_json(f).dump());
        const Kernel reparsed = kernel_from_json(j);
        CHECK(inner_product(reparsed, f) == inner_product(f, f));
    }
}

TEST_CASE("kernel JSON rejects malformed payloads") {
    CHECK_THROWS(kernel_from_json(nlohmann::json::parse(R"({"order": 2})")));
    CHECK_THROWS(kernel_from_json(nlohmann::json::parse(
        R"({"order": 2, "support_bound": 3, "entries": [{"idx": [1, 1], "val": 1.0}]})")));
}

TEST_CASE("order-0 kernel holds a constant") {
    const Kernel c = make_kernel(0, 1, {{{}, 3.7}});
    CHECK(c.order() == 0);
    CHECK(c.entries().begin()->second == 3.7);
}
