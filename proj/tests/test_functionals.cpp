#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "radstein/functional.hpp"
#include "radstein/rng.hpp"
#include "support/oracles.hpp"

using namespace radstein;

namespace {

double sup_diff(const Functional& a, const Functional& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sup = std::max(sup, std::abs(a.values()[i] - b.values()[i]));
    }
    return sup;
}

}  // namespace

TEST_CASE("second-order integral of the basic kernel") {
    const SpacePtr s = symmetric_space(2);
    const Functional f = multiple_integral(s, builtin_family("example2", 1));
    // masks: bit set = +1; values Y1 Y2
    CHECK(f[0b11] == doctest::Approx(1.0));
    CHECK(f[0b01] == doctest::Approx(-1.0));
    CHECK(f[0b10] == doctest::Approx(-1.0));
    CHECK(f[0b00] == doctest::Approx(1.0));
    CHECK(variance(f) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("order-0 integral is the constant") {
    const SpacePtr s = symmetric_space(3);
    const Functional f = multiple_integral(s, make_kernel(0, 1, {{{}, 3.7}}));
    for (std::uint32_t m = 0; m < f.size(); ++m) CHECK(f[m] == 3.7);
}

TEST_CASE("law of the normalized partial sum at n = 4") {
    const SpacePtr s = symmetric_space(4);
    const Functional f = multiple_integral(s, builtin_family("sum1", 4));
    std::map<double, double> law;
    for (std::uint32_t m = 0; m < f.size(); ++m) law[f[m]] += s->weight(m);
    REQUIRE(law.size() == 5);
    CHECK(law[0.0] == doctest::Approx(6.0 / 16.0));
    CHECK(law[1.0] == doctest::Approx(4.0 / 16.0));
    CHECK(law[-1.0] == doctest::Approx(4.0 / 16.0));
    CHECK(law[2.0] == doctest::Approx(1.0 / 16.0));
    CHECK(law[-2.0] == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("multiple_integral matches the literal ordered-tuple evaluation") {
    CounterRng rng(814);
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 4 + rep % 4;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const int order = 1 + rep % 3;
        const Kernel f = oracles::random_kernel(rng, order, n, 5);
        const Functional fast = multiple_integral(s, f);
        const Functional literal = oracles::literal_multiple_integral(s, f);
        CHECK(sup_diff(fast, literal) <= 1e-12);
    }
    CHECK_THROWS_AS(multiple_integral(symmetric_space(2), builtin_family("sum1", 3)),
                    std::invalid_argument);
}

TEST_CASE("isometry: Var J_m(f) = m! |f|^2") {
    CounterRng rng(92);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 6 + rep % 7;  // up to 12
        const SpacePtr s = rep % 3 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const int order = 1 + rep % 3;
        const Kernel f = oracles::random_kernel(rng, order, n, 6);
        const Functional jf = multiple_integral(s, f);
        const Moments m = moments(jf);
        const double expected = detail::factorial(order) * inner_product(f, f);
        CHECK(std::abs(m.mean) <= 1e-12);
        CHECK(m.variance == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("orthogonality of distinct chaos orders") {
    CounterRng rng(35);
    for (int rep = 0; rep < 10; ++rep) {
        const SpacePtr s = oracles::random_space(rng, 8);
        const Kernel f = oracles::random_kernel(rng, 1 + rep % 2, 8, 5);
        const Kernel g = oracles::random_kernel(rng, 2 + rep % 2, 8, 5);
        const double cross =
            expectation_product(multiple_integral(s, f), multiple_integral(s, g));
        if (f.order() == g.order()) {
            CHECK(cross == doctest::Approx(detail::factorial(f.order()) * inner_product(f, g))
                               .epsilon(1e-10));
        } else {
            CHECK(std::abs(cross) <= 1e-10);
        }
    }
}

TEST_CASE("moments of constants and fourth moments of partial sums") {
    const SpacePtr s = symmetric_space(3);
    const Moments mc = moments(constant_functional(s, 2.5));
    CHECK(mc.mean == 2.5);
    CHECK(mc.variance == 0.0);

    for (int n : {2, 4, 8, 12}) {
        const SpacePtr sp = symmetric_space(n);
        const Moments m = moments(multiple_integral(sp, builtin_family("sum1", n)));
        CHECK(m.central4 == doctest::Approx(3.0 - 2.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("walsh coefficients match direct projections") {
    CounterRng rng(123);
    const SpacePtr s = oracles::random_space(rng, 6);
    const Functional f = oracles::random_functional(rng, s);
    const std::vector<double> coeffs = walsh_coefficients(f);
    for (std::uint32_t subset = 0; subset < f.size(); ++subset) {
        CHECK(coeffs[subset] ==
              doctest::Approx(oracles::walsh_projection(f, subset)).epsilon(1e-11));
    }
    const Functional back = functional_from_walsh(s, coeffs);
    CHECK(sup_diff(f, back) <= 1e-12);
}

TEST_CASE("walsh basis is orthonormal under arbitrary p") {
    CounterRng rng(321);
    const SpacePtr s = oracles::random_space(rng, 5);
    std::vector<Functional> basis;
    for (std::uint32_t subset = 0; subset < 32; ++subset) {
        std::vector<double> coeffs(32, 0.0);
        coeffs[subset] = 1.0;
        basis.push_back(functional_from_walsh(s, std::move(coeffs)));
    }
    for (std::uint32_t a = 0; a < 32; ++a) {
        for (std::uint32_t b = a; b < 32; ++b) {
            const double e = expectation_product(basis[a], basis[b]);
            CHECK(std::abs(e - (a == b ? 1.0 : 0.0)) <= 1e-12);
        }
    }
}

TEST_CASE("chaos decomposition of hand-built functionals") {
    const SpacePtr s = symmetric_space(2);
    const Functional y1 = coordinate_functional(s, 1);
    const Functional y2 = coordinate_functional(s, 2);

    const ChaosDecomposition d1 = chaos_decompose(y1 * y2);
    CHECK(d1.constant == doctest::Approx(0.0));
    REQUIRE(d1.kernels.size() == 1);
    CHECK(d1.kernels[0].order() == 2);
    CHECK(d1.kernels[0].value({1, 2}) == doctest::Approx(0.5).epsilon(1e-14));

    const Functional sum = y1 + y2;
    const ChaosDecomposition d2 = chaos_decompose(sum * sum);
    CHECK(d2.constant == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(d2.kernels.size() == 1);
    CHECK(d2.kernels[0].value({1, 2}) == doctest::Approx(1.0).epsilon(1e-14));

    const ChaosDecomposition d3 = chaos_decompose(constant_functional(s, -1.25));
    CHECK(d3.constant == -1.25);
    CHECK(d3.kernels.empty());
}

TEST_CASE("chaos round trip and Parseval") {
    CounterRng rng(88);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 4 + rep % 5;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const Functional f = oracles::random_functional(rng, s);
        const ChaosDecomposition d = chaos_decompose(f);
        CHECK(sup_diff(f, reconstruct(s, d)) <= 1e-10);

        double parseval = d.constant * d.constant;
        for (const Kernel& k : d.kernels) {
            parseval += detail::factorial(k.order()) * inner_product(k, k);
        }
        CHECK(expectation_product(f, f) == doctest::Approx(parseval).epsilon(1e-10));
    }
}

TEST_CASE("functional CSV export") {
    const SpacePtr s = symmetric_space(1);
    const Functional f = coordinate_functional(s, 1);
    std::ostringstream os;
    export_functional_csv(f, os);
    CHECK(os.str() == "mask,weight,value\n0,0.5,-1\n1,0.5,1\n");
}

TEST_CASE("functionals reject mismatched spaces and bad tables") {
    const SpacePtr a = symmetric_space(2);
    const SpacePtr b = symmetric_space(2);
    CHECK_THROWS_AS(coordinate_functional(a, 1) + coordinate_functional(b, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(Functional(a, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Functional(a, {1.0, 2.0, 3.0, std::nan("")}), std::invalid_argument);
}
