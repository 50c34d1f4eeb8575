#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "radstein/rng.hpp"
#include "radstein/stein.hpp"
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

// The shared domination battery: first-chaos sums, the order-2 family,
// random second-chaos kernels, symmetric and skewed probabilities.
std::vector<Functional> domination_battery() {
    std::vector<Functional> battery;
    for (int n : {2, 4, 8, 16}) {
        battery.push_back(
            multiple_integral(symmetric_space(n), builtin_family("sum1", n)));
    }
    for (int n : {1, 2, 3, 4}) {
        battery.push_back(
            multiple_integral(symmetric_space(2 * n), builtin_family("example2", n)));
    }
    CounterRng rng(600);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 6 + rep % 3;
        SpacePtr s;
        if (rep % 3 == 0) {
            s = symmetric_space(n);
        } else if (rep % 3 == 1) {
            s = make_space(std::vector<double>(n, 0.3));
        } else {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k) p[k] = 0.35 + 0.3 * (k % 2);
            s = make_space(std::move(p));
        }
        const Kernel f = oracles::random_kernel(rng, 2, n, 6);
        battery.push_back(multiple_integral(s, f));
    }
    battery.push_back(coordinate_functional(symmetric_space(1), 1));
    battery.push_back(constant_functional(symmetric_space(1), 0.0));
    return battery;
}

}  // namespace

TEST_CASE("distance oracle on the single coordinate") {
    const Functional y1 = coordinate_functional(symmetric_space(1), 1);
    const DistanceOracle d = normal_distance_oracle(y1);
    REQUIRE(d.law.atoms.size() == 2);
    CHECK(d.law.atoms[0] == -1.0);
    CHECK(d.law.masses[0] == 0.5);
    CHECK(d.d_k == doctest::Approx(normal_cdf(1.0) - 0.5).epsilon(1e-12));
    CHECK(d.d_w == doctest::Approx(0.53537841971327).epsilon(1e-10));
}

TEST_CASE("distance oracle on the degenerate law") {
    const Functional zero = constant_functional(symmetric_space(1), 0.0);
    const DistanceOracle d = normal_distance_oracle(zero);
    CHECK(d.d_w == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-10));
    CHECK(d.d_k == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("closed-form Wasserstein integral matches quadrature") {
    CounterRng rng(610);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 4 + rep % 3;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const Kernel f = oracles::random_kernel(rng, 1 + rep % 2, n, 5);
        const DistanceOracle d = normal_distance_oracle(multiple_integral(s, f));
        CHECK(d.d_w == doctest::Approx(oracles::quadrature_wasserstein(d.law)).epsilon(1e-6));
    }
}

TEST_CASE("first-chaos convolution law matches enumeration") {
    CounterRng rng(620);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 5 + rep % 4;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const Kernel f = oracles::random_kernel(rng, 1, n, n);
        const DiscreteLaw a = first_chaos_law(s->probabilities(), f);
        const DiscreteLaw b = law_of(multiple_integral(s, f));
        const DistanceOracle da = normal_distance_oracle(a);
        const DistanceOracle db = normal_distance_oracle(b);
        CHECK(da.d_w == doctest::Approx(db.d_w).epsilon(1e-10));
        CHECK(da.d_k == doctest::Approx(db.d_k).epsilon(1e-10));
    }
    // n = 64 partial sum collapses to 65 atoms
    const DiscreteLaw big = first_chaos_law(std::vector<double>(64, 0.5),
                                            builtin_family("sum1", 64));
    CHECK(big.atoms.size() == 65);
    double mass = 0.0;
    for (double m : big.masses) mass += m;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gamma quantity") {
    const SpacePtr s2 = symmetric_space(2);
    const Functional prod = coordinate_functional(s2, 1) * coordinate_functional(s2, 2);
    CHECK(sup_diff(gamma_quantity(prod), constant_functional(s2, 1.0)) <= 1e-12);

    CounterRng rng(630);
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 4 + rep % 4;
        const SpacePtr s = oracles::random_space(rng, n);
        const Kernel f = oracles::random_kernel(rng, 1, n, n);
        const Functional jf = multiple_integral(s, f);
        // first chaos: gamma is the deterministic |f|^2
        CHECK(sup_diff(gamma_quantity(jf), constant_functional(s, inner_product(f, f))) <=
              1e-12);

        const Functional g = oracles::centred(oracles::random_functional(rng, s));
        CHECK(expectation(gamma_quantity(g)) ==
              doctest::Approx(variance(g)).epsilon(1e-10));
    }
}

TEST_CASE("wasserstein bound: normalized partial sums") {
    const SpacePtr s = symmetric_space(4);
    const BoundReport r = wasserstein_bound(multiple_integral(s, builtin_family("sum1", 4)));
    CHECK(r.terms[0].second == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(r.terms[1].second == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(*r.slack > 0.0);
}

TEST_CASE("wasserstein bound: single coordinate and scaled coordinate") {
    const SpacePtr s = symmetric_space(1);
    const BoundReport r = wasserstein_bound(coordinate_functional(s, 1));
    CHECK(r.terms[0].second == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(r.terms[1].second == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(*r.oracle == doctest::Approx(0.535378).epsilon(1e-4));
    CHECK(*r.slack > 0.0);

    const double c = 1.7;
    const BoundReport rc = wasserstein_bound(c * coordinate_functional(s, 1));
    CHECK(rc.terms[0].second ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::abs(1.0 - c * c))
              .epsilon(1e-12));
}

TEST_CASE("wasserstein bound equals 2/sqrt(n) on sum1, closed and enumerated") {
    for (int n : {4, 16}) {
        const SpacePtr s = symmetric_space(n);
        const BoundReport enumerated =
            wasserstein_bound(multiple_integral(s, builtin_family("sum1", n)));
        CHECK(std::abs(enumerated.total - 2.0 / std::sqrt(n)) <= 1e-12);
        const BoundReport closed = first_chaos_wasserstein_bound(
            std::vector<double>(n, 0.5), builtin_family("sum1", n));
        CHECK(std::abs(closed.total - 2.0 / std::sqrt(n)) <= 1e-12);
        CHECK(std::abs(closed.total - enumerated.total) <= 1e-13);
        CHECK(*closed.oracle == doctest::Approx(*enumerated.oracle).epsilon(1e-12));
    }
    const BoundReport r64 = first_chaos_wasserstein_bound(std::vector<double>(64, 0.5),
                                                          builtin_family("sum1", 64));
    CHECK(std::abs(r64.total - 0.25) <= 1e-12);
    CHECK(*r64.oracle <= 0.25);
}

TEST_CASE("degenerate zero functional saturates the Wasserstein bound") {
    const BoundReport r = wasserstein_bound(constant_functional(symmetric_space(1), 0.0));
    CHECK(r.total == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(*r.slack) <= 1e-10);
}

TEST_CASE("chaos-specialized bound dominates the exact-term bound") {
    CounterRng rng(640);
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 5 + rep % 3;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const Kernel f = oracles::random_kernel(rng, 1 + rep % 2, n, 5);
        const BoundReport coarse = chaos_wasserstein_bound(s, f);
        const BoundReport exact = wasserstein_bound(multiple_integral(s, f));
        CHECK(coarse.total >= exact.total - 1e-10);
        CHECK(*coarse.slack >= -1e-10);
    }
    // example2: the moment term vanishes and the totals collapse to 2/sqrt(n)
    for (int n = 1; n <= 4; ++n) {
        const BoundReport r =
            chaos_wasserstein_bound(symmetric_space(2 * n), builtin_family("example2", n));
        CHECK(r.terms[0].second == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.total == doctest::Approx(2.0 / std::sqrt(n)).epsilon(1e-12));
    }
}

TEST_CASE("kolmogorov bound: single coordinate term values") {
    const BoundReport r = kolmogorov_bound(coordinate_functional(symmetric_space(1), 1));
    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
    CHECK(r.terms[0].second == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(r.terms[1].second == doctest::Approx(sqrt2pi / 4.0).epsilon(1e-13));
    CHECK(r.terms[2].second == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.terms[3].second == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.total == doctest::Approx(3.0 + sqrt2pi / 4.0).epsilon(1e-12));
    CHECK(*r.oracle == doctest::Approx(normal_cdf(1.0) - 0.5).epsilon(1e-12));
    CHECK(*r.slack > 0.0);
}

TEST_CASE("kolmogorov bound decreases along the partial-sum family") {
    const double t4 = kolmogorov_bound(
                          multiple_integral(symmetric_space(4), builtin_family("sum1", 4)))
                          .total;
    const double t16 = kolmogorov_bound(
                           multiple_integral(symmetric_space(16), builtin_family("sum1", 16)))
                           .total;
    CHECK(t16 < t4);
}

TEST_CASE("bound domination across the battery") {
    for (const Functional& f : domination_battery()) {
        const BoundReport wr = wasserstein_bound(f);
        CHECK(*wr.slack >= -1e-10);
        const BoundReport kr = kolmogorov_bound(f);
        CHECK(*kr.slack >= -1e-10);
        const DistanceOracle d = normal_distance_oracle(f);
        CHECK(d.d_k <= std::sqrt(d.d_w) + 1e-10);
    }
}

TEST_CASE("second-order terms: first chaos zeroes the iterated-derivative terms") {
    const SpacePtr s = symmetric_space(4);
    const SecondOrderReport r =
        second_order_terms(multiple_integral(s, builtin_family("sum1", 4)));
    CHECK(r.a_terms.at("A1") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.a_terms.at("A2") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.a_terms.at("A6") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.a_terms.at("A7") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.a_terms.at("A3") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.a_terms.at("A5") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.wasserstein.total == doctest::Approx(1.0).epsilon(1e-12));

    // coincides with the exact-term discreteness term for first chaos
    const BoundReport wr = wasserstein_bound(multiple_integral(s, builtin_family("sum1", 4)));
    CHECK(std::abs(r.wasserstein.total - wr.terms[1].second) <= 1e-12);
}

TEST_CASE("second-order terms: order-2 family stays finite and dominates") {
    const SpacePtr s = symmetric_space(4);
    const SecondOrderReport r =
        second_order_terms(multiple_integral(s, builtin_family("example2", 2)));
    for (const auto& [name, v] : r.a_terms) CHECK(std::isfinite(v));
    CHECK(*r.kolmogorov.slack >= -1e-10);
    CHECK(*r.wasserstein.slack >= -1e-10);

    CHECK_THROWS_AS(second_order_terms(multiple_integral(s, builtin_family("example2", 2)),
                                       2.0, 2.0, 5.0),
                    std::invalid_argument);
}

TEST_CASE("second-order bounds dominate on random batteries") {
    CounterRng rng(650);
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 4 + rep % 3;
        const SpacePtr s = rep % 2 == 0 ? symmetric_space(n) : oracles::random_space(rng, n);
        const Kernel f = oracles::random_kernel(rng, 2, n, 5);
        const SecondOrderReport r = second_order_terms(multiple_integral(s, f));
        CHECK(*r.kolmogorov.slack >= -1e-10);
        CHECK(*r.wasserstein.slack >= -1e-10);
    }
}

TEST_CASE("contraction bounds on the order-2 family") {
    for (int n = 1; n <= 4; ++n) {
        const ContractionBoundsReport r =
            contraction_bounds(symmetric_space(2 * n), builtin_family("example2", n));
        REQUIRE(r.contraction_norms.size() == 1);
        CHECK(r.contraction_norms[0] ==
              doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * n))).epsilon(1e-12));
        // |DF|^2 is deterministic here, and the fourth-moment ratio is flat
        CHECK(r.var_df_norm <= 1e-12);
        CHECK(r.ratio_fourth == doctest::Approx(16.0).epsilon(1e-10));
    }

    const ContractionBoundsReport first =
        contraction_bounds(symmetric_space(3), builtin_family("sum1", 3));
    CHECK(first.contraction_norms.empty());
    CHECK(first.var_df_norm <= 1e-14);

    CHECK_THROWS_AS(contraction_bounds(make_space({0.3, 0.4, 0.5, 0.6}),
                                       builtin_family("example2", 2)),
                    std::invalid_argument);
}

TEST_CASE("characteristic-function bound at t = 0 and the spot value") {
    const SpacePtr s = symmetric_space(4);
    const Functional sum4 = multiple_integral(s, builtin_family("sum1", 4));
    const BoundReport zero = charfn_bound(sum4, 0.0);
    CHECK(zero.total == 0.0);
    CHECK(*zero.oracle <= 1e-15);

    const BoundReport at1 = charfn_bound(sum4, 1.0);
    const double expected_gap = std::abs(std::pow(std::cos(0.5), 4) - std::exp(-0.5));
    CHECK(*at1.oracle == doctest::Approx(expected_gap).epsilon(1e-10));
    CHECK(*at1.slack >= -1e-10);

    const BoundReport est2 = charfn_bound_chaos(s, builtin_family("sum1", 4), 1.0);
    CHECK(est2.total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*est2.oracle == doctest::Approx(expected_gap).epsilon(1e-10));
}

TEST_CASE("characteristic-function bounds on a t grid") {
    const SpacePtr s = symmetric_space(4);
    const Kernel f = builtin_family("example2", 2);
    const Functional jf = multiple_integral(s, f);
    for (double t = -3.0; t <= 3.0 + 1e-9; t += 0.25) {
        CHECK(*charfn_bound(jf, t).slack >= -1e-10);
        CHECK(*charfn_bound_chaos(s, f, t).slack >= -1e-10);
    }
}

TEST_CASE("bound reports reject non-centred inputs") {
    const SpacePtr s = symmetric_space(2);
    const Functional shifted = constant_functional(s, 0.5);
    CHECK_THROWS_AS(wasserstein_bound(shifted), std::domain_error);
    CHECK_THROWS_AS(kolmogorov_bound(shifted), std::domain_error);
    CHECK_THROWS_AS(gamma_quantity(shifted), std::domain_error);
    CHECK_THROWS_AS(charfn_bound(shifted, 1.0), std::domain_error);
}
