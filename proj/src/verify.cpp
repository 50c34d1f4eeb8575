#include "radstein/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "radstein/accumulate.hpp"
#include "radstein/asclt.hpp"
#include "radstein/functional.hpp"
#include "radstein/kernel.hpp"
#include "radstein/malliavin.hpp"
#include "radstein/rng.hpp"
#include "radstein/stein.hpp"

namespace radstein {

namespace {

Kernel random_kernel(CounterRng& rng, int order, int support_bound, int entries) {
    std::vector<std::pair<IndexTuple, double>> list;
    std::map<IndexTuple, double> seen;
    for (int e = 0; e < entries; ++e) {
        IndexTuple idx;
        while (static_cast<int>(idx.size()) < order) {
            const int i = rng.uniform_int(1, support_bound);
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end());
        seen[idx] = rng.uniform(-1.0, 1.0);
    }
    for (const auto& [idx, v] : seen) list.push_back({idx, v});
    return make_kernel(order, support_bound, list);
}

Functional random_centred_functional(CounterRng& rng, const SpacePtr& space) {
    std::vector<double> v(space->config_count());
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    Functional f(space, std::move(v));
    return f - constant_functional(space, expectation(f));
}

class Suite {
public:
    Suite(const SpacePtr& space, std::uint64_t seed, double tol)
        : space_(space), rng_(seed), tol_(tol) {}

    void close(const std::string& name, double lhs, double rhs, double tol) {
        checks_.push_back({name, lhs, rhs, tol, std::abs(lhs - rhs) <= tol});
    }
    void dominates(const std::string& name, double bound, double truth, double tol) {
        checks_.push_back({name, bound, truth, tol, bound >= truth - tol});
    }
    void holds(const std::string& name, bool ok) {
        checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, 0.0, ok});
    }

    std::vector<CheckResult> run();

private:
    void kernels();
    void space_moments();
    void functionals();
    void operators();
    void bounds();
    void averaging();

    SpacePtr space_;
    CounterRng rng_;
    double tol_;
    std::vector<CheckResult> checks_;
};

void Suite::kernels() {
    for (int i = 0; i < 12; ++i) {
        const int order = rng_.uniform_int(1, 2);
        const Kernel f = random_kernel(rng_, order, 6, 4);
        const Kernel g = random_kernel(rng_, order, 6, 4);
        for (int r = 0; r <= order; ++r) {
            const auto c = contraction_inequality_holds(f, g, r);
            holds("kernel/contraction_inequality[" + std::to_string(i) + ",r=" +
                      std::to_string(r) + "]",
                  c.holds);
        }
    }
    for (int n = 1; n <= 8; ++n) {
        const Kernel f = builtin_family("example2", n);
        close("kernel/example2_contraction_norm[n=" + std::to_string(n) + "]",
              norm(star_contract(f, f, 1)), 1.0 / (2.0 * std::sqrt(2.0 * n)), 1e-12);
    }
    close("kernel/example2_gram_off_diagonal",
          inner_product(builtin_family("example2", 2), builtin_family("example2", 5)), 0.0, 0.0);
}

void Suite::space_moments() {
    NeumaierSum total;
    for (double w : space_->weights()) total.add(w);
    close("space/weights_sum_to_one", total.value(), 1.0, 1e-14);
    const int n = space_->size();
    for (int k = 1; k <= n; ++k) {
        const Functional yk = coordinate_functional(space_, k);
        close("space/mean_Y[" + std::to_string(k) + "]", expectation(yk), 0.0, 1e-12);
        close("space/var_Y[" + std::to_string(k) + "]", expectation_product(yk, yk), 1.0, 1e-12);
    }
    for (int j = 1; j <= std::min(n, 4); ++j) {
        for (int k = j + 1; k <= std::min(n, 5); ++k) {
            close("space/cov_Y[" + std::to_string(j) + "," + std::to_string(k) + "]",
                  expectation_product(coordinate_functional(space_, j),
                                      coordinate_functional(space_, k)),
                  0.0, 1e-12);
        }
    }
}

void Suite::functionals() {
    const int n = space_->size();
    for (int i = 0; i < 10; ++i) {
        const int order = rng_.uniform_int(1, std::min(3, n));
        const Kernel f = random_kernel(rng_, order, n, std::min(6, n));
        const Functional jf = multiple_integral(space_, f);
        const Moments m = moments(jf);
        close("functional/integral_mean[" + std::to_string(i) + "]", m.mean, 0.0, 1e-12);
        const double iso = detail::factorial(order) * inner_product(f, f);
        close("functional/isometry[" + std::to_string(i) + "]", m.variance, iso,
              tol_ * std::max(1.0, iso));
    }
    for (int i = 0; i < 5; ++i) {
        const Functional f = random_centred_functional(rng_, space_);
        const ChaosDecomposition d = chaos_decompose(f);
        const Functional back = reconstruct(space_, d);
        double sup = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            sup = std::max(sup, std::abs(f.values()[j] - back.values()[j]));
        }
        close("functional/chaos_round_trip[" + std::to_string(i) + "]", sup, 0.0, tol_);
        NeumaierSum parseval;
        parseval.add(d.constant * d.constant);
        for (const Kernel& k : d.kernels) {
            parseval.add(detail::factorial(k.order()) * inner_product(k, k));
        }
        close("functional/parseval[" + std::to_string(i) + "]", expectation_product(f, f),
              parseval.value(), tol_);
    }
}

void Suite::operators() {
    const int n = space_->size();
    for (int i = 0; i < 8; ++i) {
        const Functional f = random_centred_functional(rng_, space_);
        GradientField u;
        u.space = space_;
        for (int k = 1; k <= n; ++k) u.components.push_back(random_centred_functional(rng_, space_));
        const Functional du = divergence(u);
        NeumaierSum lhs;
        for (int k = 1; k <= n; ++k) {
            lhs.add(expectation_product(u.component(k), derivative_component(f, k)));
        }
        close("malliavin/duality[" + std::to_string(i) + "]", lhs.value(),
              expectation_product(f, du), tol_);
    }
    for (int i = 0; i < 5; ++i) {
        const Functional f = random_centred_functional(rng_, space_);
        const Functional ll = ou_apply(ou_pseudo_inverse(f));
        double sup = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            sup = std::max(sup, std::abs(f.values()[j] - ll.values()[j]));
        }
        close("malliavin/ou_inverse[" + std::to_string(i) + "]", sup, 0.0, tol_);
        const Functional lf = ou_apply(f);
        const Functional neg_delta_d = constant_functional(space_, 0.0) - divergence(derivative(f));
        sup = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            sup = std::max(sup, std::abs(lf.values()[j] - neg_delta_d.values()[j]));
        }
        close("malliavin/ou_is_minus_delta_d[" + std::to_string(i) + "]", sup, 0.0, tol_);
        close("malliavin/poincare[" + std::to_string(i) + "]",
              std::min(0.0, expectation(derivative(f).norm_squared()) - variance(f)), 0.0, tol_);
    }
    const ScalarFn cosfn = [](double x) { return std::cos(x); };
    const ScalarFn msinfn = [](double x) { return -std::sin(x); };
    for (int i = 0; i < 5; ++i) {
        const Functional f = random_centred_functional(rng_, space_);
        holds("malliavin/chain_rule_bound[" + std::to_string(i) + "]",
              chain_rule_apply(f, cosfn, msinfn, 1.0).bound_ok);
        const Functional g = random_centred_functional(rng_, space_);
        const IbpResult ibp = ibp_report(f, g, [](double x) { return std::tanh(x); });
        close("malliavin/ibp[" + std::to_string(i) + "]", ibp.lhs, ibp.rhs, tol_);
    }
}

void Suite::bounds() {
    const int n = space_->size();
    std::vector<std::pair<std::string, Functional>> battery;
    battery.push_back({"sum1", multiple_integral(space_, builtin_family("sum1", n))});
    if (n >= 4) {
        battery.push_back(
            {"example2", multiple_integral(space_, builtin_family("example2", n / 2))});
    }
    for (int i = 0; i < 3; ++i) {
        const Kernel f = random_kernel(rng_, std::min(2, n), n, std::min(5, n));
        if (f.empty()) continue;
        battery.push_back({"random" + std::to_string(i), multiple_integral(space_, f)});
    }
    for (const auto& [name, F] : battery) {
        const BoundReport wr = wasserstein_bound(F);
        dominates("stein/wasserstein_dominates[" + name + "]", wr.total, *wr.oracle, tol_);
        const BoundReport kr = kolmogorov_bound(F);
        dominates("stein/kolmogorov_dominates[" + name + "]", kr.total, *kr.oracle, tol_);
        const DistanceOracle d = normal_distance_oracle(F);
        dominates("stein/dk_le_sqrt_dw[" + name + "]", std::sqrt(d.d_w), d.d_k, tol_);
        for (double t = -2.0; t <= 2.0; t += 0.5) {
            const BoundReport cr = charfn_bound(F, t);
            dominates("stein/charfn_dominates[" + name + ",t=" + format17(t) + "]", cr.total,
                      *cr.oracle, tol_);
        }
    }
}

void Suite::averaging() {
    close("asclt/gamma_1", harmonic_gamma(1), 1.0, 0.0);
    close("asclt/gamma_4", harmonic_gamma(4), 25.0 / 12.0, 1e-15);
    const std::vector<double> path = simulate_example_path(rng_.uniform_int(1, 1 << 20), 64);
    const auto one = [](double) { return 1.0; };
    close("asclt/log_average_of_one", log_average(path, one, 64), 1.0, 1e-14);
    close("asclt/il_statistic_at_zero", std::abs(il_statistic(path, 0.0, 64)), 0.0, 0.0);
    const auto fam = make_builtin_family("example2");
    holds("asclt/example2_c1_bounded",
          condition_series(*fam, SeriesCondition::C1, 3000).bounded);
    holds("asclt/example2_c2_bounded",
          condition_series(*fam, SeriesCondition::C2, 3000, 1).bounded);
}

std::vector<CheckResult> Suite::run() {
    kernels();
    space_moments();
    functionals();
    operators();
    bounds();
    averaging();
    return std::move(checks_);
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const SpacePtr& space, std::uint64_t seed, double tol) {
    return Suite(space, seed, tol).run();
}

}  // namespace radstein
