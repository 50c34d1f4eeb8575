#include "radstein/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "radstein/accumulate.hpp"

namespace radstein {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

void require_centred(const Functional& f, const char* what) {
    const double mean = expectation(f);
    if (std::abs(mean) > 1e-12) {
        throw std::domain_error(std::string(what) + ": input not centred (mean " +
                                std::to_string(mean) + ")");
    }
}

// Antiderivative of the standard normal CDF: G(x) = x Phi(x) + phi(x).
double normal_cdf_antideriv(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// E[(Z - x)^+] = phi(x) - x (1 - Phi(x)): the right Gaussian tail integral.
double normal_upper_tail_integral(double x) {
    return normal_pdf(x) - x * (1.0 - normal_cdf(x));
}

// Solves Phi(t) = c on [a, b] (assumes a bracket) to absolute width 1e-13.
double bisect_normal_cdf(double a, double b, double c) {
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        const double mid = 0.5 * (a + b);
        (normal_cdf(mid) < c ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

DiscreteLaw law_of(const Functional& f) {
    const auto& w = f.space()->weights();
    std::vector<std::pair<double, double>> pairs(f.size());
    for (std::uint32_t mask = 0; mask < f.size(); ++mask) pairs[mask] = {f[mask], w[mask]};
    std::sort(pairs.begin(), pairs.end());
    DiscreteLaw law;
    for (const auto& [v, m] : pairs) {
        if (!law.atoms.empty() && law.atoms.back() == v) {
            law.masses.back() += m;
        } else {
            law.atoms.push_back(v);
            law.masses.push_back(m);
        }
    }
    return law;
}

DiscreteLaw first_chaos_law(const std::vector<double>& p, const Kernel& f,
                            std::size_t atom_cap) {
    if (f.order() != 1) throw std::invalid_argument("first_chaos_law: kernel order must be 1");
    if (f.support_bound() > static_cast<int>(p.size())) {
        throw std::invalid_argument("first_chaos_law: support exceeds probability sequence");
    }
    DiscreteLaw law{{0.0}, {1.0}};
    for (const auto& [idx, v] : f.entries()) {
        const int k = idx[0];
        const double pk = p[k - 1];
        if (!(pk > 0.0 && pk < 1.0)) {
            throw std::invalid_argument("first_chaos_law: probability outside (0,1)");
        }
        const double qk = 1.0 - pk;
        const double up = v * std::sqrt(qk / pk);
        const double dn = -v * std::sqrt(pk / qk);
        // Merge the two shifted copies; both stay sorted since up > dn.
        DiscreteLaw next;
        next.atoms.reserve(2 * law.atoms.size());
        next.masses.reserve(2 * law.atoms.size());
        std::size_t i = 0, j = 0;
        while (i < law.atoms.size() || j < law.atoms.size()) {
            double a;
            double m;
            if (j >= law.atoms.size() ||
                (i < law.atoms.size() && law.atoms[i] + dn <= law.atoms[j] + up)) {
                a = law.atoms[i] + dn;
                m = law.masses[i] * qk;
                ++i;
            } else {
                a = law.atoms[j] + up;
                m = law.masses[j] * pk;
                ++j;
            }
            if (!next.atoms.empty() && next.atoms.back() == a) {
                next.masses.back() += m;
            } else {
                next.atoms.push_back(a);
                next.masses.push_back(m);
            }
        }
        if (next.atoms.size() > atom_cap) {
            throw std::length_error("first_chaos_law: atom count exceeds cap");
        }
        law = std::move(next);
    }
    return law;
}

DistanceOracle normal_distance_oracle(DiscreteLaw law) {
    DistanceOracle out;
    out.law = std::move(law);
    const auto& atoms = out.law.atoms;
    const auto& masses = out.law.masses;
    if (atoms.empty()) throw std::invalid_argument("normal_distance_oracle: empty law");

    // Kolmogorov: check the CDF from both sides of every atom.
    double cum = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double phi = normal_cdf(atoms[i]);
        out.d_k = std::max(out.d_k, std::abs(cum - phi));
        cum += masses[i];
        out.d_k = std::max(out.d_k, std::abs(cum - phi));
    }

    // Wasserstein: piecewise-exact integral of |CDF - Phi|.
    NeumaierSum total;
    total.add(normal_cdf_antideriv(atoms.front()));  // left tail, CDF = 0
    cum = masses.front();
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        const double a = atoms[i], b = atoms[i + 1];
        const double c = cum;
        const double ga = normal_cdf_antideriv(a), gb = normal_cdf_antideriv(b);
        const double pa = normal_cdf(a), pb = normal_cdf(b);
        if (pa >= c) {
            total.add((gb - ga) - c * (b - a));
        } else if (pb <= c) {
            total.add(c * (b - a) - (gb - ga));
        } else {
            const double x = bisect_normal_cdf(a, b, c);
            const double gx = normal_cdf_antideriv(x);
            total.add(c * (x - a) - (gx - ga));
            total.add((gb - gx) - c * (b - x));
        }
        cum += masses[i + 1];
    }
    total.add(normal_upper_tail_integral(atoms.back()));  // right tail, CDF = 1
    out.d_w = total.value();
    return out;
}

DistanceOracle normal_distance_oracle(const Functional& f) {
    return normal_distance_oracle(law_of(f));
}

Functional gamma_quantity(const Functional& f) {
    require_centred(f, "gamma_quantity");
    const Functional linv = ou_pseudo_inverse(f);
    std::vector<double> acc(f.size(), 0.0);
    for (int k = 1; k <= f.space()->size(); ++k) {
        const Functional df = derivative_component(f, k);
        const Functional dlinv = derivative_component(linv, k);
        for (std::uint32_t i = 0; i < acc.size(); ++i) {
            acc[i] += df[i] * (-dlinv[i]);
        }
    }
    return {f.space(), std::move(acc)};
}

namespace {

// sum_k (p_k q_k)^(-1/2) E[|D_k L^-1 F| (D_k F)^2], the discrete-structure
// term common to the Wasserstein, Kolmogorov and characteristic bounds.
double discreteness_term(const Functional& f, const Functional& linv) {
    const auto& space = *f.space();
    const auto& w = space.weights();
    NeumaierSum s;
    for (int k = 1; k <= space.size(); ++k) {
        const Functional df = derivative_component(f, k);
        const Functional dlinv = derivative_component(linv, k);
        const double c = 1.0 / std::sqrt(space.p(k) * space.q(k));
        for (std::size_t i = 0; i < w.size(); ++i) {
            s.add(w[i] * c * std::abs(dlinv.values()[i]) * df.values()[i] * df.values()[i]);
        }
    }
    return s.value();
}

double mean_abs_one_minus(const Functional& g) {
    const auto& w = g.space()->weights();
    NeumaierSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * std::abs(1.0 - g.values()[i]));
    return s.value();
}

}  // namespace

BoundReport wasserstein_bound(const Functional& f) {
    require_centred(f, "wasserstein_bound");
    const Functional linv = ou_pseudo_inverse(f);
    const Functional gamma = gamma_quantity(f);
    BoundReport r = make_bound_report(
        "wasserstein",
        {{"gaussian", kSqrt2OverPi * mean_abs_one_minus(gamma)},
         {"discreteness", discreteness_term(f, linv)}});
    r.set_oracle(normal_distance_oracle(f).d_w);
    return r;
}

BoundReport first_chaos_wasserstein_bound(const std::vector<double>& p, const Kernel& f,
                                          bool with_oracle) {
    if (f.order() != 1) {
        throw std::invalid_argument("first_chaos_wasserstein_bound: kernel order must be 1");
    }
    if (f.support_bound() > static_cast<int>(p.size())) {
        throw std::invalid_argument("first_chaos_wasserstein_bound: support exceeds p sequence");
    }
    NeumaierSum norm2, cubes;
    for (const auto& [idx, v] : f.entries()) {
        const double pk = p[idx[0] - 1];
        norm2.add(v * v);
        cubes.add(std::abs(v) * v * v / std::sqrt(pk * (1.0 - pk)));
    }
    BoundReport r = make_bound_report(
        "wasserstein",
        {{"gaussian", kSqrt2OverPi * std::abs(1.0 - norm2.value())},
         {"discreteness", cubes.value()}});
    if (with_oracle) r.set_oracle(normal_distance_oracle(first_chaos_law(p, f)).d_w);
    return r;
}

BoundReport chaos_wasserstein_bound(SpacePtr space, const Kernel& f) {
    const int m = f.order();
    if (m < 1) throw std::invalid_argument("chaos_wasserstein_bound: order must be >= 1");
    const Functional F = multiple_integral(space, f);
    const double ef2 = expectation_product(F, F);

    GradientField df = derivative(F);
    const Functional df_norm2 = df.norm_squared();
    const double var_df = variance(df_norm2);

    NeumaierSum fourth;
    for (int k = 1; k <= space->size(); ++k) {
        const auto& w = space->weights();
        const Functional& dk = df.component(k);
        NeumaierSum s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double d2 = dk.values()[i] * dk.values()[i];
            s.add(w[i] * d2 * d2);
        }
        fourth.add(s.value() / (space->p(k) * space->q(k)));
    }

    BoundReport r = make_bound_report(
        "chaos_wasserstein",
        {{"gaussian", kSqrt2OverPi * (std::abs(1.0 - ef2) + std::sqrt(var_df) / m)},
         {"discreteness", std::sqrt(ef2 / m) * std::sqrt(fourth.value())}});
    r.set_oracle(normal_distance_oracle(F).d_w);
    return r;
}

BoundReport kolmogorov_bound(const Functional& f) {
    require_centred(f, "kolmogorov_bound");
    const auto& space = *f.space();
    const auto& w = space.weights();
    const Functional linv = ou_pseudo_inverse(f);
    const Functional gamma = gamma_quantity(f);

    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);

    NeumaierSum half_term;       // E[|F D_k L^-1 F| (D_k F)^2 / sqrt(pq)]
    std::vector<double> signed_core(f.size(), 0.0);  // sum_k |D_k L^-1 F| D_k F / sqrt(pq)
    for (int k = 1; k <= space.size(); ++k) {
        const Functional df = derivative_component(f, k);
        const Functional dlinv = derivative_component(linv, k);
        const double c = 1.0 / std::sqrt(space.p(k) * space.q(k));
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double a = std::abs(dlinv.values()[i]);
            const double d = df.values()[i];
            half_term.add(w[i] * std::abs(f.values()[i]) * a * c * d * d);
            signed_core[i] += c * a * d;
        }
    }

    // sup_x E[signed_core ; F > x]: piecewise constant in x with breakpoints
    // at the atoms of F, so scan the weighted suffix sums of the sorted values.
    std::vector<std::uint32_t> order(f.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return f[a] < f[b]; });
    double sup_term = 0.0;  // x above max: expectation is 0
    NeumaierSum suffix;
    for (std::size_t i = order.size(); i-- > 0;) {
        suffix.add(w[order[i]] * signed_core[order[i]]);
        const bool new_atom = i == 0 || f[order[i - 1]] < f[order[i]];
        if (new_atom) sup_term = std::max(sup_term, suffix.value());
    }

    BoundReport r = make_bound_report(
        "kolmogorov",
        {{"gaussian", mean_abs_one_minus(gamma)},
         {"discreteness", sqrt2pi / 8.0 * discreteness_term(f, linv)},
         {"coupling", 0.5 * half_term.value()},
         {"supremum", sup_term}});
    r.set_oracle(normal_distance_oracle(f).d_k);
    return r;
}

SecondOrderReport second_order_terms(const Functional& f, double r, double s, double t) {
    require_centred(f, "second_order_terms");
    if (std::abs(1.0 / r + 1.0 / s + 1.0 / t - 1.0) > 1e-12) {
        throw std::invalid_argument("second_order_terms: 1/r + 1/s + 1/t must equal 1");
    }
    const auto& space = *f.space();
    const int n = space.size();
    const auto& w = space.weights();

    std::vector<Functional> d1;  // D_k F
    d1.reserve(n);
    for (int k = 1; k <= n; ++k) d1.push_back(derivative_component(f, k));

    auto weighted_mean = [&](auto&& fn) {
        NeumaierSum acc;
        for (std::size_t i = 0; i < w.size(); ++i) acc.add(w[i] * fn(i));
        return acc.value();
    };

    // P[j][k] = E[(D_j F)^2 (D_k F)^2]
    std::vector<std::vector<double>> P(n, std::vector<double>(n));
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            const double v = weighted_mean([&](std::size_t i) {
                const double a = d1[j].values()[i], b = d1[k].values()[i];
                return a * a * b * b;
            });
            P[j][k] = P[k][j] = v;
        }
    }

    NeumaierSum a1_sum, a2_sum, a6_sum, a7_sum;
    std::vector<double> fourth1(n);  // E (D_k F)^4
    for (int k = 0; k < n; ++k) fourth1[k] = P[k][k];

    for (int l = 0; l < n; ++l) {
        std::vector<Functional> d2;  // D_{l+1} D_{j+1} F for all j
        d2.reserve(n);
        for (int j = 1; j <= n; ++j) d2.push_back(derivative_component(d1[j - 1], l + 1));
        const double pql = space.p(l + 1) * space.q(l + 1);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double q = weighted_mean([&](std::size_t i) {
                    const double a = d2[j].values()[i], b = d2[k].values()[i];
                    return a * a * b * b;
                });
                a1_sum.add(std::sqrt(P[j][k]) * std::sqrt(q));
                a2_sum.add(q / pql);
            }
            const double fourth2 = weighted_mean([&](std::size_t i) {
                const double a = d2[j].values()[i];
                return a * a * a * a;
            });
            const double pqj = space.p(j + 1) * space.q(j + 1);
            a6_sum.add(fourth2 / (pqj * pql));
            // A7 couples (D_k F)^4 at the first index with the mixed fourth
            // moment; the outer 1/(p_k q_k) follows the k index.
            a7_sum.add(std::sqrt(fourth1[j]) * std::sqrt(fourth2) / pqj);
        }
    }

    NeumaierSum a3_sum, a4_sum, a5_sum;
    const double norm_r = std::pow(weighted_mean([&](std::size_t i) {
                                       return std::pow(std::abs(f.values()[i]), r);
                                   }),
                                   1.0 / r);
    for (int k = 0; k < n; ++k) {
        const double pq = space.p(k + 1) * space.q(k + 1);
        const double abs3 = weighted_mean([&](std::size_t i) {
            const double a = std::abs(d1[k].values()[i]);
            return a * a * a;
        });
        a3_sum.add(abs3 / std::sqrt(pq));
        a5_sum.add(fourth1[k] / pq);
        const double sq_s = std::pow(weighted_mean([&](std::size_t i) {
                                         const double a = d1[k].values()[i];
                                         return std::pow(a * a, s);
                                     }),
                                     1.0 / s);
        const double abs_t = std::pow(weighted_mean([&](std::size_t i) {
                                          return std::pow(std::abs(d1[k].values()[i]), t);
                                      }),
                                      1.0 / t);
        a4_sum.add(sq_s * abs_t / std::sqrt(pq));
    }

    SecondOrderReport out;
    out.a_terms["A1"] = std::sqrt(15.0 / 4.0 * a1_sum.value());
    out.a_terms["A2"] = std::sqrt(3.0 / 4.0 * a2_sum.value());
    out.a_terms["A3"] = a3_sum.value();
    out.a_terms["A4"] = 0.5 * norm_r * a4_sum.value();
    out.a_terms["A5"] = std::sqrt(a5_sum.value());
    out.a_terms["A6"] = std::sqrt(3.0 * a6_sum.value());
    out.a_terms["A7"] = std::sqrt(6.0 * a7_sum.value());

    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
    out.wasserstein = make_bound_report(
        "second_order_wasserstein",
        {{"hessian", kSqrt2OverPi * (out.a_terms["A1"] + out.a_terms["A2"])},
         {"cubic", out.a_terms["A3"]}});
    out.kolmogorov = make_bound_report(
        "second_order_kolmogorov",
        {{"A1", out.a_terms["A1"]},
         {"A2", out.a_terms["A2"]},
         {"A3_scaled", sqrt2pi / 8.0 * out.a_terms["A3"]},
         {"A4", out.a_terms["A4"]},
         {"A5", out.a_terms["A5"]},
         {"A6", out.a_terms["A6"]},
         {"A7", out.a_terms["A7"]}});
    const DistanceOracle oracle = normal_distance_oracle(f);
    out.wasserstein.set_oracle(oracle.d_w);
    out.kolmogorov.set_oracle(oracle.d_k);
    return out;
}

ContractionBoundsReport contraction_bounds(SpacePtr space, const Kernel& f) {
    if (f.order() < 1) throw std::invalid_argument("contraction_bounds: order must be >= 1");
    if (!space->symmetric()) {
        throw std::invalid_argument("contraction_bounds: symmetric setting required");
    }
    const Functional F = multiple_integral(space, f);
    GradientField df = derivative(F);

    ContractionBoundsReport out;
    out.var_df_norm = variance(df.norm_squared());
    NeumaierSum fourth;
    const auto& w = space->weights();
    for (int k = 1; k <= space->size(); ++k) {
        const Functional& dk = df.component(k);
        NeumaierSum s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double d2 = dk.values()[i] * dk.values()[i];
            s.add(w[i] * d2 * d2);
        }
        fourth.add(s.value());
    }
    out.fourth_sum = fourth.value();

    NeumaierSum sum_sq;
    for (int m = 1; m <= f.order() - 1; ++m) {
        const double nm = norm(star_contract(f, f, m));
        out.contraction_norms.push_back(nm);
        sum_sq.add(nm * nm);
    }
    out.contraction_sum_sq = sum_sq.value();
    if (out.contraction_sum_sq > 0.0) {
        out.ratio_var = out.var_df_norm / out.contraction_sum_sq;
        out.ratio_fourth = out.fourth_sum / out.contraction_sum_sq;
    }
    return out;
}

BoundReport charfn_bound(const Functional& f, double t) {
    require_centred(f, "charfn_bound");
    if (!std::isfinite(t)) throw std::invalid_argument("charfn_bound: t must be finite");
    const auto& w = f.space()->weights();
    NeumaierSum re, im;
    for (std::size_t i = 0; i < w.size(); ++i) {
        re.add(w[i] * std::cos(t * f.values()[i]));
        im.add(w[i] * std::sin(t * f.values()[i]));
    }
    const double gap = std::hypot(re.value() - std::exp(-0.5 * t * t), im.value());

    const Functional linv = ou_pseudo_inverse(f);
    const Functional gamma = gamma_quantity(f);
    const double ef2 = expectation_product(f, f);
    const double t2 = t * t;
    const double t3 = std::abs(t) * t2;
    BoundReport r = make_bound_report(
        "charfn_est1",
        {{"moment", t2 * std::abs(1.0 - ef2)},
         {"gamma_sd", t2 * std::sqrt(variance(gamma))},
         {"discreteness", t3 * discreteness_term(f, linv)}});
    r.set_oracle(gap);  // slack = rhs - exact gap; soundness means slack >= -1e-10
    return r;
}

BoundReport charfn_bound_chaos(SpacePtr space, const Kernel& f, double t) {
    const int ell = f.order();
    if (ell < 1) throw std::invalid_argument("charfn_bound_chaos: order must be >= 1");
    if (!std::isfinite(t)) throw std::invalid_argument("charfn_bound_chaos: t must be finite");
    const Functional F = multiple_integral(space, f);
    const auto& w = space->weights();
    NeumaierSum re, im;
    for (std::size_t i = 0; i < w.size(); ++i) {
        re.add(w[i] * std::cos(t * F.values()[i]));
        im.add(w[i] * std::sin(t * F.values()[i]));
    }
    const double gap = std::hypot(re.value() - std::exp(-0.5 * t * t), im.value());

    const double ef2 = expectation_product(F, F);
    GradientField df = derivative(F);
    const double var_df = variance(df.norm_squared());
    NeumaierSum fourth;
    for (int k = 1; k <= space->size(); ++k) {
        const Functional& dk = df.component(k);
        NeumaierSum s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double d2 = dk.values()[i] * dk.values()[i];
            s.add(w[i] * d2 * d2);
        }
        fourth.add(s.value() / (space->p(k) * space->q(k)));
    }

    const double t2 = t * t;
    const double t3 = std::abs(t) * t2;
    BoundReport r = make_bound_report(
        "charfn_est2",
        {{"moment", t2 * std::abs(1.0 - detail::factorial(ell) * inner_product(f, f))},
         {"gamma_sd", t2 / ell * std::sqrt(var_df)},
         {"discreteness", t3 * std::sqrt(fourth.value()) * std::sqrt(ef2 / ell)}});
    r.set_oracle(gap);
    return r;
}

}  // namespace radstein
