#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "radstein/functional.hpp"
#include "radstein/malliavin.hpp"
#include "radstein/report.hpp"

namespace radstein {

// Law of a discrete random variable: strictly increasing atoms with positive
// masses summing to 1.
struct DiscreteLaw {
    std::vector<double> atoms;
    std::vector<double> masses;
};

DiscreteLaw law_of(const Functional& f);

// Law of J_1(f) built by convolving the per-coordinate two-point laws; works
// far beyond the enumeration cap as long as atoms collapse (throws once the
// atom count exceeds atom_cap).
DiscreteLaw first_chaos_law(const std::vector<double>& p, const Kernel& f,
                            std::size_t atom_cap = std::size_t{1} << 22);

double normal_cdf(double x);
double normal_pdf(double x);

struct DistanceOracle {
    DiscreteLaw law;
    double d_w = 0.0;  // integral of |CDF - Phi|
    double d_k = 0.0;  // sup-norm of CDF - Phi
};

// Exact Kolmogorov distance and closed-form piecewise Wasserstein integral
// against the standard Gaussian; crossing points located by bisection.
DistanceOracle normal_distance_oracle(DiscreteLaw law);
DistanceOracle normal_distance_oracle(const Functional& f);

// <DF, -D L^-1 F> pointwise; its expectation is E[F^2].
Functional gamma_quantity(const Functional& f);

// d_W <= sqrt(2/pi) E|1 - <DF,-DL^-1F>| + sum_k (p_k q_k)^(-1/2) E[|D_k L^-1 F| (D_k F)^2].
// Terms: "gaussian" and "discreteness"; oracle = exact d_W.
BoundReport wasserstein_bound(const Functional& f);

// Same bound for F = J_1(f), computed without enumeration (the gamma quantity
// is deterministic). Oracle attached when the convolution law is tractable.
BoundReport first_chaos_wasserstein_bound(const std::vector<double>& p, const Kernel& f,
                                          bool with_oracle = true);

// Chaos-specialized coarsening for F = J_m(f): replaces E|1 - gamma| by
// |1 - E F^2| + (1/m) sd(|DF|^2) and the discreteness term by
// sqrt(E F^2 / m) * sqrt(sum_k (p_k q_k)^-1 E (D_k F)^4).
BoundReport chaos_wasserstein_bound(SpacePtr space, const Kernel& f);

// Four-term Berry-Esseen-type bound; the sup over x is evaluated exactly via
// suffix sums at the atoms of F. Oracle = exact d_K.
BoundReport kolmogorov_bound(const Functional& f);

struct SecondOrderReport {
    std::map<std::string, double> a_terms;  // "A1".."A7"
    BoundReport wasserstein;                // sqrt(2/pi)(A1+A2) + A3
    BoundReport kolmogorov;                 // A1 + A2 + sqrt(2pi)/8 A3 + A4..A7
};

// Second-order Poincare bounds; (r, s, t) are Holder exponents with
// 1/r + 1/s + 1/t = 1 entering only A4.
SecondOrderReport second_order_terms(const Functional& f, double r = 3.0, double s = 3.0,
                                     double t = 3.0);

struct ContractionBoundsReport {
    double var_df_norm = 0.0;   // Var(|DF|^2) by enumeration
    double fourth_sum = 0.0;    // sum_k E (D_k F)^4
    std::vector<double> contraction_norms;  // |f *m m f| for m = 1..order-1
    double contraction_sum_sq = 0.0;
    double ratio_var = 0.0;     // var_df_norm / contraction_sum_sq (0 when degenerate)
    double ratio_fourth = 0.0;
};

// Symmetric setting only. Order-1 kernels yield an empty contraction list
// and zero variance.
ContractionBoundsReport contraction_bounds(SpacePtr space, const Kernel& f);

// |E e^{itF} - e^{-t^2/2}| <= t^2 |1 - E F^2| + t^2 sd(gamma)
//   + |t|^3 sum_k (p_k q_k)^(-1/2) E[|D_k L^-1 F| (D_k F)^2].
// oracle = the exact characteristic-function gap.
BoundReport charfn_bound(const Functional& f, double t);

// Chaos variant for F = J_l(f) with the contraction-friendly right-hand side.
BoundReport charfn_bound_chaos(SpacePtr space, const Kernel& f, double t);

}  // namespace radstein
