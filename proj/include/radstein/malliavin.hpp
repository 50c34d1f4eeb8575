#pragma once

#include <functional>
#include <vector>

#include "radstein/functional.hpp"

namespace radstein {

// A square-integrable random sequence u = (u_k, k = 1..n); component k is
// typically D_k F or a chain-rule remainder.
struct GradientField {
    SpacePtr space;
    std::vector<Functional> components;  // component k at index k-1

    [[nodiscard]] const Functional& component(int k) const { return components[k - 1]; }
    [[nodiscard]] int size() const { return static_cast<int>(components.size()); }

    // Pointwise |u|^2 over the sequence index.
    [[nodiscard]] Functional norm_squared() const;
};

// F with coordinate k forced to sign (+1 or -1). Idempotent.
Functional flip(const Functional& f, int k, int sign);

// D_k F = sqrt(p_k q_k) (F with coord k at +1 minus F with coord k at -1).
Functional derivative_component(const Functional& f, int k);
GradientField derivative(const Functional& f);

// D_l (D_k F); symmetric in (k, l).
Functional iterated_derivative(const Functional& f, int k, int l);

// Exact adjoint of D on the weighted finite-dimensional space:
// delta(u)(w) = sum_k Y_k(w) E_k[u_k](w), where E_k averages out coordinate k.
Functional divergence(const GradientField& u);

// Ornstein-Uhlenbeck operator L = -delta D: multiplies the order-m chaos
// component by -m. ou_pseudo_inverse divides by -m and requires a centred
// input (|E F| <= 1e-12).
Functional ou_apply(const Functional& f);
Functional ou_pseudo_inverse(const Functional& f);

using ScalarFn = std::function<double(double)>;

struct ChainRuleResult {
    GradientField gradient;   // D phi(F)
    GradientField remainder;  // R_k = D_k phi(F) - phi'(F) D_k F
    bool bound_ok = false;    // |R_k| <= m2 |D_k F|^2 / (2 sqrt(p_k q_k)) everywhere
    double worst_excess = 0.0;  // max over (k, config) of |R_k| - bound
};

// m2 must dominate |phi''| on the attained range of F.
ChainRuleResult chain_rule_apply(const Functional& f, const ScalarFn& phi, const ScalarFn& dphi,
                                 double m2);

struct IbpResult {
    double lhs = 0.0;  // E[G phi(F)]
    double rhs = 0.0;  // E[<-D L^-1 G, D phi(F)>]
    double gap = 0.0;
};

// Integration by parts for centred F, G.
IbpResult ibp_report(const Functional& f, const Functional& g, const ScalarFn& phi);

// phi applied pointwise; throws on non-finite outputs.
Functional apply_pointwise(const Functional& f, const ScalarFn& phi);

}  // namespace radstein
