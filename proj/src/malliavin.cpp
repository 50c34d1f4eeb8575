#include "radstein/malliavin.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "radstein/accumulate.hpp"

namespace radstein {

namespace {

void require_coordinate(const Functional& f, int k, const char* what) {
    if (k < 1 || k > f.space()->size()) {
        throw std::out_of_range(std::string(what) + ": coordinate out of range");
    }
}

void require_centred(const Functional& f, const char* what) {
    const double mean = expectation(f);
    if (std::abs(mean) > 1e-12) {
        throw std::domain_error(std::string(what) + ": input not centred (mean " +
                                std::to_string(mean) + ")");
    }
}

}  // namespace

Functional GradientField::norm_squared() const {
    std::vector<double> acc(space->config_count(), 0.0);
    for (const Functional& c : components) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.values()[i] * c.values()[i];
    }
    return {space, std::move(acc)};
}

Functional flip(const Functional& f, int k, int sign) {
    require_coordinate(f, k, "flip");
    const std::uint32_t bit = 1u << (k - 1);
    std::vector<double> v(f.size());
    for (std::uint32_t mask = 0; mask < v.size(); ++mask) {
        v[mask] = sign > 0 ? f[mask | bit] : f[mask & ~bit];
    }
    return {f.space(), std::move(v)};
}

Functional derivative_component(const Functional& f, int k) {
    require_coordinate(f, k, "derivative_component");
    const auto& space = *f.space();
    const std::uint32_t bit = 1u << (k - 1);
    const double sp = std::sqrt(space.p(k) * space.q(k));
    std::vector<double> v(f.size());
    for (std::uint32_t mask = 0; mask < v.size(); ++mask) {
        v[mask] = sp * (f[mask | bit] - f[mask & ~bit]);
    }
    return {f.space(), std::move(v)};
}

GradientField derivative(const Functional& f) {
    GradientField g;
    g.space = f.space();
    g.components.reserve(f.space()->size());
    for (int k = 1; k <= f.space()->size(); ++k) {
        g.components.push_back(derivative_component(f, k));
    }
    return g;
}

Functional iterated_derivative(const Functional& f, int k, int l) {
    require_coordinate(f, k, "iterated_derivative");
    require_coordinate(f, l, "iterated_derivative");
    return derivative_component(derivative_component(f, k), l);
}

Functional divergence(const GradientField& u) {
    if (!u.space) throw std::invalid_argument("divergence: null space");
    if (u.size() != u.space->size()) {
        throw std::invalid_argument("divergence: component count must equal space size");
    }
    const auto& space = *u.space;
    std::vector<double> out(space.config_count(), 0.0);
    for (int k = 1; k <= space.size(); ++k) {
        const Functional& uk = u.component(k);
        if (uk.space() != u.space) {
            throw std::invalid_argument("divergence: component on a different space");
        }
        const std::uint32_t bit = 1u << (k - 1);
        const double p = space.p(k), q = space.q(k);
        for (std::uint32_t mask = 0; mask < out.size(); ++mask) {
            const double avg = p * uk[mask | bit] + q * uk[mask & ~bit];
            out[mask] += space.y_at(k, mask) * avg;
        }
    }
    return {u.space, std::move(out)};
}

Functional ou_apply(const Functional& f) {
    std::vector<double> c = walsh_coefficients(f);
    for (std::uint32_t mask = 0; mask < c.size(); ++mask) {
        c[mask] *= -static_cast<double>(std::popcount(mask));
    }
    return functional_from_walsh(f.space(), std::move(c));
}

Functional ou_pseudo_inverse(const Functional& f) {
    require_centred(f, "ou_pseudo_inverse");
    std::vector<double> c = walsh_coefficients(f);
    c[0] = 0.0;
    for (std::uint32_t mask = 1; mask < c.size(); ++mask) {
        c[mask] /= -static_cast<double>(std::popcount(mask));
    }
    return functional_from_walsh(f.space(), std::move(c));
}

Functional apply_pointwise(const Functional& f, const ScalarFn& phi) {
    std::vector<double> v(f.size());
    for (std::uint32_t mask = 0; mask < v.size(); ++mask) {
        v[mask] = phi(f[mask]);
        if (!std::isfinite(v[mask])) {
            throw std::domain_error("apply_pointwise: non-finite function value");
        }
    }
    return {f.space(), std::move(v)};
}

ChainRuleResult chain_rule_apply(const Functional& f, const ScalarFn& phi, const ScalarFn& dphi,
                                 double m2) {
    if (!(m2 >= 0.0)) throw std::invalid_argument("chain_rule_apply: m2 must be >= 0");
    const auto& space = *f.space();
    const Functional phi_f = apply_pointwise(f, phi);
    const Functional dphi_f = apply_pointwise(f, dphi);

    ChainRuleResult out;
    out.gradient.space = f.space();
    out.remainder.space = f.space();
    out.bound_ok = true;
    for (int k = 1; k <= space.size(); ++k) {
        const Functional dk_phi = derivative_component(phi_f, k);
        const Functional dk_f = derivative_component(f, k);
        const double denom = 2.0 * std::sqrt(space.p(k) * space.q(k));
        std::vector<double> rk(f.size());
        for (std::uint32_t mask = 0; mask < rk.size(); ++mask) {
            rk[mask] = dk_phi[mask] - dphi_f[mask] * dk_f[mask];
            const double bound = m2 * dk_f[mask] * dk_f[mask] / denom;
            const double excess = std::abs(rk[mask]) - bound;
            if (excess > out.worst_excess) out.worst_excess = excess;
            if (excess > 1e-12 + 1e-10 * bound) out.bound_ok = false;
        }
        out.gradient.components.push_back(dk_phi);
        out.remainder.components.push_back({f.space(), std::move(rk)});
    }
    return out;
}

IbpResult ibp_report(const Functional& f, const Functional& g, const ScalarFn& phi) {
    require_centred(f, "ibp_report");
    require_centred(g, "ibp_report");
    const Functional phi_f = apply_pointwise(f, phi);
    const Functional linv_g = ou_pseudo_inverse(g);

    IbpResult r;
    r.lhs = expectation_product(g, phi_f);
    NeumaierSum rhs;
    for (int k = 1; k <= f.space()->size(); ++k) {
        const Functional a = derivative_component(linv_g, k);
        const Functional b = derivative_component(phi_f, k);
        const auto& w = f.space()->weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            rhs.add(w[i] * (-a.values()[i]) * b.values()[i]);
        }
    }
    r.rhs = rhs.value();
    r.gap = std::abs(r.lhs - r.rhs);
    return r;
}

}  // namespace radstein
