#include "radstein/functional.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "radstein/accumulate.hpp"
#include "radstein/report.hpp"

namespace radstein {

namespace {

void require_same_space(const Functional& a, const Functional& b, const char* what) {
    if (a.space() != b.space()) {
        throw std::invalid_argument(std::string(what) + ": functionals live on different spaces");
    }
}

}  // namespace

Functional::Functional(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("Functional: null space");
    if (values_.size() != space_->config_count()) {
        throw std::invalid_argument("Functional: value table length must be 2^n");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Functional: non-finite value");
    }
}

Functional& Functional::operator+=(const Functional& o) {
    require_same_space(*this, o, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Functional& Functional::operator-=(const Functional& o) {
    require_same_space(*this, o, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Functional& Functional::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Functional operator*(const Functional& a, const Functional& b) {
    require_same_space(a, b, "operator*");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * b.values()[i];
    return {a.space(), std::move(out)};
}

Functional constant_functional(SpacePtr space, double c) {
    std::vector<double> v(space->config_count(), c);
    return {std::move(space), std::move(v)};
}

Functional coordinate_functional(SpacePtr space, int k) {
    if (k < 1 || k > space->size()) {
        throw std::out_of_range("coordinate_functional: k out of range");
    }
    std::vector<double> v(space->config_count());
    for (std::uint32_t mask = 0; mask < v.size(); ++mask) v[mask] = space->y_at(k, mask);
    return {std::move(space), std::move(v)};
}

Functional multiple_integral(SpacePtr space, const Kernel& f) {
    if (f.support_bound() > space->size() && f.order() > 0) {
        throw std::invalid_argument("multiple_integral: kernel support bound " +
                                    std::to_string(f.support_bound()) + " exceeds space size " +
                                    std::to_string(space->size()));
    }
    const std::size_t count = space->config_count();
    std::vector<double> v(count, 0.0);
    if (f.order() == 0) {
        const double c = f.entries().empty() ? 0.0 : f.entries().begin()->second;
        std::fill(v.begin(), v.end(), c);
        return {std::move(space), std::move(v)};
    }
    const double mfact = detail::factorial(f.order());
    for (const auto& [idx, val] : f.entries()) {
        const double c = mfact * val;
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            double prod = c;
            for (int i : idx) prod *= space->y_at(i, mask);
            v[mask] += prod;
        }
    }
    return {std::move(space), std::move(v)};
}

double expectation(const Functional& f) {
    const auto& w = f.space()->weights();
    NeumaierSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * f.values()[i]);
    return s.value();
}

double expectation_product(const Functional& f, const Functional& g) {
    require_same_space(f, g, "expectation_product");
    const auto& w = f.space()->weights();
    NeumaierSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * f.values()[i] * g.values()[i]);
    return s.value();
}

Moments moments(const Functional& f) {
    Moments m;
    m.mean = expectation(f);
    const auto& w = f.space()->weights();
    NeumaierSum s2, s3, s4;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = f.values()[i] - m.mean;
        const double d2 = d * d;
        s2.add(w[i] * d2);
        s3.add(w[i] * d2 * d);
        s4.add(w[i] * d2 * d2);
    }
    m.variance = s2.value();
    m.central3 = s3.value();
    m.central4 = s4.value();
    return m;
}

double variance(const Functional& f) { return moments(f).variance; }

std::vector<double> walsh_coefficients(const Functional& f) {
    const auto& space = *f.space();
    std::vector<double> v(f.values().begin(), f.values().end());
    for (int k = 1; k <= space.size(); ++k) {
        const std::uint32_t bit = 1u << (k - 1);
        const double p = space.p(k), q = space.q(k);
        const double sp = std::sqrt(p * q);
        for (std::uint32_t mask = 0; mask < v.size(); ++mask) {
            if (mask & bit) continue;
            const double hi = v[mask | bit];  // coordinate k fixed to +1
            const double lo = v[mask];
            v[mask] = p * hi + q * lo;
            v[mask | bit] = sp * (hi - lo);
        }
    }
    return v;
}

Functional functional_from_walsh(SpacePtr space, std::vector<double> coefficients) {
    if (coefficients.size() != space->config_count()) {
        throw std::invalid_argument("functional_from_walsh: coefficient table length must be 2^n");
    }
    auto& v = coefficients;
    for (int k = space->size(); k >= 1; --k) {
        const std::uint32_t bit = 1u << (k - 1);
        const double yp = space->y(k, +1), ym = space->y(k, -1);
        for (std::uint32_t mask = 0; mask < v.size(); ++mask) {
            if (mask & bit) continue;
            const double c0 = v[mask];
            const double c1 = v[mask | bit];
            v[mask | bit] = c0 + yp * c1;
            v[mask] = c0 + ym * c1;
        }
    }
    return {std::move(space), std::move(v)};
}

ChaosDecomposition chaos_decompose(const Functional& f) {
    const int n = f.space()->size();
    const std::vector<double> coeffs = walsh_coefficients(f);
    ChaosDecomposition d;
    d.constant = coeffs[0];
    std::vector<std::vector<std::pair<IndexTuple, double>>> by_order(n + 1);
    for (std::uint32_t mask = 1; mask < coeffs.size(); ++mask) {
        if (coeffs[mask] == 0.0) continue;
        const int m = std::popcount(mask);
        IndexTuple idx;
        idx.reserve(m);
        for (int k = 1; k <= n; ++k) {
            if (mask & (1u << (k - 1))) idx.push_back(k);
        }
        by_order[m].push_back({std::move(idx), coeffs[mask] / detail::factorial(m)});
    }
    for (int m = 1; m <= n; ++m) {
        if (by_order[m].empty()) continue;
        d.kernels.push_back(make_kernel(m, n, by_order[m]));
    }
    return d;
}

Functional reconstruct(SpacePtr space, const ChaosDecomposition& d) {
    Functional out = constant_functional(space, d.constant);
    for (const Kernel& f : d.kernels) out += multiple_integral(space, f);
    return out;
}

void export_functional_csv(const Functional& f, std::ostream& out) {
    out << "mask,weight,value\n";
    const auto& w = f.space()->weights();
    for (std::uint32_t mask = 0; mask < f.size(); ++mask) {
        out << mask << ',' << format17(w[mask]) << ',' << format17(f[mask]) << '\n';
    }
}

}  // namespace radstein
