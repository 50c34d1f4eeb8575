#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "radstein/kernel.hpp"
#include "radstein/space.hpp"

namespace radstein {

// A random variable on a finite Rademacher space, held as its exact value
// table over all 2^n configurations.
class Functional {
public:
    Functional(SpacePtr space, std::vector<double> values);

    [[nodiscard]] const SpacePtr& space() const { return space_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    double operator[](std::uint32_t mask) const { return values_[mask]; }

    Functional& operator+=(const Functional& o);
    Functional& operator-=(const Functional& o);
    Functional& operator*=(double c);

    friend Functional operator+(Functional a, const Functional& b) { return a += b; }
    friend Functional operator-(Functional a, const Functional& b) { return a -= b; }
    friend Functional operator*(double c, Functional a) { return a *= c; }

    // Pointwise product.
    friend Functional operator*(const Functional& a, const Functional& b);

private:
    SpacePtr space_;
    std::vector<double> values_;
};

Functional constant_functional(SpacePtr space, double c);
Functional coordinate_functional(SpacePtr space, int k);  // Y_k

// Multiple stochastic integral of a symmetric off-diagonal kernel: per
// configuration, m! times the sum over stored representatives of
// f(i_1..i_m) Y_{i_1}...Y_{i_m}. An order-0 kernel yields its constant.
Functional multiple_integral(SpacePtr space, const Kernel& f);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double central3 = 0.0;
    double central4 = 0.0;
};

Moments moments(const Functional& f);
double expectation(const Functional& f);
double expectation_product(const Functional& f, const Functional& g);  // E[FG]
double variance(const Functional& f);

// Coefficients on the orthonormal product basis {prod_{k in S} Y_k}, indexed
// by subset bitmask. Computed by the butterfly recursion generalized to
// non-symmetric weights, O(n 2^n).
std::vector<double> walsh_coefficients(const Functional& f);
Functional functional_from_walsh(SpacePtr space, std::vector<double> coefficients);

struct ChaosDecomposition {
    double constant = 0.0;
    std::vector<Kernel> kernels;  // distinct orders, ascending
};

// F = E[F] + sum_m J_m(f_m); coefficient on subset S of size m is m! f_m(S).
ChaosDecomposition chaos_decompose(const Functional& f);
Functional reconstruct(SpacePtr space, const ChaosDecomposition& d);

// CSV columns: mask, weight, value.
void export_functional_csv(const Functional& f, std::ostream& out);

}  // namespace radstein
