#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "radstein/kernel.hpp"
#include "radstein/space.hpp"

namespace radstein {

// gamma_n = sum_{k<=n} 1/k; satisfies gamma_n - 1 <= log n <= gamma_n.
double harmonic_gamma(std::int64_t n);

using TestFn = std::function<double(double)>;

// gamma_n^{-1} sum_{k<=n} f(G_k)/k.
double log_average(std::span<const double> values, const TestFn& f, int n);

// Delta_n(t) = gamma_n^{-1} sum_{k<=n} (e^{i t G_k} - e^{-t^2/2})/k.
std::complex<double> il_statistic(std::span<const double> values, double t, int n);

// An indexed sequence of same-order kernels f_1, f_2, ... The virtual
// closed-form accessors default to the generic sparse computations; builtin
// families override them (overrides are validated against the defaults in
// the test suite).
class KernelFamily {
public:
    virtual ~KernelFamily() = default;

    virtual int order() const = 0;
    virtual std::string name() const = 0;
    virtual Kernel kernel(int k) const = 0;

    // <f_k, f_j> over the full tensors.
    virtual double gram(int k, int j) const;
    // True when <f_k, f_j> = 0 for all k != j; enables O(N) series sums.
    virtual bool gram_diagonal() const { return false; }
    // |f_k (*m m) f_k|.
    virtual double self_contraction_norm(int k, int m) const;
    // Order-1 families: sum_i |f_k(i)|^3 / sqrt(p_i q_i).
    virtual double weighted_cubic_sum(int k, const ProbabilityRule& p_rule) const;
};

std::unique_ptr<KernelFamily> make_builtin_family(const std::string& name);
std::unique_ptr<KernelFamily> make_file_family(std::vector<Kernel> kernels, std::string name);
std::unique_ptr<KernelFamily> load_family_file(const std::string& path);

enum class SeriesCondition { C1, C2, CorI, CorII, CorIII };

struct ConditionSeriesReport {
    SeriesCondition which;
    int contraction_order = 0;         // m, C2 only
    std::vector<double> values;        // partial sums S(n) from first_n up (CorIII: the
                                       // vanishing sequence T(k) itself)
    int first_n = 2;
    bool bounded = false;              // empirical envelope verdict, never a proof
    double envelope_constant = 0.0;    // fitted c in increment(n) <= c/(n gamma_n^2)
};

// Truncated evaluation of the ASCLT series conditions. The boundedness flag
// fits the envelope constant on the first (log-scale) half of the last decade
// and requires the second half to stay within 5%.
ConditionSeriesReport condition_series(const KernelFamily& family, SeriesCondition which, int N,
                                       int m = 1,
                                       const ProbabilityRule& p_rule = symmetric_rule());

// True when |f_k (*m m) f_k| decays along the family for every m = 1..order-1
// (decade-max at the tail at most half the decade-max at the head).
bool contraction_norms_vanish(const KernelFamily& family, int N);

// F_k = (1/sqrt(k)) sum_{i<=k} Y_i Y_{i+k} along one shared symmetric sign
// path; deterministic in seed, O(n_max^2) total work.
std::vector<double> simulate_example_path(std::uint64_t seed, int n_max);

// Streaming simulator of F_k = J_2(g_k) along one shared sign path for an
// arbitrary order-2 family; inputs are rescaled to exact unit variance
// (2 |g_k|^2 = 1) and the factors are recorded.
class ChaosPathSimulator {
public:
    ChaosPathSimulator(std::uint64_t seed, const KernelFamily& family,
                       ProbabilityRule p_rule = symmetric_rule());

    double next();  // F_{position()+1}
    [[nodiscard]] int position() const { return produced_; }
    [[nodiscard]] const std::vector<double>& rescale_factors() const { return factors_; }

private:
    double sign_value(int i);

    std::uint64_t seed_;
    const KernelFamily* family_;
    ProbabilityRule p_rule_;
    std::vector<double> y_;  // lazily extended; y_[i-1] is coordinate i
    std::vector<double> factors_;
    int produced_ = 0;
};

struct IlMomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int paths = 0;
};

struct IlSweep {
    std::vector<int> checkpoints;
    std::vector<IlMomentEstimate> estimates;      // E|Delta_n(t)|^2 per checkpoint
    std::vector<double> paired_diff_mean;         // mean of |D_{n_i}|^2 - |D_{n_{i+1}}|^2
    std::vector<double> paired_diff_std_error;    // paired, same paths
};

// Monte-Carlo E|Delta_n(t)|^2 for the example family over independent paths
// (path i uses derive_seed(seed, i)), snapshotting at each checkpoint.
IlSweep il_second_moment_sweep(double t, std::vector<int> checkpoints, int paths,
                               std::uint64_t seed);
IlMomentEstimate il_second_moment(double t, int n, int paths, std::uint64_t seed);

}  // namespace radstein
