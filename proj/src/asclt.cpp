#include "radstein/asclt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "radstein/accumulate.hpp"
#include "radstein/rng.hpp"

namespace radstein {

double harmonic_gamma(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("harmonic_gamma: n must be >= 1");
    NeumaierSum s;
    for (std::int64_t k = n; k >= 1; --k) s.add(1.0 / static_cast<double>(k));
    return s.value();
}

double log_average(std::span<const double> values, const TestFn& f, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > values.size()) {
        throw std::invalid_argument("log_average: n out of range");
    }
    NeumaierSum s, gamma;
    for (int k = 1; k <= n; ++k) {
        const double inv = 1.0 / k;
        gamma.add(inv);
        s.add(inv * f(values[k - 1]));
    }
    return s.value() / gamma.value();
}

std::complex<double> il_statistic(std::span<const double> values, double t, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > values.size()) {
        throw std::invalid_argument("il_statistic: n out of range");
    }
    const double target = std::exp(-0.5 * t * t);
    NeumaierSum re, im, gamma;
    for (int k = 1; k <= n; ++k) {
        const double inv = 1.0 / k;
        gamma.add(inv);
        re.add(inv * (std::cos(t * values[k - 1]) - target));
        im.add(inv * std::sin(t * values[k - 1]));
    }
    return {re.value() / gamma.value(), im.value() / gamma.value()};
}

double KernelFamily::gram(int k, int j) const { return inner_product(kernel(k), kernel(j)); }

double KernelFamily::self_contraction_norm(int k, int m) const {
    const Kernel f = kernel(k);
    return norm(star_contract(f, f, m));
}

double KernelFamily::weighted_cubic_sum(int k, const ProbabilityRule& p_rule) const {
    const Kernel f = kernel(k);
    if (f.order() != 1) {
        throw std::invalid_argument("weighted_cubic_sum: order-1 family required");
    }
    NeumaierSum s;
    for (const auto& [idx, v] : f.entries()) {
        const double p = p_rule(idx[0]);
        s.add(std::abs(v) * v * v / std::sqrt(p * (1.0 - p)));
    }
    return s.value();
}

namespace {

class Example2Family final : public KernelFamily {
public:
    int order() const override { return 2; }
    std::string name() const override { return "example2"; }
    Kernel kernel(int k) const override { return builtin_family("example2", k); }
    double gram(int k, int j) const override { return k == j ? 0.5 : 0.0; }
    bool gram_diagonal() const override { return true; }
    double self_contraction_norm(int k, int m) const override {
        if (m != 1) throw std::invalid_argument("example2: contraction order must be 1");
        return 1.0 / (2.0 * std::sqrt(2.0 * k));
    }
};

class Sum1Family final : public KernelFamily {
public:
    int order() const override { return 1; }
    std::string name() const override { return "sum1"; }
    Kernel kernel(int k) const override { return builtin_family("sum1", k); }
    double gram(int k, int j) const override {
        const double lo = std::min(k, j), hi = std::max(k, j);
        return std::sqrt(lo / hi);
    }
    double weighted_cubic_sum(int k, const ProbabilityRule& p_rule) const override {
        NeumaierSum s;
        const double v = 1.0 / std::sqrt(static_cast<double>(k));
        for (int i = 1; i <= k; ++i) {
            const double p = p_rule(i);
            s.add(v * v * v / std::sqrt(p * (1.0 - p)));
        }
        return s.value();
    }
};

class FileFamily final : public KernelFamily {
public:
    FileFamily(std::vector<Kernel> kernels, std::string name)
        : kernels_(std::move(kernels)), name_(std::move(name)) {
        if (kernels_.empty()) throw std::invalid_argument("FileFamily: empty kernel list");
        for (const Kernel& k : kernels_) {
            if (k.order() != kernels_.front().order()) {
                throw std::invalid_argument("FileFamily: mixed kernel orders");
            }
        }
    }
    int order() const override { return kernels_.front().order(); }
    std::string name() const override { return name_; }
    Kernel kernel(int k) const override {
        if (k < 1 || k > static_cast<int>(kernels_.size())) {
            throw std::out_of_range("FileFamily: index " + std::to_string(k) + " beyond " +
                                    std::to_string(kernels_.size()) + " kernels");
        }
        return kernels_[k - 1];
    }

private:
    std::vector<Kernel> kernels_;
    std::string name_;
};

}  // namespace

std::unique_ptr<KernelFamily> make_builtin_family(const std::string& name) {
    if (name == "example2") return std::make_unique<Example2Family>();
    if (name == "sum1") return std::make_unique<Sum1Family>();
    throw std::invalid_argument("make_builtin_family: unknown name '" + name + "'");
}

std::unique_ptr<KernelFamily> make_file_family(std::vector<Kernel> kernels, std::string name) {
    return std::make_unique<FileFamily>(std::move(kernels), std::move(name));
}

std::unique_ptr<KernelFamily> load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_family_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object() || !j.contains("kernels")) {
        throw std::invalid_argument("load_family_file: missing \"kernels\"");
    }
    std::vector<Kernel> kernels;
    for (const auto& kj : j.at("kernels")) kernels.push_back(kernel_from_json(kj));
    return make_file_family(std::move(kernels), path);
}

namespace {

// Envelope verdict on e(n) = increment(n) * n * gamma_n^2: fit the constant
// on [N/10, N/sqrt(10)), require e(n) <= 1.05 c beyond. A summable tail has
// nonincreasing e; a log-divergent one grows ~ gamma_n and fails.
struct EnvelopeFit {
    bool bounded = false;
    double constant = 0.0;
};

EnvelopeFit fit_envelope(const std::vector<double>& scaled, int first_n) {
    EnvelopeFit out;
    const int N = first_n + static_cast<int>(scaled.size()) - 1;
    const int lo = std::max(first_n, N / 10);
    const int mid = std::max(lo + 1, static_cast<int>(N / std::sqrt(10.0)));
    if (mid >= N) {  // too short to split; report the max as the constant
        for (double e : scaled) out.constant = std::max(out.constant, e);
        out.bounded = true;
        return out;
    }
    for (int n = lo; n < mid; ++n) out.constant = std::max(out.constant, scaled[n - first_n]);
    out.bounded = true;
    for (int n = mid; n <= N; ++n) {
        if (scaled[n - first_n] > 1.05 * out.constant + 1e-300) out.bounded = false;
    }
    return out;
}

}  // namespace

ConditionSeriesReport condition_series(const KernelFamily& family, SeriesCondition which, int N,
                                       int m, const ProbabilityRule& p_rule) {
    ConditionSeriesReport rep;
    rep.which = which;
    if (N < 2) throw std::invalid_argument("condition_series: N must be >= 2");

    if (which == SeriesCondition::CorIII) {
        if (family.order() != 1) {
            throw std::invalid_argument("condition_series: corollary conditions need order 1");
        }
        rep.first_n = 1;
        rep.values.reserve(N);
        for (int k = 1; k <= N; ++k) rep.values.push_back(family.weighted_cubic_sum(k, p_rule));
        // Vanishing verdict: tail decade max at most half the head decade max.
        double head = 0.0, tail = 0.0;
        for (int k = 1; k <= std::max(1, N / 10); ++k) head = std::max(head, rep.values[k - 1]);
        for (int k = std::max(1, N / 10); k <= N; ++k) tail = std::max(tail, rep.values[k - 1]);
        rep.bounded = tail <= 0.5 * head;
        rep.envelope_constant = tail;
        return rep;
    }

    const bool uses_gram = which == SeriesCondition::C1 || which == SeriesCondition::CorI;
    if ((which == SeriesCondition::CorI || which == SeriesCondition::CorII) &&
        family.order() != 1) {
        throw std::invalid_argument("condition_series: corollary conditions need order 1");
    }
    if (which == SeriesCondition::C2 && (m < 1 || m > family.order() - 1)) {
        throw std::invalid_argument("condition_series: contraction order out of 1..order-1");
    }
    rep.contraction_order = which == SeriesCondition::C2 ? m : 0;

    std::vector<double> scaled;  // increment(n) * n * gamma_n^2
    scaled.reserve(N - 1);
    rep.values.reserve(N - 1);
    NeumaierSum partial;
    NeumaierSum inner;  // gram double sum or weighted single sum, grown incrementally
    double gamma = 1.0;
    if (uses_gram) inner.add(std::abs(family.gram(1, 1)));
    else if (which == SeriesCondition::C2) inner.add(family.self_contraction_norm(1, m));
    else inner.add(family.weighted_cubic_sum(1, p_rule));

    for (int n = 2; n <= N; ++n) {
        gamma += 1.0 / n;
        if (uses_gram) {
            if (!family.gram_diagonal()) {
                NeumaierSum row;
                for (int k = 1; k < n; ++k) row.add(std::abs(family.gram(k, n)) / k);
                inner.add(2.0 * row.value() / n);
            }
            inner.add(std::abs(family.gram(n, n)) / (static_cast<double>(n) * n));
        } else if (which == SeriesCondition::C2) {
            inner.add(family.self_contraction_norm(n, m) / n);
        } else {
            inner.add(family.weighted_cubic_sum(n, p_rule) / n);
        }
        const double denom_power = uses_gram ? gamma * gamma * gamma : gamma * gamma;
        const double increment = inner.value() / (n * denom_power);
        partial.add(increment);
        rep.values.push_back(partial.value());
        scaled.push_back(increment * n * gamma * gamma);
    }

    const EnvelopeFit fit = fit_envelope(scaled, 2);
    rep.bounded = fit.bounded;
    rep.envelope_constant = fit.constant;
    return rep;
}

bool contraction_norms_vanish(const KernelFamily& family, int N) {
    if (N < 10) throw std::invalid_argument("contraction_norms_vanish: N must be >= 10");
    for (int m = 1; m <= family.order() - 1; ++m) {
        double head = 0.0, tail = 0.0;
        for (int k = 1; k <= N / 10; ++k) {
            head = std::max(head, family.self_contraction_norm(k, m));
        }
        for (int k = N / 10; k <= N; ++k) {
            tail = std::max(tail, family.self_contraction_norm(k, m));
        }
        if (tail > 0.5 * head) return false;
    }
    return true;
}

std::vector<double> simulate_example_path(std::uint64_t seed, int n_max) {
    if (n_max < 1) throw std::invalid_argument("simulate_example_path: n_max must be >= 1");
    std::vector<double> y(static_cast<std::size_t>(2) * n_max);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = counter_sign(seed, i, 0.5) > 0 ? 1.0 : -1.0;
    }
    std::vector<double> out(n_max);
    for (int k = 1; k <= n_max; ++k) {
        double s = 0.0;
        const double* a = y.data();
        const double* b = y.data() + k;
        for (int i = 0; i < k; ++i) s += a[i] * b[i];
        out[k - 1] = s / std::sqrt(static_cast<double>(k));
    }
    return out;
}

ChaosPathSimulator::ChaosPathSimulator(std::uint64_t seed, const KernelFamily& family,
                                       ProbabilityRule p_rule)
    : seed_(seed), family_(&family), p_rule_(std::move(p_rule)) {
    if (family.order() != 2) {
        throw std::invalid_argument("ChaosPathSimulator: order-2 family required");
    }
}

double ChaosPathSimulator::sign_value(int i) {
    while (static_cast<int>(y_.size()) < i) {
        const std::size_t idx = y_.size();
        const double p = p_rule_(static_cast<int>(idx) + 1);
        if (!(p > 0.0 && p < 1.0)) {
            throw std::invalid_argument("ChaosPathSimulator: p_rule outside (0,1)");
        }
        const int s = counter_sign(seed_, idx, p);
        y_.push_back(s > 0 ? std::sqrt((1.0 - p) / p) : -std::sqrt(p / (1.0 - p)));
    }
    return y_[i - 1];
}

double ChaosPathSimulator::next() {
    const int k = ++produced_;
    const Kernel g = family_->kernel(k);
    const double norm2 = inner_product(g, g);
    if (!(norm2 > 0.0)) throw std::domain_error("ChaosPathSimulator: zero kernel");
    const double factor = 1.0 / std::sqrt(2.0 * norm2);  // exact 2|g|^2 = 1 after rescale
    factors_.push_back(factor);
    NeumaierSum s;
    for (const auto& [idx, v] : g.entries()) {
        s.add(2.0 * v * sign_value(idx[0]) * sign_value(idx[1]));
    }
    return factor * s.value();
}

IlSweep il_second_moment_sweep(double t, std::vector<int> checkpoints, int paths,
                               std::uint64_t seed) {
    if (paths < 1) throw std::invalid_argument("il_second_moment_sweep: paths must be >= 1");
    if (checkpoints.empty()) {
        throw std::invalid_argument("il_second_moment_sweep: no checkpoints");
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    const int n_max = checkpoints.back();
    const double target = std::exp(-0.5 * t * t);
    const std::size_t cps = checkpoints.size();

    // samples[c][p] = |Delta_{checkpoint c}(t)|^2 on path p
    std::vector<std::vector<double>> samples(cps, std::vector<double>(paths));
    for (int path = 0; path < paths; ++path) {
        const std::vector<double> g = simulate_example_path(derive_seed(seed, path), n_max);
        double re = 0.0, im = 0.0, gamma = 0.0;
        std::size_t c = 0;
        for (int k = 1; k <= n_max; ++k) {
            const double inv = 1.0 / k;
            gamma += inv;
            re += inv * (std::cos(t * g[k - 1]) - target);
            im += inv * std::sin(t * g[k - 1]);
            while (c < cps && checkpoints[c] == k) {
                const double dr = re / gamma, di = im / gamma;
                samples[c][path] = dr * dr + di * di;
                ++c;
            }
        }
    }

    IlSweep out;
    out.checkpoints = checkpoints;
    for (std::size_t c = 0; c < cps; ++c) {
        NeumaierSum mean;
        for (double v : samples[c]) mean.add(v);
        const double mu = mean.value() / paths;
        NeumaierSum var;
        for (double v : samples[c]) var.add((v - mu) * (v - mu));
        const double sd = paths > 1 ? std::sqrt(var.value() / (paths - 1)) : 0.0;
        out.estimates.push_back({mu, sd / std::sqrt(static_cast<double>(paths)), paths});
    }
    for (std::size_t c = 0; c + 1 < cps; ++c) {
        NeumaierSum mean;
        for (int p = 0; p < paths; ++p) mean.add(samples[c][p] - samples[c + 1][p]);
        const double mu = mean.value() / paths;
        NeumaierSum var;
        for (int p = 0; p < paths; ++p) {
            const double d = samples[c][p] - samples[c + 1][p] - mu;
            var.add(d * d);
        }
        const double sd = paths > 1 ? std::sqrt(var.value() / (paths - 1)) : 0.0;
        out.paired_diff_mean.push_back(mu);
        out.paired_diff_std_error.push_back(sd / std::sqrt(static_cast<double>(paths)));
    }
    return out;
}

IlMomentEstimate il_second_moment(double t, int n, int paths, std::uint64_t seed) {
    return il_second_moment_sweep(t, {n}, paths, seed).estimates.front();
}

}  // namespace radstein
