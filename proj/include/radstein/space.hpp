#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace radstein {

// One coordinate-sign assignment. Bit k-1 of mask set means coordinate k is +1.
struct Configuration {
    std::uint32_t mask = 0;
    int n = 0;

    [[nodiscard]] int sign(int k) const { return (mask >> (k - 1)) & 1u ? +1 : -1; }
};

// Finite product of non-symmetric Rademacher coordinates: P(X_k = +1) = p_k.
// Immutable after construction; the per-configuration weight table is built
// eagerly (2^n doubles, capped at n <= 24 by default).
class RademacherSpace {
public:
    static constexpr int kDefaultCap = 24;

    explicit RademacherSpace(std::vector<double> p, int cap = kDefaultCap);

    [[nodiscard]] int size() const { return static_cast<int>(p_.size()); }
    [[nodiscard]] std::size_t config_count() const { return std::size_t{1} << size(); }

    [[nodiscard]] double p(int k) const { return p_[k - 1]; }
    [[nodiscard]] double q(int k) const { return q_[k - 1]; }
    [[nodiscard]] const std::vector<double>& probabilities() const { return p_; }

    // Normalized coordinate value: sqrt(q/p) at +1, -sqrt(p/q) at -1.
    [[nodiscard]] double y(int k, int sign) const {
        return sign > 0 ? y_plus_[k - 1] : y_minus_[k - 1];
    }
    [[nodiscard]] double y_at(int k, std::uint32_t mask) const {
        return (mask >> (k - 1)) & 1u ? y_plus_[k - 1] : y_minus_[k - 1];
    }

    [[nodiscard]] double weight(std::uint32_t mask) const { return weights_[mask]; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

    [[nodiscard]] bool symmetric() const;

private:
    std::vector<double> p_, q_, y_plus_, y_minus_;
    std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const RademacherSpace>;

SpacePtr make_space(std::vector<double> p, int cap = RademacherSpace::kDefaultCap);
SpacePtr symmetric_space(int n);

double normalized_value(const RademacherSpace& space, const Configuration& config, int k);

// Stream of (Configuration, weight) covering all 2^n configurations in mask
// order. Weights are the exact per-coordinate products and sum to 1.
class ConfigRange {
public:
    explicit ConfigRange(const RademacherSpace& space) : space_(&space) {}

    class iterator {
    public:
        iterator(const RademacherSpace* s, std::uint64_t m) : space_(s), mask_(m) {}
        std::pair<Configuration, double> operator*() const {
            const auto m = static_cast<std::uint32_t>(mask_);
            return {Configuration{m, space_->size()}, space_->weight(m)};
        }
        iterator& operator++() {
            ++mask_;
            return *this;
        }
        bool operator!=(const iterator& o) const { return mask_ != o.mask_; }

    private:
        const RademacherSpace* space_;
        std::uint64_t mask_;
    };

    [[nodiscard]] iterator begin() const { return {space_, 0}; }
    [[nodiscard]] iterator end() const { return {space_, space_->config_count()}; }

private:
    const RademacherSpace* space_;
};

inline ConfigRange enumerate_configs(const RademacherSpace& space) { return ConfigRange(space); }

// Success probability for coordinate k (1-based); must land in (0,1).
using ProbabilityRule = std::function<double(int)>;

ProbabilityRule symmetric_rule();
ProbabilityRule constant_rule(double p);

// Reproducible sign stream: entry k is a pure function of (seed, k, p_rule),
// so prefixes are stable under extension and across thread counts.
std::vector<int> sample_sequence(const ProbabilityRule& p_rule, std::uint64_t seed,
                                 std::size_t count);

// JSON file format: {"p": [p1, ..., pn]}.
nlohmann::json space_to_json(const RademacherSpace& space);
SpacePtr space_from_json(const nlohmann::json& j);
SpacePtr load_space_file(const std::string& path);
void save_space_file(const RademacherSpace& space, const std::string& path);

}  // namespace radstein
