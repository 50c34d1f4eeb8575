#include "radstein/space.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "radstein/rng.hpp"

namespace radstein {

RademacherSpace::RademacherSpace(std::vector<double> p, int cap) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("RademacherSpace: empty probability sequence");
    if (static_cast<int>(p_.size()) > cap) {
        throw std::invalid_argument("RademacherSpace: size " + std::to_string(p_.size()) +
                                    " exceeds enumeration cap " + std::to_string(cap));
    }
    q_.resize(p_.size());
    y_plus_.resize(p_.size());
    y_minus_.resize(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (!(p_[i] > 0.0 && p_[i] < 1.0)) {
            throw std::invalid_argument("RademacherSpace: probability p_" + std::to_string(i + 1) +
                                        " = " + std::to_string(p_[i]) + " outside (0,1)");
        }
        q_[i] = 1.0 - p_[i];
        y_plus_[i] = std::sqrt(q_[i] / p_[i]);
        y_minus_[i] = -std::sqrt(p_[i] / q_[i]);
    }
    weights_.resize(config_count());
    weights_[0] = 1.0;
    // Prefix-doubling fill: exact per-coordinate products in a fixed order.
    std::size_t filled = 1;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        for (std::size_t m = 0; m < filled; ++m) {
            const double base = weights_[m];
            weights_[m] = base * q_[k];
            weights_[m | filled] = base * p_[k];
        }
        filled <<= 1;
    }
}

bool RademacherSpace::symmetric() const {
    for (double pk : p_) {
        if (pk != 0.5) return false;
    }
    return true;
}

SpacePtr make_space(std::vector<double> p, int cap) {
    return std::make_shared<const RademacherSpace>(std::move(p), cap);
}

SpacePtr symmetric_space(int n) {
    return make_space(std::vector<double>(static_cast<std::size_t>(n), 0.5));
}

double normalized_value(const RademacherSpace& space, const Configuration& config, int k) {
    if (k < 1 || k > space.size()) throw std::out_of_range("normalized_value: k out of range");
    return space.y(k, config.sign(k));
}

ProbabilityRule symmetric_rule() {
    return [](int) { return 0.5; };
}

ProbabilityRule constant_rule(double p) {
    return [p](int) { return p; };
}

std::vector<int> sample_sequence(const ProbabilityRule& p_rule, std::uint64_t seed,
                                 std::size_t count) {
    if (count < 1) throw std::invalid_argument("sample_sequence: count must be >= 1");
    std::vector<int> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double p = p_rule(static_cast<int>(i) + 1);
        if (!(p > 0.0 && p < 1.0)) {
            throw std::invalid_argument("sample_sequence: p_rule returned " + std::to_string(p) +
                                        " outside (0,1)");
        }
        out[i] = counter_sign(seed, i, p);
    }
    return out;
}

nlohmann::json space_to_json(const RademacherSpace& space) {
    return {{"p", space.probabilities()}};
}

SpacePtr space_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("p")) {
        throw std::invalid_argument("space_from_json: missing \"p\"");
    }
    return make_space(j.at("p").get<std::vector<double>>());
}

SpacePtr load_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_space_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return space_from_json(j);
}

void save_space_file(const RademacherSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_space_file: cannot open " + path);
    out << space_to_json(space).dump(2) << '\n';
}

}  // namespace radstein
