#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace radstein {

inline constexpr std::string_view kVersion = "0.1.0";

// 17 significant digits: lossless double round-trip.
std::string format17(double x);

std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t x);

// Named bound terms with total and, when an exact oracle is available, the
// slack total - oracle. A sound bound never has slack below -1e-10.
struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    double total = 0.0;
    std::optional<double> oracle;
    std::optional<double> slack;

    void set_oracle(double value) {
        oracle = value;
        slack = total - value;
    }
};

BoundReport make_bound_report(std::string name,
                              std::vector<std::pair<std::string, double>> terms);

nlohmann::json bound_report_to_json(const BoundReport& r);
void bound_reports_csv(std::span<const BoundReport> reports, std::ostream& out);

// One verification check: pass iff |lhs - rhs| <= tol (or, for one-sided
// checks, lhs <= rhs + tol; the producer encodes the convention).
struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool pass = false;
};

nlohmann::json checks_to_json(std::span<const CheckResult> checks);
void checks_csv(std::span<const CheckResult> checks, std::ostream& out);

}  // namespace radstein
