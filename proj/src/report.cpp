#include "radstein/report.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace radstein {

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

BoundReport make_bound_report(std::string name,
                              std::vector<std::pair<std::string, double>> terms) {
    BoundReport r;
    r.name = std::move(name);
    r.terms = std::move(terms);
    for (const auto& [k, v] : r.terms) r.total += v;
    return r;
}

nlohmann::json bound_report_to_json(const BoundReport& r) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [k, v] : r.terms) terms[k] = v;
    nlohmann::json j{{"name", r.name}, {"terms", terms}, {"total", r.total}};
    if (r.oracle) j["oracle"] = *r.oracle;
    if (r.slack) j["slack"] = *r.slack;
    return j;
}

void bound_reports_csv(std::span<const BoundReport> reports, std::ostream& out) {
    if (reports.empty()) return;
    out << "name";
    for (const auto& [k, v] : reports.front().terms) out << ',' << k;
    out << ",total,oracle,slack\n";
    for (const auto& r : reports) {
        if (r.terms.size() != reports.front().terms.size()) {
            throw std::invalid_argument("bound_reports_csv: heterogeneous term lists");
        }
        out << r.name;
        for (const auto& [k, v] : r.terms) out << ',' << format17(v);
        out << ',' << format17(r.total);
        out << ',' << (r.oracle ? format17(*r.oracle) : "");
        out << ',' << (r.slack ? format17(*r.slack) : "");
        out << '\n';
    }
}

nlohmann::json checks_to_json(std::span<const CheckResult> checks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"tol", c.tol},
                       {"pass", c.pass}});
    }
    return arr;
}

void checks_csv(std::span<const CheckResult> checks, std::ostream& out) {
    out << "name,lhs,rhs,tol,pass\n";
    for (const auto& c : checks) {
        out << c.name << ',' << format17(c.lhs) << ',' << format17(c.rhs) << ','
            << format17(c.tol) << ',' << (c.pass ? 1 : 0) << '\n';
    }
}

}  // namespace radstein
