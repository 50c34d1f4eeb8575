// Command-line front end: ingestion of kernel/space files, the invariant
// verification battery, normal-approximation bound sweeps with exact distance
// oracles, characteristic-function bound grids and almost-sure-CLT runs.
//
// Exit codes: 0 = pass, 1 = a bound failed to dominate its oracle or an
// invariant failed, 2 = malformed input.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "radstein/asclt.hpp"
#include "radstein/functional.hpp"
#include "radstein/kernel.hpp"
#include "radstein/malliavin.hpp"
#include "radstein/report.hpp"
#include "radstein/rng.hpp"
#include "radstein/space.hpp"
#include "radstein/stein.hpp"
#include "radstein/verify.hpp"

namespace {

using namespace radstein;

struct Options {
    std::string command;
    std::string kernel_spec;
    std::string space_file;
    int symmetric_n = -1;          // -1 unset; 0 = auto-size to kernel support
    bool symmetric_flag = false;
    std::vector<std::string> n_list;
    std::string tgrid = "-3:3:0.25";
    std::string mode = "logavg";
    std::string series = "C1";
    std::string family_spec = "builtin:example2";
    std::string test_fn = "cos";
    int m = 1;
    int seeds = 3;
    int paths = 200;
    double t = 1.0;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::string out_path;
    std::string format = "csv";

    [[nodiscard]] std::string canonical() const {
        std::ostringstream os;
        os << "command=" << command << ";kernel=" << kernel_spec << ";space=" << space_file
           << ";symmetric=" << symmetric_n << ";flag=" << symmetric_flag << ";n=";
        for (const auto& s : n_list) os << s << ',';
        os << ";tgrid=" << tgrid << ";mode=" << mode << ";series=" << series
           << ";family=" << family_spec << ";f=" << test_fn << ";m=" << m << ";seeds=" << seeds
           << ";paths=" << paths << ";t=" << format17(t) << ";seed=" << seed
           << ";tol=" << format17(tol) << ";format=" << format;
        return os.str();
    }
};

// "a,b,c" and "a..b" forms.
std::vector<int> parse_int_list(const std::vector<std::string>& parts) {
    std::vector<int> out;
    for (const std::string& token : parts) {
        const auto dots = token.find("..");
        if (dots != std::string::npos) {
            const int lo = std::stoi(token.substr(0, dots));
            const int hi = std::stoi(token.substr(dots + 2));
            if (hi < lo) throw std::invalid_argument("bad range " + token);
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(std::stoi(token));
        }
    }
    if (out.empty()) throw std::invalid_argument("empty --n list");
    return out;
}

std::vector<double> parse_tgrid(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw std::invalid_argument("bad --tgrid, expected a:b:step");
    }
    const double a = std::stod(s.substr(0, c1));
    const double b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(s.substr(c2 + 1));
    if (!(step > 0.0) || b < a) throw std::invalid_argument("bad --tgrid bounds");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double t = a + i * step;
        if (t > b + 1e-12) break;
        out.push_back(t);
    }
    return out;
}

// SPEC forms: "builtin:name:n", plain family name (sweep via --n), or a path.
struct KernelSpec {
    std::string family;  // nonempty for builtin families
    int n = 0;           // fixed n for builtin:name:n
    std::string path;    // nonempty for file kernels
};

KernelSpec parse_kernel_spec(const std::string& s) {
    KernelSpec spec;
    if (s.rfind("builtin:", 0) == 0) {
        const auto rest = s.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) {
            spec.family = rest;
        } else {
            spec.family = rest.substr(0, colon);
            spec.n = std::stoi(rest.substr(colon + 1));
        }
        return spec;
    }
    if (s == "example2" || s == "sum1") {
        spec.family = s;
        return spec;
    }
    spec.path = s;
    return spec;
}

class Emitter {
public:
    Emitter(const Options& opt) : opt_(opt) {
        hash_ = hex64(fnv1a(opt.canonical()));
        json_["version"] = std::string(kVersion);
        json_["config_hash"] = hash_;
        json_["command"] = opt.command;
        csv_ << "# version=" << kVersion << "\n# config_hash=" << hash_ << '\n';
    }

    std::ostringstream& csv() { return csv_; }
    nlohmann::json& json() { return json_; }

    int flush(int code) {
        const std::string text = opt_.format == "json" ? json_.dump(2) + "\n" : csv_.str();
        if (opt_.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(opt_.out_path);
            if (!f) throw std::invalid_argument("cannot open output file " + opt_.out_path);
            f << text;
        }
        return code;
    }

private:
    const Options& opt_;
    std::string hash_;
    nlohmann::json json_;
    std::ostringstream csv_;
};

SpacePtr resolve_space(const Options& opt, int needed) {
    if (!opt.space_file.empty()) return load_space_file(opt.space_file);
    if (opt.symmetric_n > 0) return symmetric_space(opt.symmetric_n);
    return symmetric_space(needed);
}

int run_verify(const Options& opt) {
    SpacePtr space = opt.space_file.empty()
                         ? symmetric_space(opt.symmetric_n > 0 ? opt.symmetric_n : 8)
                         : load_space_file(opt.space_file);
    const std::vector<CheckResult> checks = run_verify_suite(space, opt.seed, opt.tol);
    Emitter em(opt);
    checks_csv(checks, em.csv());
    em.json()["checks"] = checks_to_json(checks);
    int failed = 0;
    for (const auto& c : checks) failed += c.pass ? 0 : 1;
    em.json()["failed"] = failed;
    em.csv() << "# checks=" << checks.size() << " failed=" << failed << '\n';
    return em.flush(failed == 0 ? 0 : 1);
}

int run_bound(const Options& opt) {
    const KernelSpec spec = parse_kernel_spec(opt.kernel_spec);
    std::vector<std::pair<int, Kernel>> kernels;
    if (!spec.path.empty()) {
        Kernel k = load_kernel_file(spec.path);
        kernels.push_back({k.support_bound(), k});
    } else if (spec.n > 0) {
        kernels.push_back({spec.n, builtin_family(spec.family, spec.n)});
    } else {
        for (int n : parse_int_list(opt.n_list)) {
            kernels.push_back({n, builtin_family(spec.family, n)});
        }
    }

    Emitter em(opt);
    em.csv() << "kernel,n,wasserstein_gaussian,wasserstein_discreteness,wasserstein_total,"
                "d_w,wasserstein_slack,kolmogorov_total,d_k,kolmogorov_slack,chaos_total\n";
    nlohmann::json rows = nlohmann::json::array();
    bool dominated = true;
    for (const auto& [n, kernel] : kernels) {
        const int support = kernel.support_bound();
        nlohmann::json row;
        row["kernel"] = opt.kernel_spec;
        row["n"] = n;
        std::string kol_total = "", kol_oracle = "", kol_slack = "", chaos_total = "";
        BoundReport wr;
        const bool first_chaos = kernel.order() == 1;
        // Enumeration columns when the space fits; order-1 kernels get the
        // closed-form route regardless, so sweeps run far beyond the cap.
        const bool enumerable =
            !opt.space_file.empty() || opt.symmetric_n > 0 ||
            (support <= 16 && !first_chaos);
        if (first_chaos) {
            std::vector<double> p;
            if (!opt.space_file.empty()) {
                p = load_space_file(opt.space_file)->probabilities();
            } else {
                const int len = opt.symmetric_n > 0 ? opt.symmetric_n : support;
                p.assign(static_cast<std::size_t>(len), 0.5);
            }
            wr = first_chaos_wasserstein_bound(p, kernel);
        }
        if (enumerable) {
            SpacePtr space = resolve_space(opt, support);
            const Functional F = multiple_integral(space, kernel);
            if (!first_chaos) wr = wasserstein_bound(F);
            const BoundReport kr = kolmogorov_bound(F);
            const BoundReport cr = chaos_wasserstein_bound(space, kernel);
            kol_total = format17(kr.total);
            kol_oracle = format17(*kr.oracle);
            kol_slack = format17(*kr.slack);
            chaos_total = format17(cr.total);
            row["kolmogorov"] = bound_report_to_json(kr);
            row["chaos_wasserstein"] = bound_report_to_json(cr);
            if (*kr.slack < -opt.tol) dominated = false;
        }
        row["wasserstein"] = bound_report_to_json(wr);
        if (*wr.slack < -opt.tol) dominated = false;
        rows.push_back(row);
        em.csv() << opt.kernel_spec << ',' << n << ',' << format17(wr.terms[0].second) << ','
                 << format17(wr.terms[1].second) << ',' << format17(wr.total) << ','
                 << format17(*wr.oracle) << ',' << format17(*wr.slack) << ',' << kol_total << ','
                 << kol_oracle << ',' << kol_slack << ',' << chaos_total << '\n';
    }
    em.json()["bounds"] = rows;
    return em.flush(dominated ? 0 : 1);
}

int run_charfn(const Options& opt) {
    const KernelSpec spec = parse_kernel_spec(opt.kernel_spec);
    Kernel kernel;
    if (!spec.path.empty()) {
        kernel = load_kernel_file(spec.path);
    } else if (spec.n > 0) {
        kernel = builtin_family(spec.family, spec.n);
    } else {
        throw std::invalid_argument("charfn needs a fixed kernel (file or builtin:name:n)");
    }
    SpacePtr space = resolve_space(opt, kernel.support_bound());
    const Functional F = multiple_integral(space, kernel);

    Emitter em(opt);
    em.csv() << "t,gap,est1_total,est1_slack,est2_total,est2_slack\n";
    nlohmann::json rows = nlohmann::json::array();
    bool dominated = true;
    for (double t : parse_tgrid(opt.tgrid)) {
        const BoundReport e1 = charfn_bound(F, t);
        const BoundReport e2 = charfn_bound_chaos(space, kernel, t);
        if (*e1.slack < -opt.tol || *e2.slack < -opt.tol) dominated = false;
        em.csv() << format17(t) << ',' << format17(*e1.oracle) << ',' << format17(e1.total) << ','
                 << format17(*e1.slack) << ',' << format17(e2.total) << ','
                 << format17(*e2.slack) << '\n';
        rows.push_back({{"t", t},
                        {"est1", bound_report_to_json(e1)},
                        {"est2", bound_report_to_json(e2)}});
    }
    em.json()["charfn"] = rows;
    return em.flush(dominated ? 0 : 1);
}

int run_example(const Options& opt) {
    const std::vector<int> ns = parse_int_list(opt.n_list.empty()
                                                   ? std::vector<std::string>{"1..100"}
                                                   : opt.n_list);
    Emitter em(opt);
    em.csv() << "n,two_norm_sq,contraction_norm,contraction_closed_form,norm_eq,contraction_eq\n";
    nlohmann::json rows = nlohmann::json::array();
    bool ok = true;
    const double tol = std::max(opt.tol, 1e-12);
    for (int n : ns) {
        const Kernel f = builtin_family("example2", n);
        const double two_norm_sq = 2.0 * inner_product(f, f);
        const double contraction = norm(star_contract(f, f, 1));
        const double closed = 1.0 / (2.0 * std::sqrt(2.0 * n));
        const bool norm_eq = std::abs(two_norm_sq - 1.0) <= tol;
        const bool contraction_eq = std::abs(contraction - closed) <= tol;
        ok = ok && norm_eq && contraction_eq;
        em.csv() << n << ',' << format17(two_norm_sq) << ',' << format17(contraction) << ','
                 << format17(closed) << ',' << (norm_eq ? 1 : 0) << ','
                 << (contraction_eq ? 1 : 0) << '\n';
        rows.push_back({{"n", n},
                        {"two_norm_sq", two_norm_sq},
                        {"contraction_norm", contraction},
                        {"contraction_closed_form", closed},
                        {"norm_eq", norm_eq},
                        {"contraction_eq", contraction_eq}});
    }
    em.json()["example"] = rows;
    return em.flush(ok ? 0 : 1);
}

std::unique_ptr<KernelFamily> resolve_family(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return make_builtin_family(spec.substr(8));
    if (spec == "example2" || spec == "sum1") return make_builtin_family(spec);
    return load_family_file(spec);
}

int run_asclt(const Options& opt) {
    Emitter em(opt);
    if (opt.mode == "logavg") {
        const std::vector<int> ns = parse_int_list(opt.n_list.empty()
                                                       ? std::vector<std::string>{"10000"}
                                                       : opt.n_list);
        const int n_max = *std::max_element(ns.begin(), ns.end());
        TestFn fn;
        double target = 0.0;
        if (opt.test_fn == "cos") {
            fn = [](double x) { return std::cos(x); };
            target = std::exp(-0.5);
        } else if (opt.test_fn == "indicator") {
            fn = [](double x) { return x <= 0.0 ? 1.0 : 0.0; };
            target = 0.5;
        } else {
            throw std::invalid_argument("unknown --f (use cos or indicator)");
        }
        em.csv() << "seed_index,n,f,value,target,within_0.1\n";
        nlohmann::json rows = nlohmann::json::array();
        std::vector<int> hits(ns.size(), 0);
        for (int s = 0; s < opt.seeds; ++s) {
            const std::vector<double> path =
                simulate_example_path(derive_seed(opt.seed, s), n_max);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                const double v = log_average(path, fn, ns[i]);
                const bool near = std::abs(v - target) <= 0.1;
                hits[i] += near ? 1 : 0;
                em.csv() << s << ',' << ns[i] << ',' << opt.test_fn << ',' << format17(v) << ','
                         << format17(target) << ',' << (near ? 1 : 0) << '\n';
                rows.push_back({{"seed_index", s},
                                {"n", ns[i]},
                                {"value", v},
                                {"target", target},
                                {"within_0.1", near}});
            }
        }
        em.json()["logavg"] = rows;
        // Fixed acceptance rule: at the largest n, at least 2 of 3 seeds land
        // within 0.1 of the Gaussian expectation.
        bool ok = true;
        if (opt.seeds >= 3) ok = hits.back() * 3 >= 2 * opt.seeds;
        em.json()["accepted"] = ok;
        return em.flush(ok ? 0 : 1);
    }
    if (opt.mode == "ilmoment") {
        const std::vector<int> ns = parse_int_list(
            opt.n_list.empty() ? std::vector<std::string>{"100,1000,10000"} : opt.n_list);
        const IlSweep sweep = il_second_moment_sweep(opt.t, ns, opt.paths, opt.seed);
        em.csv() << "n,t,statistic,stderr\n";
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < sweep.checkpoints.size(); ++i) {
            em.csv() << sweep.checkpoints[i] << ',' << format17(opt.t) << ','
                     << format17(sweep.estimates[i].mean) << ','
                     << format17(sweep.estimates[i].std_error) << '\n';
            rows.push_back({{"n", sweep.checkpoints[i]},
                            {"t", opt.t},
                            {"statistic", sweep.estimates[i].mean},
                            {"stderr", sweep.estimates[i].std_error}});
        }
        nlohmann::json diffs = nlohmann::json::array();
        for (std::size_t i = 0; i < sweep.paired_diff_mean.size(); ++i) {
            diffs.push_back({{"from", sweep.checkpoints[i]},
                             {"to", sweep.checkpoints[i + 1]},
                             {"mean", sweep.paired_diff_mean[i]},
                             {"stderr", sweep.paired_diff_std_error[i]}});
        }
        em.json()["ilmoment"] = rows;
        em.json()["paired_differences"] = diffs;
        return em.flush(0);
    }
    if (opt.mode == "series") {
        const auto family = resolve_family(opt.family_spec);
        SeriesCondition which;
        if (opt.series == "C1") which = SeriesCondition::C1;
        else if (opt.series == "C2") which = SeriesCondition::C2;
        else if (opt.series == "cor_i") which = SeriesCondition::CorI;
        else if (opt.series == "cor_ii") which = SeriesCondition::CorII;
        else if (opt.series == "cor_iii") which = SeriesCondition::CorIII;
        else throw std::invalid_argument("unknown --series");
        const int N = parse_int_list(opt.n_list.empty() ? std::vector<std::string>{"10000"}
                                                        : opt.n_list)
                          .back();
        const ConditionSeriesReport rep = condition_series(*family, which, N, opt.m);
        em.csv() << "n,partial_sum\n";
        for (std::size_t i = 0; i < rep.values.size(); ++i) {
            em.csv() << (rep.first_n + static_cast<int>(i)) << ',' << format17(rep.values[i])
                     << '\n';
        }
        em.csv() << "# bounded=" << (rep.bounded ? 1 : 0)
                 << " envelope_constant=" << format17(rep.envelope_constant) << '\n';
        em.json()["series"] = {{"which", opt.series},
                               {"N", N},
                               {"bounded", rep.bounded},
                               {"envelope_constant", rep.envelope_constant},
                               {"final_partial_sum", rep.values.back()}};
        return em.flush(rep.bounded ? 0 : 1);
    }
    if (opt.mode == "path") {
        const int n = parse_int_list(opt.n_list.empty() ? std::vector<std::string>{"1000"}
                                                        : opt.n_list)
                          .back();
        const std::vector<double> path = simulate_example_path(opt.seed, n);
        em.csv() << "k,F_k\n";
        for (int k = 1; k <= n; ++k) em.csv() << k << ',' << format17(path[k - 1]) << '\n';
        em.json()["path_length"] = n;
        return em.flush(0);
    }
    throw std::invalid_argument("unknown --mode (logavg|ilmoment|series|path)");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Discrete Malliavin-Stein computations on finite Rademacher spaces"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("--tol", opt.tol, "domination tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.out_path, "output file (default stdout)");
        sub->add_option("--format", opt.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--space", opt.space_file, "space JSON file");
        sub->add_option("--symmetric", opt.symmetric_n,
                        "symmetric space size (omit value to size from the kernel)")
            ->expected(0, 1)
            ->default_str("0");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
    add_common(verify);

    CLI::App* bound = app.add_subcommand("bound", "normal-approximation bounds vs exact oracles");
    add_common(bound);
    bound->add_option("--kernel", opt.kernel_spec, "file | builtin:name:n | family name")
        ->required();
    bound->add_option("--n", opt.n_list, "n list/range for family sweeps")->delimiter(',');

    CLI::App* charfn = app.add_subcommand("charfn", "characteristic-function bound grid");
    add_common(charfn);
    charfn->add_option("--kernel", opt.kernel_spec, "file | builtin:name:n")->required();
    charfn->add_option("--tgrid", opt.tgrid, "a:b:step");

    CLI::App* asclt = app.add_subcommand("asclt", "almost-sure CLT runs");
    add_common(asclt);
    asclt->add_option("--mode", opt.mode, "logavg|ilmoment|series|path");
    asclt->add_option("--n", opt.n_list, "path length / checkpoints / series truncation")
        ->delimiter(',');
    asclt->add_option("--seeds", opt.seeds, "number of fixed seeds (logavg)");
    asclt->add_option("--paths", opt.paths, "Monte-Carlo paths (ilmoment)");
    asclt->add_option("--t", opt.t, "argument of the characteristic statistic");
    asclt->add_option("--f", opt.test_fn, "cos|indicator (logavg)");
    asclt->add_option("--series", opt.series, "C1|C2|cor_i|cor_ii|cor_iii");
    asclt->add_option("--m", opt.m, "contraction order for C2");
    asclt->add_option("--family", opt.family_spec, "builtin:example2|builtin:sum1|file");

    CLI::App* example = app.add_subcommand("example", "order-2 family closed-form table");
    add_common(example);
    example->add_option("--n", opt.n_list, "n list/range")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            opt.command = "verify";
            return run_verify(opt);
        }
        if (bound->parsed()) {
            opt.command = "bound";
            return run_bound(opt);
        }
        if (charfn->parsed()) {
            opt.command = "charfn";
            return run_charfn(opt);
        }
        if (asclt->parsed()) {
            opt.command = "asclt";
            return run_asclt(opt);
        }
        if (example->parsed()) {
            opt.command = "example";
            return run_example(opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
