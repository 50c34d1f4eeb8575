#include "radstein/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "radstein/accumulate.hpp"

namespace radstein {

namespace detail {

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace detail

double Kernel::value(IndexTuple idx) const {
    if (static_cast<int>(idx.size()) != order_) {
        throw std::invalid_argument("Kernel::value: tuple order mismatch");
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return 0.0;  // diagonal
    auto it = entries_.find(idx);
    return it == entries_.end() ? 0.0 : it->second;
}

Kernel Kernel::slice(int k) const {
    if (order_ < 1) throw std::logic_error("Kernel::slice: order-0 kernel");
    Kernel out;
    out.order_ = order_ - 1;
    out.support_bound_ = support_bound_;
    for (const auto& [idx, v] : entries_) {
        auto pos = std::find(idx.begin(), idx.end(), k);
        if (pos == idx.end()) continue;
        IndexTuple rest;
        rest.reserve(idx.size() - 1);
        for (int i : idx) {
            if (i != k) rest.push_back(i);
        }
        out.entries_.emplace(std::move(rest), v);
    }
    return out;
}

Kernel Kernel::scaled(double c) const {
    Kernel out = *this;
    if (c == 0.0) {
        out.entries_.clear();
        return out;
    }
    for (auto& [idx, v] : out.entries_) v *= c;
    return out;
}

Kernel make_kernel(int order, int support_bound,
                   const std::vector<std::pair<IndexTuple, double>>& entries) {
    if (order < 0) throw std::invalid_argument("make_kernel: negative order");
    if (support_bound < 1) throw std::invalid_argument("make_kernel: support_bound must be >= 1");
    Kernel k;
    k.order_ = order;
    k.support_bound_ = support_bound;
    for (const auto& [idx, v] : entries) {
        if (static_cast<int>(idx.size()) != order) {
            throw std::invalid_argument("make_kernel: tuple length does not match order");
        }
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 1 || idx[i] > support_bound) {
                throw std::invalid_argument("make_kernel: index " + std::to_string(idx[i]) +
                                            " out of bounds 1.." + std::to_string(support_bound));
            }
            if (i > 0 && idx[i] == idx[i - 1]) {
                throw std::invalid_argument("make_kernel: diagonal entry (repeated index " +
                                            std::to_string(idx[i]) + ")");
            }
            if (i > 0 && idx[i] < idx[i - 1]) {
                throw std::invalid_argument("make_kernel: tuple not strictly increasing");
            }
        }
        if (!std::isfinite(v)) throw std::invalid_argument("make_kernel: non-finite value");
        if (v == 0.0) continue;
        if (!k.entries_.emplace(idx, v).second) {
            throw std::invalid_argument("make_kernel: duplicate tuple");
        }
    }
    return k;
}

Kernel builtin_family(const std::string& name, int n) {
    if (n < 1) throw std::invalid_argument("builtin_family: n must be >= 1");
    std::vector<std::pair<IndexTuple, double>> entries;
    if (name == "example2") {
        const double v = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
        entries.reserve(n);
        for (int i = 1; i <= n; ++i) entries.push_back({{i, i + n}, v});
        return make_kernel(2, 2 * n, entries);
    }
    if (name == "sum1") {
        const double v = 1.0 / std::sqrt(static_cast<double>(n));
        entries.reserve(n);
        for (int i = 1; i <= n; ++i) entries.push_back({{i}, v});
        return make_kernel(1, n, entries);
    }
    throw std::invalid_argument("builtin_family: unknown name '" + name + "'");
}

double inner_product(const Kernel& f, const Kernel& g) {
    if (f.order() != g.order()) throw std::invalid_argument("inner_product: order mismatch");
    NeumaierSum s;
    // Sum over sorted representatives, each index class contributing m! equal
    // ordered cells.
    const auto& a = f.entries().size() <= g.entries().size() ? f : g;
    const auto& b = f.entries().size() <= g.entries().size() ? g : f;
    for (const auto& [idx, v] : a.entries()) {
        auto it = b.entries().find(idx);
        if (it != b.entries().end()) s.add(v * it->second);
    }
    return detail::factorial(f.order()) * s.value();
}

double norm(const Kernel& f) { return std::sqrt(inner_product(f, f)); }

int SparseTensor::total_order() const {
    int d = 0;
    for (int b : block_orders_) d += b;
    return d;
}

double SparseTensor::value(const IndexTuple& idx) const {
    auto it = entries_.find(idx);
    return it == entries_.end() ? 0.0 : it->second;
}

void SparseTensor::add(const IndexTuple& idx, double v) {
    if (static_cast<int>(idx.size()) != total_order()) {
        throw std::invalid_argument("SparseTensor::add: tuple order mismatch");
    }
    entries_[idx] += v;
}

void SparseTensor::prune_zeros() {
    for (auto it = entries_.begin(); it != entries_.end();) {
        it = it->second == 0.0 ? entries_.erase(it) : std::next(it);
    }
}

double inner_product(const SparseTensor& a, const SparseTensor& b) {
    if (a.block_orders() != b.block_orders()) {
        throw std::invalid_argument("inner_product: tensor shape mismatch");
    }
    NeumaierSum s;
    const auto& small = a.entries().size() <= b.entries().size() ? a : b;
    const auto& big = a.entries().size() <= b.entries().size() ? b : a;
    for (const auto& [idx, v] : small.entries()) {
        auto it = big.entries().find(idx);
        if (it != big.entries().end()) s.add(v * it->second);
    }
    return s.value();
}

double norm(const SparseTensor& a) {
    NeumaierSum s;
    for (const auto& [idx, v] : a.entries()) s.add(v * v);
    return std::sqrt(s.value());
}

namespace {

using KeyedEntries = std::map<IndexTuple, std::vector<std::pair<IndexTuple, double>>>;

// Full symmetric cells of f grouped by their trailing r indices.
KeyedEntries group_by_tail(const Kernel& f, int r) {
    KeyedEntries m;
    for_each_full_entry(f, [&](const IndexTuple& t, double v) {
        IndexTuple head(t.begin(), t.end() - r);
        IndexTuple tail(t.end() - r, t.end());
        m[std::move(tail)].push_back({std::move(head), v});
    });
    return m;
}

IndexTuple concat(const IndexTuple& a, const IndexTuple& b) {
    IndexTuple out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

SparseTensor star_contract(const Kernel& f, const Kernel& g, int r) {
    const int n = f.order();
    const int m = g.order();
    if (r < 0 || r > std::min(n, m)) {
        throw std::out_of_range("star_contract: r out of range 0..min(n,m)");
    }
    SparseTensor out({n - r, m - r}, std::max(f.support_bound(), g.support_bound()));
    if (r == 0) {
        for_each_full_entry(f, [&](const IndexTuple& tf, double vf) {
            for_each_full_entry(g, [&](const IndexTuple& tg, double vg) {
                out.add(concat(tf, tg), vf * vg);
            });
        });
    } else {
        const KeyedEntries kf = group_by_tail(f, r);
        const KeyedEntries kg = group_by_tail(g, r);
        for (const auto& [tail, lf] : kf) {
            auto it = kg.find(tail);
            if (it == kg.end()) continue;
            for (const auto& [hf, vf] : lf) {
                for (const auto& [hg, vg] : it->second) {
                    out.add(concat(hf, hg), vf * vg);
                }
            }
        }
    }
    out.prune_zeros();
    return out;
}

ContractionInequality contraction_inequality_holds(const Kernel& f, const Kernel& g, int r) {
    if (f.order() != g.order()) {
        throw std::invalid_argument("contraction_inequality_holds: order mismatch");
    }
    const int ell = f.order();
    if (r < 0 || r > ell) throw std::out_of_range("contraction_inequality_holds: r out of range");
    const double fg = norm(star_contract(f, g, r));
    const double ff = norm(star_contract(f, f, ell - r));
    const double gg = norm(star_contract(g, g, ell - r));
    ContractionInequality out;
    out.lhs = 2.0 * fg * fg;
    out.rhs = ff * ff + gg * gg;
    out.holds = out.lhs <= out.rhs + 1e-12 + 1e-10 * std::abs(out.rhs);
    return out;
}

nlohmann::json kernel_to_json(const Kernel& f) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [idx, v] : f.entries()) {
        entries.push_back({{"idx", idx}, {"val", v}});
    }
    return {{"order", f.order()}, {"support_bound", f.support_bound()}, {"entries", entries}};
}

Kernel kernel_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("support_bound") ||
        !j.contains("entries")) {
        throw std::invalid_argument("kernel_from_json: missing order/support_bound/entries");
    }
    std::vector<std::pair<IndexTuple, double>> entries;
    for (const auto& e : j.at("entries")) {
        entries.push_back({e.at("idx").get<IndexTuple>(), e.at("val").get<double>()});
    }
    return make_kernel(j.at("order").get<int>(), j.at("support_bound").get<int>(), entries);
}

Kernel load_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_kernel_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return kernel_from_json(j);
}

void save_kernel_file(const Kernel& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_kernel_file: cannot open " + path);
    out << kernel_to_json(f).dump(2) << '\n';
}

}  // namespace radstein
