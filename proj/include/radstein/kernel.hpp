#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace radstein {

using IndexTuple = std::vector<int>;

// Symmetric kernel with finite support, vanishing on diagonals. Only the
// strictly increasing representative of each index class is stored; the
// symmetric extension to all permutations is implicit and every diagonal
// value is implicitly zero.
class Kernel {
public:
    Kernel() = default;

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int support_bound() const { return support_bound_; }
    [[nodiscard]] const std::map<IndexTuple, double>& entries() const { return entries_; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }

    // Value of the full symmetric function at an arbitrary ordered tuple.
    [[nodiscard]] double value(IndexTuple idx) const;

    // f(., k): the order m-1 kernel obtained by fixing one argument to k.
    [[nodiscard]] Kernel slice(int k) const;

    [[nodiscard]] Kernel scaled(double c) const;

    friend Kernel make_kernel(int order, int support_bound,
                              const std::vector<std::pair<IndexTuple, double>>& entries);

private:
    int order_ = 0;
    int support_bound_ = 1;
    std::map<IndexTuple, double> entries_;
};

// Validates and canonicalizes; zero-valued entries are dropped. Order 0 is
// the constant kernel: at most one entry, keyed by the empty tuple. Throws
// std::invalid_argument on diagonal entries, duplicate or non-increasing
// tuples, out-of-bounds indices and non-finite values.
Kernel make_kernel(int order, int support_bound,
                   const std::vector<std::pair<IndexTuple, double>>& entries);

// Named kernel families: "example2" (order 2, support 2n, value 1/(2*sqrt(n))
// on |i-j| = n) and "sum1" (order 1, the normalized-partial-sum weights
// 1/sqrt(n) on 1..n).
Kernel builtin_family(const std::string& name, int n);

// Inner product of the full symmetric tensors, i.e. the sum over all ordered
// tuples: m! times the sum over stored representatives.
double inner_product(const Kernel& f, const Kernel& g);
double norm(const Kernel& f);

// General finite-support element of a tensor power, stored on explicit
// ordered tuples (contraction outputs may be nonzero on diagonals). The
// index positions are partitioned into blocks; entries are symmetric within
// each block but not across blocks.
class SparseTensor {
public:
    SparseTensor() = default;
    SparseTensor(std::vector<int> block_orders, int support_bound)
        : block_orders_(std::move(block_orders)), support_bound_(support_bound) {}

    [[nodiscard]] const std::vector<int>& block_orders() const { return block_orders_; }
    [[nodiscard]] int total_order() const;
    [[nodiscard]] int support_bound() const { return support_bound_; }
    [[nodiscard]] const std::map<IndexTuple, double>& entries() const { return entries_; }

    [[nodiscard]] double value(const IndexTuple& idx) const;

    void add(const IndexTuple& idx, double v);
    void prune_zeros();

private:
    std::vector<int> block_orders_;
    int support_bound_ = 1;
    std::map<IndexTuple, double> entries_;
};

double inner_product(const SparseTensor& a, const SparseTensor& b);
double norm(const SparseTensor& a);

// Star-contraction gluing the last r arguments of f to the last r arguments
// of g. Output blocks are (f.order - r, g.order - r). Accumulation order is
// deterministic (ordered contraction keys, then canonical entry expansion).
SparseTensor star_contract(const Kernel& f, const Kernel& g, int r);

struct ContractionInequality {
    double lhs = 0.0;  // 2 * |f (*r r) g|^2
    double rhs = 0.0;  // |f (*l-r) f|^2 + |g (*l-r) g|^2
    bool holds = false;
};

// Checks 2|f *r g|^2 <= |f *(l-r) f|^2 + |g *(l-r) g|^2 for same-order f, g.
ContractionInequality contraction_inequality_holds(const Kernel& f, const Kernel& g, int r);

// JSON file format:
// {"order": m, "support_bound": N, "entries": [{"idx": [...], "val": x}, ...]}
nlohmann::json kernel_to_json(const Kernel& f);
Kernel kernel_from_json(const nlohmann::json& j);
Kernel load_kernel_file(const std::string& path);
void save_kernel_file(const Kernel& f, const std::string& path);

// Calls fn(ordered_tuple, value) for every cell of the full symmetric tensor,
// representatives expanded in lexicographic permutation order.
template <class Fn>
void for_each_full_entry(const Kernel& f, Fn&& fn);

namespace detail {
double factorial(int m);
}

}  // namespace radstein

#include <algorithm>

template <class Fn>
void radstein::for_each_full_entry(const Kernel& f, Fn&& fn) {
    for (const auto& [idx, v] : f.entries()) {
        IndexTuple t = idx;
        do {
            fn(t, v);
        } while (std::next_permutation(t.begin(), t.end()));
    }
}
