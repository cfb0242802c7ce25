#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "twise/base_families.hpp"
#include "twise/combiner.hpp"
#include "twise/designs.hpp"

namespace twise {

// A recursion tree describing how to realize a t-wise uniform family on n
// points: leaves name catalog families, Combine nodes split n in half per the
// halving recursion, CombineK nodes use the k-group step. Sizes are exact
// products, so plans for astronomically large families cost nothing.
enum class PlanKind { Base, Combine, CombineK };

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

struct PlanNode {
    PlanKind kind = PlanKind::Base;
    int n = 0;
    int t = 0;
    BigInt size = 0;

    std::string base_name;                   // Base
    BigInt sel_size = 0;                     // Combine
    std::shared_ptr<Selection> custom_sel;   // Combine, optional
    int k = 0;                               // CombineK
    BigInt part_size = 0;                    // CombineK
    // Combine: {A (t-wise source), B ((2t+1)-wise source)}.
    // CombineK: {tau plan, sigma_1 plan, ..., sigma_{k-1} plan}.
    std::vector<PlanPtr> children;
};

struct PlanOptions {
    bool use_catalog = true;
    // Replaces the complete selection at the root combine step; forces a
    // combine at the root. Requires v = n, k = n/2.
    std::shared_ptr<Selection> root_selection;
};

namespace detail {

inline bool power_of_two_exponent(int n, int& m) {
    if (n < 1) return false;
    m = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++m;
    }
    return n == 1;
}

inline PlanPtr make_base(const std::string& name, int n, int t, BigInt size) {
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanKind::Base;
    node->n = n;
    node->t = t;
    node->base_name = name;
    node->size = std::move(size);
    return node;
}

} // namespace detail

inline PlanPtr plan(int n, int t, const PlanOptions& opts = {}) {
    int m = 0, l_check = 0;
    if (!detail::power_of_two_exponent(n, m) || m < 1)
        throw std::invalid_argument("plan: n=" + std::to_string(n) +
                                    " must be a power of two, n = 2^m with m >= 1");
    if (t < 1 || !detail::power_of_two_exponent(t + 1, l_check))
        throw std::invalid_argument("plan: t=" + std::to_string(t) +
                                    " must have the form 2^l - 1 with l >= 1");

    if (opts.root_selection) {
        const auto& sel = *opts.root_selection;
        if (t < 3)
            throw std::invalid_argument("plan: a custom root selection needs t >= 3 (a combine step)");
        if (sel.v() != n || sel.k() != n / 2)
            throw std::invalid_argument("plan: root selection on v=" + std::to_string(sel.v()) +
                                        ", k=" + std::to_string(sel.k()) + " does not fit n=" +
                                        std::to_string(n) + " (need v=n, k=n/2)");
        PlanOptions child_opts{opts.use_catalog, nullptr};
        auto node = std::make_shared<PlanNode>();
        node->kind = PlanKind::Combine;
        node->n = n;
        node->t = t;
        node->custom_sel = opts.root_selection;
        node->sel_size = sel.size();
        node->children = {plan(n / 2, (t - 1) / 2, child_opts), plan(n / 2, t, child_opts)};
        node->size = node->sel_size * node->children[0]->size * node->children[1]->size;
        return node;
    }

    if (t >= n) return detail::make_base("symmetric", n, t, factorial(n));
    if (t == 1) return detail::make_base("cyclic", n, t, BigInt(n));
    if (opts.use_catalog) {
        if (auto hit = catalog_lookup(n, t)) return detail::make_base(hit->name, n, t, hit->size);
    }

    auto node = std::make_shared<PlanNode>();
    node->kind = PlanKind::Combine;
    node->n = n;
    node->t = t;
    node->sel_size = binomial(n, n / 2);
    node->children = {plan(n / 2, (t - 1) / 2, opts), plan(n / 2, t, opts)};
    node->size = node->sel_size * node->children[0]->size * node->children[1]->size;
    return node;
}

// A k-group plan node over the complete partition family; not produced by
// plan(), but buildable for k-group experiments.
inline PlanPtr plan_k_group(int k, int n_group, int t, PlanPtr tau, std::vector<PlanPtr> sigmas) {
    if (k < 2) throw std::invalid_argument("plan_k_group: need k >= 2");
    if (static_cast<int>(sigmas.size()) != k - 1)
        throw std::invalid_argument("plan_k_group: need exactly k-1 sigma plans");
    auto part = OrderedPartitionFamily::complete(k, n_group);
    auto node = std::make_shared<PlanNode>();
    node->kind = PlanKind::CombineK;
    node->n = k * n_group;
    node->t = 2 * t + 1;
    node->k = k;
    node->part_size = part.size();
    node->size = node->part_size * tau->size;
    for (const auto& s : sigmas) node->size *= s->size;
    node->children.push_back(std::move(tau));
    for (auto& s : sigmas) node->children.push_back(std::move(s));
    return node;
}

inline BigInt default_build_cap() {
    return BigInt("1000000000000000000");
}

inline PermFamily build(const PlanPtr& node, const BigInt& cap = default_build_cap(),
                        long base_cap = default_materialization_cap) {
    if (!node) throw std::invalid_argument("build: empty plan");
    if (node->size > cap)
        throw capacity_error("build: plan size " + node->size.str() + " exceeds cap " + cap.str());
    switch (node->kind) {
    case PlanKind::Base:
        return build_base(node->base_name, node->n, base_cap);
    case PlanKind::Combine: {
        PermFamily a = build(node->children[0], cap, base_cap);
        PermFamily b = build(node->children[1], cap, base_cap);
        Selection sel = node->custom_sel ? *node->custom_sel : Selection::complete(node->n);
        return combine(sel, a, b, node->children[0]->t);
    }
    case PlanKind::CombineK: {
        PermFamily tau = build(node->children[0], cap, base_cap);
        std::vector<PermFamily> sigmas;
        for (std::size_t i = 1; i < node->children.size(); ++i)
            sigmas.push_back(build(node->children[i], cap, base_cap));
        auto part = OrderedPartitionFamily::complete(node->k, node->n / node->k);
        return combine_k(part, tau, sigmas, (node->t - 1) / 2);
    }
    }
    throw std::logic_error("build: unreachable");
}

namespace detail {

inline void render_plan_node(const PlanPtr& node, std::ostringstream& os, int depth) {
    for (int i = 0; i < depth; ++i) os << "  ";
    switch (node->kind) {
    case PlanKind::Base:
        os << node->base_name << " n=" << node->n << " t=" << node->t << " size=" << node->size
           << "\n";
        break;
    case PlanKind::Combine:
        os << "combine n=" << node->n << " t=" << node->t << " size=" << node->size
           << " selection=" << node->sel_size << (node->custom_sel ? " (custom)" : "") << "\n";
        for (const auto& c : node->children) render_plan_node(c, os, depth + 1);
        break;
    case PlanKind::CombineK:
        os << "combine_k k=" << node->k << " n=" << node->n << " t=" << node->t
           << " size=" << node->size << " partitions=" << node->part_size << "\n";
        for (const auto& c : node->children) render_plan_node(c, os, depth + 1);
        break;
    }
}

} // namespace detail

inline std::string render_plan(const PlanPtr& node) {
    std::ostringstream os;
    detail::render_plan_node(node, os, 0);
    return os.str();
}

// The headline bound: a plan for (n, t) never exceeds t^(2n) when t >= 3.
inline BigInt size_bound(int n, int t) { return int_pow(BigInt(t), 2 * n); }

// The halving recursion without the asymmetric split: per(2n,t) <=
// C(2n,n) per(n,t)^2, bottoming out at n! once t >= n.
inline BigInt naive_size(int n, int t) {
    if (t >= n) return factorial(n);
    return binomial(n, n / 2) * naive_size(n / 2, t) * naive_size(n / 2, t);
}

struct SizeRow {
    int m = 0, l = 0, n = 0, t = 0;
    BigInt improved, naive, bound, trivial;
};

// Grid over n = 2^m, t = 2^l - 1 comparing the asymmetric recursion (pure,
// no catalog shortcuts) against the naive one, the t^(2n) bound, and n!.
inline std::vector<SizeRow> size_table(int max_m, int max_l) {
    if (max_m < 1 || max_l < 2)
        throw std::invalid_argument("size_table: need max_m >= 1 and max_l >= 2");
    std::vector<SizeRow> rows;
    for (int m = 1; m <= max_m; ++m) {
        for (int l = 2; l <= max_l; ++l) {
            SizeRow row;
            row.m = m;
            row.l = l;
            row.n = 1 << m;
            row.t = (1 << l) - 1;
            row.improved = plan(row.n, row.t, PlanOptions{false, nullptr})->size;
            row.naive = naive_size(row.n, row.t);
            row.bound = size_bound(row.n, row.t);
            row.trivial = factorial(row.n);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace twise
