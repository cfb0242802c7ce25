#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "twise/designs.hpp"
#include "twise/family.hpp"
#include "twise/subsets.hpp"
#include "twise/verifier.hpp"

namespace twise {

// The core combination step on 2n points: mu sends S onto {0,...,n-1} via
// tau o sigma and the complement onto {n,...,2n-1} via tau, both through the
// order-preserving bijections f_S (r-th smallest of S -> r) and g_S (same on
// the complement).
inline Permutation make_mu(const std::vector<int>& S, const Permutation& sigma,
                           const Permutation& tau) {
    int n = static_cast<int>(S.size());
    if (sigma.degree() != n || tau.degree() != n)
        throw std::invalid_argument("make_mu: |S| = " + std::to_string(n) +
                                    " must match degrees (sigma=" + std::to_string(sigma.degree()) +
                                    ", tau=" + std::to_string(tau.degree()) + ")");
    int two_n = 2 * n;
    std::vector<int> img(two_n, -1);
    int prev = -1;
    for (int r = 0; r < n; ++r) {
        int x = S[r];
        if (x <= prev || x >= two_n)
            throw std::invalid_argument("make_mu: S must be a sorted subset of {0,...," +
                                        std::to_string(two_n - 1) + "}");
        img[x] = tau(sigma(r));
        prev = x;
    }
    int g = 0;
    for (int x = 0; x < two_n; ++x)
        if (img[x] < 0) img[x] = tau(g++) + n;
    return Permutation(std::move(img));
}

// All mu_{S,sigma,tau} over S in sel, sigma in A, tau in B, lazily indexed
// row-major as (S, sigma, tau) with tau fastest. If A is t-wise uniform, B is
// (2t+1)-wise uniform and sel has the matching selection property, the result
// is (2t+1)-wise uniform on 2n points (and injective in (S,sigma,tau) when
// the inputs are duplicate-free).
inline PermFamily combine(const Selection& sel, const PermFamily& A, const PermFamily& B, int t) {
    int n = A.degree();
    if (B.degree() != n)
        throw std::invalid_argument("combine: degree mismatch (A=" + std::to_string(n) + ", B=" +
                                    std::to_string(B.degree()) + ")");
    if (sel.v() != 2 * n || sel.k() != n)
        throw std::invalid_argument("combine: selection on v=" + std::to_string(sel.v()) + ", k=" +
                                    std::to_string(sel.k()) + " does not fit degree " +
                                    std::to_string(n) + " inputs (need v=2n, k=n)");
    if (t < 0) throw std::invalid_argument("combine: t must be non-negative");
    if (sel.size() < 1 || A.size() < 1 || B.size() < 1)
        throw std::invalid_argument("combine: all inputs must be non-empty");

    BigInt inner = A.size() * B.size();
    BigInt size = sel.size() * inner;
    BigInt a_size = A.size(), b_size = B.size();
    return PermFamily::lazy(2 * n, size, [sel, A, B, inner, b_size](const BigInt& index) {
        BigInt s_idx = index / inner;
        BigInt rem = index % inner;
        BigInt a_idx = rem / b_size;
        BigInt b_idx = rem % b_size;
        return make_mu(sel.block(s_idx), A.get(a_idx), B.get(b_idx));
    });
}

// Ordered partitions of {0,...,kn-1} into k groups of size n, lazily indexed
// by iterated subset unranking: block 1 chosen from the full set, block 2
// from the remainder, and so on (lexicographic at each stage).
class OrderedPartitionFamily {
public:
    static OrderedPartitionFamily complete(int k, int n) {
        if (k < 1 || n < 1)
            throw std::invalid_argument("partition family: k and n must be positive");
        OrderedPartitionFamily f;
        f.k_ = k;
        f.n_ = n;
        f.kn_ = k * n;
        f.size_ = 1;
        for (int i = 0; i < k; ++i) f.size_ *= binomial(f.kn_ - i * n, n);
        return f;
    }

    int k() const { return k_; }
    int group_size() const { return n_; }
    int degree() const { return kn_; }
    const BigInt& size() const { return size_; }

    std::vector<std::vector<int>> get(const BigInt& index) const {
        if (index < 0 || index >= size_)
            throw std::invalid_argument("partition family: index " + index.str() +
                                        " out of range, size " + size_.str());
        // Mixed-radix digits, most significant (block 1) first.
        std::vector<BigInt> digits(k_);
        BigInt r = index;
        for (int i = k_ - 1; i >= 0; --i) {
            BigInt radix = binomial(kn_ - i * n_, n_);
            digits[i] = r % radix;
            r /= radix;
        }
        std::vector<int> remaining(kn_);
        for (int x = 0; x < kn_; ++x) remaining[x] = x;
        std::vector<std::vector<int>> groups;
        groups.reserve(k_);
        for (int i = 0; i < k_; ++i) {
            auto local = unrank_subset(static_cast<int>(remaining.size()), n_, digits[i]);
            std::vector<int> group;
            group.reserve(n_);
            for (int pos : local) group.push_back(remaining[pos]);
            for (auto it = local.rbegin(); it != local.rend(); ++it)
                remaining.erase(remaining.begin() + *it);
            groups.push_back(std::move(group));
        }
        return groups;
    }

private:
    OrderedPartitionFamily() = default;

    int k_ = 0, n_ = 0, kn_ = 0;
    BigInt size_ = 0;
};

// k-group generalization: tau applied to group 1, tau o sigma_i to group i+1,
// with group i+1 landing on {i*n,...,(i+1)*n-1}; block bijections are
// order-preserving as in make_mu.
inline Permutation make_mu_k(const std::vector<std::vector<int>>& groups, const Permutation& tau,
                             const std::vector<Permutation>& sigmas) {
    int k = static_cast<int>(groups.size());
    if (k < 1) throw std::invalid_argument("make_mu_k: need at least one group");
    int n = tau.degree();
    if (static_cast<int>(sigmas.size()) != k - 1)
        throw std::invalid_argument("make_mu_k: need exactly k-1 sigmas, got " +
                                    std::to_string(sigmas.size()));
    for (const auto& s : sigmas)
        if (s.degree() != n)
            throw std::invalid_argument("make_mu_k: sigma degree " + std::to_string(s.degree()) +
                                        " does not match tau degree " + std::to_string(n));
    int kn = k * n;
    std::vector<int> img(kn, -1);
    for (int gi = 0; gi < k; ++gi) {
        const auto& group = groups[gi];
        if (static_cast<int>(group.size()) != n)
            throw std::invalid_argument("make_mu_k: group of size " + std::to_string(group.size()) +
                                        ", expected " + std::to_string(n));
        int prev = -1;
        for (int r = 0; r < n; ++r) {
            int x = group[r];
            if (x <= prev || x >= kn)
                throw std::invalid_argument("make_mu_k: groups must be sorted subsets of {0,...," +
                                            std::to_string(kn - 1) + "}");
            if (img[x] >= 0)
                throw std::invalid_argument("make_mu_k: groups overlap at " + std::to_string(x));
            img[x] = (gi == 0 ? tau(r) : tau(sigmas[gi - 1](r))) + gi * n;
            prev = x;
        }
    }
    for (int x = 0; x < kn; ++x)
        if (img[x] < 0) throw std::invalid_argument("make_mu_k: groups do not cover the ground set");
    return Permutation(std::move(img));
}

// Lazy index order: partition slowest, then tau, then sigma_1 ... sigma_{k-1}
// (last sigma fastest). With tau_fam (2t+1)-wise uniform and every sigma_fam
// t-wise uniform over the complete partition family, the output is
// (2t+1)-wise uniform on kn points.
inline PermFamily combine_k(const OrderedPartitionFamily& part, const PermFamily& tau_fam,
                            const std::vector<PermFamily>& sigma_fams, int t) {
    int n = part.group_size();
    int k = part.k();
    if (tau_fam.degree() != n)
        throw std::invalid_argument("combine_k: tau degree " + std::to_string(tau_fam.degree()) +
                                    " does not match group size " + std::to_string(n));
    if (static_cast<int>(sigma_fams.size()) != k - 1)
        throw std::invalid_argument("combine_k: need exactly k-1 sigma families, got " +
                                    std::to_string(sigma_fams.size()));
    for (const auto& f : sigma_fams) {
        if (f.degree() != n)
            throw std::invalid_argument("combine_k: sigma family degree " +
                                        std::to_string(f.degree()) + " does not match group size " +
                                        std::to_string(n));
        if (f.size() < 1) throw std::invalid_argument("combine_k: empty sigma family");
    }
    if (t < 0) throw std::invalid_argument("combine_k: t must be non-negative");
    if (tau_fam.size() < 1) throw std::invalid_argument("combine_k: empty tau family");

    BigInt size = part.size() * tau_fam.size();
    for (const auto& f : sigma_fams) size *= f.size();
    return PermFamily::lazy(part.degree(), size,
                            [part, tau_fam, sigma_fams, k](const BigInt& index) {
        BigInt r = index;
        std::vector<BigInt> sigma_idx(k - 1);
        for (int i = k - 2; i >= 0; --i) {
            sigma_idx[i] = r % sigma_fams[i].size();
            r /= sigma_fams[i].size();
        }
        BigInt tau_idx = r % tau_fam.size();
        r /= tau_fam.size();
        std::vector<Permutation> sigmas;
        sigmas.reserve(k - 1);
        for (int i = 0; i < k - 1; ++i) sigmas.push_back(sigma_fams[i].get(sigma_idx[i]));
        return make_mu_k(part.get(r), tau_fam.get(tau_idx), sigmas);
    });
}

// The combiner's hypotheses, verified outright (--paranoid in the CLI):
// selection statistics at 2t+1, A at t, B at 2t+1.
struct CombinePreconditions {
    SelectionReport selection;
    UniformityReport a_report;
    UniformityReport b_report;
    bool pass = false;
};

inline CombinePreconditions verify_combine_preconditions(const Selection& sel, const PermFamily& A,
                                                         const PermFamily& B, int t,
                                                         VerifyOptions opts = {}) {
    if (t < 1)
        throw std::invalid_argument("verify_combine_preconditions: t must be positive");
    // Strength beyond the degree degenerates to full n-wise uniformity, so
    // clamp: at the recursion floor B lives on 2 points but is asked for 3.
    int ta = std::min(t, A.degree());
    int tb = std::min(2 * t + 1, B.degree());
    CombinePreconditions out{check_selection(sel, 2 * t + 1), check_uniform(A, ta, opts),
                             check_uniform(B, tb, opts), false};
    out.pass = out.selection.pass && out.a_report.pass && out.b_report.pass;
    return out;
}

} // namespace twise
