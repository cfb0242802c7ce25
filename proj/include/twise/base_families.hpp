#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "twise/bigint.hpp"
#include "twise/family.hpp"

namespace twise {


inline bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline long smallest_factor(long p) {
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return d;
    return p;
}

// All n! permutations, lexicographic by image sequence. t-wise uniform for
// every t <= n.
inline PermFamily symmetric_family(int n, long cap = default_materialization_cap) {
    if (n < 1) throw std::invalid_argument("symmetric_family: n must be at least 1");
    BigInt size = factorial(n);
    if (size > cap)
        throw capacity_error("symmetric_family: " + std::to_string(n) + "! = " + size.str() +
                             " exceeds cap " + std::to_string(cap));
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(size));
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = x;
    do {
        perms.push_back(Permutation(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return PermFamily::from_vector(n, std::move(perms));
}

// The n!/2 even permutations. Sharply (n-2)-transitive, hence t-wise uniform
// exactly for t <= n-2.
inline PermFamily alternating_family(int n, long cap = default_materialization_cap) {
    if (n < 3)
        throw std::invalid_argument("alternating_family: requires n > 2, got n=" + std::to_string(n));
    BigInt size = factorial(n) / 2;
    if (size > cap)
        throw capacity_error("alternating_family: " + std::to_string(n) + "!/2 = " + size.str() +
                             " exceeds cap " + std::to_string(cap));
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(size));
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = x;
    do {
        Permutation p(img);
        if (is_even(p)) perms.push_back(std::move(p));
    } while (std::next_permutation(img.begin(), img.end()));
    return PermFamily::from_vector(n, std::move(perms));
}

// Shift b maps i to (i+b) mod n; 1-wise uniform with count 1 per query.
inline PermFamily cyclic_family(int n) {
    if (n < 1) throw std::invalid_argument("cyclic_family: n must be at least 1");
    return PermFamily::lazy(n, n, [n](const BigInt& index) {
        int b = static_cast<int>(index);
        std::vector<int> img(n);
        for (int i = 0; i < n; ++i) img[i] = (i + b) % n;
        return Permutation(std::move(img));
    });
}

// x -> ax+b over F_p with a != 0; indexed by (a-1)*p + b. Sharply
// 2-transitive: 2-wise uniform with count 1 per query.
inline PermFamily affine_family(int p) {
    if (!is_prime(p))
        throw std::invalid_argument("affine_family: p=" + std::to_string(p) +
                                    " is not prime (divisible by " +
                                    std::to_string(smallest_factor(p)) + ")");
    BigInt size = BigInt(p) * (p - 1);
    return PermFamily::lazy(p, size, [p](const BigInt& index) {
        long idx = static_cast<long>(index);
        int a = static_cast<int>(idx / p) + 1;
        int b = static_cast<int>(idx % p);
        std::vector<int> img(p);
        for (int x = 0; x < p; ++x) img[x] = static_cast<int>((static_cast<long>(a) * x + b) % p);
        return Permutation(std::move(img));
    });
}

namespace detail {

inline int mod_pow(long base, long exp, int p) {
    long r = 1, b = base % p;
    for (; exp > 0; exp >>= 1) {
        if (exp & 1) r = r * b % p;
        b = b * b % p;
    }
    return static_cast<int>(r);
}

inline int mod_inv(int a, int p) { return mod_pow(a, p - 2, p); }

} // namespace detail

// x -> (ax+b)/(cx+d) on the projective line F_p + {infinity}, with infinity
// encoded as index p. One representative per projective class, canonicalized
// by scaling the first nonzero of (a,b,c,d) to 1: a=1 with d != bc, then a=0,
// b=1 with c != 0. Full group of size (p+1)p(p-1), sharply 3-transitive.
inline PermFamily mobius_family(int p, long cap = default_materialization_cap) {
    if (!is_prime(p))
        throw std::invalid_argument("mobius_family: p=" + std::to_string(p) +
                                    " is not prime (divisible by " +
                                    std::to_string(smallest_factor(p)) + ")");
    BigInt size = BigInt(p + 1) * p * (p - 1);
    if (size > cap)
        throw capacity_error("mobius_family: size " + size.str() + " exceeds cap " +
                             std::to_string(cap));
    const int inf = p;
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(size));
    auto emit = [&](int a, int b, int c, int d) {
        std::vector<int> img(p + 1);
        for (int x = 0; x < p; ++x) {
            int den = (c * x + d) % p;
            img[x] = den == 0 ? inf
                              : static_cast<int>(static_cast<long>((a * x + b) % p) *
                                                 detail::mod_inv(den, p) % p);
        }
        img[inf] = c == 0 ? inf : static_cast<int>(static_cast<long>(a) * detail::mod_inv(c, p) % p);
        perms.push_back(Permutation(std::move(img)));
    };
    for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c)
            for (int d = 0; d < p; ++d)
                if (d != b * c % p) emit(1, b, c, d);
    for (int c = 1; c < p; ++c)
        for (int d = 0; d < p; ++d) emit(0, 1, c, d);
    return PermFamily::from_vector(p + 1, std::move(perms));
}

// Catalog dispatch: smallest known t-wise uniform family on degree n, if any.
struct CatalogHit {
    std::string name;
    BigInt size;
};

inline std::optional<CatalogHit> catalog_lookup(int n, int t) {
    if (n < 1 || t < 1) throw std::invalid_argument("catalog_lookup: n and t must be positive");
    if (t >= n) return CatalogHit{"symmetric", factorial(n)};
    if (t == 1) return CatalogHit{"cyclic", BigInt(n)};
    if (n > 2 && t == n - 2) return CatalogHit{"alternating", factorial(n) / 2};
    if (t == 2 && is_prime(n)) return CatalogHit{"affine", BigInt(n) * (n - 1)};
    if (t == 3 && is_prime(n - 1)) return CatalogHit{"mobius", BigInt(n) * (n - 1) * (n - 2)};
    return std::nullopt;
}

inline PermFamily build_base(const std::string& name, int n,
                             long cap = default_materialization_cap) {
    if (name == "symmetric") return symmetric_family(n, cap);
    if (name == "alternating") return alternating_family(n, cap);
    if (name == "cyclic") return cyclic_family(n);
    if (name == "affine") return affine_family(n);
    if (name == "mobius") return mobius_family(n - 1, cap);
    throw std::invalid_argument("build_base: unknown base family '" + name + "'");
}

inline std::optional<PermFamily> best_base(int n, int t, long cap = default_materialization_cap) {
    auto hit = catalog_lookup(n, t);
    if (!hit) return std::nullopt;
    return build_base(hit->name, n, cap);
}

} // namespace twise
