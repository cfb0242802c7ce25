#pragma once

#include <string>
#include <vector>

#include "twise/bigint.hpp"

namespace twise {

// Lexicographic rank/unrank of sorted k-subsets of {0,...,v-1}
// (combinatorial number system; rank 0 is {0,...,k-1}).

inline std::vector<int> unrank_subset(int v, int k, const BigInt& rank) {
    if (k < 0 || k > v)
        throw std::invalid_argument("unrank_subset: need 0 <= k <= v, got k=" + std::to_string(k) +
                                    " v=" + std::to_string(v));
    BigInt total = binomial(v, k);
    if (rank < 0 || rank >= total)
        throw std::invalid_argument("unrank_subset: rank " + rank.str() + " out of range, C(" +
                                    std::to_string(v) + "," + std::to_string(k) + ")=" + total.str());
    std::vector<int> out;
    out.reserve(k);
    BigInt r = rank;
    int x = 0;
    for (int i = 0; i < k; ++i) {
        for (;;) {
            BigInt c = binomial(v - x - 1, k - i - 1);
            if (r < c) break;
            r -= c;
            ++x;
        }
        out.push_back(x);
        ++x;
    }
    return out;
}

inline BigInt rank_subset(int v, const std::vector<int>& subset) {
    int k = static_cast<int>(subset.size());
    BigInt r = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        int x = subset[i];
        if (x <= prev || x >= v)
            throw std::invalid_argument("rank_subset: not a sorted subset of {0,...," +
                                        std::to_string(v - 1) + "}");
        for (int y = prev + 1; y < x; ++y) r += binomial(v - y - 1, k - i - 1);
        prev = x;
    }
    return r;
}

// Lexicographic rank/unrank of ordered t-tuples with distinct entries from
// {0,...,n-1}; there are (n)_t of them. Digit i lives in {0,...,n-i-1} and
// counts how many unused values precede the chosen one.

inline BigInt rank_tuple(int n, const std::vector<int>& tuple) {
    int t = static_cast<int>(tuple.size());
    BigInt r = 0;
    std::vector<char> used(n, 0);
    for (int i = 0; i < t; ++i) {
        int x = tuple[i];
        if (x < 0 || x >= n || used[x])
            throw std::invalid_argument("rank_tuple: entries must be distinct values in {0,...," +
                                        std::to_string(n - 1) + "}");
        int d = 0;
        for (int y = 0; y < x; ++y)
            if (!used[y]) ++d;
        used[x] = 1;
        r = r * (n - i) + d;
    }
    return r;
}

inline std::vector<int> unrank_tuple(int n, int t, const BigInt& rank) {
    if (t < 0 || t > n)
        throw std::invalid_argument("unrank_tuple: need 0 <= t <= n, got t=" + std::to_string(t) +
                                    " n=" + std::to_string(n));
    BigInt total = falling_factorial(n, t);
    if (rank < 0 || rank >= total)
        throw std::invalid_argument("unrank_tuple: rank " + rank.str() + " out of range, (n)_t=" +
                                    total.str());
    // Peel mixed-radix digits (radix n-i for digit i), least significant last.
    std::vector<int> digits(t);
    BigInt r = rank;
    for (int i = t - 1; i >= 0; --i) {
        BigInt radix = n - i;
        digits[i] = static_cast<int>(r % radix);
        r /= radix;
    }
    std::vector<int> avail(n);
    for (int y = 0; y < n; ++y) avail[y] = y;
    std::vector<int> out;
    out.reserve(t);
    for (int i = 0; i < t; ++i) {
        out.push_back(avail[digits[i]]);
        avail.erase(avail.begin() + digits[i]);
    }
    return out;
}

} // namespace twise
