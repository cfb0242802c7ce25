#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace twise {

// Family sizes like t^(2n) overflow 64 bits long before anything is
// materialized, so all cardinality arithmetic is arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument " + std::to_string(n));
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// (n)_t = n (n-1) ... (n-t+1), the number of ordered t-tuples of distinct values.
inline BigInt falling_factorial(int n, int t) {
    if (t < 0) throw std::invalid_argument("falling_factorial: negative t " + std::to_string(t));
    BigInt r = 1;
    for (int i = 0; i < t; ++i) r *= (n - i);
    return r;
}

namespace detail {

// Pascal triangle cached up to this many rows; initialized once so concurrent
// readers (the verifier fans out lazy-family evaluation) need no locking.
inline constexpr int binomial_table_rows = 129;

inline const std::vector<std::vector<BigInt>>& binomial_table() {
    static const std::vector<std::vector<BigInt>> table = [] {
        std::vector<std::vector<BigInt>> t(binomial_table_rows);
        for (int n = 0; n < binomial_table_rows; ++n) {
            t[n].resize(n + 1);
            t[n][0] = t[n][n] = 1;
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

} // namespace detail

inline BigInt binomial(int n, int k) {
    if (n < 0) throw std::invalid_argument("binomial: negative n " + std::to_string(n));
    if (k < 0 || k > n) return 0;
    if (n < detail::binomial_table_rows) return detail::binomial_table()[n][k];
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline BigInt int_pow(const BigInt& base, int exp) {
    if (exp < 0) throw std::invalid_argument("int_pow: negative exponent " + std::to_string(exp));
    BigInt r = 1, b = base;
    for (int e = exp; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

inline std::string rat_str(const BigRat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace twise
