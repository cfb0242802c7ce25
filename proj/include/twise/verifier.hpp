#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "twise/bigint.hpp"
#include "twise/family.hpp"
#include "twise/subsets.hpp"

namespace twise {

// An ordered uniformity query: does sigma map positions[m] to targets[m] for
// every m?
struct TupleQuery {
    std::vector<int> positions;
    std::vector<int> targets;
};

struct VerifyOptions {
    // Work metric for the exact check is |T| * (n)_t counter increments.
    std::uint64_t work_cap = 1'000'000'000ULL;
    int workers = 1;
    // Lazy families up to this many total image entries (size * degree) are
    // materialized once instead of re-generated per position tuple.
    std::uint64_t cache_entries = 16'000'000ULL;
};

struct UniformityReport {
    bool pass = false;
    int t = 0;
    int degree = 0;
    BigInt family_size = 0;
    BigRat expected = 0;                  // 1/(n)_t
    std::optional<BigInt> expected_count; // |T|/(n)_t when divisible
    TupleQuery worst;
    BigInt worst_count = 0;
    BigRat worst_deviation = 0;
    BigInt queries_checked = 0;

    std::string render() const {
        std::ostringstream os;
        os << "verdict=" << (pass ? "pass" : "fail") << " t=" << t << " expected=" << rat_str(expected)
           << " worst=" << rat_str(worst_deviation);
        if (pass) {
            os << " witness=none";
        } else {
            os << " witness=(";
            for (std::size_t i = 0; i < worst.positions.size(); ++i)
                os << (i ? "," : "") << worst.positions[i];
            os << ")->(";
            for (std::size_t i = 0; i < worst.targets.size(); ++i)
                os << (i ? "," : "") << worst.targets[i];
            os << ")";
        }
        return os.str();
    }
};

namespace detail {

// Hot-path tuple rank over plain ints; mirrors rank_tuple.
inline std::uint64_t rank_tuple_u64(const int* tuple, int t, int n) {
    std::uint64_t r = 0;
    std::uint64_t used = 0;
    for (int i = 0; i < t; ++i) {
        int x = tuple[i];
        std::uint64_t below = used & ((std::uint64_t(1) << x) - 1);
        int d = x - __builtin_popcountll(below);
        used |= std::uint64_t(1) << x;
        r = r * (n - i) + static_cast<std::uint64_t>(d);
    }
    return r;
}

struct TupleScanResult {
    bool failed = false;
    std::uint64_t fail_tuple_rank = 0; // position-tuple rank of first failure
    std::uint64_t fail_bucket = 0;     // target-tuple rank within that tuple
    std::uint64_t fail_count = 0;
    std::uint64_t max_abs_dev = 0;     // max |count - expected| over scanned buckets
};

// Streams the family once per position tuple in [begin, end), bucketing image
// tuples; each bucket must hold exactly `expected`. Stops at the first
// failing tuple within the range.
template <class Stream>
TupleScanResult scan_tuples(Stream&& stream, int n, int t, std::uint64_t begin, std::uint64_t end,
                            std::uint64_t n_targets, std::uint64_t expected) {
    TupleScanResult res;
    std::vector<std::uint64_t> counts(n_targets);
    std::vector<int> pos(t), img(t);
    for (std::uint64_t pr = begin; pr < end; ++pr) {
        auto pv = unrank_tuple(n, t, BigInt(pr));
        std::copy(pv.begin(), pv.end(), pos.begin());
        std::fill(counts.begin(), counts.end(), 0);
        stream([&](const Permutation& perm) {
            for (int i = 0; i < t; ++i) img[i] = perm(pos[i]);
            ++counts[rank_tuple_u64(img.data(), t, n)];
        });
        for (std::uint64_t b = 0; b < n_targets; ++b) {
            std::uint64_t dev = counts[b] > expected ? counts[b] - expected : expected - counts[b];
            res.max_abs_dev = std::max(res.max_abs_dev, dev);
            if (counts[b] != expected && !res.failed) {
                res.failed = true;
                res.fail_tuple_rank = pr;
                res.fail_bucket = b;
                res.fail_count = counts[b];
            }
        }
        if (res.failed) return res;
    }
    return res;
}

} // namespace detail

// Exhaustive t-wise uniformity check: for every ordered t-tuple of distinct
// positions, every ordered target tuple must be hit by exactly |T|/(n)_t
// family elements. Early-exits on the first failing query; a size not
// divisible by (n)_t fails immediately with the lexicographically first
// query's count as the witness.
inline UniformityReport check_uniform(const PermFamily& fam, int t, VerifyOptions opts = {}) {
    int n = fam.degree();
    if (t < 1 || t > n)
        throw std::invalid_argument("check_uniform: need 1 <= t <= degree, got t=" + std::to_string(t) +
                                    " degree=" + std::to_string(n));
    if (fam.size() < 1) throw std::invalid_argument("check_uniform: empty family");

    BigInt n_targets_big = falling_factorial(n, t);
    BigInt work = fam.size() * n_targets_big;
    if (work > opts.work_cap)
        throw capacity_error("check_uniform: work " + work.str() + " exceeds cap " +
                             std::to_string(opts.work_cap) + "; use sampled_check for families this large");
    std::uint64_t n_targets = static_cast<std::uint64_t>(n_targets_big);
    std::uint64_t fam_size = static_cast<std::uint64_t>(fam.size());

    UniformityReport rep;
    rep.t = t;
    rep.degree = n;
    rep.family_size = fam.size();
    rep.expected = BigRat(1, n_targets_big);

    // Divisibility precheck: if (n)_t does not divide |T|, equal counts are
    // impossible. Count the lexicographically first query for a concrete
    // witness.
    if (fam.size() % n_targets_big != 0) {
        std::vector<int> first(t);
        for (int i = 0; i < t; ++i) first[i] = i;
        std::uint64_t count = 0;
        fam.for_each([&](const Permutation& perm) {
            for (int i = 0; i < t; ++i)
                if (perm(first[i]) != first[i]) return;
            ++count;
        });
        rep.pass = false;
        rep.worst = TupleQuery{first, first};
        rep.worst_count = count;
        rep.worst_deviation = abs(BigRat(count, fam.size()) - rep.expected);
        rep.queries_checked = 1;
        return rep;
    }

    BigInt expected_big = fam.size() / n_targets_big;
    rep.expected_count = expected_big;
    std::uint64_t expected = static_cast<std::uint64_t>(expected_big);

    // Explicit families stream from their vector; lazy ones are materialized
    // once when small enough, otherwise regenerated per tuple.
    std::vector<Permutation> cache;
    bool use_cache = false;
    if (!fam.is_explicit() &&
        fam.size() * n <= BigInt(opts.cache_entries)) {
        cache = fam.materialize(fam.size());
        use_cache = true;
    }
    auto stream = [&](auto&& visit) {
        if (use_cache) {
            for (const auto& p : cache) visit(p);
        } else {
            fam.for_each(visit);
        }
    };

    int workers = std::max(1, opts.workers);
    std::vector<detail::TupleScanResult> results;
    if (workers == 1 || n_targets < static_cast<std::uint64_t>(workers)) {
        results.push_back(detail::scan_tuples(stream, n, t, 0, n_targets, n_targets, expected));
    } else {
        results.resize(workers);
        std::vector<std::thread> threads;
        std::uint64_t chunk = (n_targets + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::uint64_t b = std::min<std::uint64_t>(w * chunk, n_targets);
            std::uint64_t e = std::min<std::uint64_t>(b + chunk, n_targets);
            threads.emplace_back([&, w, b, e] {
                results[w] = detail::scan_tuples(stream, n, t, b, e, n_targets, expected);
            });
        }
        for (auto& th : threads) th.join();
    }

    // Deterministic merge: lowest failing (tuple, bucket) wins regardless of
    // scheduling; deviations combine by max.
    detail::TupleScanResult merged;
    for (const auto& r : results) {
        merged.max_abs_dev = std::max(merged.max_abs_dev, r.max_abs_dev);
        if (r.failed && (!merged.failed || r.fail_tuple_rank < merged.fail_tuple_rank ||
                         (r.fail_tuple_rank == merged.fail_tuple_rank &&
                          r.fail_bucket < merged.fail_bucket))) {
            merged.failed = true;
            merged.fail_tuple_rank = r.fail_tuple_rank;
            merged.fail_bucket = r.fail_bucket;
            merged.fail_count = r.fail_count;
        }
    }
    (void)fam_size;

    if (merged.failed) {
        rep.pass = false;
        rep.worst = TupleQuery{unrank_tuple(n, t, BigInt(merged.fail_tuple_rank)),
                               unrank_tuple(n, t, BigInt(merged.fail_bucket))};
        rep.worst_count = merged.fail_count;
        rep.worst_deviation = abs(BigRat(merged.fail_count, fam.size()) - rep.expected);
        rep.queries_checked = BigInt(merged.fail_tuple_rank) * n_targets_big + merged.fail_bucket + 1;
    } else {
        rep.pass = true;
        rep.worst = TupleQuery{unrank_tuple(n, t, BigInt(0)), unrank_tuple(n, t, BigInt(0))};
        rep.worst_count = expected_big;
        rep.worst_deviation = BigRat(merged.max_abs_dev, fam.size());
        rep.queries_checked = n_targets_big * n_targets_big;
    }
    return rep;
}

// Joint statistics of the pair (tau o sigma, tau): on any r positions of the
// first and s of the second with r+s = 2t+1, the pair must behave as two
// independent uniform permutations, hitting probability (n-r)!(n-s)!/n!^2.
struct PairQuery {
    int r = 0, s = 0;
    std::vector<int> i, j; // (tau o sigma)(i[m]) = j[m]
    std::vector<int> k, l; // tau(k[m]) = l[m]
};

struct PairReport {
    bool pass = false;
    PairQuery query;
    BigInt count = 0;
    BigInt pairs = 0;
    BigRat observed = 0, target = 0;
};

inline PairReport check_pair_statistics(const PermFamily& A, const PermFamily& B, int t,
                                        const PairQuery& q, VerifyOptions opts = {}) {
    int n = A.degree();
    if (B.degree() != n)
        throw std::invalid_argument("check_pair_statistics: degree mismatch (A=" + std::to_string(n) +
                                    ", B=" + std::to_string(B.degree()) + ")");
    if (q.r < 0 || q.s < 0 || q.r + q.s != 2 * t + 1)
        throw std::invalid_argument("check_pair_statistics: need r+s = 2t+1 with r,s >= 0");
    if (q.r > n || q.s > n)
        throw std::invalid_argument("check_pair_statistics: r and s must not exceed the degree");
    auto check_distinct = [n](const std::vector<int>& xs, int len, const char* name) {
        if (static_cast<int>(xs.size()) != len)
            throw std::invalid_argument(std::string("check_pair_statistics: index group ") + name +
                                        " has wrong length");
        std::vector<char> seen(n, 0);
        for (int x : xs) {
            if (x < 0 || x >= n || seen[x])
                throw std::invalid_argument(std::string("check_pair_statistics: index group ") + name +
                                            " must hold distinct values in range");
            seen[x] = 1;
        }
    };
    check_distinct(q.i, q.r, "i");
    check_distinct(q.j, q.r, "j");
    check_distinct(q.k, q.s, "k");
    check_distinct(q.l, q.s, "l");

    BigInt pairs = A.size() * B.size();
    if (pairs > opts.work_cap)
        throw capacity_error("check_pair_statistics: |A|*|B| = " + pairs.str() + " exceeds cap " +
                             std::to_string(opts.work_cap));

    auto b_items = B.materialize(B.size());
    std::uint64_t count = 0;
    A.for_each([&](const Permutation& sigma) {
        for (const auto& tau : b_items) {
            bool ok = true;
            for (int m = 0; m < q.r && ok; ++m)
                if (tau(sigma(q.i[m])) != q.j[m]) ok = false;
            for (int m = 0; m < q.s && ok; ++m)
                if (tau(q.k[m]) != q.l[m]) ok = false;
            if (ok) ++count;
        }
    });

    PairReport rep;
    rep.query = q;
    rep.count = count;
    rep.pairs = pairs;
    rep.observed = BigRat(count, pairs);
    BigInt fact_n = factorial(n);
    rep.target = BigRat(factorial(n - q.r) * factorial(n - q.s), fact_n * fact_n);
    rep.pass = BigInt(count) * fact_n * fact_n ==
               factorial(n - q.r) * factorial(n - q.s) * pairs;
    return rep;
}

struct PairAllReport {
    bool pass = true;
    int splits_checked = 0;
    BigInt queries_checked = 0;
    std::optional<PairQuery> witness;
    BigRat observed = 0, target = 0;
};

// Every split (r,s) with r+s = 2t+1 and every distinct-index query at once:
// for each (i-tuple, k-tuple) one sweep over A x B buckets the observed
// (j-tuple, l-tuple) outcomes, so zero-probability queries are covered too.
inline PairAllReport check_pair_statistics_all(const PermFamily& A, const PermFamily& B, int t,
                                               VerifyOptions opts = {}) {
    int n = A.degree();
    if (B.degree() != n)
        throw std::invalid_argument("check_pair_statistics_all: degree mismatch");
    if (n > 5)
        throw std::invalid_argument("check_pair_statistics_all: degree " + std::to_string(n) +
                                    " exceeds the exhaustive limit 5");
    if (t < 0 || 2 * t + 1 > 2 * n)
        throw std::invalid_argument("check_pair_statistics_all: t out of range");
    BigInt pairs = A.size() * B.size();
    if (pairs > opts.work_cap)
        throw capacity_error("check_pair_statistics_all: |A|*|B| = " + pairs.str() + " exceeds cap " +
                             std::to_string(opts.work_cap));

    auto a_items = A.materialize(A.size());
    auto b_items = B.materialize(B.size());
    BigInt fact_n = factorial(n);

    PairAllReport rep;
    int q = 2 * t + 1;
    for (int r = std::max(0, q - n); r <= std::min(q, n); ++r) {
        int s = q - r;
        ++rep.splits_checked;
        std::uint64_t nr = static_cast<std::uint64_t>(falling_factorial(n, r));
        std::uint64_t ns = static_cast<std::uint64_t>(falling_factorial(n, s));
        BigInt target_num = factorial(n - r) * factorial(n - s);
        std::vector<std::uint64_t> counts(nr * ns);
        std::vector<int> jt(r), lt(s);
        for (std::uint64_t ir = 0; ir < nr; ++ir) {
            auto iv = unrank_tuple(n, r, BigInt(ir));
            for (std::uint64_t kr = 0; kr < ns; ++kr) {
                auto kv = unrank_tuple(n, s, BigInt(kr));
                std::fill(counts.begin(), counts.end(), 0);
                for (const auto& sigma : a_items) {
                    for (const auto& tau : b_items) {
                        for (int m = 0; m < r; ++m) jt[m] = tau(sigma(iv[m]));
                        for (int m = 0; m < s; ++m) lt[m] = tau(kv[m]);
                        ++counts[detail::rank_tuple_u64(jt.data(), r, n) * ns +
                                 detail::rank_tuple_u64(lt.data(), s, n)];
                    }
                }
                for (std::uint64_t b = 0; b < nr * ns; ++b) {
                    rep.queries_checked += 1;
                    if (BigInt(counts[b]) * fact_n * fact_n != target_num * pairs) {
                        rep.pass = false;
                        PairQuery w;
                        w.r = r;
                        w.s = s;
                        w.i = iv;
                        w.j = unrank_tuple(n, r, BigInt(b / ns));
                        w.k = kv;
                        w.l = unrank_tuple(n, s, BigInt(b % ns));
                        rep.witness = w;
                        rep.observed = BigRat(counts[b], pairs);
                        rep.target = BigRat(target_num, fact_n * fact_n);
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

// Deterministic seeded sampling for families too large to stream: draws
// `samples` uniform indices and measures a fixed set of random queries.
// Approximate by nature; never a substitute for check_uniform.
struct SampledReport {
    bool pass = false;
    int t = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double tol = 0;
    double max_deviation = 0;
    TupleQuery worst;
    std::size_t queries = 0;

    std::string render() const {
        std::ostringstream os;
        char buf[64];
        std::snprintf(buf, sizeof buf, "tol=%.6f max_dev=%.6f", tol, max_deviation);
        os << "verdict=" << (pass ? "pass" : "fail") << " t=" << t << " mode=sampled samples=" << samples
           << " seed=" << seed << " " << buf;
        return os.str();
    }
};

namespace detail {

// splitmix64: tiny, seedable, identical everywhere; good enough for smoke
// sampling and query choice.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = bound * ((~std::uint64_t(0)) / bound);
        for (;;) {
            std::uint64_t x = next();
            if (x < limit) return x % bound;
        }
    }
    BigInt below_big(const BigInt& bound) {
        if (bound <= std::numeric_limits<std::uint64_t>::max())
            return BigInt(below(static_cast<std::uint64_t>(bound)));
        unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
        unsigned words = (bits + 63) / 64;
        for (;;) {
            BigInt x = 0;
            for (unsigned w = 0; w < words; ++w) x = (x << 64) + next();
            x >>= (words * 64 - bits);
            if (x < bound) return x;
        }
    }
};

} // namespace detail

inline SampledReport sampled_check(const PermFamily& fam, int t, std::uint64_t samples,
                                   std::uint64_t seed, double tol) {
    int n = fam.degree();
    if (t < 1 || t > n)
        throw std::invalid_argument("sampled_check: need 1 <= t <= degree, got t=" + std::to_string(t) +
                                    " degree=" + std::to_string(n));
    if (samples < 1) throw std::invalid_argument("sampled_check: need at least one sample");
    if (fam.size() < 1) throw std::invalid_argument("sampled_check: empty family");

    detail::SplitMix64 rng(seed);
    BigInt n_targets_big = falling_factorial(n, t);

    // Fixed query set drawn first so it only depends on the seed.
    constexpr std::size_t max_queries = 50;
    std::vector<TupleQuery> queries;
    if (n_targets_big * n_targets_big <= BigInt(max_queries)) {
        std::uint64_t nt = static_cast<std::uint64_t>(n_targets_big);
        for (std::uint64_t p = 0; p < nt; ++p)
            for (std::uint64_t v = 0; v < nt; ++v)
                queries.push_back({unrank_tuple(n, t, BigInt(p)), unrank_tuple(n, t, BigInt(v))});
    } else {
        while (queries.size() < max_queries) {
            BigInt pr = rng.below_big(n_targets_big);
            BigInt vr = rng.below_big(n_targets_big);
            queries.push_back({unrank_tuple(n, t, pr), unrank_tuple(n, t, vr)});
        }
    }

    std::vector<std::uint64_t> hits(queries.size(), 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Permutation perm = fam.get(rng.below_big(fam.size()));
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
            const auto& q = queries[qi];
            bool ok = true;
            for (int m = 0; m < t && ok; ++m)
                if (perm(q.positions[m]) != q.targets[m]) ok = false;
            if (ok) ++hits[qi];
        }
    }

    double expected = 1.0 / static_cast<double>(n_targets_big);
    SampledReport rep;
    rep.t = t;
    rep.samples = samples;
    rep.seed = seed;
    rep.tol = tol;
    rep.queries = queries.size();
    rep.worst = queries.front();
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        double dev = std::abs(static_cast<double>(hits[qi]) / static_cast<double>(samples) - expected);
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst = queries[qi];
        }
    }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

} // namespace twise
