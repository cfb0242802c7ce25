#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twise/bigint.hpp"
#include "twise/errors.hpp"
#include "twise/subsets.hpp"

namespace twise {

// A family of k-subsets (blocks) of {0,...,v-1}, duplicates permitted.
// Houses the selections fed to the combiner; the complete selection is all
// C(v,k) blocks in lexicographic order, kept lazy.
class Selection {
public:
    static Selection complete(int two_n) {
        if (two_n < 2 || two_n % 2 != 0)
            throw std::invalid_argument("complete_selection: need an even ground set of size >= 2, got " +
                                        std::to_string(two_n));
        Selection s;
        s.v_ = two_n;
        s.k_ = two_n / 2;
        s.size_ = binomial(s.v_, s.k_);
        return s;
    }

    static Selection from_blocks(int v, int k, std::vector<std::vector<int>> blocks) {
        if (v < 1 || k < 0 || k > v)
            throw std::invalid_argument("selection: need 0 <= k <= v");
        for (const auto& b : blocks) {
            if (static_cast<int>(b.size()) != k)
                throw std::invalid_argument("selection: block of size " + std::to_string(b.size()) +
                                            ", expected k=" + std::to_string(k));
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (b[i] < 0 || b[i] >= v)
                    throw std::invalid_argument("selection: element " + std::to_string(b[i]) +
                                                " outside {0,...," + std::to_string(v - 1) + "}");
                if (i > 0 && b[i] <= b[i - 1])
                    throw std::invalid_argument("selection: block elements must be strictly increasing");
            }
        }
        Selection s;
        s.v_ = v;
        s.k_ = k;
        s.size_ = static_cast<long>(blocks.size());
        s.blocks_ = std::make_shared<std::vector<std::vector<int>>>(std::move(blocks));
        return s;
    }

    int v() const { return v_; }
    int k() const { return k_; }
    const BigInt& size() const { return size_; }
    bool is_explicit() const { return blocks_ != nullptr; }

    std::vector<int> block(const BigInt& index) const {
        if (index < 0 || index >= size_)
            throw std::invalid_argument("selection: index " + index.str() + " out of range, size " +
                                        size_.str());
        if (blocks_) return (*blocks_)[static_cast<std::size_t>(index)];
        return unrank_subset(v_, k_, index);
    }

    template <class F>
    void for_each(F&& f) const {
        if (blocks_) {
            for (const auto& b : *blocks_) f(b);
            return;
        }
        for (BigInt i = 0; i < size_; ++i) f(unrank_subset(v_, k_, i));
    }

private:
    Selection() = default;

    int v_ = 0, k_ = 0;
    BigInt size_ = 0;
    std::shared_ptr<std::vector<std::vector<int>>> blocks_;
};

inline constexpr long default_design_cap = 1'000'000;

namespace detail {

// Blocks as bitmasks; certification is all subset tests, which bitmasks make
// single AND+compare operations. Ground sets here are desk scale (v <= 63).
inline std::vector<std::uint64_t> selection_masks(const Selection& sel, long cap) {
    if (sel.v() > 63)
        throw capacity_error("selection: ground set of size " + std::to_string(sel.v()) +
                             " exceeds the bitmask limit 63");
    if (sel.size() > cap)
        throw capacity_error("selection: size " + sel.size().str() + " exceeds cap " +
                             std::to_string(cap));
    std::vector<std::uint64_t> masks;
    masks.reserve(static_cast<std::size_t>(sel.size()));
    sel.for_each([&](const std::vector<int>& b) {
        std::uint64_t m = 0;
        for (int x : b) m |= std::uint64_t(1) << x;
        masks.push_back(m);
    });
    return masks;
}

inline std::uint64_t subset_mask(const std::vector<int>& subset) {
    std::uint64_t m = 0;
    for (int x : subset) m |= std::uint64_t(1) << x;
    return m;
}

} // namespace detail

// Whether every t-subset of the ground set lies in the same number lambda of
// blocks (with multiplicity); that is, whether the blocks form a t-(v,k,lambda)
// design. On failure the witness is the first t-subset (lexicographically)
// whose count differs from the count of {0,...,t-1}.
struct DesignCertificate {
    int t = 0;
    std::optional<BigInt> lambda;
    std::vector<int> witness;
    BigInt witness_count = 0;
    BigInt baseline_count = 0;
};

inline DesignCertificate certify_design(const Selection& sel, int t,
                                        long cap = default_design_cap) {
    if (t < 1 || t > sel.k())
        throw std::invalid_argument("certify_design: need 1 <= t <= k, got t=" + std::to_string(t) +
                                    " k=" + std::to_string(sel.k()));
    auto masks = detail::selection_masks(sel, cap);
    DesignCertificate cert;
    cert.t = t;
    BigInt total = binomial(sel.v(), t);
    std::uint64_t baseline = 0;
    for (BigInt r = 0; r < total; ++r) {
        std::vector<int> T = unrank_subset(sel.v(), t, r);
        std::uint64_t tm = detail::subset_mask(T);
        std::uint64_t count = 0;
        for (std::uint64_t bm : masks)
            if ((bm & tm) == tm) ++count;
        if (r == 0) {
            baseline = count;
        } else if (count != baseline) {
            cert.witness = T;
            cert.witness_count = count;
            cert.baseline_count = baseline;
            return cert;
        }
    }
    cert.lambda = baseline;
    cert.baseline_count = baseline;
    return cert;
}

// Containment/avoidance statistics of a random block: for every t-subset I
// and every J subseteq I with |J| = m, the fraction of blocks S with J inside
// S and I\J disjoint from S must equal C(v-t, k-m)/C(v,k). This is what the
// combiner needs from its selection; checked directly, not via the design
// equivalence.
struct SelectionReport {
    bool pass = true;
    int t = 0;
    std::vector<int> witness_I, witness_J;
    BigInt count = 0;
    BigRat observed = 0, expected = 0;
    BigInt queries_checked = 0;

    std::string render() const {
        std::ostringstream os;
        os << "verdict=" << (pass ? "pass" : "fail") << " t=" << t << " expected=" << rat_str(expected)
           << " worst=" << rat_str(pass ? BigRat(0) : BigRat(abs(observed - expected)));
        if (pass) {
            os << " witness=none";
        } else {
            os << " witness=I=(";
            for (std::size_t i = 0; i < witness_I.size(); ++i)
                os << (i ? "," : "") << witness_I[i];
            os << ");J=(";
            for (std::size_t i = 0; i < witness_J.size(); ++i)
                os << (i ? "," : "") << witness_J[i];
            os << ")";
        }
        return os.str();
    }
};

inline SelectionReport check_selection(const Selection& sel, int t,
                                       long cap = default_design_cap) {
    // t may exceed the block size: splits with |J| > k just pin the count to
    // zero (the combiner probes strength 2t+1 on blocks of size n).
    if (t < 1 || t > sel.v())
        throw std::invalid_argument("check_selection: need 1 <= t <= v, got t=" + std::to_string(t) +
                                    " v=" + std::to_string(sel.v()));
    auto masks = detail::selection_masks(sel, cap);
    SelectionReport rep;
    rep.t = t;
    // Representative target: the all-avoidance split (m=0).
    rep.expected = BigRat(binomial(sel.v() - t, sel.k()), binomial(sel.v(), sel.k()));
    BigInt total = binomial(sel.v(), t);
    BigInt n_blocks = sel.size();
    for (BigInt r = 0; r < total; ++r) {
        std::vector<int> I = unrank_subset(sel.v(), t, r);
        std::uint64_t im = detail::subset_mask(I);
        for (std::uint64_t jsel = 0; jsel < (std::uint64_t(1) << t); ++jsel) {
            std::uint64_t jm = 0;
            int m = 0;
            for (int i = 0; i < t; ++i)
                if (jsel >> i & 1) {
                    jm |= std::uint64_t(1) << I[i];
                    ++m;
                }
            std::uint64_t rest = im ^ jm;
            std::uint64_t count = 0;
            for (std::uint64_t bm : masks)
                if ((bm & jm) == jm && (bm & rest) == 0) ++count;
            rep.queries_checked += 1;
            BigRat target(binomial(sel.v() - t, sel.k() - m), binomial(sel.v(), sel.k()));
            if (BigInt(count) * binomial(sel.v(), sel.k()) !=
                binomial(sel.v() - t, sel.k() - m) * n_blocks) {
                rep.pass = false;
                rep.witness_I = I;
                for (int i = 0; i < t; ++i)
                    if (jsel >> i & 1) rep.witness_J.push_back(I[i]);
                rep.count = count;
                rep.observed = BigRat(count, n_blocks);
                rep.expected = target;
                return rep;
            }
        }
    }
    return rep;
}

// Minimum possible size of a (2n,t)-selection.
inline BigInt design_lower_bound(int two_n, int t) {
    if (two_n < 2 || two_n % 2 != 0)
        throw std::invalid_argument("design_lower_bound: need an even ground set, got " +
                                    std::to_string(two_n));
    if (t < 1) throw std::invalid_argument("design_lower_bound: t must be positive");
    if (t % 2 == 0) return binomial(two_n, t / 2);
    return 2 * binomial(two_n - 1, (t - 1) / 2);
}

// Exhaustive hunt for a t-(v,k,lambda) design smaller than the complete
// family: block multisets in increasing size, then lexicographic order;
// first hit wins. Sizes whose forced lambda = size*C(k,t)/C(v,t) is not an
// integer are skipped outright.
inline std::optional<Selection> search_design(int v, int k, int t, long max_blocks) {
    if (v > 14)
        throw std::invalid_argument("search_design: v=" + std::to_string(v) +
                                    " exceeds the hard cap 14 (search is exponential)");
    if (k < 1 || k > v || t < 1 || t > k)
        throw std::invalid_argument("search_design: need 1 <= t <= k <= v");
    BigInt n_all_big = binomial(v, k);
    long n_all = static_cast<long>(n_all_big);
    std::vector<std::uint64_t> all(static_cast<std::size_t>(n_all));
    for (long i = 0; i < n_all; ++i) all[i] = detail::subset_mask(unrank_subset(v, k, i));
    std::vector<std::uint64_t> t_masks;
    for (BigInt r = 0, total = binomial(v, t); r < total; ++r)
        t_masks.push_back(detail::subset_mask(unrank_subset(v, t, r)));

    auto is_design = [&](const std::vector<long>& picked) {
        std::uint64_t baseline = 0;
        bool first = true;
        for (std::uint64_t tm : t_masks) {
            std::uint64_t count = 0;
            for (long bi : picked)
                if ((all[bi] & tm) == tm) ++count;
            if (first) {
                baseline = count;
                first = false;
            } else if (count != baseline) {
                return false;
            }
        }
        return true;
    };

    long limit = std::min<long>(max_blocks, n_all - 1);
    BigInt c_kt = binomial(k, t), c_vt = binomial(v, t);
    for (long s = 1; s <= limit; ++s) {
        if (s * c_kt % c_vt != 0) continue;
        // Nondecreasing index tuples of length s (multisets over block indices).
        std::vector<long> idx(s, 0);
        for (;;) {
            if (is_design(idx)) {
                std::vector<std::vector<int>> blocks;
                for (long bi : idx) blocks.push_back(unrank_subset(v, k, bi));
                return Selection::from_blocks(v, k, std::move(blocks));
            }
            long pos = s - 1;
            while (pos >= 0 && idx[pos] == n_all - 1) --pos;
            if (pos < 0) break;
            long next = idx[pos] + 1;
            for (long q = pos; q < s; ++q) idx[q] = next;
        }
    }
    return std::nullopt;
}

} // namespace twise
