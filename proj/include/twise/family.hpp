#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "twise/errors.hpp"
#include "twise/permutation.hpp"

namespace twise {

// Guard against accidentally materializing an astronomically large family.
inline constexpr long default_materialization_cap = 10'000'000;

// A multiset of permutations of common degree. Either explicit (a stored
// list, duplicates permitted) or lazy (a pure index -> permutation generator
// with a declared exact cardinality). Lazy generators are deterministic and
// may be evaluated concurrently at distinct indices.
class PermFamily {
public:
    using Generator = std::function<Permutation(const BigInt&)>;

    static PermFamily from_vector(int degree, std::vector<Permutation> perms) {
        for (const auto& p : perms)
            if (p.degree() != degree)
                throw std::invalid_argument("family: element degree " + std::to_string(p.degree()) +
                                            " does not match family degree " + std::to_string(degree));
        PermFamily f;
        f.degree_ = degree;
        f.size_ = static_cast<long>(perms.size());
        f.explicit_ = std::make_shared<std::vector<Permutation>>(std::move(perms));
        return f;
    }

    static PermFamily lazy(int degree, BigInt size, Generator gen) {
        if (degree < 1) throw std::invalid_argument("family: degree must be at least 1");
        if (size < 0) throw std::invalid_argument("family: negative size");
        PermFamily f;
        f.degree_ = degree;
        f.size_ = std::move(size);
        f.gen_ = std::make_shared<Generator>(std::move(gen));
        return f;
    }

    int degree() const { return degree_; }
    const BigInt& size() const { return size_; }
    bool is_explicit() const { return explicit_ != nullptr; }

    Permutation get(const BigInt& index) const {
        if (index < 0 || index >= size_)
            throw std::invalid_argument("family: index " + index.str() + " out of range, size " +
                                        size_.str());
        if (explicit_) return (*explicit_)[static_cast<std::size_t>(index)];
        Permutation p = (*gen_)(index);
        if (p.degree() != degree_)
            throw std::invalid_argument("family: generator produced degree " +
                                        std::to_string(p.degree()) + ", family degree " +
                                        std::to_string(degree_));
        return p;
    }

    const std::vector<Permutation>& items() const {
        if (!explicit_) throw std::invalid_argument("family: items() requires an explicit family");
        return *explicit_;
    }

    // Streams elements in index order. Requires a size that fits the loop
    // counter; anything larger could never be streamed element-by-element.
    template <class F>
    void for_each(F&& f) const {
        if (explicit_) {
            for (const auto& p : *explicit_) f(p);
            return;
        }
        if (size_ > std::numeric_limits<std::uint64_t>::max())
            throw capacity_error("family: size " + size_.str() + " is too large to stream");
        std::uint64_t n = static_cast<std::uint64_t>(size_);
        for (std::uint64_t i = 0; i < n; ++i) f((*gen_)(BigInt(i)));
    }

    std::vector<Permutation> materialize(const BigInt& cap) const {
        if (size_ > cap)
            throw capacity_error("family: size " + size_.str() + " exceeds materialization cap " +
                                 cap.str());
        std::vector<Permutation> out;
        out.reserve(static_cast<std::size_t>(size_));
        for_each([&](const Permutation& p) { out.push_back(p); });
        return out;
    }

private:
    PermFamily() = default;

    int degree_ = 0;
    BigInt size_ = 0;
    std::shared_ptr<std::vector<Permutation>> explicit_;
    std::shared_ptr<Generator> gen_;
};

} // namespace twise
