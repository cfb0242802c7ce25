#pragma once

#include <compare>
#include <string>
#include <vector>

#include "twise/bigint.hpp"

namespace twise {

// A permutation of {0,...,n-1} stored as its image table: p(x) = images[x].
class Permutation {
public:
    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        int n = static_cast<int>(img_.size());
        if (n < 1) throw std::invalid_argument("permutation: degree must be at least 1");
        std::vector<char> seen(n, 0);
        for (int x = 0; x < n; ++x) {
            int y = img_[x];
            if (y < 0 || y >= n || seen[y])
                throw std::invalid_argument("permutation: images are not a bijection on {0,...," +
                                            std::to_string(n - 1) + "} (offending value " +
                                            std::to_string(y) + " at position " + std::to_string(x) + ")");
            seen[y] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> img(check_degree(n));
        for (int x = 0; x < n; ++x) img[x] = x;
        return Permutation(unchecked{}, std::move(img));
    }

    int degree() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[x]; }
    const std::vector<int>& images() const { return img_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) {
        return a.img_ <=> b.img_;
    }

private:
    struct unchecked {};
    Permutation(unchecked, std::vector<int> images) : img_(std::move(images)) {}

    static int check_degree(int n) {
        if (n < 1) throw std::invalid_argument("permutation: degree must be at least 1");
        return n;
    }

    friend Permutation compose(const Permutation&, const Permutation&);
    friend Permutation inverse(const Permutation&);

    std::vector<int> img_;
};

// (outer o inner)(x) = outer(inner(x)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
    if (outer.degree() != inner.degree())
        throw std::invalid_argument("compose: degree mismatch (outer=" + std::to_string(outer.degree()) +
                                    ", inner=" + std::to_string(inner.degree()) + ")");
    int n = outer.degree();
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[x] = outer.img_[inner.img_[x]];
    return Permutation(Permutation::unchecked{}, std::move(img));
}

inline Permutation inverse(const Permutation& p) {
    int n = p.degree();
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) img[p.images()[x]] = x;
    return Permutation(Permutation::unchecked{}, std::move(img));
}

// Parity without mutation: count cycle lengths over a visited mask.
inline bool is_even(const Permutation& p) {
    int n = p.degree();
    std::vector<char> seen(n, 0);
    int transpositions = 0;
    for (int x = 0; x < n; ++x) {
        if (seen[x]) continue;
        int len = 0;
        for (int y = x; !seen[y]; y = p(y)) {
            seen[y] = 1;
            ++len;
        }
        transpositions += len - 1;
    }
    return transpositions % 2 == 0;
}

} // namespace twise
