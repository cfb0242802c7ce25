#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "twise/designs.hpp"
#include "twise/errors.hpp"
#include "twise/family.hpp"

namespace twise {

// Text formats, bit-exact:
//   permfamily v1 n=<n> size=<N>   then one permutation (n images) per line
//   selection v1 v=<v> k=<k> size=<N>   then one sorted block per line

inline void write_family(std::ostream& os, const PermFamily& fam,
                         const BigInt& cap = BigInt(default_materialization_cap)) {
    if (fam.size() > cap)
        throw capacity_error("write_family: size " + fam.size().str() +
                             " exceeds materialization cap " + cap.str());
    os << "permfamily v1 n=" << fam.degree() << " size=" << fam.size() << "\n";
    fam.for_each([&](const Permutation& p) {
        const auto& img = p.images();
        for (std::size_t i = 0; i < img.size(); ++i) os << (i ? " " : "") << img[i];
        os << "\n";
    });
}

inline void write_selection(std::ostream& os, const Selection& sel,
                            const BigInt& cap = BigInt(default_materialization_cap)) {
    if (sel.size() > cap)
        throw capacity_error("write_selection: size " + sel.size().str() +
                             " exceeds materialization cap " + cap.str());
    os << "selection v1 v=" << sel.v() << " k=" << sel.k() << " size=" << sel.size() << "\n";
    sel.for_each([&](const std::vector<int>& b) {
        for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
        os << "\n";
    });
}

namespace detail {

inline long parse_header_field(const std::string& token, const std::string& key, long line) {
    if (token.size() <= key.size() || token.compare(0, key.size(), key) != 0 ||
        token[key.size()] != '=')
        throw parse_error(line, "expected " + key + "=<integer>, got '" + token + "'");
    std::string value = token.substr(key.size() + 1);
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw parse_error(line, "bad value for " + key + ": '" + value + "'");
    }
}

inline std::vector<int> parse_int_line(const std::string& line_text, long line) {
    std::istringstream is(line_text);
    std::vector<int> out;
    long v;
    while (is >> v) {
        if (v < 0 || v > 1'000'000'000) throw parse_error(line, "value out of range: " + std::to_string(v));
        out.push_back(static_cast<int>(v));
    }
    if (!is.eof()) throw parse_error(line, "non-integer content: '" + line_text + "'");
    return out;
}

} // namespace detail

inline PermFamily read_family(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw parse_error(1, "empty input, expected permfamily header");
    std::istringstream hs(header);
    std::string magic, version, n_tok, size_tok;
    hs >> magic >> version >> n_tok >> size_tok;
    if (magic != "permfamily" || version != "v1")
        throw parse_error(1, "expected 'permfamily v1 n=<n> size=<N>', got '" + header + "'");
    long n = detail::parse_header_field(n_tok, "n", 1);
    long size = detail::parse_header_field(size_tok, "size", 1);
    if (n < 1) throw parse_error(1, "degree must be at least 1");

    std::vector<Permutation> perms;
    perms.reserve(size);
    std::string line_text;
    for (long i = 0; i < size; ++i) {
        long line = i + 2;
        if (!std::getline(is, line_text))
            throw parse_error(line, "expected " + std::to_string(size) + " permutation lines, got " +
                                        std::to_string(i));
        auto vals = detail::parse_int_line(line_text, line);
        if (static_cast<long>(vals.size()) != n)
            throw parse_error(line, "expected " + std::to_string(n) + " images, got " +
                                        std::to_string(vals.size()));
        try {
            perms.push_back(Permutation(vals));
        } catch (const std::invalid_argument& e) {
            throw parse_error(line, e.what());
        }
    }
    if (std::getline(is, line_text) && !line_text.empty())
        throw parse_error(size + 2, "trailing content after " + std::to_string(size) + " permutations");
    return PermFamily::from_vector(static_cast<int>(n), std::move(perms));
}

inline Selection read_selection(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw parse_error(1, "empty input, expected selection header");
    std::istringstream hs(header);
    std::string magic, version, v_tok, k_tok, size_tok;
    hs >> magic >> version >> v_tok >> k_tok >> size_tok;
    if (magic != "selection" || version != "v1")
        throw parse_error(1, "expected 'selection v1 v=<v> k=<k> size=<N>', got '" + header + "'");
    long v = detail::parse_header_field(v_tok, "v", 1);
    long k = detail::parse_header_field(k_tok, "k", 1);
    long size = detail::parse_header_field(size_tok, "size", 1);

    std::vector<std::vector<int>> blocks;
    blocks.reserve(size);
    std::string line_text;
    for (long i = 0; i < size; ++i) {
        long line = i + 2;
        if (!std::getline(is, line_text))
            throw parse_error(line, "expected " + std::to_string(size) + " block lines, got " +
                                        std::to_string(i));
        auto vals = detail::parse_int_line(line_text, line);
        if (static_cast<long>(vals.size()) != k)
            throw parse_error(line, "expected " + std::to_string(k) + " elements, got " +
                                        std::to_string(vals.size()));
        for (std::size_t x = 0; x < vals.size(); ++x) {
            if (vals[x] >= v) throw parse_error(line, "element " + std::to_string(vals[x]) +
                                                          " outside {0,...," + std::to_string(v - 1) + "}");
            if (x > 0 && vals[x] <= vals[x - 1])
                throw parse_error(line, "block elements must be strictly increasing");
        }
        blocks.push_back(std::move(vals));
    }
    if (std::getline(is, line_text) && !line_text.empty())
        throw parse_error(size + 2, "trailing content after " + std::to_string(size) + " blocks");
    return Selection::from_blocks(static_cast<int>(v), static_cast<int>(k), std::move(blocks));
}

} // namespace twise
