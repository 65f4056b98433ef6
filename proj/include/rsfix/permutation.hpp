#pragma once

// Permutations in one-line notation, cycle statistics and the fixed-point
// split sigma = (fix(sigma), tau).
//
// Public I/O is 1-based ("5 3 2 1 4 6"); storage is 0-based.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsfix {

using Index = std::uint32_t;

class Permutation {
public:
    Permutation() = default;

    /// Takes ownership of a 0-based image vector; throws unless it is a bijection of {0..n-1}.
    static Permutation from_zero_based(std::vector<Index> image) {
        validate(image);
        return Permutation(std::move(image));
    }

    static Permutation from_one_based(std::span<const std::int64_t> word) {
        std::vector<Index> image;
        image.reserve(word.size());
        for (auto v : word) {
            if (v < 1 || static_cast<std::uint64_t>(v) > word.size())
                throw std::invalid_argument("permutation entry " + std::to_string(v) +
                                            " out of range 1.." + std::to_string(word.size()));
            image.push_back(static_cast<Index>(v - 1));
        }
        return from_zero_based(std::move(image));
    }

    static Permutation identity(std::size_t n) {
        std::vector<Index> image(n);
        for (std::size_t i = 0; i < n; ++i) image[i] = static_cast<Index>(i);
        return Permutation(std::move(image));
    }

    /// Skips validation; caller guarantees a bijection.
    static Permutation adopt_unchecked(std::vector<Index> image) { return Permutation(std::move(image)); }

    std::size_t size() const noexcept { return image_.size(); }
    bool empty() const noexcept { return image_.empty(); }

    // 0-based image of 0-based point i.
    Index operator[](std::size_t i) const { return image_[i]; }
    std::span<const Index> zero_based() const noexcept { return image_; }

    std::vector<std::int64_t> one_based() const {
        std::vector<std::int64_t> w(image_.size());
        for (std::size_t i = 0; i < image_.size(); ++i) w[i] = std::int64_t{image_[i]} + 1;
        return w;
    }

    Permutation inverse() const {
        std::vector<Index> inv(image_.size());
        for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<Index>(i);
        return Permutation(std::move(inv));
    }

    // (this * other)(i) = this(other(i))
    Permutation compose(const Permutation& other) const {
        if (other.size() != size()) throw std::invalid_argument("compose: size mismatch");
        std::vector<Index> out(image_.size());
        for (std::size_t i = 0; i < image_.size(); ++i) out[i] = image_[other.image_[i]];
        return Permutation(std::move(out));
    }

    bool is_identity() const noexcept {
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != i) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    explicit Permutation(std::vector<Index> image) : image_(std::move(image)) {}

    static void validate(std::span<const Index> image) {
        std::vector<bool> seen(image.size(), false);
        for (auto v : image) {
            if (v >= image.size() || seen[v])
                throw std::invalid_argument("not a permutation of 1.." + std::to_string(image.size()));
            seen[v] = true;
        }
    }

    std::vector<Index> image_;
};

struct CycleStats {
    std::size_t n = 0;
    std::size_t num_cycles = 0;
    std::size_t fixed_points = 0;
    std::size_t two_cycles = 0;
    std::size_t fixed_points_of_square = 0;

    friend bool operator==(const CycleStats&, const CycleStats&) = default;
};

inline CycleStats cycle_stats(const Permutation& p) {
    CycleStats s;
    s.n = p.size();
    std::vector<bool> seen(p.size(), false);
    for (std::size_t start = 0; start < p.size(); ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t i = start; !seen[i]; i = p[i]) {
            seen[i] = true;
            ++len;
        }
        ++s.num_cycles;
        if (len == 1) ++s.fixed_points;
        if (len == 2) ++s.two_cycles;
    }
    s.fixed_points_of_square = s.fixed_points + 2 * s.two_cycles;
    return s;
}

/// Cycle lengths sorted in weakly decreasing order (the conjugacy-class label).
inline std::vector<std::size_t> cycle_type(const Permutation& p) {
    std::vector<std::size_t> parts;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t start = 0; start < p.size(); ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t i = start; !seen[i]; i = p[i]) {
            seen[i] = true;
            ++len;
        }
        parts.push_back(len);
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return parts;
}

inline Permutation square(const Permutation& p) { return p.compose(p); }

/// rho * p * rho^{-1}
inline Permutation conjugate(const Permutation& p, const Permutation& rho) {
    if (p.size() != rho.size()) throw std::invalid_argument("conjugate: size mismatch");
    // (rho p rho^-1)(rho(i)) = rho(p(i))
    std::vector<Index> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[rho[i]] = rho[p[i]];
    return Permutation::adopt_unchecked(std::move(out));
}

struct FixedPointSplit {
    std::vector<Index> fixed_set;  // 1-based positions, ascending
    Permutation reduced;           // tau, fixed-point free
    std::size_t n = 0;
};

inline FixedPointSplit remove_fixed_points(const Permutation& p) {
    FixedPointSplit split;
    split.n = p.size();
    // rank[i] = new 0-based label of non-fixed point i
    std::vector<Index> rank(p.size(), 0);
    Index next = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == i)
            split.fixed_set.push_back(static_cast<Index>(i + 1));
        else
            rank[i] = next++;
    }
    std::vector<Index> reduced;
    reduced.reserve(next);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i) reduced.push_back(rank[p[i]]);
    split.reduced = Permutation::adopt_unchecked(std::move(reduced));
    return split;
}

/// Inverse of remove_fixed_points.
inline Permutation insert_fixed_points(const FixedPointSplit& split) {
    const std::size_t n = split.n;
    if (split.fixed_set.size() + split.reduced.size() != n)
        throw std::invalid_argument("insert_fixed_points: sizes do not add up");
    std::vector<bool> is_fixed(n, false);
    for (auto f : split.fixed_set) {
        if (f < 1 || f > n || is_fixed[f - 1]) throw std::invalid_argument("insert_fixed_points: bad fixed set");
        is_fixed[f - 1] = true;
    }
    std::vector<Index> position;  // new label -> original point
    position.reserve(split.reduced.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!is_fixed[i]) position.push_back(static_cast<Index>(i));
    std::vector<Index> image(n);
    for (std::size_t i = 0; i < n; ++i)
        if (is_fixed[i]) image[i] = static_cast<Index>(i);
    for (std::size_t k = 0; k < position.size(); ++k) image[position[k]] = position[split.reduced[k]];
    return Permutation::adopt_unchecked(std::move(image));
}

// Text format: whitespace-separated 1-based one-line notation.

inline Permutation parse_permutation(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::int64_t> word;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad permutation token '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("bad permutation token '" + tok + "'");
        word.push_back(v);
    }
    return Permutation::from_one_based(word);
}

inline std::string format_permutation(const Permutation& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(std::uint64_t{p[i]} + 1);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Permutation& p) { return os << format_permutation(p); }

}  // namespace rsfix
