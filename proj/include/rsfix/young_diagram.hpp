#pragma once

// Young diagrams and the Robinson-Schensted shape map.

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rsfix/keyvalue.hpp"
#include "rsfix/permutation.hpp"

namespace rsfix {

class YoungDiagram {
public:
    YoungDiagram() = default;

    /// Trailing zeros are dropped; throws if the parts are not weakly decreasing.
    explicit YoungDiagram(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 1; i < parts_.size(); ++i)
            if (parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
        size_ = std::accumulate(parts_.begin(), parts_.end(), std::size_t{0});
    }

    const std::vector<std::size_t>& parts() const noexcept { return parts_; }

    /// 0-based row index; zero past the last row.
    std::size_t part(std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }
    std::size_t first_row() const noexcept { return part(0); }
    std::size_t length() const noexcept { return parts_.size(); }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return parts_.empty(); }

    friend bool operator==(const YoungDiagram& a, const YoungDiagram& b) { return a.parts_ == b.parts_; }

private:
    std::vector<std::size_t> parts_;
    std::size_t size_ = 0;
};

inline YoungDiagram conjugate_diagram(const YoungDiagram& d) {
    std::vector<std::size_t> cols(d.first_row(), 0);
    // column j has #{i : lambda_i > j} cells
    for (auto len : d.parts())
        for (std::size_t j = 0; j < len; ++j) ++cols[j];
    return YoungDiagram(std::move(cols));
}

/// Row lengths of the insertion tableau of sigma(1), ..., sigma(n).
///
/// Only the tableau rows are kept. Each row stays sorted, so a bump is a single
/// binary search plus an in-place replacement; the total cost is the number of
/// bumps times a logarithm.
inline YoungDiagram schensted_shape(const Permutation& p) {
    std::vector<std::vector<Index>> rows;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Index x = p[i];
        std::size_t r = 0;
        for (;; ++r) {
            if (r == rows.size()) {
                rows.emplace_back(1, x);
                break;
            }
            auto& row = rows[r];
            auto it = std::upper_bound(row.begin(), row.end(), x);
            if (it == row.end()) {
                row.push_back(x);
                break;
            }
            std::swap(x, *it);
        }
    }
    std::vector<std::size_t> parts(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) parts[r] = rows[r].size();
    return YoungDiagram(std::move(parts));
}

namespace detail {

template <typename It>
std::size_t patience_length(It first, It last) {
    std::vector<Index> tops;
    for (; first != last; ++first) {
        auto it = std::lower_bound(tops.begin(), tops.end(), *first);
        if (it == tops.end())
            tops.push_back(*first);
        else
            *it = *first;
    }
    return tops.size();
}

}  // namespace detail

/// Longest increasing subsequence, O(n log n).
inline std::size_t lis(const Permutation& p) {
    auto w = p.zero_based();
    return detail::patience_length(w.begin(), w.end());
}

/// Longest decreasing subsequence, as the LIS of the reversed word.
inline std::size_t lds(const Permutation& p) {
    auto w = p.zero_based();
    return detail::patience_length(w.rbegin(), w.rend());
}

// Text format: comma-separated parts, "3,1,1,1". The empty diagram is "".

inline YoungDiagram parse_diagram(std::string_view text) {
    auto raw = parse_uint_list("diagram", std::string(text));
    return YoungDiagram(std::vector<std::size_t>(raw.begin(), raw.end()));
}

inline std::string format_diagram(const YoungDiagram& d) {
    std::string out;
    for (std::size_t i = 0; i < d.length(); ++i) {
        if (i) out += ',';
        out += std::to_string(d.parts()[i]);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const YoungDiagram& d) { return os << '(' << format_diagram(d) << ')'; }

}  // namespace rsfix
