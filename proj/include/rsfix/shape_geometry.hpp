#pragma once

// Height profiles of Young diagrams in Russian coordinates, the
// Vershik-Kerov-Logan-Shepp curve, and sup-norm distances between profiles.
//
// Two conventions appear in the literature:
//
//   integer convention   cell (i, j) sits on diagonal j - i, boxes have
//                        diagonal 2, L is integer valued with kinks at Z.
//   half-root convention the same curve with both axes scaled by sqrt(2)/2,
//                        kinks at (sqrt(2)/2) Z.
//
// They are related by L_int(t) = sqrt(2) * L_half(t / sqrt(2)). Everything in
// this header works in the integer convention unless the name says otherwise;
// sup_profile_distance and lemma34_bound report half-root units.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "rsfix/young_diagram.hpp"

namespace rsfix {

/// Number of cells (i, j) with j - i == t.
inline std::int64_t diagonal_cells(const YoungDiagram& d, std::int64_t t) {
    const auto& parts = d.parts();
    // lambda_i - i is strictly decreasing in i, so {i : lambda_i - i >= t} is a prefix 1..k.
    std::int64_t lo = 0, hi = static_cast<std::int64_t>(parts.size());
    while (lo < hi) {
        const auto mid = (lo + hi) / 2;
        if (static_cast<std::int64_t>(parts[mid]) - (mid + 1) >= t)
            lo = mid + 1;
        else
            hi = mid;
    }
    const std::int64_t first_row = t < 0 ? 1 - t : 1;  // need column j = i + t >= 1
    return std::max<std::int64_t>(0, lo - first_row + 1);
}

/// L_lambda(t) at integer t: |t| + 2 * (cells on diagonal t).
inline std::int64_t height_at(const YoungDiagram& d, std::int64_t t) {
    return (t < 0 ? -t : t) + 2 * diagonal_cells(d, t);
}

/// Linear interpolation of height_at between integer kinks.
inline double height_at_real(const YoungDiagram& d, double x) {
    const double fl = std::floor(x);
    const auto t = static_cast<std::int64_t>(fl);
    const double frac = x - fl;
    const auto a = static_cast<double>(height_at(d, t));
    if (frac == 0.0) return a;
    return a + frac * (static_cast<double>(height_at(d, t + 1)) - a);
}

/// Profile in the half-root convention, derived from the integer one.
inline double height_at_half_root(const YoungDiagram& d, double x) {
    return height_at_real(d, x * std::numbers::sqrt2) / std::numbers::sqrt2;
}

/// Vershik-Kerov-Logan-Shepp curve.
inline double omega(double s) {
    if (std::abs(s) >= 1.0) return std::abs(s);
    return 2.0 / std::numbers::pi * (s * std::asin(s) + std::sqrt(1.0 - s * s));
}

/// Limit of (1/(2 sqrt n)) L(2 s sqrt n) when a fraction p of the points are fixed:
/// the VKLS curve of the fixed-point-free part, sqrt(1-p) * Omega(s / sqrt(1-p)).
/// Equals |s| for |s| >= sqrt(1-p), and |s| everywhere when p == 1.
inline double limit_profile(double s, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("limit_profile: p must be in [0, 1]");
    const double r = std::sqrt(1.0 - p);
    if (r == 0.0) return std::abs(s);
    return r * omega(s / r);
}

/// (1/(2 sqrt n)) L(2 s sqrt n)
inline double scaled_profile(const YoungDiagram& d, std::size_t n, double s) {
    const double scale = 2.0 * std::sqrt(static_cast<double>(n));
    return height_at_real(d, s * scale) / scale;
}

/// sup_s |(1/(2 sqrt n)) L(2 s sqrt n) - limit_profile(s, m/n)|.
///
/// Evaluated at every kink t = 2 s sqrt(n) in Z and every midpoint over the
/// window where either function differs from |s|. Between kinks the scaled
/// profile has slope +-1 while the limit curve has slope in [-1, 1], so the
/// difference is monotone on each segment and the kink maximum is the sup.
inline double scaled_sup_distance(const YoungDiagram& d, std::size_t n, std::size_t m) {
    if (n == 0) throw std::invalid_argument("scaled_sup_distance: n must be positive");
    if (d.size() != n)
        throw std::invalid_argument("scaled_sup_distance: diagram has " + std::to_string(d.size()) +
                                    " cells, expected " + std::to_string(n));
    if (m > n) throw std::invalid_argument("scaled_sup_distance: m exceeds n");
    const double p = static_cast<double>(m) / static_cast<double>(n);
    const double scale = 2.0 * std::sqrt(static_cast<double>(n));
    const auto reach = static_cast<std::int64_t>(std::max(d.first_row(), d.length())) +
                       static_cast<std::int64_t>(std::ceil(scale));
    double best = 0.0;
    for (std::int64_t t = -reach; t <= reach; ++t) {
        const auto here = static_cast<double>(height_at(d, t));
        const auto next = static_cast<double>(height_at(d, t + 1));
        const double s0 = static_cast<double>(t) / scale;
        const double s1 = (static_cast<double>(t) + 0.5) / scale;
        best = std::max(best, std::abs(here / scale - limit_profile(s0, p)));
        best = std::max(best, std::abs(0.5 * (here + next) / scale - limit_profile(s1, p)));
    }
    return best;
}

/// max_t |L_a(t) - L_b(t)| in the integer convention.
inline std::int64_t sup_profile_distance_int(const YoungDiagram& a, const YoungDiagram& b) {
    const auto left = static_cast<std::int64_t>(std::max(a.length(), b.length()));
    const auto right = static_cast<std::int64_t>(std::max(a.first_row(), b.first_row()));
    std::int64_t best = 0;
    for (std::int64_t t = -left; t <= right; ++t)
        best = std::max(best, std::abs(height_at(a, t) - height_at(b, t)));
    return best;
}

/// sup_s |L_a(s) - L_b(s)| in half-root units.
inline double sup_profile_distance(const YoungDiagram& a, const YoungDiagram& b) {
    return static_cast<double>(sup_profile_distance_int(a, b)) * std::numbers::sqrt2 / 2.0;
}

/// M_l = max_{m >= l+1} |sum_{k=l+1}^{m} (a_k - b_k)| for l = 0..K, K = max length.
inline std::vector<std::int64_t> tail_partial_sum_maxima(const YoungDiagram& a, const YoungDiagram& b) {
    const std::size_t K = std::max(a.length(), b.length());
    // prefix[m] = sum_{k<=m} (a_k - b_k)
    std::vector<std::int64_t> prefix(K + 1, 0);
    for (std::size_t k = 1; k <= K; ++k)
        prefix[k] = prefix[k - 1] + static_cast<std::int64_t>(a.part(k - 1)) - static_cast<std::int64_t>(b.part(k - 1));
    std::vector<std::int64_t> out(K + 1, 0);
    // Beyond K the partial sums are constant at prefix[K]; include it via m = K.
    std::int64_t hi = std::numeric_limits<std::int64_t>::min(), lo = std::numeric_limits<std::int64_t>::max();
    for (std::size_t l = K; l-- > 0;) {
        hi = std::max(hi, prefix[l + 1]);
        lo = std::min(lo, prefix[l + 1]);
        out[l] = std::max(std::abs(hi - prefix[l]), std::abs(lo - prefix[l]));
    }
    return out;
}

/// min_{l >= 0} 2 sqrt(M_l) + sqrt(2) l, half-root units.
inline double lemma34_bound(const YoungDiagram& a, const YoungDiagram& b) {
    const auto M = tail_partial_sum_maxima(a, b);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < M.size(); ++l)
        best = std::min(best, 2.0 * std::sqrt(static_cast<double>(M[l])) + std::numbers::sqrt2 * static_cast<double>(l));
    return best;
}

/// Exact form of sup_profile_distance(a, b) <= lemma34_bound(a, b).
///
/// With D the integer-convention sup, the inequality for a given l reads
/// D / sqrt2 <= 2 sqrt(M_l) + sqrt2 l, i.e. D - 2l <= sqrt(8 M_l), which is
/// decided in integers by squaring when the left side is positive.
inline bool lemma34_holds(const YoungDiagram& a, const YoungDiagram& b) {
    const auto D = sup_profile_distance_int(a, b);
    const auto M = tail_partial_sum_maxima(a, b);
    for (std::size_t l = 0; l < M.size(); ++l) {
        const std::int64_t lhs = D - 2 * static_cast<std::int64_t>(l);
        if (lhs <= 0 || lhs * lhs <= 8 * M[l]) return true;
    }
    return false;
}

// Plot dumps.

/// "t,L" rows over [-length, first_row].
inline void write_profile_csv(std::ostream& os, const YoungDiagram& d) {
    os << "t,L\n";
    const auto left = static_cast<std::int64_t>(d.length());
    const auto right = static_cast<std::int64_t>(d.first_row());
    for (std::int64_t t = -left; t <= right; ++t) os << t << ',' << height_at(d, t) << '\n';
}

/// "s,F_n,Phi_p" rows at every integer kink of the scaled window.
inline void write_scaled_profile_csv(std::ostream& os, const YoungDiagram& d, std::size_t m) {
    const std::size_t n = d.size();
    if (n == 0) throw std::invalid_argument("scaled profile of the empty diagram");
    if (m > n) throw std::invalid_argument("scaled profile: m exceeds n");
    const double p = static_cast<double>(m) / static_cast<double>(n);
    const double scale = 2.0 * std::sqrt(static_cast<double>(n));
    const auto reach = static_cast<std::int64_t>(std::max(d.first_row(), d.length())) +
                       static_cast<std::int64_t>(std::ceil(scale));
    const auto old = os.precision(10);
    os << "s,F_n,Phi_p\n";
    for (std::int64_t t = -reach; t <= reach; ++t) {
        const double s = static_cast<double>(t) / scale;
        os << s << ',' << static_cast<double>(height_at(d, t)) / scale << ',' << limit_profile(s, p) << '\n';
    }
    os.precision(old);
}

}  // namespace rsfix
