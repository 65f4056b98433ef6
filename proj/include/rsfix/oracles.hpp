#pragma once

// Brute-force ground truth used to check the fast paths and the combinatorial
// inequalities relating sigma to its fixed-point-free part tau.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsfix/permutation.hpp"
#include "rsfix/shape_geometry.hpp"
#include "rsfix/young_diagram.hpp"

namespace rsfix::oracles {

enum class Family { increasing, decreasing };

inline constexpr std::size_t kMaxGreeneSize = 16;

namespace detail {

// Longest subsequence of w restricted to mask that runs against the family,
// i.e. decreasing for Family::increasing.
inline std::size_t longest_opposite(std::span<const Index> w, std::uint32_t mask, Family f) {
    std::vector<std::int64_t> tops;
    tops.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(mask >> i & 1u)) continue;
        const std::int64_t v = f == Family::increasing ? -std::int64_t{w[i]} : std::int64_t{w[i]};
        auto it = std::lower_bound(tops.begin(), tops.end(), v);
        if (it == tops.end())
            tops.push_back(v);
        else
            *it = v;
    }
    return tops.size();
}

inline void check_size(const Permutation& p, std::size_t limit) {
    if (p.size() > limit)
        throw std::invalid_argument("brute force limited to n <= " + std::to_string(limit) + ", got " +
                                    std::to_string(p.size()));
}

}  // namespace detail

/// Max size of a union of i monotone subsequences of the family, by scanning
/// all 2^n position subsets. A subset is a union of at most i increasing
/// subsequences iff it has no decreasing subsequence of length i+1 (Mirsky),
/// so each subset costs one patience pass.
inline std::size_t greene_bruteforce(const Permutation& p, std::size_t i, Family f = Family::increasing) {
    detail::check_size(p, kMaxGreeneSize);
    const auto w = p.zero_based();
    const std::uint32_t full = p.size() == 32 ? ~0u : (1u << p.size()) - 1u;
    std::size_t best = 0;
    for (std::uint32_t mask = 0;; ++mask) {
        const auto card = static_cast<std::size_t>(std::popcount(mask));
        if (card > best && detail::longest_opposite(w, mask, f) <= i) best = card;
        if (mask == full) break;
    }
    return best;
}

/// Same quantity by literally forming unions of i monotone position sets.
/// Independent of the Mirsky step above; exponential in n, meant for n <= 10.
inline std::size_t greene_by_unions(const Permutation& p, std::size_t i, Family f = Family::increasing) {
    detail::check_size(p, 10);
    const std::size_t n = p.size();
    const std::uint32_t count = 1u << n;
    std::vector<std::uint32_t> monotone;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            if (!(mask >> a & 1u)) continue;
            for (std::size_t b = a + 1; b < n && ok; ++b) {
                if (!(mask >> b & 1u)) continue;
                ok = f == Family::increasing ? p[a] < p[b] : p[a] > p[b];
            }
        }
        if (ok) monotone.push_back(mask);
    }
    std::vector<char> reach(count, 0);
    reach[0] = 1;
    for (std::size_t round = 0; round < i; ++round) {
        std::vector<char> next(reach);
        for (std::uint32_t a = 0; a < count; ++a) {
            if (!reach[a]) continue;
            for (auto m : monotone) next[a | m] = 1;
        }
        reach.swap(next);
    }
    std::size_t best = 0;
    for (std::uint32_t a = 0; a < count; ++a)
        if (reach[a]) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(a)));
    return best;
}

struct GreeneReport {
    Permutation sigma;
    std::vector<std::size_t> increasing;  // increasing[i-1] = max union of i increasing subsequences
    std::vector<std::size_t> decreasing;
};

inline GreeneReport greene_report(const Permutation& p) {
    detail::check_size(p, kMaxGreeneSize);
    const std::size_t n = p.size();
    GreeneReport r{p, std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0)};
    const auto w = p.zero_based();
    const std::uint32_t count = 1u << n;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        const auto card = static_cast<std::size_t>(std::popcount(mask));
        if (card == 0) continue;
        // subsets with longest decreasing run <= i feed g_i for every i >= that run
        const auto dec = detail::longest_opposite(w, mask, Family::increasing);
        const auto inc = detail::longest_opposite(w, mask, Family::decreasing);
        for (std::size_t i = dec; i <= n; ++i) r.increasing[i - 1] = std::max(r.increasing[i - 1], card);
        for (std::size_t i = inc; i <= n; ++i) r.decreasing[i - 1] = std::max(r.decreasing[i - 1], card);
    }
    return r;
}

/// Partial sums lambda_1 + ... + lambda_i for i = 1..count.
inline std::vector<std::size_t> partial_sums(const YoungDiagram& d, std::size_t count) {
    std::vector<std::size_t> out(count);
    std::size_t acc = 0;
    for (std::size_t i = 0; i < count; ++i) out[i] = acc += d.part(i);
    return out;
}

// ---------------------------------------------------------------------------
// Curve construction

/// L_lambda in the half-root convention, read off the polyline through
/// (0, inf), (0, l1), (1, l1), (1, l2), ..., (k, lk), (k, 0), (inf, 0) in the
/// frame u = (x + y)/sqrt2, v = (y - x)/sqrt2. In this frame the first row
/// lies on the negative x side, so L_half(x) = L_int(-sqrt2 x) / sqrt2.
inline double corner_profile(const YoungDiagram& d, double x) {
    struct Pt {
        double x, y;
    };
    std::vector<Pt> pts;
    auto add = [&](double alpha, double beta) {
        pts.push_back({(alpha - beta) / std::numbers::sqrt2, (alpha + beta) / std::numbers::sqrt2});
    };
    const std::size_t k = d.length();
    for (std::size_t i = 0; i < k; ++i) {
        add(static_cast<double>(i), static_cast<double>(d.part(i)));
        add(static_cast<double>(i + 1), static_cast<double>(d.part(i)));
    }
    add(static_cast<double>(k), 0.0);
    if (x <= pts.front().x) return -x;  // the ray beta -> inf
    if (x >= pts.back().x) return x;    // the ray alpha -> inf
    for (std::size_t j = 1; j < pts.size(); ++j) {
        if (x <= pts[j].x) {
            const auto& a = pts[j - 1];
            const auto& b = pts[j];
            const double w = (x - a.x) / (b.x - a.x);
            return a.y + w * (b.y - a.y);
        }
    }
    return x;
}

/// For every lattice point alpha u + beta v on the curve, lambda_{alpha+1} <= beta <= lambda_alpha
/// (lambda_0 = inf); and (sqrt2/2) L((sqrt2/2) i) +- i/2 is a non-negative integer for every i.
inline bool curve_lattice_properties_hold(const YoungDiagram& d) {
    const std::size_t k = d.length();
    auto lam = [&](std::size_t a) -> std::int64_t {
        return a == 0 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(d.part(a - 1));
    };
    auto check = [&](std::size_t alpha, std::int64_t beta) { return lam(alpha + 1) <= beta && beta <= lam(alpha); };
    for (std::size_t a = 0; a <= k; ++a) {
        const auto top = a == 0 ? static_cast<std::int64_t>(d.first_row()) : lam(a);
        for (auto beta = lam(a + 1); beta <= top; ++beta)
            if (!check(a, beta)) return false;
    }
    const auto reach = static_cast<std::int64_t>(std::max(d.first_row(), k)) + 2;
    for (std::int64_t i = -reach; i <= reach; ++i) {
        const double half = std::numbers::sqrt2 / 2.0;
        const double y = half * corner_profile(d, half * static_cast<double>(i));
        for (double v : {y + 0.5 * static_cast<double>(i), y - 0.5 * static_cast<double>(i)}) {
            if (v < -1e-9 || std::abs(v - std::round(v)) > 1e-9) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Fixed-point inequalities

struct Lemma15Report {
    bool pass = true;
    std::string inequality;  // "leq1" .. "leq4" on failure
    std::size_t index = 0;   // i for leq2, m for leq3
    std::int64_t lhs = 0, rhs = 0;
    std::size_t fixed_points = 0;
    YoungDiagram sigma_shape, tau_shape;
};

/// With m = #fix(sigma) and tau = sigma without its fixed points:
///   leq1  m <= lambda_1(sigma) <= m + lambda_1(tau)
///   leq2  m + sum_{j<i} lambda_j(tau) <= sum_{j<=i} lambda_j(sigma) <= m + sum_{j<=i} lambda_j(tau), i >= 2
///   leq3  max_{m'>=2} |sum_{k=2}^{m'} (lambda_k(sigma) - lambda_k(tau))| <= lambda_1(tau)
///   leq4  len(tau) <= len(sigma) <= len(tau) + 1
inline Lemma15Report verify_lemma15(const Permutation& p) {
    Lemma15Report r;
    const auto split = remove_fixed_points(p);
    r.fixed_points = split.fixed_set.size();
    r.sigma_shape = schensted_shape(p);
    r.tau_shape = schensted_shape(split.reduced);
    const auto& S = r.sigma_shape;
    const auto& T = r.tau_shape;
    const auto m = static_cast<std::int64_t>(r.fixed_points);
    auto fail = [&](const char* which, std::size_t idx, std::int64_t lhs, std::int64_t rhs) {
        r.pass = false;
        r.inequality = which;
        r.index = idx;
        r.lhs = lhs;
        r.rhs = rhs;
        return r;
    };
    auto part = [](const YoungDiagram& d, std::size_t i) { return static_cast<std::int64_t>(d.part(i - 1)); };

    const auto s1 = part(S, 1), t1 = part(T, 1);
    if (!(m <= s1)) return fail("leq1", 1, m, s1);
    if (!(s1 <= m + t1)) return fail("leq1", 1, s1, m + t1);

    const std::size_t rows = std::max(S.length(), T.length()) + 1;
    std::int64_t sum_s = s1, sum_t_prev = t1, sum_t = t1;
    for (std::size_t i = 2; i <= rows; ++i) {
        sum_s += part(S, i);
        sum_t = sum_t_prev + part(T, i);
        if (!(m + sum_t_prev <= sum_s)) return fail("leq2", i, m + sum_t_prev, sum_s);
        if (!(sum_s <= m + sum_t)) return fail("leq2", i, sum_s, m + sum_t);
        sum_t_prev = sum_t;
    }

    std::int64_t run = 0;
    for (std::size_t k = 2; k <= rows; ++k) {
        run += part(S, k) - part(T, k);
        if (std::abs(run) > t1) return fail("leq3", k, std::abs(run), t1);
    }

    const auto ls = static_cast<std::int64_t>(S.length()), lt = static_cast<std::int64_t>(T.length());
    if (!(lt <= ls)) return fail("leq4", 0, lt, ls);
    if (!(ls <= lt + 1)) return fail("leq4", 0, ls, lt + 1);
    return r;
}

struct Lemma34Report {
    bool pass = true;
    double sup = 0;    // half-root units
    double bound = 0;  // half-root units
    double slack = 0;  // bound - sup
};

inline Lemma34Report verify_lemma34(const YoungDiagram& a, const YoungDiagram& b) {
    Lemma34Report r;
    r.sup = sup_profile_distance(a, b);
    r.bound = lemma34_bound(a, b);
    r.slack = r.bound - r.sup;
    r.pass = lemma34_holds(a, b);
    return r;
}

// ---------------------------------------------------------------------------
// JSON witnesses

inline nlohmann::json to_json(const Lemma15Report& r, const Permutation& sigma) {
    return {{"check", "lemma15"},
            {"pass", r.pass},
            {"inequality", r.inequality},
            {"index", r.index},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"sigma", format_permutation(sigma)},
            {"fixed_points", r.fixed_points},
            {"sigma_shape", format_diagram(r.sigma_shape)},
            {"tau_shape", format_diagram(r.tau_shape)}};
}

inline nlohmann::json to_json(const Lemma34Report& r, const YoungDiagram& a, const YoungDiagram& b) {
    return {{"check", "lemma34"},   {"pass", r.pass},   {"a", format_diagram(a)}, {"b", format_diagram(b)},
            {"sup", r.sup},         {"bound", r.bound}, {"slack", r.slack}};
}

inline nlohmann::json greene_mismatch_json(const Permutation& sigma, Family f, std::size_t i, std::size_t oracle,
                                           std::size_t shape_sum) {
    return {{"check", "greene"},
            {"sigma", format_permutation(sigma)},
            {"family", f == Family::increasing ? "increasing" : "decreasing"},
            {"i", i},
            {"oracle", oracle},
            {"shape_partial_sum", shape_sum}};
}

}  // namespace rsfix::oracles
