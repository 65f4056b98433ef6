#pragma once

// Conjugacy-invariant random permutations.
//
// Every sampler takes an explicit Rng; nothing here touches global state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsfix/keyvalue.hpp"
#include "rsfix/permutation.hpp"
#include "rsfix/random.hpp"

namespace rsfix {

/// Integer partition labelling a conjugacy class.
class CycleType {
public:
    CycleType() = default;
    explicit CycleType(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
        std::sort(parts_.begin(), parts_.end(), std::greater<>());
        if (!parts_.empty() && parts_.back() == 0) throw std::invalid_argument("cycle type parts must be positive");
    }

    /// (2^k, 1^{n-2k})
    static CycleType involution(std::size_t n, std::size_t two_cycles) {
        if (2 * two_cycles > n) throw std::invalid_argument("too many 2-cycles for size " + std::to_string(n));
        std::vector<std::size_t> parts(two_cycles, 2);
        parts.insert(parts.end(), n - 2 * two_cycles, 1);
        return CycleType(std::move(parts));
    }

    const std::vector<std::size_t>& parts() const noexcept { return parts_; }
    std::size_t size() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), std::size_t{0}); }

    friend bool operator==(const CycleType&, const CycleType&) = default;

private:
    std::vector<std::size_t> parts_;
};

inline Permutation sample_uniform(std::size_t n, Rng& rng) {
    std::vector<Index> image(n);
    std::iota(image.begin(), image.end(), Index{0});
    shuffle(image, rng);
    return Permutation::adopt_unchecked(std::move(image));
}

// Uniform arrangement of the points, cut into consecutive cycles of the given lengths.
inline Permutation sample_in_cycle_type(const CycleType& type, Rng& rng) {
    const std::size_t n = type.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    shuffle(order, rng);
    std::vector<Index> image(n);
    std::size_t pos = 0;
    for (auto len : type.parts()) {
        for (std::size_t k = 0; k + 1 < len; ++k) image[order[pos + k]] = order[pos + k + 1];
        image[order[pos + len - 1]] = order[pos];
        pos += len;
    }
    return Permutation::adopt_unchecked(std::move(image));
}

/// Number of 2-cycles of a uniform involution, by inverse CDF over the exact
/// class weights n! / (k! 2^k (n-2k)!).
inline std::size_t sample_involution_two_cycles(std::size_t n, Rng& rng) {
    const std::size_t kmax = n / 2;
    std::vector<double> logw(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double kk = static_cast<double>(k);
        logw[k] = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(kk + 1) - kk * std::log(2.0) -
                  std::lgamma(static_cast<double>(n - 2 * k) + 1);
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    std::vector<double> cdf(kmax + 1);
    double total = 0;
    for (std::size_t k = 0; k <= kmax; ++k) {
        total += std::exp(logw[k] - top);
        cdf[k] = total;
    }
    const double u = uniform_unit(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), kmax);
}

inline Permutation sample_uniform_involution(std::size_t n, Rng& rng) {
    const auto k = sample_involution_two_cycles(n, rng);
    return sample_in_cycle_type(CycleType::involution(n, k), rng);
}

/// Pairs the smallest unmatched point with a uniformly chosen unmatched partner.
inline Permutation sample_fpf_involution(std::size_t n, Rng& rng) {
    if (n % 2 != 0) throw std::domain_error("parity: fixed-point-free involution needs even n, got " + std::to_string(n));
    std::vector<Index> pool(n), where(n), image(n);
    std::iota(pool.begin(), pool.end(), Index{0});
    std::iota(where.begin(), where.end(), Index{0});
    std::vector<bool> matched(n, false);
    auto take = [&](Index x) {
        const Index last = pool.back();
        pool[where[x]] = last;
        where[last] = where[x];
        pool.pop_back();
        matched[x] = true;
    };
    for (Index i = 0; i < n; ++i) {
        if (matched[i]) continue;
        take(i);
        const Index j = pool[uniform_below(rng, pool.size())];
        take(j);
        image[i] = j;
        image[j] = i;
    }
    return Permutation::adopt_unchecked(std::move(image));
}

/// Uniform fixed-point-free permutation by rejection (acceptance rate -> 1/e).
inline Permutation sample_derangement(std::size_t n, Rng& rng) {
    if (n == 1) throw std::domain_error("parity: no derangement of size 1");
    for (;;) {
        auto p = sample_uniform(n, rng);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = p[i] != i;
        if (ok) return p;
    }
}

// ---------------------------------------------------------------------------
// Regimes

enum class Ensemble { uniform, uniform_involution, fpf_involution, n_cycle, cycle_type, composite };
enum class Core { n_cycle, fpf_involution, derangement };
enum class FixRule { constant, theta_log, power, proportion };

struct RegimeSpec {
    Ensemble ensemble = Ensemble::uniform;
    // composite only
    Core core = Core::n_cycle;
    FixRule fix_rule = FixRule::constant;
    double theta = 1.0;
    double beta = 0.5;
    double p = 0.0;
    double c = 0.0;
    // cycle_type only
    CycleType cycle_type;

    friend bool operator==(const RegimeSpec&, const RegimeSpec&) = default;
};

inline const char* to_string(Ensemble e) {
    switch (e) {
        case Ensemble::uniform: return "uniform";
        case Ensemble::uniform_involution: return "uniform_involution";
        case Ensemble::fpf_involution: return "fpf_involution";
        case Ensemble::n_cycle: return "n_cycle";
        case Ensemble::cycle_type: return "cycle_type";
        case Ensemble::composite: return "composite";
    }
    return "?";
}

inline const char* to_string(Core c) {
    switch (c) {
        case Core::n_cycle: return "n_cycle";
        case Core::fpf_involution: return "fpf_involution";
        case Core::derangement: return "derangement";
    }
    return "?";
}

inline const char* to_string(FixRule r) {
    switch (r) {
        case FixRule::constant: return "constant";
        case FixRule::theta_log: return "theta_log";
        case FixRule::power: return "power";
        case FixRule::proportion: return "proportion";
    }
    return "?";
}

inline Ensemble parse_ensemble(const std::string& s) {
    for (auto e : {Ensemble::uniform, Ensemble::uniform_involution, Ensemble::fpf_involution, Ensemble::n_cycle,
                   Ensemble::cycle_type, Ensemble::composite})
        if (s == to_string(e)) return e;
    throw std::invalid_argument("unknown ensemble '" + s + "'");
}

inline Core parse_core(const std::string& s) {
    for (auto c : {Core::n_cycle, Core::fpf_involution, Core::derangement})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown core '" + s + "'");
}

inline FixRule parse_fix_rule(const std::string& s) {
    for (auto r : {FixRule::constant, FixRule::theta_log, FixRule::power, FixRule::proportion})
        if (s == to_string(r)) return r;
    throw std::invalid_argument("unknown fix_rule '" + s + "'");
}

inline void validate(const RegimeSpec& spec) {
    if (spec.ensemble != Ensemble::composite) return;
    switch (spec.fix_rule) {
        case FixRule::constant:
            if (!(spec.c >= 0)) throw std::invalid_argument("fix_rule constant needs c >= 0");
            break;
        case FixRule::theta_log:
            if (!(spec.theta > 0)) throw std::invalid_argument("fix_rule theta_log needs theta > 0");
            break;
        case FixRule::power:
            if (!(spec.beta > 0 && spec.beta < 1)) throw std::invalid_argument("fix_rule power needs 0 < beta < 1");
            if (!(spec.c >= 0)) throw std::invalid_argument("fix_rule power needs c >= 0");
            break;
        case FixRule::proportion:
            if (!(spec.p >= 0 && spec.p <= 1)) throw std::invalid_argument("fix_rule proportion needs 0 <= p <= 1");
            break;
    }
}

/// Target number of fixed points before parity repair, clamped to [0, n].
inline std::size_t fix_count_target(const RegimeSpec& spec, std::size_t n) {
    const double dn = static_cast<double>(n);
    double m = 0;
    switch (spec.fix_rule) {
        case FixRule::constant: m = std::floor(spec.c); break;
        case FixRule::theta_log: m = n >= 2 ? std::floor(spec.theta * dn / std::log(dn)) : 0.0; break;
        case FixRule::power: m = std::floor(spec.c * std::pow(dn, spec.beta)); break;
        case FixRule::proportion: m = std::floor(spec.p * dn); break;
    }
    return static_cast<std::size_t>(std::clamp(m, 0.0, dn));
}

/// Adjusts m by one so the core on n - m points exists: fpf cores need an even
/// size, cycle and derangement cores cannot have size 1. Prefers m - 1.
inline std::size_t repair_fix_count(Core core, std::size_t n, std::size_t m) {
    const std::size_t rest = n - m;
    const bool bad = core == Core::fpf_involution ? rest % 2 != 0 : rest == 1;
    if (!bad) return m;
    return m >= 1 ? m - 1 : m + 1;
}

inline Permutation sample_core(Core core, std::size_t k, Rng& rng) {
    switch (core) {
        case Core::n_cycle:
            return k == 0 ? Permutation{} : sample_in_cycle_type(CycleType({k}), rng);
        case Core::fpf_involution:
            return sample_in_cycle_type(CycleType(std::vector<std::size_t>(k / 2, 2)), rng);
        case Core::derangement:
            return sample_derangement(k, rng);
    }
    throw std::logic_error("unreachable");
}

/// Uniform m-subset of {1..n}, ascending.
inline std::vector<Index> sample_subset(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<Index> pts(n);
    std::iota(pts.begin(), pts.end(), Index{1});
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
        std::swap(pts[i], pts[j]);
    }
    pts.resize(m);
    std::sort(pts.begin(), pts.end());
    return pts;
}

inline Permutation sample_regime(const RegimeSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    switch (spec.ensemble) {
        case Ensemble::uniform: return sample_uniform(n, rng);
        case Ensemble::uniform_involution: return sample_uniform_involution(n, rng);
        case Ensemble::fpf_involution: return sample_fpf_involution(n, rng);
        case Ensemble::n_cycle: return n == 0 ? Permutation{} : sample_in_cycle_type(CycleType({n}), rng);
        case Ensemble::cycle_type:
            if (spec.cycle_type.size() != n)
                throw std::invalid_argument("cycle_type sums to " + std::to_string(spec.cycle_type.size()) +
                                            ", expected " + std::to_string(n));
            return sample_in_cycle_type(spec.cycle_type, rng);
        case Ensemble::composite: break;
    }
    const auto m = repair_fix_count(spec.core, n, fix_count_target(spec, n));
    FixedPointSplit split;
    split.n = n;
    split.fixed_set = sample_subset(n, m, rng);
    split.reduced = sample_core(spec.core, n - m, rng);
    return insert_fixed_points(split);
}

// Text form: ensemble, core, fix_rule, theta, beta, p, c, cycle_type.

inline RegimeSpec regime_from_key_values(const KeyValues& kv) {
    RegimeSpec spec;
    for (const auto& [key, value] : kv) {
        if (key == "ensemble") spec.ensemble = parse_ensemble(value);
        else if (key == "core") spec.core = parse_core(value);
        else if (key == "fix_rule") spec.fix_rule = parse_fix_rule(value);
        else if (key == "theta") spec.theta = parse_double(key, value);
        else if (key == "beta") spec.beta = parse_double(key, value);
        else if (key == "p") spec.p = parse_double(key, value);
        else if (key == "c") spec.c = parse_double(key, value);
        else if (key == "cycle_type") {
            auto raw = parse_uint_list(key, value);
            spec.cycle_type = CycleType(std::vector<std::size_t>(raw.begin(), raw.end()));
        }
    }
    validate(spec);
    return spec;
}

inline RegimeSpec parse_regime(std::string_view text) { return regime_from_key_values(parse_key_values(text)); }

inline std::string format_regime(const RegimeSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    out << "ensemble = " << to_string(spec.ensemble) << '\n'
        << "core = " << to_string(spec.core) << '\n'
        << "fix_rule = " << to_string(spec.fix_rule) << '\n'
        << "theta = " << spec.theta << '\n'
        << "beta = " << spec.beta << '\n'
        << "p = " << spec.p << '\n'
        << "c = " << spec.c << '\n';
    if (!spec.cycle_type.parts().empty()) {
        out << "cycle_type = ";
        for (std::size_t i = 0; i < spec.cycle_type.parts().size(); ++i)
            out << (i ? "," : "") << spec.cycle_type.parts()[i];
        out << '\n';
    }
    return out.str();
}

}  // namespace rsfix
