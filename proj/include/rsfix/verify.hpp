#pragma once

// Self-verification suites behind `rsfix verify`. Each suite is deterministic
// in its seed and returns every failing case as a JSON witness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "rsfix/oracles.hpp"
#include "rsfix/permutation.hpp"
#include "rsfix/random.hpp"
#include "rsfix/samplers.hpp"
#include "rsfix/shape_geometry.hpp"
#include "rsfix/young_diagram.hpp"

namespace rsfix::verify {

struct SuiteReport {
    std::string suite;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0;  // suite-specific: max error, min p-value, ...
    std::vector<nlohmann::json> witnesses;

    bool pass() const noexcept { return failures == 0; }
    void fail(nlohmann::json w) {
        ++failures;
        if (witnesses.size() < 20) witnesses.push_back(std::move(w));
    }
};

/// Calls fn(sigma) for every permutation of size n in lexicographic order.
template <typename Fn>
void for_each_permutation(std::size_t n, Fn&& fn) {
    std::vector<Index> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<Index>(i);
    do {
        fn(Permutation::adopt_unchecked(w));
    } while (std::next_permutation(w.begin(), w.end()));
}

// ---------------------------------------------------------------------------

inline void check_greene(const Permutation& sigma, SuiteReport& rep) {
    const auto shape = schensted_shape(sigma);
    const auto conj = conjugate_diagram(shape);
    const auto oracle = oracles::greene_report(sigma);
    const auto inc = oracles::partial_sums(shape, sigma.size());
    const auto dec = oracles::partial_sums(conj, sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        ++rep.checks;
        if (oracle.increasing[i] != inc[i])
            rep.fail(oracles::greene_mismatch_json(sigma, oracles::Family::increasing, i + 1, oracle.increasing[i], inc[i]));
        ++rep.checks;
        if (oracle.decreasing[i] != dec[i])
            rep.fail(oracles::greene_mismatch_json(sigma, oracles::Family::decreasing, i + 1, oracle.decreasing[i], dec[i]));
    }
}

/// Exhaustive over n <= max_exhaustive, then `random_count` draws for each of n = 7, 8.
inline SuiteReport greene_suite(std::uint64_t seed, std::size_t random_count = 200, std::size_t max_exhaustive = 6) {
    SuiteReport rep{"greene"};
    std::size_t perms = 0;
    for (std::size_t n = 0; n <= max_exhaustive; ++n)
        for_each_permutation(n, [&](const Permutation& s) {
            ++perms;
            check_greene(s, rep);
        });
    for (std::size_t n : {7u, 8u}) {
        for (std::size_t k = 0; k < random_count; ++k) {
            auto rng = derive_stream(seed, n, k, 0x6772);
            check_greene(sample_uniform(n, rng), rep);
            ++perms;
        }
    }
    rep.worst = static_cast<double>(perms);
    return rep;
}

// ---------------------------------------------------------------------------

/// The five sampler families used by the randomized suites, indexed 0..4.
inline Permutation sample_family(std::size_t family, std::size_t n, Rng& rng) {
    switch (family % 5) {
        case 0: return sample_uniform(n, rng);
        case 1: return sample_uniform_involution(n, rng);
        case 2: {
            if (n % 2 == 0) return sample_fpf_involution(n, rng);
            RegimeSpec spec;
            spec.ensemble = Ensemble::composite;
            spec.core = Core::fpf_involution;
            spec.c = 1;
            return sample_regime(spec, n, rng);
        }
        case 3: {
            // random cycle type: cut n into uniform pieces
            std::vector<std::size_t> parts;
            std::size_t left = n;
            while (left > 0) {
                const auto len = 1 + static_cast<std::size_t>(uniform_below(rng, left));
                parts.push_back(len);
                left -= len;
            }
            return sample_in_cycle_type(CycleType(parts), rng);
        }
        default: {
            RegimeSpec spec;
            spec.ensemble = Ensemble::composite;
            spec.core = static_cast<Core>(uniform_below(rng, 3));
            spec.fix_rule = FixRule::proportion;
            spec.p = uniform_unit(rng);
            return sample_regime(spec, n, rng);
        }
    }
}

inline SuiteReport lemma15_suite(std::uint64_t seed, std::size_t count = 10000, std::size_t max_n = 200) {
    SuiteReport rep{"lemma15"};
    for (std::size_t k = 0; k < count; ++k) {
        auto rng = derive_stream(seed, 0, k, 0x6c31);
        const auto n = static_cast<std::size_t>(uniform_below(rng, max_n + 1));
        const auto sigma = sample_family(k, n, rng);
        ++rep.checks;
        const auto r = oracles::verify_lemma15(sigma);
        if (!r.pass) rep.fail(oracles::to_json(r, sigma));
    }
    return rep;
}

/// Random pairs of Schensted shapes of sizes <= max_n drawn from all sampler families.
inline SuiteReport lemma34_suite(std::uint64_t seed, std::size_t pairs = 10000, std::size_t max_n = 300) {
    SuiteReport rep{"lemma34"};
    rep.worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs; ++k) {
        auto rng = derive_stream(seed, 0, k, 0x6c34);
        auto draw = [&] {
            const auto n = 1 + static_cast<std::size_t>(uniform_below(rng, max_n));
            return schensted_shape(sample_family(static_cast<std::size_t>(uniform_below(rng, 5)), n, rng));
        };
        const auto a = draw();
        const auto b = draw();
        ++rep.checks;
        const auto r = oracles::verify_lemma34(a, b);
        rep.worst = std::min(rep.worst, r.slack);
        if (!r.pass) rep.fail(oracles::to_json(r, a, b));
    }
    return rep;
}

// ---------------------------------------------------------------------------

/// The shape-distance scaling (1/(2 sqrt n)) L_int(2 s sqrt n) against the
/// curve-construction scaling (1/sqrt(2n)) L_half(s sqrt(2n)), mirrored
/// because the curve construction puts the first row on the left.
inline SuiteReport convention_suite(std::uint64_t seed, std::size_t diagrams = 100, std::size_t points = 100,
                                    double tolerance = 1e-12) {
    SuiteReport rep{"convention"};
    for (std::size_t k = 0; k < diagrams; ++k) {
        auto rng = derive_stream(seed, 0, k, 0x636f);
        const auto n = 1 + static_cast<std::size_t>(uniform_below(rng, 400));
        const auto d = schensted_shape(sample_family(k, n, rng));
        const double rn = std::sqrt(static_cast<double>(n));
        for (std::size_t j = 0; j < points; ++j) {
            const double s = (2.0 * uniform_unit(rng) - 1.0) * 1.5;
            const double integer_route = height_at_real(d, 2.0 * s * rn) / (2.0 * rn);
            const double root2n = std::sqrt(2.0 * static_cast<double>(n));
            const double curve_route = oracles::corner_profile(d, -s * root2n) / root2n;
            const double err = std::abs(integer_route - curve_route);
            rep.worst = std::max(rep.worst, err);
            ++rep.checks;
            if (!(err <= tolerance))
                rep.fail({{"check", "convention"}, {"diagram", format_diagram(d)}, {"s", s}, {"integer", integer_route},
                          {"curve", curve_route}, {"error", err}});
        }
        ++rep.checks;
        if (!oracles::curve_lattice_properties_hold(d))
            rep.fail({{"check", "curve_lattice"}, {"diagram", format_diagram(d)}});
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t perm_code(const Permutation& p) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < p.size(); ++i) code = code * p.size() + p[i];
    return code;
}

inline double chi_square_pvalue(double stat, std::size_t dof) {
    if (dof == 0) return 1.0;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace detail

/// Pearson goodness of fit of `draws` samples against an exact law over permutations.
template <typename Sampler>
double goodness_of_fit(const std::map<std::uint64_t, double>& law, Sampler&& sample, std::size_t draws) {
    std::map<std::uint64_t, std::size_t> counts;
    for (std::size_t k = 0; k < draws; ++k) ++counts[detail::perm_code(sample(k))];
    double stat = 0;
    for (const auto& [code, prob] : law) {
        const double expected = prob * static_cast<double>(draws);
        const double got = counts.count(code) ? static_cast<double>(counts.at(code)) : 0.0;
        stat += (got - expected) * (got - expected) / expected;
    }
    for (const auto& [code, c] : counts)
        if (!law.count(code)) return 0.0;  // support violation
    return detail::chi_square_pvalue(stat, law.size() - 1);
}

/// Chi-square homogeneity p-value between two equal-size samples of permutations.
inline double homogeneity_pvalue(const std::vector<Permutation>& a, const std::vector<Permutation>& b) {
    std::map<std::uint64_t, std::pair<double, double>> bins;
    for (const auto& p : a) bins[detail::perm_code(p)].first += 1;
    for (const auto& p : b) bins[detail::perm_code(p)].second += 1;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double stat = 0;
    for (const auto& [code, ab] : bins) {
        const double tot = ab.first + ab.second;
        const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
        stat += (ab.first - ea) * (ab.first - ea) / ea + (ab.second - eb) * (ab.second - eb) / eb;
    }
    return detail::chi_square_pvalue(stat, bins.size() - 1);
}

/// Exact law: uniform over {sigma of size n : pred(sigma)}.
template <typename Pred>
std::map<std::uint64_t, double> uniform_law(std::size_t n, Pred&& pred) {
    std::map<std::uint64_t, double> law;
    for_each_permutation(n, [&](const Permutation& p) {
        if (pred(p)) law[detail::perm_code(p)] = 1.0;
    });
    for (auto& [code, w] : law) w /= static_cast<double>(law.size());
    return law;
}

/// Distributional checks of every sampler on small n, plus conjugacy
/// invariance: sigma and rho sigma rho^{-1} (independent draws) must share a law.
inline SuiteReport samplers_suite(std::uint64_t seed, std::size_t draws = 60000, std::size_t invariance_draws = 100000,
                                  double alpha = 1e-3) {
    SuiteReport rep{"samplers"};
    rep.worst = 1.0;
    auto record = [&](const std::string& what, double pv) {
        ++rep.checks;
        rep.worst = std::min(rep.worst, pv);
        if (!(pv > alpha)) rep.fail({{"check", what}, {"p_value", pv}});
    };
    auto involution = [](const Permutation& p) { return square(p).is_identity(); };
    auto fpf_involution = [&](const Permutation& p) { return involution(p) && cycle_stats(p).fixed_points == 0; };
    auto n_cycle = [](const Permutation& p) { return cycle_stats(p).num_cycles == 1; };
    auto any = [](const Permutation&) { return true; };
    auto derangement = [](const Permutation& p) { return cycle_stats(p).fixed_points == 0; };

    // one stream per check, consumed sequentially
    auto check = [&](const std::string& what, std::uint32_t tag, auto&& law, auto&& draw) {
        auto rng = derive_stream(seed, 0, tag, 0x7361);
        record(what, goodness_of_fit(law, [&](std::size_t) { return draw(rng); }, draws));
    };
    check("uniform n=3", 1, uniform_law(3, any), [](Rng& r) { return sample_uniform(3, r); });
    check("cycle type (3)", 2, uniform_law(3, n_cycle), [](Rng& r) { return sample_in_cycle_type(CycleType({3}), r); });
    check("cycle type (2,2)", 3, uniform_law(4, fpf_involution),
          [](Rng& r) { return sample_in_cycle_type(CycleType({2, 2}), r); });
    for (std::size_t n : {2u, 3u, 4u})
        check("uniform involution n=" + std::to_string(n), 4 + static_cast<std::uint32_t>(n), uniform_law(n, involution),
              [n](Rng& r) { return sample_uniform_involution(n, r); });
    check("fpf involution n=4", 9, uniform_law(4, fpf_involution), [](Rng& r) { return sample_fpf_involution(4, r); });
    check("derangement n=4", 10, uniform_law(4, derangement), [](Rng& r) { return sample_derangement(4, r); });

    // Conjugacy invariance for every family at n = 3, 4.
    for (std::size_t n : {3u, 4u}) {
        for (std::size_t family = 0; family < 5; ++family) {
            auto rho_rng = derive_stream(seed, n, family, 0x72686f);
            const auto rho = sample_uniform(n, rho_rng);
            auto ra = derive_stream(seed, n, 2 * family, 0x696e76);
            auto rb = derive_stream(seed, n, 2 * family + 1, 0x696e76);
            std::vector<Permutation> plain, conj;
            plain.reserve(invariance_draws);
            conj.reserve(invariance_draws);
            for (std::size_t k = 0; k < invariance_draws; ++k) {
                plain.push_back(sample_family(family, n, ra));
                conj.push_back(conjugate(sample_family(family, n, rb), rho));
            }
            record("conjugacy invariance family=" + std::to_string(family) + " n=" + std::to_string(n),
                   homogeneity_pvalue(plain, conj));
        }
    }
    return rep;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"greene", "lemma15", "lemma34", "convention", "samplers"};
    return names;
}

/// `count` overrides the suite's main size (random draws, pairs or diagrams); 0 keeps the default.
inline SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t count = 0) {
    if (name == "greene") return count ? greene_suite(seed, count) : greene_suite(seed);
    if (name == "lemma15") return count ? lemma15_suite(seed, count) : lemma15_suite(seed);
    if (name == "lemma34") return count ? lemma34_suite(seed, count) : lemma34_suite(seed);
    if (name == "convention") return count ? convention_suite(seed, count) : convention_suite(seed);
    if (name == "samplers") return count ? samplers_suite(seed, count, count) : samplers_suite(seed);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

inline nlohmann::json to_json(const SuiteReport& r) {
    return {{"suite", r.suite}, {"pass", r.pass()},  {"checks", r.checks},
            {"failures", r.failures}, {"worst", r.worst}, {"witnesses", r.witnesses}};
}

}  // namespace rsfix::verify
