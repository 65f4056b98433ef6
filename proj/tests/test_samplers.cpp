#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "rsfix/samplers.hpp"
#include "rsfix/verify.hpp"

using namespace rsfix;

namespace {

constexpr double kAlpha = 1e-3;

RegimeSpec composite(Core core, FixRule rule) {
    RegimeSpec s;
    s.ensemble = Ensemble::composite;
    s.core = core;
    s.fix_rule = rule;
    return s;
}

bool is_involution(const Permutation& p) { return square(p).is_identity(); }

}  // namespace

TEST(Random, StreamsAreDeterministicAndDistinct) {
    auto a = derive_stream(1, 2, 3), b = derive_stream(1, 2, 3), c = derive_stream(1, 2, 4);
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(derive_stream(1, 2, 3, 9)(), derive_stream(1, 2, 3, 0)());
}

TEST(Random, UniformBelowStaysInRange) {
    auto rng = derive_stream(5, 0, 0);
    std::vector<int> hits(7, 0);
    for (int k = 0; k < 7000; ++k) ++hits[uniform_below(rng, 7)];
    for (int h : hits) EXPECT_GT(h, 800);
    EXPECT_EQ(uniform_below(rng, 1), 0u);
    for (int k = 0; k < 1000; ++k) {
        const double u = uniform_unit(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(SampleUniform, SizeOneAndDeterminism) {
    auto rng = derive_stream(1, 1, 0);
    EXPECT_TRUE(sample_uniform(1, rng).is_identity());
    auto a = derive_stream(77, 50, 3), b = derive_stream(77, 50, 3);
    EXPECT_EQ(sample_uniform(50, a), sample_uniform(50, b));
}

TEST(SampleUniform, ChiSquareOnSix) {
    auto rng = derive_stream(11, 3, 0);
    const auto law = verify::uniform_law(3, [](const Permutation&) { return true; });
    EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_uniform(3, rng); }, 60000), kAlpha);
}

TEST(SampleInCycleType, AllOnesIsIdentity) {
    auto rng = derive_stream(2, 0, 0);
    for (int k = 0; k < 20; ++k) EXPECT_TRUE(sample_in_cycle_type(CycleType({1, 1, 1, 1}), rng).is_identity());
}

TEST(SampleInCycleType, HasRequestedType) {
    auto rng = derive_stream(3, 0, 0);
    const CycleType t({4, 3, 3, 1, 1});
    for (int k = 0; k < 100; ++k) EXPECT_EQ(cycle_type(sample_in_cycle_type(t, rng)), t.parts());
}

TEST(SampleInCycleType, ThreeCyclesBalanced) {
    auto rng = derive_stream(4, 0, 0);
    const auto law = verify::uniform_law(3, [](const Permutation& p) { return cycle_stats(p).num_cycles == 1; });
    ASSERT_EQ(law.size(), 2u);
    EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_in_cycle_type(CycleType({3}), rng); }, 60000),
              kAlpha);
}

TEST(SampleInCycleType, ThreeMatchingsOfFour) {
    auto rng = derive_stream(5, 0, 0);
    const auto law = verify::uniform_law(4, [](const Permutation& p) { return cycle_type(p) == std::vector<std::size_t>{2, 2}; });
    ASSERT_EQ(law.size(), 3u);
    EXPECT_GT(
        verify::goodness_of_fit(law, [&](std::size_t) { return sample_in_cycle_type(CycleType({2, 2}), rng); }, 60000),
        kAlpha);
}

TEST(CycleTypeClass, RejectsZeroParts) {
    EXPECT_THROW(CycleType({2, 0}), std::invalid_argument);
    EXPECT_THROW(CycleType::involution(3, 2), std::invalid_argument);
    EXPECT_EQ(CycleType::involution(5, 2).parts(), (std::vector<std::size_t>{2, 2, 1}));
}

TEST(SampleUniformInvolution, SmallLaws) {
    for (std::size_t n : {2u, 3u}) {
        auto rng = derive_stream(6, n, 0);
        const auto law = verify::uniform_law(n, is_involution);
        EXPECT_EQ(law.size(), n == 2 ? 2u : 4u);
        EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_uniform_involution(n, rng); }, 60000),
                  kAlpha)
            << "n=" << n;
    }
}

TEST(SampleUniformInvolution, TwoCycleCountMatchesEnumeration) {
    // Enumerated class sizes of involutions of 6 by number of 2-cycles.
    std::map<std::size_t, double> classes;
    verify::for_each_permutation(6, [&](const Permutation& p) {
        if (is_involution(p)) classes[cycle_stats(p).two_cycles] += 1;
    });
    EXPECT_EQ(classes, (std::map<std::size_t, double>{{0, 1}, {1, 15}, {2, 45}, {3, 15}}));
    const double total = 76, draws = 76000;
    std::map<std::size_t, double> seen;
    auto rng = derive_stream(7, 6, 0);
    for (int k = 0; k < draws; ++k) seen[sample_involution_two_cycles(6, rng)] += 1;
    double stat = 0;
    for (auto [k, c] : classes) {
        const double e = draws * c / total;
        stat += (seen[k] - e) * (seen[k] - e) / e;
    }
    EXPECT_GT(verify::detail::chi_square_pvalue(stat, 3), kAlpha);
}

TEST(SampleFpfInvolution, Basics) {
    auto rng = derive_stream(8, 0, 0);
    EXPECT_EQ(sample_fpf_involution(2, rng), Permutation::from_zero_based({1, 0}));
    EXPECT_TRUE(sample_fpf_involution(0, rng).empty());
    const auto p = sample_fpf_involution(100, rng);
    EXPECT_EQ(cycle_type(p), std::vector<std::size_t>(50, 2));
}

TEST(SampleFpfInvolution, OddSizeIsParityError) {
    auto rng = derive_stream(8, 1, 0);
    try {
        sample_fpf_involution(5, rng);
        FAIL() << "expected a parity error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("parity"), std::string::npos);
    }
}

TEST(SampleFpfInvolution, ThreeMatchingsEquallyLikely) {
    auto rng = derive_stream(9, 4, 0);
    const auto law = verify::uniform_law(4, [](const Permutation& p) {
        return is_involution(p) && cycle_stats(p).fixed_points == 0;
    });
    EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_fpf_involution(4, rng); }, 60000), kAlpha);
}

TEST(SampleDerangement, UniformOverNine) {
    auto rng = derive_stream(10, 4, 0);
    const auto law = verify::uniform_law(4, [](const Permutation& p) { return cycle_stats(p).fixed_points == 0; });
    EXPECT_EQ(law.size(), 9u);
    EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_derangement(4, rng); }, 60000), kAlpha);
    EXPECT_THROW(sample_derangement(1, rng), std::domain_error);
    EXPECT_TRUE(sample_derangement(0, rng).empty());
}

TEST(FixCount, Rules) {
    auto s = composite(Core::n_cycle, FixRule::theta_log);
    EXPECT_EQ(fix_count_target(s, 1000), 144u);
    EXPECT_EQ(fix_count_target(s, 1), 0u);
    s.theta = 2.5;
    EXPECT_EQ(fix_count_target(s, 1000), 361u);

    s.fix_rule = FixRule::proportion;
    s.p = 0.5;
    EXPECT_EQ(fix_count_target(s, 101), 50u);
    s.p = 1.0;
    EXPECT_EQ(fix_count_target(s, 7), 7u);

    s.fix_rule = FixRule::power;
    s.beta = 0.5;
    s.c = 3;
    EXPECT_EQ(fix_count_target(s, 100), 30u);

    s.fix_rule = FixRule::constant;
    s.c = 12;
    EXPECT_EQ(fix_count_target(s, 10), 10u);
}

TEST(FixCount, ParityRepair) {
    EXPECT_EQ(repair_fix_count(Core::fpf_involution, 10, 3), 2u);
    EXPECT_EQ(repair_fix_count(Core::fpf_involution, 11, 0), 1u);
    EXPECT_EQ(repair_fix_count(Core::fpf_involution, 10, 4), 4u);
    EXPECT_EQ(repair_fix_count(Core::n_cycle, 10, 9), 8u);
    EXPECT_EQ(repair_fix_count(Core::derangement, 1, 0), 1u);
    EXPECT_EQ(repair_fix_count(Core::n_cycle, 10, 10), 10u);
}

TEST(SampleRegime, NCycleWithoutFixedPoints) {
    auto s = composite(Core::n_cycle, FixRule::constant);
    auto rng = derive_stream(12, 0, 0);
    const auto st = cycle_stats(sample_regime(s, 500, rng));
    EXPECT_EQ(st.num_cycles, 1u);
    EXPECT_EQ(st.fixed_points, 0u);
}

TEST(SampleRegime, ThetaLogAtOneThousand) {
    auto s = composite(Core::n_cycle, FixRule::theta_log);
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto rng = derive_stream(13, 1000, k);
        const auto st = cycle_stats(sample_regime(s, 1000, rng));
        EXPECT_EQ(st.fixed_points, 144u);
        EXPECT_EQ(st.num_cycles - st.fixed_points, 1u);
    }
}

TEST(SampleRegime, FpfCoreParityRepaired) {
    auto s = composite(Core::fpf_involution, FixRule::proportion);
    s.p = 0.5;
    auto rng = derive_stream(14, 0, 0);
    const auto st = cycle_stats(sample_regime(s, 1001, rng));
    EXPECT_EQ(st.fixed_points, 499u);
    EXPECT_EQ(st.two_cycles, 251u);
    EXPECT_EQ(st.fixed_points_of_square, 1001u);
}

TEST(SampleRegime, DerangementCore) {
    auto s = composite(Core::derangement, FixRule::constant);
    s.c = 3;
    auto rng = derive_stream(15, 0, 0);
    EXPECT_EQ(cycle_stats(sample_regime(s, 40, rng)).fixed_points, 3u);
}

TEST(SampleRegime, CycleTypeSizeMismatch) {
    RegimeSpec s;
    s.ensemble = Ensemble::cycle_type;
    s.cycle_type = CycleType({3, 2});
    auto rng = derive_stream(16, 0, 0);
    EXPECT_THROW(sample_regime(s, 6, rng), std::invalid_argument);
    EXPECT_EQ(cycle_type(sample_regime(s, 5, rng)), (std::vector<std::size_t>{3, 2}));
}

TEST(SampleRegime, FixedSetIsUniform) {
    // With one fixed point and a 3-cycle core on n = 4, the fixed point is uniform.
    auto s = composite(Core::n_cycle, FixRule::constant);
    s.c = 1;
    const auto law = verify::uniform_law(4, [](const Permutation& p) { return cycle_type(p) == std::vector<std::size_t>{3, 1}; });
    ASSERT_EQ(law.size(), 8u);
    auto rng = derive_stream(17, 0, 0);
    EXPECT_GT(verify::goodness_of_fit(law, [&](std::size_t) { return sample_regime(s, 4, rng); }, 80000), kAlpha);
}

TEST(Regime, ValidationErrors) {
    auto s = composite(Core::n_cycle, FixRule::theta_log);
    s.theta = 0;
    EXPECT_THROW(validate(s), std::invalid_argument);
    s = composite(Core::n_cycle, FixRule::power);
    s.beta = 1.5;
    EXPECT_THROW(validate(s), std::invalid_argument);
    s = composite(Core::n_cycle, FixRule::proportion);
    s.p = -0.1;
    EXPECT_THROW(validate(s), std::invalid_argument);
    EXPECT_THROW(parse_ensemble("bogus"), std::invalid_argument);
    EXPECT_THROW(parse_core("bogus"), std::invalid_argument);
    EXPECT_THROW(parse_fix_rule("bogus"), std::invalid_argument);
}

TEST(Regime, TextRoundTrip) {
    auto s = composite(Core::fpf_involution, FixRule::power);
    s.beta = 0.25;
    s.c = 1.5;
    const auto back = parse_regime(format_regime(s));
    EXPECT_EQ(back.ensemble, s.ensemble);
    EXPECT_EQ(back.core, s.core);
    EXPECT_EQ(back.fix_rule, s.fix_rule);
    EXPECT_EQ(back.beta, s.beta);
    EXPECT_EQ(back.c, s.c);

    const auto ct = parse_regime("ensemble = cycle_type\n# comment\ncycle_type = 2, 3,1\n");
    EXPECT_EQ(ct.cycle_type.parts(), (std::vector<std::size_t>{3, 2, 1}));
}
