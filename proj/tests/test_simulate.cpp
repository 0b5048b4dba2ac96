#include "cquartet/design.hpp"
#include "cquartet/simulate.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cquartet;

namespace {

EffectVector constant_source(double ate, std::size_t n = 100)
{
    PatternSpec s;
    s.kind = PatternKind::constant;
    return generate_latent(s, n, ate);
}

Scenario doctor(std::size_t reps = 10000, std::uint64_t seed = 7)
{
    return Scenario::binary(decompose_binary(0.30, 0.25), 126, reps, seed);
}

}  // namespace

TEST(Simulate, PerfectSeparation)
{
    for (std::size_t n : {8u, 10u, 40u}) {
        const auto s = Scenario::binary(decompose_binary(0.0, 1.0), n, 200, 1);
        const auto sum = summarize(s);
        EXPECT_EQ(sum.empirical_power, 1.0);
        EXPECT_EQ(sum.mean_estimate, 1.0);
        EXPECT_EQ(*sum.sign_error_rate_among_significant, 0.0);
    }
}

TEST(Simulate, NullCalibration)
{
    const auto s = Scenario::binary(decompose_binary(0.30, 0.0), 126, 10000, 3);
    const auto sum = summarize(s, 4);
    const double mc = std::sqrt(0.05 * 0.95 / 10000);
    EXPECT_NEAR(sum.empirical_power, 0.05, 3 * mc);
    EXPECT_FALSE(sum.sign_error_rate_among_significant.has_value());
}

TEST(Simulate, DoctorPowerAndUnbiased)
{
    const auto sum = summarize(doctor(), 4);
    const double se = se_diff_proportions(63, 63, Proportion::of(0.30), Proportion::of(0.55));
    const double analytic = power_normal(0.25, se, 0.05);
    EXPECT_NEAR(analytic, 0.835, 0.001);
    EXPECT_NEAR(sum.empirical_power, analytic, 0.03);
    EXPECT_GE(sum.empirical_power, 0.80);
    // sd of one estimate is below the worst-case 0.0891
    EXPECT_NEAR(sum.mean_estimate, 0.25, 3 * 0.0891 / std::sqrt(10000.0));
    EXPECT_EQ(sum.true_ate, 0.25);
}

TEST(Simulate, WinnersCurseMatchesTruncatedNormal)
{
    const double se = 0.5 / 2.8;
    const auto s = Scenario::continuous(constant_source(0.1), noise_for_standard_error(se, 100), 100, 10000, 11);
    const auto sum = summarize(s, 4);
    const auto ref = oracle::truncated_normal_moments(0.1, se, 1.959963984540054);
    // Both rejection tails: Phi(0.56 - 1.96) + Phi(-0.56 - 1.96).
    EXPECT_NEAR(ref.rejection_probability,
                static_cast<double>(oracle::normal_cdf(0.56L - 1.959963984540054L) +
                                    oracle::normal_cdf(-0.56L - 1.959963984540054L)),
                1e-6);
    EXPECT_NEAR(sum.empirical_power, 0.08, 0.02);
    ASSERT_TRUE(sum.mean_significant_abs_estimate.has_value());
    EXPECT_GE(*sum.mean_significant_abs_estimate, 0.3);
    EXPECT_NEAR(*sum.mean_significant_abs_estimate / ref.mean_abs_given_reject, 1.0, 0.10);
    EXPECT_GT(*sum.mean_significant_estimate, 0.1);
    EXPECT_GT(*sum.sign_error_rate_among_significant, 0.0);
}

TEST(Simulate, LowPowerExaggerates)
{
    for (double ate : {0.05, 0.1, 0.2})
        for (double se : {0.1, 0.15, 0.25}) {
            const auto s =
                Scenario::continuous(constant_source(ate), noise_for_standard_error(se, 100), 100, 4000, 5);
            const auto sum = summarize(s, 2);
            if (sum.empirical_power < 0.5 && sum.any_significant()) {
                EXPECT_GT(*sum.mean_significant_estimate, ate) << ate << " " << se;
            }
        }
}

TEST(Simulate, NoiselessConstant)
{
    const auto s = Scenario::continuous(constant_source(0.1), 0.0, 50 * 2, 300, 2);
    const auto sum = summarize(s);
    EXPECT_EQ(sum.empirical_power, 1.0);
    EXPECT_NEAR(sum.mean_estimate, 0.1, 1e-12);
}

TEST(Simulate, UnitsFollowTheirClass)
{
    const auto s = Scenario::binary(decompose_binary(0.30, 0.25, 0.10), 126, 50, 4);
    for (std::size_t rep = 0; rep < 50; ++rep) {
        const auto units = simulate_units(s, rep);
        ASSERT_EQ(units.size(), 126u);
        std::size_t treated = 0;
        for (const auto& u : units) {
            treated += u.treated;
            ASSERT_TRUE(u.response.has_value());
            switch (*u.response) {
            case ResponseClass::always_survive: EXPECT_TRUE(u.y0 == 1.0 && u.y1 == 1.0); break;
            case ResponseClass::never_survive: EXPECT_TRUE(u.y0 == 0.0 && u.y1 == 0.0); break;
            case ResponseClass::saved: EXPECT_TRUE(u.y0 == 0.0 && u.y1 == 1.0); break;
            case ResponseClass::harmed: EXPECT_TRUE(u.y0 == 1.0 && u.y1 == 0.0); break;
            }
            EXPECT_EQ(u.tau, u.y1 - u.y0);
        }
        EXPECT_EQ(treated, 63u);
    }
}

TEST(Simulate, ClassSharesMatchDecomposition)
{
    const auto d = decompose_binary(0.30, 0.25, 0.10);
    const auto s = Scenario::binary(d, 100, 400, 9);
    std::array<double, 4> counts{};
    for (std::size_t rep = 0; rep < 400; ++rep)
        for (const auto& u : simulate_units(s, rep))
            counts[static_cast<std::size_t>(*u.response)] += 1.0;
    const double total = 400.0 * 100.0;
    const std::array<double, 4> expect{d.always_survive, d.never_survive, d.saved, d.harmed};
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_NEAR(counts[k] / total, expect[k], 4 * std::sqrt(expect[k] * (1 - expect[k]) / total));
}

TEST(Simulate, WorkerCountDoesNotMatter)
{
    const auto one = summarize(doctor(2000, 21), 1);
    for (unsigned w : {2u, 3u, 8u}) {
        const auto many = summarize(doctor(2000, 21), w);
        EXPECT_EQ(one.empirical_power, many.empirical_power);
        EXPECT_EQ(one.mean_estimate, many.mean_estimate);
        EXPECT_EQ(one.mean_significant_estimate, many.mean_significant_estimate);
        EXPECT_EQ(one.significant_reps, many.significant_reps);
    }
}

TEST(Simulate, RepDependsOnlyOnSeedAndIndex)
{
    const auto a = run_trial(doctor(10, 5), 7);
    const auto b = run_trial(doctor(5000, 5), 7);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.se, b.se);
}

TEST(Simulate, Validation)
{
    EXPECT_THROW(summarize(Scenario::binary(decompose_binary(0.3, 0.2), 7, 10, 0)), std::invalid_argument);
    EXPECT_THROW(summarize(Scenario::binary(decompose_binary(0.3, 0.2), 100, 0, 0)), std::invalid_argument);
    EXPECT_THROW(summarize(Scenario::continuous(EffectVector{}, 1.0, 100, 10, 0)), std::invalid_argument);
    EXPECT_THROW(summarize(Scenario::continuous(constant_source(0.1), -1.0, 100, 10, 0)), std::invalid_argument);
    EXPECT_THROW(noise_for_standard_error(0.0, 100), std::invalid_argument);
    EXPECT_DOUBLE_EQ(noise_for_standard_error(0.1, 100), 0.5);
}
