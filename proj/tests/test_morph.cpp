#include "cquartet/morph.hpp"
#include "cquartet/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace cquartet;

namespace {

EffectVector canonical(PatternKind kind, std::size_t n = 100, double ate = 0.1)
{
    PatternSpec s;
    s.kind = kind;
    return generate(s, even_grid(n, 0.0, 1.0), ate);
}

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST(ShapeDistance, ExactMatchIsZero)
{
    const auto v = canonical(PatternKind::sweet_spot);
    EXPECT_EQ(shape_distance(v, ShapeTarget::from_effects(v)), 0.0);
}

TEST(ShapeDistance, ConstantOffset)
{
    const auto v = canonical(PatternKind::linear);
    auto shifted = v;
    for (auto& u : shifted.units)
        u.tau += 0.03;
    EXPECT_NEAR(shape_distance(shifted, ShapeTarget::from_effects(v)), 0.03, 1e-15);
}

TEST(ShapeDistance, MatchesDirectRms)
{
    PatternSpec s;
    s.kind = PatternKind::high_variation;
    s.seed = 4;
    const auto v = generate(s, even_grid(50, 0.0, 1.0), 0.1);
    const auto target = ShapeTarget::from_function([](double) { return 0.1; }, 0.0, 1.0);
    double ss = 0.0;
    for (const auto& u : v.units)
        ss += (u.tau - 0.1) * (u.tau - 0.1);
    EXPECT_NEAR(shape_distance(v, target), std::sqrt(ss / 50.0), 1e-15);
}

TEST(ShapeTarget, TableInterpolatesAndClamps)
{
    const auto t = ShapeTarget::from_table({1.0, 0.0, 2.0}, {1.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(t(0.5), 0.5);
    EXPECT_DOUBLE_EQ(t(1.5), 0.5);
    EXPECT_DOUBLE_EQ(t(1.0), 1.0);
    EXPECT_TRUE(t.covers(0.0));
    EXPECT_FALSE(t.covers(2.5));
    EXPECT_THROW(ShapeTarget::from_table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(ShapeTarget::from_table({0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(ShapeDistance, TargetMustCoverData)
{
    const auto v = canonical(PatternKind::constant);
    const auto t = ShapeTarget::from_table({0.2, 0.8}, {0.0, 1.0});
    EXPECT_THROW(shape_distance(v, t), std::invalid_argument);
}

TEST(Morph, FixedPoint)
{
    const auto v = canonical(PatternKind::plateau);
    MorphConfig cfg;
    cfg.iterations = 5000;
    const auto r = morph(v, ShapeTarget::from_effects(v), cfg);
    EXPECT_EQ(r.status, MorphStatus::at_target);
    EXPECT_EQ(r.best.taus(), v.taus());
}

TEST(Morph, ConstantToSweetSpot)
{
    const auto v = canonical(PatternKind::constant);
    const auto r = morph(v, ShapeTarget::from_effects(canonical(PatternKind::sweet_spot)), MorphConfig{});
    EXPECT_EQ(r.status, MorphStatus::improved);
    EXPECT_NEAR(mean_of(r.best.taus()), 0.1, 1e-9);
    EXPECT_GE(r.reduction(), 0.9);
    EXPECT_EQ(r.constraint_violations, 0u);
    EXPECT_EQ(r.best.ate, 0.1);
    EXPECT_NEAR(shape_distance(r.best, ShapeTarget::from_effects(canonical(PatternKind::sweet_spot))),
                r.final_distance, 1e-15);
}

TEST(Morph, PreserveMeanAndSd)
{
    PatternSpec s;
    s.kind = PatternKind::low_variation;
    s.seed = 2;
    const auto v = generate(s, even_grid(100, 0.0, 1.0), 0.1);
    const auto src = v.taus();
    MorphConfig cfg;
    cfg.preserve_sd = true;
    const auto r = morph(v, ShapeTarget::from_effects(canonical(PatternKind::sweet_spot)), cfg);
    const auto out = r.best.taus();
    EXPECT_NEAR(mean_of(out), mean_of(src), 1e-9);
    EXPECT_NEAR(population_sd(out), population_sd(src), 1e-9);
    EXPECT_EQ(r.constraint_violations, 0u);
    EXPECT_EQ(r.status, MorphStatus::improved);
}

TEST(Morph, EveryAcceptedStepKeepsStatistics)
{
    PatternSpec s;
    s.kind = PatternKind::high_variation;
    s.seed = 6;
    const auto v = generate(s, even_grid(60, 0.0, 1.0), 0.1);
    const auto src = v.taus();
    const double m0 = mean_of(src), s0 = population_sd(src);

    MorphConfig cfg;
    cfg.preserve_sd = true;
    cfg.iterations = 50000;
    std::size_t calls = 0;
    double last_best = std::numeric_limits<double>::infinity();
    std::size_t last_iter = 0;
    const auto r = morph(v, ShapeTarget::from_effects(canonical(PatternKind::linear, 60)), cfg,
                         [&](const MorphStep& step) {
                             ++calls;
                             ASSERT_NEAR(mean_of(step.tau), m0, 1e-9);
                             ASSERT_NEAR(population_sd(step.tau), s0, 1e-9);
                             ASSERT_LE(step.best_distance, last_best);
                             ASSERT_LE(step.best_distance, step.distance);
                             if (calls > 1) {
                                 ASSERT_GT(step.iteration, last_iter);
                             }
                             last_best = step.best_distance;
                             last_iter = step.iteration;
                         });
    EXPECT_EQ(calls, r.accepted);
    EXPECT_EQ(r.final_distance, last_best);
}

TEST(Morph, NoPreservationTracksMean)
{
    const auto v = canonical(PatternKind::constant);
    MorphConfig cfg;
    cfg.preserve_mean = false;
    cfg.iterations = 50000;
    const auto target = ShapeTarget::from_function([](double x) { return 0.5 * x; }, 0.0, 1.0);
    const auto r = morph(v, target, cfg);
    EXPECT_DOUBLE_EQ(r.best.ate, mean_of(r.best.taus()));
    EXPECT_GE(r.reduction(), 0.9);
}

TEST(Morph, Deterministic)
{
    const auto v = canonical(PatternKind::constant);
    MorphConfig cfg;
    cfg.iterations = 20000;
    cfg.seed = 99;
    const auto target = ShapeTarget::from_effects(canonical(PatternKind::threshold));
    const auto a = morph(v, target, cfg);
    const auto b = morph(v, target, cfg);
    EXPECT_EQ(a.best.taus(), b.best.taus());
    EXPECT_EQ(a.accepted, b.accepted);
    cfg.seed = 100;
    EXPECT_NE(morph(v, target, cfg).best.taus(), a.best.taus());
}

TEST(Morph, KeepsXAndOrder)
{
    const auto v = canonical(PatternKind::constant);
    MorphConfig cfg;
    cfg.iterations = 2000;
    const auto r = morph(v, ShapeTarget::from_effects(canonical(PatternKind::sweet_spot)), cfg);
    EXPECT_EQ(r.best.xs(), v.xs());
    EXPECT_FALSE(r.best.pattern.has_value());
}

TEST(Morph, BadConfig)
{
    const auto v = canonical(PatternKind::constant);
    const auto t = ShapeTarget::from_effects(canonical(PatternKind::linear));
    MorphConfig cfg;
    cfg.decay = 1.5;
    EXPECT_THROW(morph(v, t, cfg), std::invalid_argument);
    cfg = {};
    cfg.step_scale = 0.0;
    EXPECT_THROW(morph(v, t, cfg), std::invalid_argument);
    cfg = {};
    cfg.stat_tolerance = -1.0;
    EXPECT_THROW(morph(v, t, cfg), std::invalid_argument);
}
