#include "cquartet/observables.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cquartet;

namespace {

EffectVector latent(PatternKind kind, std::size_t n = 11, std::uint64_t seed = 0)
{
    PatternSpec s;
    s.kind = kind;
    s.seed = seed;
    return generate_latent(s, n, 0.1);
}

}  // namespace

TEST(Observables, ConstantControl)
{
    const auto o = synthesize(latent(PatternKind::constant), ControlModel::constant(1.0));
    ASSERT_EQ(o.size(), 11u);
    for (const auto& u : o.units) {
        EXPECT_EQ(u.y0, 1.0);
        EXPECT_EQ(u.y1, 1.1);
    }
    EXPECT_EQ(o.source_ate, 0.1);
}

TEST(Observables, MeanDifferenceIsAte)
{
    for (auto kind : {PatternKind::constant, PatternKind::low_variation, PatternKind::high_variation,
                      PatternKind::occasional_large}) {
        const auto v = latent(kind, 11, 3);
        const auto o = synthesize(v, default_control(v));
        EXPECT_NEAR(mean_difference(o), 0.1, 1e-12) << pattern_name(kind);
    }
}

TEST(Observables, ZeroEffectUnitsUnchanged)
{
    PatternSpec s;
    s.kind = PatternKind::occasional_large;
    s.p_nonzero = 0.2;
    const auto v = generate_latent(s, 10, 0.1);
    const auto o = synthesize(v, default_control(v));
    int same = 0;
    for (const auto& u : o.units)
        same += u.y1 == u.y0;
    EXPECT_EQ(same, 8);
}

TEST(Observables, DefaultControlSpansUnitInterval)
{
    const auto v = latent(PatternKind::constant);
    const auto o = synthesize(v, default_control(v));
    EXPECT_NEAR(o.units.front().y0, 0.0, 1e-15);
    EXPECT_NEAR(o.units.back().y0, 1.0, 1e-15);
}

TEST(Observables, RecoveredEffectsCloseToTau)
{
    const auto v = latent(PatternKind::high_variation, 100, 5);
    const auto o = synthesize(v, default_control(v));
    const auto r = recover_effects(o);
    for (std::size_t i = 0; i < v.size(); ++i)
        EXPECT_NEAR(r[i], v.units[i].tau, 1e-15);
}

TEST(Observables, TableControl)
{
    const auto v = latent(PatternKind::constant, 3);
    const auto o = synthesize(v, ControlModel::from_table({2.0, 3.0, 5.0}));
    EXPECT_EQ(o.units[2].y0, 5.0);
    EXPECT_EQ(o.units[2].y1, 5.0 + 0.1);
    EXPECT_THROW(synthesize(v, ControlModel::from_table({1.0, 2.0})), std::invalid_argument);
}

TEST(Observables, NoiseGoesIntoBothArms)
{
    const auto v = latent(PatternKind::constant, 50);
    auto cm = ControlModel::constant(0.0);
    cm.noise_sd = 1.0;
    cm.seed = 4;
    const auto o = synthesize(v, cm);
    bool varied = false;
    for (const auto& u : o.units) {
        varied = varied || u.y0 != 0.0;
        EXPECT_NEAR(u.y1 - u.y0, 0.1, 1e-14);
    }
    EXPECT_TRUE(varied);
    const auto again = synthesize(v, cm);
    for (std::size_t i = 0; i < o.size(); ++i)
        EXPECT_EQ(o.units[i].y0, again.units[i].y0);

    cm.noise_sd = -1.0;
    EXPECT_THROW(synthesize(v, cm), std::invalid_argument);
}

TEST(Observables, DisplaySeries)
{
    const auto v = latent(PatternKind::constant);
    const auto d = assign_display(synthesize(v, ControlModel::constant(1.0)));
    EXPECT_EQ(d.treated.points.size(), 11u);
    EXPECT_EQ(d.control.points.size(), 11u);
    EXPECT_EQ(d.treated.marker, Marker::cross);
    EXPECT_EQ(d.control.marker, Marker::circle);
    for (std::size_t i = 0; i < 11; ++i)
        EXPECT_NEAR(d.treated.points[i].y - d.control.points[i].y, 0.1, 1e-15);
}

TEST(Observables, NegativeEffectsPutCrossesBelow)
{
    const auto v = latent(PatternKind::high_variation, 11, 2);
    const auto d = assign_display(synthesize(v, default_control(v)));
    int below = 0, negative = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        below += d.treated.points[i].y < d.control.points[i].y;
        negative += v.units[i].tau < 0.0;
    }
    EXPECT_GT(negative, 0);
    EXPECT_EQ(below, negative);
}
