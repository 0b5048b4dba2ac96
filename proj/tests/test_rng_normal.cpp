#include "cquartet/normal.hpp"
#include "cquartet/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace cquartet;

TEST(Rng, SameKeySameSequence)
{
    Rng a(42, streams::trial, 3);
    Rng b(42, streams::trial, 3);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, KeysAreIndependentStreams)
{
    std::set<std::uint64_t> firsts;
    for (std::uint64_t seed : {0u, 1u})
        for (std::uint64_t stream : {1u, 2u})
            for (std::uint64_t sub : {0u, 1u})
                firsts.insert(Rng(seed, stream, sub).next_u64());
    EXPECT_EQ(firsts.size(), 8u);
}

TEST(Rng, UniformInUnitInterval)
{
    Rng r(7, 1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, IndexCoversRangeEvenly)
{
    Rng r(9, 2);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto k = r.index(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    for (int c : counts)
        EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
    EXPECT_THROW(r.index(0), std::invalid_argument);
}

TEST(Rng, NormalMoments)
{
    Rng r(11, 3);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s1 += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Normal, CdfAgainstSeries)
{
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -8.0 + 16.0 * i / 999.0;
        worst = std::max(worst, std::fabs(normal_cdf(x) - static_cast<double>(oracle::normal_cdf(x))));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Normal, QuantileAgainstSeries)
{
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = (i + 0.5) / 1000.0;
        worst = std::max(worst, std::fabs(normal_quantile(p) - static_cast<double>(oracle::normal_quantile(p))));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Normal, KnownValues)
{
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
    EXPECT_NEAR(normal_quantile(0.8), 0.8416212335729143, 1e-14);
    EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
}

TEST(Normal, QuantileInvertsCdf)
{
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9})
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-14 + 1e-12 * p);
}

TEST(Normal, QuantileDomain)
{
    EXPECT_THROW(normal_quantile(0.0), std::domain_error);
    EXPECT_THROW(normal_quantile(1.0), std::domain_error);
    EXPECT_THROW(normal_quantile(-0.1), std::domain_error);
    EXPECT_THROW(normal_quantile(std::nan("")), std::domain_error);
}
