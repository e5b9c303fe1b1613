#include "invsep/diophantine.hpp"
#include "invsep/error.hpp"
#include "invsep/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace invsep;
using namespace invsep::diophantine;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t lcm_oracle(const std::vector<RationalAngle>& as)
{
    std::uint64_t l = 1;
    for (const auto& a : as) {
        const auto period = static_cast<std::uint64_t>(a.den / std::gcd(a.num, a.den));
        l = std::lcm(l, period);
    }
    return l;
}

TEST(Diophantine, WrapAngle)
{
    EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(wrap_angle(kTwoPi + 1.0), 1.0, 1e-14);
    EXPECT_GE(wrap_angle(-1e-18), 0.0);
    EXPECT_LT(wrap_angle(-1e-18), kTwoPi);
}

TEST(Diophantine, ShortcutMatchesScanOnRandomRationals)
{
    Rng rng = make_rng(21, "rationals");
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 4);
        std::vector<RationalAngle> as;
        for (int j = 0; j < k; ++j) {
            const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 12);
            as.push_back({static_cast<std::int64_t>(rng() % den), den});
        }
        const auto set = make_rational_angle_set(as);
        const auto shortcut = rational_shortcut(set);
        EXPECT_EQ(shortcut, lcm_oracle(as));
        std::vector<double> raw;
        for (const auto& a : as)
            raw.push_back(kTwoPi * static_cast<double>(a.num) / static_cast<double>(a.den));
        EXPECT_EQ(simultaneous_return(make_angle_set(raw), 1e-12).m, shortcut);
        EXPECT_EQ(simultaneous_return(set, 1e-12).m, shortcut);
    }
}

TEST(Diophantine, IrrationalReturnIsMinimal)
{
    Rng rng = make_rng(21, "irrationals");
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> raw{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
        const auto set = make_angle_set(raw);
        const double tol = 0.3;
        const auto res = simultaneous_return(set, tol);
        EXPECT_LT(res.max_defect, tol);
        double direct = 0.0;
        for (double t : raw)
            direct = std::max(direct, std::abs(std::polar(1.0, t * static_cast<double>(res.m)) - 1.0));
        EXPECT_NEAR(direct, res.max_defect, 1e-9);
        for (std::uint64_t m = 1; m < res.m; ++m)
            EXPECT_GE(return_defect(set, m), tol);
    }
}

TEST(Diophantine, MinExponentRespected)
{
    const std::vector<RationalAngle> as{{1, 3}};
    const auto set = make_rational_angle_set(as);
    EXPECT_EQ(simultaneous_return(set, 1e-12, 100, 4).m, 6u);
}

TEST(Diophantine, ExhaustionThrows)
{
    const std::vector<double> raw{1.0};
    try {
        (void)simultaneous_return(make_angle_set(raw), 1e-12, 50);
        FAIL() << "expected ExponentExhausted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ExponentExhausted);
    }
}

TEST(Diophantine, ShortcutRequiresRationalFlags)
{
    const std::vector<double> raw{1.0};
    EXPECT_THROW((void)rational_shortcut(make_angle_set(raw)), Error);
}

TEST(Diophantine, ClusteringMergesAndFilters)
{
    const std::vector<Complex> values{std::polar(1.0, 0.5), std::polar(2.0, 0.5 + 1e-12), std::polar(0.1, 2.0),
                                      std::polar(1.0, kTwoPi - 1e-12), std::polar(1.0, 0.0)};
    const auto set = angle_cluster(values, 0.5);
    ASSERT_EQ(set.size(), 2u);
    std::size_t total = 0;
    for (auto m : set.multiplicity)
        total += m;
    EXPECT_EQ(total, 4u);
}

TEST(Diophantine, DuplicateAnglesDeduplicated)
{
    const std::vector<double> raw{1.0, 1.0 + 1e-12, 2.0};
    const auto set = make_angle_set(raw);
    EXPECT_EQ(set.size(), 2u);
}

} // namespace
