#include "support.hpp"

#include "invsep/error.hpp"
#include "invsep/group_spec.hpp"
#include "invsep/groups.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace invsep;
using namespace testing_support;

namespace {

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

FiniteGroup finite(AveragingGroup g) { return std::get<FiniteGroup>(std::move(g)); }

Complex ipow_test(Complex b, int e)
{
    Complex r{1.0, 0.0};
    for (int k = 0; k < e; ++k)
        r *= b;
    return r;
}

void expect_closed(const FiniteGroup& g)
{
    std::set<ElementKey> keys;
    for (const auto& e : g.elements())
        keys.insert(e.key());
    ASSERT_EQ(keys.size(), g.order());
    for (const auto& a : g.elements()) {
        EXPECT_TRUE(keys.count(a.inverse().key()));
        for (const auto& b : g.elements())
            EXPECT_TRUE(keys.count(a.compose(b).key()));
    }
}

TEST(Groups, KnownOrders)
{
    for (std::size_t n = 1; n <= 5; ++n) {
        EXPECT_EQ(group_size(realize(GroupSpec::sym(n))), factorial(n));
        EXPECT_EQ(group_size(realize(GroupSpec::roots_of_unity(n))), factorial(n));
    }
    for (std::size_t n = 1; n <= 3; ++n) {
        EXPECT_EQ(group_size(realize(GroupSpec::roots_of_unity_generated(n))), factorial(n));
        EXPECT_EQ(group_size(realize(GroupSpec::signed_index(n))), factorial(n) * factorial(n));
    }
    EXPECT_EQ(group_size(realize(GroupSpec::block_permutations({1, 2, 3}))), 12u);
    EXPECT_EQ(group_size(realize(GroupSpec::dyadic(2))), 24u);
    EXPECT_EQ(group_size(realize(GroupSpec::trivial(3))), 1u);
}

TEST(Groups, ClosureAndInverses)
{
    expect_closed(finite(realize(GroupSpec::sym(4))));
    expect_closed(finite(realize(GroupSpec::roots_of_unity(3))));
    expect_closed(finite(realize(GroupSpec::signed_index(2))));
    expect_closed(finite(realize(GroupSpec::block_permutations({2, 2}))));
}

TEST(Groups, RealityOfTruncations)
{
    EXPECT_TRUE(group_is_real(realize(GroupSpec::sym(3))));
    EXPECT_TRUE(group_is_real(realize(GroupSpec::signed_index(2))));
    EXPECT_TRUE(group_is_real(realize(GroupSpec::roots_of_unity(2))));
    EXPECT_FALSE(group_is_real(realize(GroupSpec::roots_of_unity(3))));
}

TEST(Groups, ElementApplyMatchesMatrix)
{
    Rng rng = make_rng(5, "groups-apply");
    const auto g = finite(realize(GroupSpec::roots_of_unity(3)));
    const auto x = random_point(rng, 3);
    for (const auto& e : g.elements()) {
        const auto m = e.matrix();
        const auto y = e.apply(x);
        for (std::size_t i = 0; i < 3; ++i) {
            Complex s{};
            for (std::size_t j = 0; j < 3; ++j)
                s += m[i * 3 + j] * x[j];
            EXPECT_LT(std::abs(s - y[i]), 1e-14);
        }
        const auto back = e.inverse().apply(y);
        EXPECT_LT(distance(back, x), 1e-13);
    }
}

TEST(Groups, ComposeLinearMatchesApply)
{
    Rng rng = make_rng(5, "groups-compose");
    const auto g = finite(realize(GroupSpec::roots_of_unity(4)));
    const auto p = random_polynomial(rng, 4, 4, 6);
    const auto x = random_point(rng, 4);
    for (const auto& e : g.elements())
        EXPECT_LT(rel_err(compose_linear(p, e).eval(x), naive_eval(p, e.apply(x))), 1e-12);
}

TEST(Groups, CapRaisesGroupTooLarge)
{
    try {
        (void)realize(GroupSpec::sym(6), 100);
        FAIL() << "expected GroupTooLarge";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GroupTooLarge);
    }
}

TEST(Groups, FiniteGroupRejectsNonClosedList)
{
    std::vector<GroupElement> els{GroupElement::identity(3), GroupElement::permutation({1, 2, 0})};
    EXPECT_THROW(FiniteGroup(3, els), Error);
}

TEST(Groups, GenericOrbitHasGroupOrder)
{
    Rng rng = make_rng(5, "groups-orbit");
    const auto g = finite(realize(GroupSpec::sym(3)));
    EXPECT_EQ(orbit(g, random_point(rng, 3)).size(), 6u);
    const Point fixed{Complex(1.0), Complex(1.0), Complex(2.0)};
    EXPECT_EQ(orbit(g, fixed).size(), 3u);
}

TEST(Groups, ProjectionOfRootsOfUnityIsGroup)
{
    const auto g = finite(realize(GroupSpec::roots_of_unity(3)));
    for (std::size_t j = 1; j <= 3; ++j) {
        const auto pr = project_group(g, j);
        EXPECT_TRUE(pr.is_group);
        EXPECT_EQ(pr.elements.size(), factorial(j));
    }
}

TEST(Groups, ProjectionOfCycleIsNotGroup)
{
    const auto g = generate_group({GroupElement::permutation({1, 2, 0})});
    const auto pr = project_group(g, 2);
    EXPECT_FALSE(pr.is_group);
    EXPECT_TRUE(pr.witness.has_value());
}

TEST(Groups, TorusQuadratureExactBelowOrder)
{
    const auto t = TorusGroup::circle(default_quadrature_order(4));
    EXPECT_EQ(t.quadrature_order, 17u);
    const AveragingGroup g = t;
    for (int d = 0; d < 17; ++d) {
        const Complex avg = haar_average(
            [&](const GroupElement& e) {
                const Point one{Complex(1.0)};
                return ipow_test(e.apply(one)[0], d);
            },
            g);
        EXPECT_LT(std::abs(avg - (d == 0 ? Complex(1.0) : Complex(0.0))), 1e-13) << "d=" << d;
    }
}

TEST(Groups, HaarAverageOfConstantIsOne)
{
    for (const auto& spec : {GroupSpec::sym(4), GroupSpec::roots_of_unity(2), GroupSpec::circle()}) {
        const auto g = realize(spec);
        EXPECT_NEAR(std::abs(haar_average([](const GroupElement&) { return Complex(1.0); }, g) - 1.0), 0.0, 1e-14);
    }
}

TEST(Groups, InvarianceOfSymmetricFunction)
{
    const auto g = realize(GroupSpec::sym(3));
    const auto x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1), z = Polynomial::variable(3, 2);
    EXPECT_LT(verify_invariance(g, x * y * z + x + y + z, 50, 1).max_deviation, 1e-12);
    EXPECT_GT(verify_invariance(g, x, 50, 1).max_deviation, 1e-3);
}

TEST(Groups, SetInvarianceOfOrbitCloud)
{
    const auto g = finite(realize(GroupSpec::sym(3)));
    const Point z{Complex(0.1), Complex(0.2), Complex(0.3)};
    EXPECT_TRUE(verify_set_invariance(g, orbit(g, z), 1e-12).invariant);
    EXPECT_FALSE(verify_set_invariance(g, {z}, 1e-12).invariant);
}

} // namespace
