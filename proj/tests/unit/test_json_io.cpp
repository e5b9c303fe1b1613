#include "support.hpp"

#include "invsep/error.hpp"
#include "invsep/json_io.hpp"

#include <gtest/gtest.h>

using namespace invsep;
using namespace testing_support;

namespace {

TEST(JsonIo, ComplexForms)
{
    EXPECT_EQ(io::complex_from_json(io::Json(2.5)), Complex(2.5));
    EXPECT_EQ(io::complex_from_json(io::Json::parse("[1, -2]")), Complex(1.0, -2.0));
    EXPECT_EQ(io::complex_from_json(io::Json::parse(R"({"re": 0, "im": 3})")), Complex(0.0, 3.0));
    EXPECT_TRUE(io::to_json(Complex(1.0)).is_number());
    EXPECT_TRUE(io::to_json(Complex(1.0, 1.0)).is_array());
}

TEST(JsonIo, PolynomialRoundTrip)
{
    Rng rng = make_rng(41, "json-poly");
    for (int i = 0; i < 10; ++i) {
        const auto p = random_polynomial(rng, 1 + i % 4, 5, 7, i % 2 == 0);
        const auto text = io::to_json(p).dump();
        const auto back = io::polynomial_from_json(io::parse(text));
        EXPECT_EQ(back, p);
        EXPECT_EQ(io::to_json(back).dump(), text);
    }
}

TEST(JsonIo, GroupSpecRoundTrip)
{
    for (const auto& spec : {GroupSpec::sym(3), GroupSpec::roots_of_unity(4), GroupSpec::roots_of_unity_generated(2),
                             GroupSpec::block_permutations({1, 2, 2}), GroupSpec::signed_index(2), GroupSpec::dyadic(2),
                             GroupSpec::circle(2, {1}, 9), GroupSpec::trivial(2),
                             GroupSpec::from_generators({GroupElement::transposition(3, 0, 2)})}) {
        const auto j = io::to_json(spec);
        const auto back = io::group_spec_from_json(j);
        EXPECT_EQ(io::to_json(back).dump(), j.dump());
        EXPECT_EQ(group_size(realize(back)), group_size(realize(spec)));
    }
}

TEST(JsonIo, ElementRoundTrip)
{
    const std::vector<GroupElement> els{
        GroupElement::permutation({2, 0, 1}), GroupElement::signed_permutation({1, 0}, {-1, 1}),
        GroupElement::diagonal_phases({Phase::make(1, 3), Phase::make(0, 1)}),
        GroupElement::dense(2, {Complex(0.0), Complex(1.0), Complex(1.0), Complex(0.0)})};
    for (const auto& e : els)
        EXPECT_EQ(io::element_from_json(io::to_json(e)).key(), e.key());
}

TEST(JsonIo, SetSpecRoundTrip)
{
    const std::vector<SetSpec> sets{LpBall{3, kInfinity, 2.0, Field::Complex}, LpBall{2, 1.5, 1.0, Field::Real},
                                    PointCloud{{{Complex(1.0), Complex(0.0, 1.0)}}}, NamedCase{"c01", R"({"g0":1.2})"}};
    for (const auto& k : sets) {
        const auto j = io::to_json(k);
        EXPECT_EQ(io::to_json(io::set_spec_from_json(j)).dump(), j.dump());
    }
    EXPECT_EQ(io::to_json(sets[0])["p"], "inf");
}

TEST(JsonIo, ParseErrorsMapToParse)
{
    try {
        (void)io::parse("{not json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
    }
    EXPECT_THROW((void)io::group_spec_from_json(io::parse(R"({"kind":"nope"})")), Error);
    EXPECT_THROW((void)io::polynomial_from_json(io::parse(R"({"dim":2,"terms":[{"exp":[1],"re":1}]})")), Error);
}

TEST(JsonIo, ReportCarriesVerdictAndSteps)
{
    SeparationReport r;
    r.verdict = Verdict::Separated;
    r.m = 2;
    r.power = 4;
    r.steps.push_back({1, 2, 0.5, 0.4, -0.1});
    r.steps.push_back({2, 4, 0.25, 0.3, 0.05});
    const auto j = io::to_json(r);
    EXPECT_EQ(j["verdict"], "separated");
    EXPECT_EQ(j["m"], 2);
    const auto csv = io::steps_csv(r);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

} // namespace
