#include "invsep/invsep.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <string>

namespace {

using Json = nlohmann::json;

std::string take(char* s)
{
    std::string out = s ? s : "";
    invsep_string_free(s);
    return out;
}

TEST(CApi, VersionAndStatusNames)
{
    EXPECT_STRNE(invsep_version(), "");
    EXPECT_STREQ(invsep_status_name(INVSEP_OK), "ok");
    EXPECT_STRNE(invsep_status_name(INVSEP_E_PARSE), invsep_status_name(INVSEP_E_INTERNAL));
}

TEST(CApi, PolynomialLifecycle)
{
    invsep_polynomial* p = nullptr;
    ASSERT_EQ(invsep_polynomial_from_json(R"({"dim":2,"field":"R","terms":[{"exp":[2,0],"re":1},{"exp":[0,1],"re":-3}]})", &p),
              INVSEP_OK);
    size_t n = 0;
    EXPECT_EQ(invsep_polynomial_dimension(p, &n), INVSEP_OK);
    EXPECT_EQ(n, 2u);
    const double x[2] = {2.0, 1.0};
    double re = 0, im = 0;
    ASSERT_EQ(invsep_polynomial_eval(p, x, nullptr, 2, &re, &im), INVSEP_OK);
    EXPECT_DOUBLE_EQ(re, 1.0);
    EXPECT_DOUBLE_EQ(im, 0.0);
    EXPECT_EQ(invsep_polynomial_eval(p, x, nullptr, 3, &re, &im), INVSEP_E_DIMENSION_MISMATCH);
    EXPECT_NE(std::string(invsep_last_error()), "");
    char* text = nullptr;
    ASSERT_EQ(invsep_polynomial_to_json(p, &text), INVSEP_OK);
    EXPECT_EQ(Json::parse(take(text))["dim"], 2);
    invsep_polynomial_free(p);
    invsep_polynomial_free(nullptr);
}

TEST(CApi, ErrorsOnBadInput)
{
    invsep_polynomial* p = nullptr;
    EXPECT_EQ(invsep_polynomial_from_json("{oops", &p), INVSEP_E_PARSE);
    EXPECT_EQ(p, nullptr);
    EXPECT_EQ(invsep_polynomial_from_json(nullptr, &p), INVSEP_E_INVALID_ARGUMENT);
    invsep_group* g = nullptr;
    EXPECT_EQ(invsep_group_from_json(R"({"kind":"symN","n":9})", &g), INVSEP_E_GROUP_TOO_LARGE);
    size_t n = 0;
    EXPECT_EQ(invsep_group_order(nullptr, &n), INVSEP_E_INVALID_ARGUMENT);
}

TEST(CApi, SymmetrizeAndInvariance)
{
    invsep_polynomial* q = nullptr;
    invsep_group* g = nullptr;
    ASSERT_EQ(invsep_polynomial_from_json(R"({"dim":3,"field":"R","terms":[{"exp":[2,0,0],"re":1}]})", &q), INVSEP_OK);
    ASSERT_EQ(invsep_group_from_json(R"({"kind":"symN","n":3})", &g), INVSEP_OK);
    size_t order = 0;
    EXPECT_EQ(invsep_group_order(g, &order), INVSEP_OK);
    EXPECT_EQ(order, 6u);
    char* desc = nullptr;
    ASSERT_EQ(invsep_group_describe(g, &desc), INVSEP_OK);
    EXPECT_EQ(Json::parse(take(desc))["kind"], "symN");

    invsep_polynomial* p = nullptr;
    ASSERT_EQ(invsep_symmetrize(q, g, 2, &p), INVSEP_OK);
    const double x[3] = {1.0, 2.0, 3.0};
    double re = 0, im = 0, re2 = 0, im2 = 0;
    ASSERT_EQ(invsep_polynomial_eval(p, x, nullptr, 3, &re, &im), INVSEP_OK);
    ASSERT_EQ(invsep_symmetrize_eval(q, g, 2, x, nullptr, 3, &re2, &im2), INVSEP_OK);
    EXPECT_NEAR(re, (1.0 + 16.0 + 81.0) / 3.0, 1e-12);
    EXPECT_NEAR(re, re2, 1e-12);
    double dev = 1.0;
    ASSERT_EQ(invsep_verify_invariance(p, g, 20, 3, &dev), INVSEP_OK);
    EXPECT_LT(dev, 1e-10);
    ASSERT_EQ(invsep_verify_invariance(q, g, 20, 3, &dev), INVSEP_OK);
    EXPECT_GT(dev, 1e-3);
    invsep_polynomial_free(p);
    invsep_polynomial_free(q);
    invsep_group_free(g);
}

TEST(CApi, OptionsValidation)
{
    invsep_options* o = nullptr;
    ASSERT_EQ(invsep_options_new(&o), INVSEP_OK);
    EXPECT_EQ(invsep_options_set_eta(o, 1.5), INVSEP_E_INVALID_ARGUMENT);
    EXPECT_EQ(invsep_options_set_eta(o, 0.5), INVSEP_OK);
    EXPECT_EQ(invsep_options_set_budget(o, 0), INVSEP_E_INVALID_ARGUMENT);
    EXPECT_EQ(invsep_options_set_m_max(o, 0), INVSEP_E_INVALID_ARGUMENT);
    EXPECT_EQ(invsep_options_set_seed(o, 9), INVSEP_OK);
    invsep_options_free(o);
}

TEST(CApi, SeparateVerdicts)
{
    invsep_options* o = nullptr;
    ASSERT_EQ(invsep_options_new(&o), INVSEP_OK);
    invsep_options_set_budget(o, 4000);
    const char* sep = R"({"q":{"dim":2,"field":"R","terms":[{"exp":[1,0],"re":1}]},
                         "group":{"kind":"symN","n":2},
                         "set":{"kind":"lp_ball","dim":2,"p":2,"radius":1,"field":"R"},
                         "z":[2,0]})";
    char* report = nullptr;
    invsep_verdict v = INVSEP_INCONCLUSIVE;
    ASSERT_EQ(invsep_separate(sep, o, &report, &v), INVSEP_OK) << invsep_last_error();
    EXPECT_EQ(v, INVSEP_SEPARATED);
    const auto j = Json::parse(take(report));
    EXPECT_EQ(j["verdict"], "separated");
    EXPECT_GT(j["margin"].get<double>(), 0.0);

    const char* circle = R"({"q":{"dim":1,"field":"C","terms":[{"exp":[1],"re":1}]},
                            "group":{"kind":"circle"},
                            "set":{"kind":"lp_ball","dim":1,"p":2,"radius":1,"field":"C"},
                            "z":[2]})";
    ASSERT_EQ(invsep_separate(circle, o, &report, &v), INVSEP_OK) << invsep_last_error();
    EXPECT_EQ(v, INVSEP_NOT_SEPARATED);
    invsep_string_free(report);
    EXPECT_EQ(invsep_separate(R"({"q":1})", o, &report, &v), INVSEP_E_PARSE);
    invsep_options_free(o);
}

TEST(CApi, CasebookRunMatchesIdsAndIsRepeatable)
{
    char* ids = nullptr;
    ASSERT_EQ(invsep_casebook_ids(&ids), INVSEP_OK);
    const auto list = Json::parse(take(ids));
    ASSERT_TRUE(list.is_array());
    EXPECT_GT(list.size(), 20u);

    invsep_options* o = nullptr;
    ASSERT_EQ(invsep_options_new(&o), INVSEP_OK);
    char* a = nullptr;
    char* b = nullptr;
    int all_pass = 0;
    ASSERT_EQ(invsep_casebook_run(R"(["counterexample","circle_nonseparation"])", o, &a, &all_pass), INVSEP_OK);
    EXPECT_EQ(all_pass, 1);
    ASSERT_EQ(invsep_casebook_run(R"(["counterexample","circle_nonseparation"])", o, &b, &all_pass), INVSEP_OK);
    const std::string sa = take(a), sb = take(b);
    EXPECT_EQ(sa, sb);
    EXPECT_EQ(Json::parse(sa)["summary"]["failed"], 0);
    EXPECT_EQ(invsep_casebook_run(R"(["nope"])", o, &a, &all_pass), INVSEP_E_UNKNOWN_CASE);
    invsep_options_free(o);
}

} // namespace
