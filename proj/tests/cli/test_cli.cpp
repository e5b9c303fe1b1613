#include "invsep/invsep.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

using Json = nlohmann::json;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args, const std::string& env = "env -u INVSEP_SEED")
{
    const std::string cmd = env + " " + std::string(INVSEP_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& content)
{
    const std::string path = std::string(INVSEP_TEST_TMP) + "/" + name;
    std::ofstream(path) << content;
    return path;
}

TEST(Cli, HelpAndUsageErrors)
{
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("nonsense-subcommand").code, 2);
    EXPECT_EQ(run("casebook --case no_such_case").code, 2);
    EXPECT_EQ(run("symmetrize --poly '{bad' --group '{\"kind\":\"symN\",\"n\":2}'").code, 2);
}

TEST(Cli, CasebookListMatchesLibrary)
{
    const auto r = run("casebook --list");
    ASSERT_EQ(r.code, 0);
    char* ids = nullptr;
    ASSERT_EQ(invsep_casebook_ids(&ids), INVSEP_OK);
    const auto lib = Json::parse(ids);
    invsep_string_free(ids);
    std::string expected;
    for (const auto& id : lib)
        expected += id.get<std::string>() + "\n";
    EXPECT_EQ(r.out, expected);
}

TEST(Cli, CasebookOutputEqualsLibraryOutput)
{
    const auto r = run("casebook --case c01/endpoint --seed 5");
    ASSERT_EQ(r.code, 0);
    invsep_options* o = nullptr;
    ASSERT_EQ(invsep_options_new(&o), INVSEP_OK);
    invsep_options_set_seed(o, 5);
    char* lib = nullptr;
    int all = 0;
    ASSERT_EQ(invsep_casebook_run(R"(["c01/endpoint"])", o, &lib, &all), INVSEP_OK);
    EXPECT_EQ(Json::parse(r.out), Json::parse(lib));
    invsep_string_free(lib);
    invsep_options_free(o);
}

TEST(Cli, SeedPrecedence)
{
    const auto cfg = temp_file("cli_seed.json", R"({"seed": 77})");
    const auto from_cfg = Json::parse(run("casebook --case circle_nonseparation --config " + cfg).out);
    EXPECT_EQ(from_cfg["seed"], 77);
    const auto flag = Json::parse(run("casebook --case circle_nonseparation --config " + cfg + " --seed 3").out);
    EXPECT_EQ(flag["seed"], 3);
    EXPECT_EQ(Json::parse(run("casebook --case circle_nonseparation").out)["seed"], 42);
    const auto env = Json::parse(run("casebook --case circle_nonseparation", "env INVSEP_SEED=11").out);
    EXPECT_EQ(env["seed"], 11);
    const auto over_env = Json::parse(run("casebook --case circle_nonseparation --config " + cfg, "env INVSEP_SEED=11").out);
    EXPECT_EQ(over_env["seed"], 77);
}

TEST(Cli, CsvFormat)
{
    const auto r = run("casebook --case circle_nonseparation --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("case,desc,lhs,rel,rhs,slack,pass", 0), 0u);
}

TEST(Cli, SymmetrizeSymbolicAndNumeric)
{
    const std::string poly = R"('{"dim":3,"field":"R","terms":[{"exp":[2,0,0],"re":1}]}')";
    const std::string group = R"('{"kind":"symN","n":3}')";
    const auto sym = run("symmetrize --poly " + poly + " --group " + group);
    ASSERT_EQ(sym.code, 0);
    const auto p = Json::parse(sym.out);
    ASSERT_EQ(p["terms"].size(), 3u);
    for (const auto& t : p["terms"])
        EXPECT_NEAR(t["re"].get<double>(), 1.0 / 3.0, 1e-15);

    const auto num = run("symmetrize --poly " + poly + " --group " + group + " -m 2 --at '[1,2,3]'");
    ASSERT_EQ(num.code, 0);
    const auto v = Json::parse(num.out);
    EXPECT_NEAR(v["value"].get<double>(), 98.0 / 3.0, 1e-12);

    const auto overflow = run("symmetrize --poly " + poly + " --group " + group + " -m 40");
    EXPECT_EQ(overflow.code, 3);
}

TEST(Cli, SeparateExitCodes)
{
    const auto yes = temp_file("cli_sep.json", R"({"q":{"dim":1,"field":"R","terms":[{"exp":[1],"re":1}]},
        "group":{"kind":"trivial","dim":1},
        "set":{"kind":"lp_ball","dim":1,"p":2,"radius":1,"field":"R"},"z":[2]})");
    const auto r = run("separate --request " + yes);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["verdict"], "separated");
    const auto csv = run("separate --request " + yes + " --format csv");
    EXPECT_EQ(csv.out.rfind("m,power,sup,value,margin", 0), 0u);

    const auto no = temp_file("cli_circle.json", R"({"q":{"dim":1,"field":"C","terms":[{"exp":[1],"re":1}]},
        "group":{"kind":"circle"},
        "set":{"kind":"lp_ball","dim":1,"p":2,"radius":1,"field":"C"},"z":[2]})");
    const auto n = run("separate --request " + no);
    EXPECT_EQ(n.code, 1);
    EXPECT_EQ(Json::parse(n.out)["verdict"], "not_separated");
}

} // namespace
