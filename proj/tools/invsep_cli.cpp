#include "invsep/invsep.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCapability = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
    ApiError(invsep_status s, const std::string& what) : std::runtime_error(what), status(s) {}
    invsep_status status;
};

void check(invsep_status s)
{
    if (s != INVSEP_OK)
        throw ApiError(s, std::string(invsep_status_name(s)) + ": " + invsep_last_error());
}

int exit_code(invsep_status s)
{
    switch (s) {
    case INVSEP_E_DEGREE_OVERFLOW:
    case INVSEP_E_EXPONENT_EXHAUSTED:
    case INVSEP_E_GROUP_TOO_LARGE:
    case INVSEP_E_UNSUPPORTED:
    case INVSEP_E_NOT_INVERTIBLE:
        return kCapability;
    default:
        return kUsage;
    }
}

/// Takes a value that is either inline JSON or a path to a JSON file.
Json load_json(const std::string& arg)
{
    std::string text = arg;
    if (arg.empty() || (arg.front() != '{' && arg.front() != '[')) {
        std::ifstream in(arg);
        if (!in)
            throw UsageError("cannot read '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("invalid JSON in '" + arg + "': " + e.what());
    }
}

std::string owned(char* s)
{
    std::string out(s);
    invsep_string_free(s);
    return out;
}

std::string csv_field(const Json& v)
{
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_null())
        return "";
    return v.dump();
}

struct Config {
    std::string config_path;
    std::vector<std::string> cases;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> budget;
    std::optional<unsigned> m_max;
    std::optional<double> margin_tol;
    std::optional<double> eta;
    std::string format;
    std::string out;
    std::optional<unsigned> jobs;

    // symmetrize
    std::string poly;
    std::string group;
    std::optional<unsigned> m;
    std::string at;
    // separate
    std::string request;
    bool list = false;

    Json file = Json::object();

    template <class T>
    T pick(const std::optional<T>& flag, const char* key, T fallback) const
    {
        if (flag)
            return *flag;
        if (file.contains(key))
            return file.at(key).get<T>();
        return fallback;
    }

    std::string pick_str(const std::string& flag, const char* key, const std::string& fallback) const
    {
        if (!flag.empty())
            return flag;
        if (file.contains(key))
            return file.at(key).get<std::string>();
        return fallback;
    }
};

struct OptionsHandle {
    invsep_options* o = nullptr;
    ~OptionsHandle() { invsep_options_free(o); }
};

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("INVSEP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("INVSEP_SEED must be a non-negative integer");
        }
    }
    return 42;
}

void make_options(const Config& c, OptionsHandle& h)
{
    check(invsep_options_new(&h.o));
    check(invsep_options_set_seed(h.o, c.pick<std::uint64_t>(c.seed, "seed", default_seed())));
    check(invsep_options_set_budget(h.o, c.pick<std::size_t>(c.budget, "budget", 20000)));
    check(invsep_options_set_m_max(h.o, c.pick<unsigned>(c.m_max, "m_max", 200)));
    check(invsep_options_set_margin_tol(h.o, c.pick<double>(c.margin_tol, "margin_tol", 1e-6)));
    if (c.eta || c.file.contains("eta"))
        check(invsep_options_set_eta(h.o, c.pick<double>(c.eta, "eta", 0.5)));
    check(invsep_options_set_jobs(h.o, c.pick<unsigned>(c.jobs, "jobs", 1)));
}

void emit(const Config& c, const std::string& text)
{
    const std::string path = c.pick_str(c.out, "out", "");
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot write '" + path + "'");
    f << text;
}

std::string format_of(const Config& c)
{
    const auto f = c.pick_str(c.format, "format", "json");
    if (f != "json" && f != "csv")
        throw UsageError("--format must be json or csv");
    return f;
}

struct PolyHandle {
    invsep_polynomial* p = nullptr;
    ~PolyHandle() { invsep_polynomial_free(p); }
};

struct GroupHandle {
    invsep_group* g = nullptr;
    ~GroupHandle() { invsep_group_free(g); }
};

int cmd_symmetrize(const Config& c)
{
    const Json poly = c.poly.empty() ? c.file.value("poly", Json()) : load_json(c.poly);
    const Json group = c.group.empty() ? c.file.value("group", Json()) : load_json(c.group);
    if (poly.is_null() || group.is_null())
        throw UsageError("symmetrize needs --poly and --group");
    const unsigned m = c.pick<unsigned>(c.m, "m", 1);
    PolyHandle q;
    GroupHandle g;
    check(invsep_polynomial_from_json(poly.dump().c_str(), &q.p));
    check(invsep_group_from_json(group.dump().c_str(), &g.g));

    const Json at = c.at.empty() ? c.file.value("at", Json()) : load_json(c.at);
    if (!at.is_null()) {
        if (!at.is_array())
            throw UsageError("--at must be a JSON array of coordinates");
        std::vector<double> re;
        std::vector<double> im;
        for (const auto& v : at) {
            if (v.is_array() && v.size() == 2) {
                re.push_back(v[0].get<double>());
                im.push_back(v[1].get<double>());
            } else if (v.is_number()) {
                re.push_back(v.get<double>());
                im.push_back(0.0);
            } else {
                throw UsageError("--at coordinates are numbers or [re, im] pairs");
            }
        }
        double vr = 0.0;
        double vi = 0.0;
        check(invsep_symmetrize_eval(q.p, g.g, m, re.data(), im.data(), re.size(), &vr, &vi));
        const Json out = {{"m", m}, {"value", vi == 0.0 ? Json(vr) : Json::array({vr, vi})}};
        emit(c, out.dump(2) + "\n");
        return kOk;
    }

    PolyHandle result;
    const auto s = invsep_symmetrize(q.p, g.g, m, &result.p);
    if (s == INVSEP_E_DEGREE_OVERFLOW)
        throw ApiError(s, std::string("degree overflow: ") + invsep_last_error() +
                              "; evaluate pointwise with --at (numeric mode) instead");
    check(s);
    char* text = nullptr;
    check(invsep_polynomial_to_json(result.p, &text));
    emit(c, Json::parse(owned(text)).dump(2) + "\n");
    return kOk;
}

int cmd_separate(const Config& c)
{
    Json request;
    if (!c.request.empty())
        request = load_json(c.request);
    else if (c.file.contains("request"))
        request = c.file.at("request");
    else
        request = c.file;
    for (const char* key : {"q", "group", "set", "z"})
        if (!request.contains(key))
            throw UsageError(std::string("separate request is missing '") + key + "'");
    OptionsHandle opts;
    make_options(c, opts);
    char* text = nullptr;
    invsep_verdict verdict = INVSEP_INCONCLUSIVE;
    check(invsep_separate(request.dump().c_str(), opts.o, &text, &verdict));
    const Json report = Json::parse(owned(text));
    if (format_of(c) == "csv") {
        std::string csv = "m,power,sup,value,margin\n";
        for (const auto& s : report.value("steps", Json::array()))
            csv += csv_field(s.at("m")) + "," + csv_field(s.at("power")) + "," + csv_field(s.at("sup")) + "," +
                   csv_field(s.at("value")) + "," + csv_field(s.at("margin")) + "\n";
        emit(c, csv);
    } else {
        emit(c, report.dump(2) + "\n");
    }
    std::cerr << "verdict: " << report.at("verdict").get<std::string>() << "\n";
    return verdict == INVSEP_SEPARATED ? kOk : kNegative;
}

int cmd_casebook(const Config& c)
{
    if (c.list) {
        char* ids = nullptr;
        check(invsep_casebook_ids(&ids));
        std::string lines;
        for (const auto& id : Json::parse(owned(ids)))
            lines += id.get<std::string>() + "\n";
        emit(c, lines);
        return kOk;
    }
    std::vector<std::string> cases = c.cases;
    if (cases.empty() && c.file.contains("case")) {
        const auto& v = c.file.at("case");
        if (v.is_string())
            cases.push_back(v.get<std::string>());
        else
            cases = v.get<std::vector<std::string>>();
    }
    OptionsHandle opts;
    make_options(c, opts);
    char* text = nullptr;
    int all_pass = 0;
    const std::string selectors = cases.empty() ? std::string() : Json(cases).dump();
    check(invsep_casebook_run(cases.empty() ? nullptr : selectors.c_str(), opts.o, &text, &all_pass));
    const std::string body = owned(text);
    const Json run = Json::parse(body);

    if (format_of(c) == "csv") {
        std::string csv = "case,desc,lhs,rel,rhs,slack,pass\n";
        for (const auto& r : run.at("cases"))
            for (const auto& k : r.at("checks"))
                csv += csv_field(r.at("case")) + "," + csv_field(k.at("desc")) + "," + csv_field(k.at("lhs")) + "," +
                       csv_field(k.at("rel")) + "," + csv_field(k.at("rhs")) + "," + csv_field(k.at("slack")) + "," +
                       (k.at("pass").get<bool>() ? "true" : "false") + "\n";
        emit(c, csv);
    } else {
        emit(c, body + "\n");
    }
    for (const auto& r : run.at("cases"))
        std::cerr << (r.at("pass").get<bool>() ? "PASS " : "FAIL ") << r.at("case").get<std::string>() << "\n";
    const auto& s = run.at("summary");
    std::cerr << s.at("passed").get<std::size_t>() << "/" << s.at("total").get<std::size_t>() << " cases passed\n";
    return all_pass ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Invariant polynomial separation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;

    app.add_option("--config", c.config_path, "JSON config file; flags override its keys");
    app.add_option("--case", c.cases, "Case id or construction name (repeatable)");
    app.add_option("--seed", c.seed, "Master seed (default 42, or INVSEP_SEED)");
    app.add_option("--budget", c.budget, "Sample budget for sup estimates")->check(CLI::PositiveNumber);
    app.add_option("--m-max", c.m_max, "Largest exponent searched")->check(CLI::PositiveNumber);
    app.add_option("--margin-tol", c.margin_tol, "Minimum margin counted as separation")->check(CLI::PositiveNumber);
    app.add_option("--eta", c.eta, "Orbit-value cutoff for the complex search")->check(CLI::Range(0.0, 1.0));
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", c.out, "Output file (default stdout)");
    app.add_option("--jobs", c.jobs, "Parallel case workers")->check(CLI::PositiveNumber);

    auto* sym = app.add_subcommand("symmetrize", "Write S_G(Q) or the m-th symmetrization");
    sym->add_option("--poly", c.poly, "Polynomial JSON (inline or file)");
    sym->add_option("--group", c.group, "GroupSpec JSON (inline or file)");
    sym->add_option("-m,--m", c.m, "Symmetrization exponent")->check(CLI::PositiveNumber);
    sym->add_option("--at", c.at, "Evaluate numerically at this point instead of expanding");

    auto* sep = app.add_subcommand("separate", "Search for an invariant separating polynomial");
    sep->add_option("--request", c.request, "Request JSON {q, group, set, z} (inline or file)");

    auto* book = app.add_subcommand("casebook", "Run the constructions of the casebook");
    book->add_flag("--list", c.list, "List case ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (!c.config_path.empty()) {
            c.file = load_json(c.config_path);
            if (!c.file.is_object())
                throw UsageError("--config must hold a JSON object");
        }
        if (sym->parsed())
            return cmd_symmetrize(c);
        if (sep->parsed())
            return cmd_separate(c);
        return cmd_casebook(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.status);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return kUsage;
    }
}
