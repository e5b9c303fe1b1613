#include "internal.hpp"

#include "invsep/diophantine.hpp"
#include "invsep/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace invsep::casebook {

namespace {

bool relation_holds(const std::string& rel, double slack, double tol, double min_slack)
{
    if (rel == "<" || rel == ">")
        return slack > min_slack;
    if (rel == "<=" || rel == ">=")
        return slack >= -tol;
    return slack >= -tol; // "==": slack = −|lhs − rhs|
}

double signed_slack(const std::string& rel, double lhs, double rhs)
{
    if (rel == "<" || rel == "<=")
        return rhs - lhs;
    if (rel == ">" || rel == ">=")
        return lhs - rhs;
    if (rel == "==")
        return lhs == rhs ? 0.0 : -std::abs(lhs - rhs);
    fail(ErrorCode::InvalidArgument, "unknown relation '" + rel + "'");
}

} // namespace

bool CaseReport::overall_pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check& CaseReport::check(std::string desc, double lhs, const std::string& rel, double rhs, double tol, double min_slack)
{
    Check c;
    c.desc = std::move(desc);
    c.lhs = lhs;
    c.rel = rel;
    c.rhs = rhs;
    c.slack = signed_slack(rel, lhs, rhs);
    c.pass = relation_holds(rel, c.slack, tol, min_slack);
    checks.push_back(std::move(c));
    return checks.back();
}

Check& CaseReport::check_true(std::string desc, bool holds)
{
    return check(std::move(desc), holds ? 1.0 : 0.0, "==", 1.0);
}

SeparationOptions CaseContext::separation(std::string_view name) const
{
    SeparationOptions o;
    o.budget = budget;
    o.seed = stream(name);
    o.margin_tol = margin_tol;
    o.m_max = m_max;
    o.eta = eta;
    return o;
}

std::uint64_t CaseContext::stream(std::string_view name, std::uint64_t index) const
{
    return substream_seed(seed, name, index);
}

// ---------------------------------------------------------------- sequences

Complex TailSequence::coordinate(std::size_t j) const
{
    require(j >= 1, ErrorCode::InvalidArgument, "sequence coordinates are 1-based");
    if (j <= head.size())
        return head[j - 1];
    const double bj = std::pow(b, static_cast<double>(j));
    switch (rule) {
    case Rule::None:
        return 0.0;
    case Rule::Geometric:
        return c * bj;
    case Rule::Constant:
        return c;
    case Rule::Approach:
        return level - c * bj;
    case Rule::Bound:
        break;
    }
    fail(ErrorCode::InvalidArgument, "a bound-only tail has no explicit coordinates");
}

double TailSequence::tail_norm(double p) const
{
    const double first = std::pow(b, static_cast<double>(head.size() + 1));
    switch (rule) {
    case Rule::None:
        return 0.0;
    case Rule::Bound:
        return tau;
    case Rule::Geometric:
        if (std::isinf(p))
            return std::abs(c) * first;
        return std::abs(c) * first * std::pow(1.0 / (1.0 - std::pow(b, p)), 1.0 / p);
    case Rule::Constant:
        if (std::isinf(p) || c == 0.0)
            return std::abs(c);
        return kInfinity;
    case Rule::Approach:
        // The tail lies on the segment from level − c·b^{h+1} to level, so its sup sits at an end.
        if (std::isinf(p))
            return std::max(std::abs(level), std::abs(level - c * first));
        return level == 0.0 ? std::abs(c) * first * std::pow(1.0 / (1.0 - std::pow(b, p)), 1.0 / p) : kInfinity;
    }
    return kInfinity;
}

Complex TailSequence::tail_power_sum(unsigned k) const
{
    if (rule == Rule::None)
        return 0.0;
    require(rule == Rule::Geometric, ErrorCode::Unsupported, "power sums need a geometric or empty tail");
    const double bk = std::pow(b, static_cast<double>(k));
    Complex ck{1.0, 0.0};
    for (unsigned i = 0; i < k; ++i)
        ck *= c;
    return ck * std::pow(b, static_cast<double>(k) * static_cast<double>(head.size() + 1)) / (1.0 - bk);
}

double TailSequence::tail_abs_power_sum(double s) const
{
    if (rule == Rule::None)
        return 0.0;
    require(rule == Rule::Geometric, ErrorCode::Unsupported, "power sums need a geometric or empty tail");
    return std::pow(std::abs(c), s) * std::pow(b, s * static_cast<double>(head.size() + 1)) / (1.0 - std::pow(b, s));
}

double TailSequence::limsup() const
{
    switch (rule) {
    case Rule::None:
        fail(ErrorCode::InvalidArgument, "limsup is undefined from finite data: no tail rule given");
    case Rule::Bound:
        fail(ErrorCode::InvalidArgument, "limsup is undetermined by a tail bound alone");
    case Rule::Geometric:
        return 0.0;
    case Rule::Constant:
        return std::abs(c);
    case Rule::Approach:
        return std::abs(level);
    }
    return 0.0;
}

TailSequence parse_tail(const Json& j)
{
    TailSequence z;
    if (j.contains("head"))
        z.head = io::point_from_json(j.at("head"));
    const auto rule = j.value("rule", std::string("none"));
    if (rule == "none")
        z.rule = TailSequence::Rule::None;
    else if (rule == "geometric")
        z.rule = TailSequence::Rule::Geometric;
    else if (rule == "bound")
        z.rule = TailSequence::Rule::Bound;
    else if (rule == "constant")
        z.rule = TailSequence::Rule::Constant;
    else if (rule == "approach")
        z.rule = TailSequence::Rule::Approach;
    else
        fail(ErrorCode::Parse, "unknown tail rule '" + rule + "'");
    if (j.contains("c"))
        z.c = io::complex_from_json(j.at("c"));
    z.b = j.value("b", 0.5);
    z.tau = j.value("tau", 0.0);
    z.level = j.value("level", 1.0);
    if (z.rule == TailSequence::Rule::Geometric || z.rule == TailSequence::Rule::Approach)
        require(z.b > 0.0 && z.b < 1.0, ErrorCode::InvalidArgument, "tail base b must lie in (0, 1)");
    require(z.tau >= 0.0, ErrorCode::InvalidArgument, "tail bound must be non-negative");
    return z;
}

Json to_json(const TailSequence& z)
{
    static const char* names[] = {"none", "geometric", "bound", "constant", "approach"};
    Json out = {{"head", io::to_json(z.head)}, {"rule", names[static_cast<int>(z.rule)]}};
    switch (z.rule) {
    case TailSequence::Rule::Geometric:
        out["c"] = io::to_json(z.c);
        out["b"] = z.b;
        break;
    case TailSequence::Rule::Bound:
        out["tau"] = z.tau;
        break;
    case TailSequence::Rule::Constant:
        out["c"] = io::to_json(z.c);
        break;
    case TailSequence::Rule::Approach:
        out["level"] = z.level;
        out["c"] = io::to_json(z.c);
        out["b"] = z.b;
        break;
    case TailSequence::Rule::None:
        break;
    }
    return out;
}

Complex sorted_sum(std::vector<Complex> v)
{
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    Complex s{};
    for (Complex c : v)
        s += c;
    return s;
}

Complex StepFunction::moment(unsigned j) const
{
    std::vector<Complex> powers;
    powers.reserve(values.size());
    for (Complex a : values) {
        Complex t{1.0, 0.0};
        for (unsigned i = 0; i < j; ++i)
            t *= a;
        powers.push_back(t);
    }
    return sorted_sum(std::move(powers)) / std::ldexp(1.0, static_cast<int>(level));
}

double StepFunction::norm_p_power(double p) const
{
    std::vector<Complex> powers;
    for (Complex a : values)
        powers.emplace_back(std::pow(std::abs(a), p), 0.0);
    return sorted_sum(std::move(powers)).real() / std::ldexp(1.0, static_cast<int>(level));
}

// ---------------------------------------------------------------- shared helpers

namespace detail {

double generator_deviation(const Polynomial& p, const std::vector<GroupElement>& generators)
{
    double worst = 0.0;
    for (const auto& g : generators)
        worst = std::max(worst, max_coefficient_distance(compose_linear(p, g).with_field(p.field()), p));
    return worst;
}

PowerSearch power_search(std::span<const Complex> big, const std::function<double(unsigned)>& rest, double target,
                         unsigned m_min, unsigned m_max)
{
    PowerSearch out;
    out.big_count = big.size();
    std::vector<double> args;
    for (Complex v : big)
        args.push_back(std::arg(v));
    const auto set = diophantine::make_angle_set(args);
    std::uint64_t from = std::max(1u, m_min);
    while (from <= m_max) {
        diophantine::ReturnResult ret;
        try {
            ret = diophantine::simultaneous_return(set, 0.5, m_max, from);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExponentExhausted)
                throw;
            return out;
        }
        const auto m = static_cast<unsigned>(ret.m);
        double mass = 0.0;
        for (Complex v : big)
            mass += std::pow(std::abs(v), m);
        out.m = m;
        out.defect = ret.max_defect;
        out.lower_bound = (1.0 - ret.max_defect) * mass - rest(m);
        if (out.lower_bound > target) {
            out.found = true;
            return out;
        }
        from = ret.m + 1;
    }
    return out;
}

void record_verdict(CaseReport& rep, const Json& params, Verdict verdict, const std::string& fallback)
{
    rep.constants["verdict"] = to_string(verdict);
    const auto expected = param<std::string>(params, "expect", fallback);
    if (!expected.empty())
        rep.check_true("verdict is " + expected, expected == to_string(verdict));
}

} // namespace detail

// ---------------------------------------------------------------- registry

namespace {

std::vector<CaseEntry> build_suite()
{
    std::vector<CaseEntry> s;
    auto add = [&](std::string kind, std::string instance, Json params) {
        s.push_back({kind + "/" + instance, kind, std::move(params)});
    };
    for (int N : {2, 3})
        for (int k : {1, 2})
            add("counterexample", "N" + std::to_string(N) + "k" + std::to_string(k), {{"N", N}, {"k", k}});

    add("circle_nonseparation", "d16", {{"m_max", 16}});

    add("roots_unity", "first", {{"z", {{"head", {1.2, 0.0, 0.0}}, {"rule", "geometric"}, {"c", 0.01}, {"b", 0.5}}}, {"p", 2.0}});
    add("roots_unity", "second", {{"z", {{"head", {0.0, 1.2, 0.0}}, {"rule", "none"}}}, {"p", 2.0}});
    add("roots_unity", "third_complex",
        {{"z", {{"head", {0.3, Json::array({0.0, 0.4}), Json::array({0.9, 0.9})}}, {"rule", "none"}}}, {"p", "inf"}});
    add("roots_unity", "inside", {{"z", {{"head", {0.5, 0.3, 0.2}}, {"rule", "none"}}}, {"p", 2.0}, {"expect", "not_separated"}});

    add("power_sums", "direct", {{"z", {{"head", {1.5, 0.1, 0.1}}, {"rule", "none"}}}, {"p", 2.0}});
    add("power_sums", "complex_head",
        {{"z", {{"head", {0.3, Json::array({-0.6, 1.1}), Json::array({0.0, 0.2})}}, {"rule", "geometric"}, {"c", 0.5}, {"b", 0.5}}},
         {"p", 2.0}});
    add("power_sums", "bounded_m1", {{"bounded_m", 1}, {"p", 1.5}});
    add("power_sums", "bounded_m2", {{"bounded_m", 2}, {"p", 2.5}});
    add("power_sums", "nonnegative_integer_p", {{"z", {{"head", {0.8, 0.7, 0.3}}, {"rule", "none"}}}, {"p", 2.0}});

    add("block_permutations", "b1_b23", {{"blocks", {1, 2}}, {"z", {1.3, 0.0, 0.0}}, {"p", 2.0}});
    add("block_permutations", "b12", {{"blocks", {2}}, {"z", {1.2, 0.0}}, {"p", 2.0}});
    add("block_permutations", "b1_b23_second", {{"blocks", {1, 2}}, {"z", {0.2, 0.0, 1.3}}, {"p", 2.0}});
    add("block_permutations", "inside", {{"blocks", {1, 2}}, {"z", {0.5, 0.5, 0.1}}, {"p", 2.0}, {"expect", "not_separated"}});

    add("linf_limsup", "geometric", {{"z", {{"head", {2.0}}, {"rule", "geometric"}, {"c", 1.0}, {"b", 0.5}}}, {"expect", "not_separated"}});
    add("linf_limsup", "constant", {{"z", {{"head", {0.3}}, {"rule", "constant"}, {"c", 1.1}}}, {"expect", "separated"}});
    add("linf_limsup", "approach", {{"z", {{"head", {0.5}}, {"rule", "approach"}, {"level", 1.0}, {"c", 0.5}, {"b", 0.5}}}, {"expect", "not_separated"}});

    add("supersymmetric", "mirror", {{"n", 3}, {"z", {0.4, 1.5, 0.2, 0.4, 1.5, 0.2}}, {"p", 2.0}, {"k_max", 12}, {"expect", "not_separated"}});
    add("supersymmetric", "one_sided", {{"n", 3}, {"z", {1.4, 0.0, 0.0, 0.0, 0.0, 0.0}}, {"p", 2.0}, {"k_max", 12}, {"expect", "separated"}});
    add("supersymmetric", "minus_side",
        {{"n", 2}, {"z", {0.5, Json::array({0.0, 0.7}), Json::array({-0.9, 0.8}), 0.3}}, {"p", 2.0}, {"k_max", 12}, {"expect", "separated"}});

    add("c01", "endpoint", {{"g0", 1.2}, {"g1", -1.0}, {"expect", "separated"}});
    add("c01", "complex_endpoints", {{"g0", Json::array({0.6, 0.9})}, {"g1", Json::array({0.0, -0.8})}, {"expect", "separated"}});
    add("c01", "interior_peak", {{"g0", 0.5}, {"g1", Json::array({0.0, 0.9})}, {"t0", 0.4}, {"peak", 1.5}, {"expect", "not_separated"}});
    add("c01", "boundary", {{"g0", 1.0}, {"g1", 1.0}, {"expect", "not_separated"}});

    add("tshape", "branch_i", {{"g", {1.3, 0.0, 0.0, 0.0}}, {"expect", "separated"}});
    add("tshape", "branch_ii", {{"g", {0.0, Json::array({0.848528137423857, 0.848528137423857}), 1.0, 1.0}}, {"expect", "separated"}});
    add("tshape", "obstruction", {{"g", {0.9, Json::array({0.0, 1.0}), -0.5, 0.2}}, {"expect", "not_separated"}});

    add("lp01", "constant", {{"N", 0}, {"a", {1.3}}, {"p", 1.0}, {"k", 1}, {"expect", "separated"}});
    add("lp01", "alternating", {{"N", 1}, {"a", {2.0, -2.0}}, {"p", 2.0}, {"k", 2}, {"expect", "separated"}});
    add("lp01", "inside", {{"N", 2}, {"a", {0.5, -0.5, 0.9, 0.1}}, {"p", 3.0}, {"k", 3}, {"expect", "not_separated"}});
    return s;
}

} // namespace

const std::vector<CaseEntry>& suite()
{
    static const std::vector<CaseEntry> s = build_suite();
    return s;
}

CaseRunner runner(const std::string& kind)
{
    if (kind == "counterexample")
        return case_counterexample;
    if (kind == "circle_nonseparation")
        return case_circle_nonseparation;
    if (kind == "roots_unity")
        return case_roots_unity;
    if (kind == "power_sums")
        return case_power_sums;
    if (kind == "block_permutations")
        return case_block_permutations;
    if (kind == "linf_limsup")
        return case_linf_limsup;
    if (kind == "supersymmetric")
        return case_supersymmetric;
    if (kind == "c01")
        return case_c01;
    if (kind == "tshape")
        return case_tshape;
    if (kind == "lp01")
        return case_lp01;
    fail(ErrorCode::UnknownCase, "unknown case '" + kind + "'");
}

std::vector<CaseEntry> select(const std::vector<std::string>& selectors)
{
    if (selectors.empty())
        return suite();
    std::vector<CaseEntry> out;
    for (const auto& sel : selectors) {
        bool matched = false;
        for (const auto& e : suite())
            if (e.id == sel || e.kind == sel) {
                matched = true;
                if (std::none_of(out.begin(), out.end(), [&](const CaseEntry& o) { return o.id == e.id; }))
                    out.push_back(e);
            }
        require(matched, ErrorCode::UnknownCase, "unknown case id '" + sel + "'");
    }
    return out;
}

CaseReport run(const CaseEntry& entry, const CaseContext& ctx)
{
    CaseContext local = ctx;
    local.seed = substream_seed(ctx.seed, entry.id);
    CaseReport report;
    try {
        report = runner(entry.kind)(entry.params, local);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownCase)
            throw;
        report = CaseReport{};
        report.inputs = entry.params;
        report.check_true("construction completed without error", false);
        report.notes.push_back(e.what());
    }
    report.case_id = entry.id;
    return report;
}

std::vector<CaseReport> run_all(const std::vector<CaseEntry>& entries, const CaseContext& ctx, unsigned jobs)
{
    std::vector<CaseReport> out(entries.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < entries.size(); ++i)
            out[i] = run(entries[i], ctx);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(entries.size());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (auto i = next++; i < entries.size(); i = next++) {
                try {
                    out[i] = run(entries[i], ctx);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

Json to_json(const CaseReport& report)
{
    Json checks = Json::array();
    for (const auto& c : report.checks)
        checks.push_back(
            {{"desc", c.desc}, {"lhs", c.lhs}, {"rel", c.rel}, {"rhs", c.rhs}, {"slack", c.slack}, {"pass", c.pass}});
    return {{"case", report.case_id},
            {"inputs", report.inputs},
            {"constants", report.constants},
            {"checks", checks},
            {"pass", report.overall_pass()},
            {"notes", report.notes}};
}

} // namespace invsep::casebook
