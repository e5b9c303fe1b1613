#include "invsep/invsep.h"

#include "invsep/casebook.hpp"
#include "invsep/error.hpp"
#include "invsep/group_spec.hpp"
#include "invsep/json_io.hpp"
#include "invsep/symmetrize.hpp"

#include <cstring>
#include <new>
#include <string>

struct invsep_polynomial {
    invsep::Polynomial p;
};

struct invsep_group {
    invsep::GroupSpec spec;
    invsep::AveragingGroup group;
};

struct invsep_options {
    std::uint64_t seed = 42;
    invsep::SampleBudget budget;
    unsigned m_max = 200;
    double margin_tol = 1e-6;
    std::optional<double> eta;
    unsigned jobs = 1;
};

namespace {

thread_local std::string last_error;

invsep_status status_of(invsep::ErrorCode code)
{
    using invsep::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument:
        return INVSEP_E_INVALID_ARGUMENT;
    case ErrorCode::Parse:
        return INVSEP_E_PARSE;
    case ErrorCode::DimensionMismatch:
        return INVSEP_E_DIMENSION_MISMATCH;
    case ErrorCode::DegreeOverflow:
        return INVSEP_E_DEGREE_OVERFLOW;
    case ErrorCode::Unsupported:
        return INVSEP_E_UNSUPPORTED;
    case ErrorCode::GroupTooLarge:
        return INVSEP_E_GROUP_TOO_LARGE;
    case ErrorCode::NotSeparating:
        return INVSEP_E_NOT_SEPARATING;
    case ErrorCode::ExponentExhausted:
        return INVSEP_E_EXPONENT_EXHAUSTED;
    case ErrorCode::UnknownCase:
        return INVSEP_E_UNKNOWN_CASE;
    case ErrorCode::NotInvertible:
        return INVSEP_E_NOT_INVERTIBLE;
    }
    return INVSEP_E_INTERNAL;
}

template <class F>
invsep_status guard(F&& f)
{
    try {
        f();
        last_error.clear();
        return INVSEP_OK;
    } catch (const invsep::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return INVSEP_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return INVSEP_E_INTERNAL;
    }
}

void need(const void* p, const char* what)
{
    invsep::require(p != nullptr, invsep::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* copy_string(const std::string& s)
{
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

invsep::Point make_point(const double* re, const double* im, std::size_t n)
{
    need(re, "re");
    invsep::Point x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = {re[i], im ? im[i] : 0.0};
    return x;
}

void write_complex(invsep::Complex v, double* out_re, double* out_im)
{
    need(out_re, "out_re");
    *out_re = v.real();
    if (out_im)
        *out_im = v.imag();
}

invsep::casebook::CaseContext context_of(const invsep_options& o)
{
    invsep::casebook::CaseContext ctx;
    ctx.seed = o.seed;
    ctx.budget = o.budget;
    ctx.m_max = o.m_max;
    ctx.margin_tol = o.margin_tol;
    ctx.eta = o.eta;
    return ctx;
}

} // namespace

extern "C" {

const char* invsep_last_error(void) { return last_error.c_str(); }

const char* invsep_status_name(invsep_status status)
{
    switch (status) {
    case INVSEP_OK:
        return "ok";
    case INVSEP_E_INVALID_ARGUMENT:
        return "invalid_argument";
    case INVSEP_E_PARSE:
        return "parse";
    case INVSEP_E_DIMENSION_MISMATCH:
        return "dimension_mismatch";
    case INVSEP_E_DEGREE_OVERFLOW:
        return "degree_overflow";
    case INVSEP_E_UNSUPPORTED:
        return "unsupported";
    case INVSEP_E_GROUP_TOO_LARGE:
        return "group_too_large";
    case INVSEP_E_NOT_SEPARATING:
        return "not_separating";
    case INVSEP_E_EXPONENT_EXHAUSTED:
        return "exponent_exhausted";
    case INVSEP_E_UNKNOWN_CASE:
        return "unknown_case";
    case INVSEP_E_NOT_INVERTIBLE:
        return "not_invertible";
    case INVSEP_E_INTERNAL:
        return "internal";
    }
    return "unknown";
}

const char* invsep_version(void) { return "1.0.0"; }

void invsep_string_free(char* s) { delete[] s; }

invsep_status invsep_polynomial_from_json(const char* json, invsep_polynomial** out)
{
    return guard([&] {
        need(json, "json");
        need(out, "out");
        *out = new invsep_polynomial{invsep::io::polynomial_from_json(invsep::io::parse(json))};
    });
}

invsep_status invsep_polynomial_to_json(const invsep_polynomial* p, char** out)
{
    return guard([&] {
        need(p, "polynomial");
        need(out, "out");
        *out = copy_string(invsep::io::to_json(p->p).dump());
    });
}

invsep_status invsep_polynomial_dimension(const invsep_polynomial* p, size_t* out)
{
    return guard([&] {
        need(p, "polynomial");
        need(out, "out");
        *out = p->p.dimension();
    });
}

invsep_status invsep_polynomial_eval(const invsep_polynomial* p, const double* re, const double* im, size_t n,
                                     double* out_re, double* out_im)
{
    return guard([&] {
        need(p, "polynomial");
        write_complex(p->p.eval(make_point(re, im, n)), out_re, out_im);
    });
}

void invsep_polynomial_free(invsep_polynomial* p) { delete p; }

invsep_status invsep_group_from_json(const char* json, invsep_group** out)
{
    return guard([&] {
        need(json, "json");
        need(out, "out");
        auto spec = invsep::io::group_spec_from_json(invsep::io::parse(json));
        auto group = invsep::realize(spec);
        *out = new invsep_group{std::move(spec), std::move(group)};
    });
}

invsep_status invsep_group_order(const invsep_group* g, size_t* out)
{
    return guard([&] {
        need(g, "group");
        need(out, "out");
        *out = invsep::group_size(g->group);
    });
}

invsep_status invsep_group_dimension(const invsep_group* g, size_t* out)
{
    return guard([&] {
        need(g, "group");
        need(out, "out");
        *out = invsep::group_dimension(g->group);
    });
}

invsep_status invsep_group_describe(const invsep_group* g, char** out_json)
{
    return guard([&] {
        need(g, "group");
        need(out_json, "out_json");
        invsep::io::Json d = invsep::io::to_json(g->spec);
        d["order"] = invsep::group_size(g->group);
        d["dimension"] = invsep::group_dimension(g->group);
        d["real"] = invsep::group_is_real(g->group);
        if (const auto* fg = std::get_if<invsep::FiniteGroup>(&g->group)) {
            const auto& st = fg->stats();
            d["generation"] = {{"generators", st.generators}, {"products", st.products}, {"levels", st.levels}};
        }
        *out_json = copy_string(d.dump());
    });
}

void invsep_group_free(invsep_group* g) { delete g; }

invsep_status invsep_symmetrize(const invsep_polynomial* q, const invsep_group* g, unsigned m, invsep_polynomial** out)
{
    return guard([&] {
        need(q, "polynomial");
        need(g, "group");
        need(out, "out");
        invsep::require(m >= 1, invsep::ErrorCode::InvalidArgument, "m must be at least 1");
        auto group = g->group;
        if (g->spec.kind == invsep::GroupSpec::Kind::Circle && g->spec.quadrature_order == 0)
            group = invsep::realize(g->spec, 100000, q->p.degree() * static_cast<int>(m));
        *out = new invsep_polynomial{m == 1 ? invsep::symmetrize(q->p, group)
                                            : invsep::m_symmetrization(q->p, group, m)};
    });
}

invsep_status invsep_symmetrize_eval(const invsep_polynomial* q, const invsep_group* g, unsigned m, const double* re,
                                     const double* im, size_t n, double* out_re, double* out_im)
{
    return guard([&] {
        need(q, "polynomial");
        need(g, "group");
        invsep::require(m >= 1, invsep::ErrorCode::InvalidArgument, "m must be at least 1");
        write_complex(invsep::eval_m_symmetrization(q->p, g->group, m, make_point(re, im, n)), out_re, out_im);
    });
}

invsep_status invsep_verify_invariance(const invsep_polynomial* p, const invsep_group* g, size_t samples, uint64_t seed,
                                       double* out_max_deviation)
{
    return guard([&] {
        need(p, "polynomial");
        need(g, "group");
        need(out_max_deviation, "out_max_deviation");
        *out_max_deviation = invsep::verify_invariance(g->group, p->p, samples, seed).max_deviation;
    });
}

invsep_status invsep_options_new(invsep_options** out)
{
    return guard([&] {
        need(out, "out");
        *out = new invsep_options{};
    });
}

invsep_status invsep_options_set_seed(invsep_options* o, uint64_t seed)
{
    return guard([&] {
        need(o, "options");
        o->seed = seed;
    });
}

invsep_status invsep_options_set_budget(invsep_options* o, size_t samples)
{
    return guard([&] {
        need(o, "options");
        invsep::require(samples > 0, invsep::ErrorCode::InvalidArgument, "budget must be positive");
        o->budget.samples = samples;
    });
}

invsep_status invsep_options_set_m_max(invsep_options* o, unsigned m_max)
{
    return guard([&] {
        need(o, "options");
        invsep::require(m_max > 0, invsep::ErrorCode::InvalidArgument, "m_max must be positive");
        o->m_max = m_max;
    });
}

invsep_status invsep_options_set_margin_tol(invsep_options* o, double tol)
{
    return guard([&] {
        need(o, "options");
        invsep::require(tol > 0.0, invsep::ErrorCode::InvalidArgument, "margin_tol must be positive");
        o->margin_tol = tol;
    });
}

invsep_status invsep_options_set_eta(invsep_options* o, double eta)
{
    return guard([&] {
        need(o, "options");
        invsep::require(eta > 0.0 && eta < 1.0, invsep::ErrorCode::InvalidArgument, "eta must lie in (0, 1)");
        o->eta = eta;
    });
}

invsep_status invsep_options_set_jobs(invsep_options* o, unsigned jobs)
{
    return guard([&] {
        need(o, "options");
        o->jobs = jobs == 0 ? 1 : jobs;
    });
}

void invsep_options_free(invsep_options* o) { delete o; }

invsep_status invsep_separate(const char* request_json, const invsep_options* o, char** out_report,
                              invsep_verdict* out_verdict)
{
    return guard([&] {
        need(request_json, "request_json");
        need(out_report, "out_report");
        const invsep_options defaults;
        const invsep_options& opt = o ? *o : defaults;
        const auto req = invsep::io::parse(request_json);
        for (const char* key : {"q", "group", "set", "z"})
            invsep::require(req.contains(key), invsep::ErrorCode::Parse, std::string("request is missing '") + key + "'");
        const auto q = invsep::io::polynomial_from_json(req.at("q"));
        const auto spec = invsep::io::group_spec_from_json(req.at("group"));
        const auto set = invsep::io::set_spec_from_json(req.at("set"));
        const auto z = invsep::io::point_from_json(req.at("z"));
        const int degree = std::max(1, q.degree()) * static_cast<int>(std::min(opt.m_max, 8u));
        const auto group = invsep::realize(spec, 100000, degree);

        invsep::SeparationOptions so;
        so.budget = opt.budget;
        so.seed = opt.seed;
        so.margin_tol = opt.margin_tol;
        so.m_max = opt.m_max;
        so.eta = opt.eta;
        const auto report = invsep::separate(q, group, set, z, so);
        auto j = invsep::io::to_json(report);
        j["group_order"] = invsep::group_size(group);
        *out_report = copy_string(j.dump(2));
        if (out_verdict)
            *out_verdict = report.verdict == invsep::Verdict::Separated      ? INVSEP_SEPARATED
                           : report.verdict == invsep::Verdict::NotSeparated ? INVSEP_NOT_SEPARATED
                                                                             : INVSEP_INCONCLUSIVE;
    });
}

invsep_status invsep_casebook_ids(char** out_json)
{
    return guard([&] {
        need(out_json, "out_json");
        invsep::io::Json ids = invsep::io::Json::array();
        for (const auto& e : invsep::casebook::suite())
            ids.push_back(e.id);
        *out_json = copy_string(ids.dump());
    });
}

invsep_status invsep_casebook_run(const char* selectors_json, const invsep_options* o, char** out_json,
                                  int* out_all_pass)
{
    return guard([&] {
        need(out_json, "out_json");
        const invsep_options defaults;
        const invsep_options& opt = o ? *o : defaults;
        std::vector<std::string> selectors;
        if (selectors_json) {
            const auto sel = invsep::io::parse(selectors_json);
            invsep::require(sel.is_array(), invsep::ErrorCode::Parse, "selectors must be a JSON array of strings");
            for (const auto& s : sel) {
                invsep::require(s.is_string(), invsep::ErrorCode::Parse, "selectors must be strings");
                selectors.push_back(s.get<std::string>());
            }
        }
        const auto entries = invsep::casebook::select(selectors);
        const auto reports = invsep::casebook::run_all(entries, context_of(opt), opt.jobs);
        invsep::io::Json cases = invsep::io::Json::array();
        std::size_t passed = 0;
        for (const auto& r : reports) {
            cases.push_back(invsep::casebook::to_json(r));
            passed += r.overall_pass() ? 1 : 0;
        }
        const invsep::io::Json out = {{"seed", opt.seed},
                                      {"budget", opt.budget.samples},
                                      {"cases", cases},
                                      {"summary",
                                       {{"total", reports.size()},
                                        {"passed", passed},
                                        {"failed", reports.size() - passed}}}};
        *out_json = copy_string(out.dump(2));
        if (out_all_pass)
            *out_all_pass = passed == reports.size() ? 1 : 0;
    });
}

} // extern "C"
