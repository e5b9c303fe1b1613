#include "invsep/json_io.hpp"

#include "invsep/error.hpp"

#include <cmath>
#include <sstream>

namespace invsep::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::Parse, std::string(what) + ": " + e.what());
    }
}

std::vector<std::size_t> index_list(const Json& j, const char* what)
{
    require(j.is_array(), ErrorCode::Parse, std::string(what) + " must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        require(v.is_number_integer() && v.get<long long>() >= 0, ErrorCode::Parse,
                std::string(what) + " entries must be non-negative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

Phase phase_from_json(const Json& j)
{
    if (j.is_array()) {
        require(j.size() == 2, ErrorCode::Parse, "phase must be [num, den]");
        return Phase::make(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
    }
    return Phase::make(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

Json number_or_inf(double v)
{
    if (std::isinf(v))
        return "inf";
    return v;
}

double number_or_inf(const Json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        require(s == "inf" || s == "infinity", ErrorCode::Parse, "expected a number or \"inf\"");
        return kInfinity;
    }
    return j.get<double>();
}

Field field_from_json(const Json& j)
{
    const auto s = j.get<std::string>();
    if (s == "R" || s == "real")
        return Field::Real;
    if (s == "C" || s == "complex")
        return Field::Complex;
    fail(ErrorCode::Parse, "field must be \"R\" or \"C\"");
}

} // namespace

Json to_json(Complex c)
{
    if (c.imag() == 0.0)
        return c.real();
    return Json::array({c.real(), c.imag()});
}

Complex complex_from_json(const Json& j)
{
    return guarded("complex", [&] {
        if (j.is_number())
            return Complex(j.get<double>(), 0.0);
        if (j.is_array()) {
            require(j.size() == 2, ErrorCode::Parse, "complex must be [re, im]");
            return Complex(j[0].get<double>(), j[1].get<double>());
        }
        if (j.is_object())
            return Complex(j.value("re", 0.0), j.value("im", 0.0));
        fail(ErrorCode::Parse, "complex must be a number, [re, im] or {re, im}");
    });
}

Json to_json(std::span<const Complex> p)
{
    Json out = Json::array();
    for (Complex c : p)
        out.push_back(to_json(c));
    return out;
}

Point point_from_json(const Json& j)
{
    require(j.is_array(), ErrorCode::Parse, "point must be an array");
    Point out;
    for (const auto& v : j)
        out.push_back(complex_from_json(v));
    return out;
}

Json to_json(const Polynomial& p)
{
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
    return {{"dim", p.dimension()}, {"field", p.field() == Field::Real ? "R" : "C"}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j)
{
    return guarded("polynomial", [&] {
        const auto dim = j.at("dim").get<std::size_t>();
        require(dim >= 1, ErrorCode::Parse, "polynomial: dim must be positive");
        const Field field = j.contains("field") ? field_from_json(j.at("field")) : Field::Real;
        TermMap terms;
        for (const auto& t : j.at("terms")) {
            auto e = t.at("exp").get<Exponents>();
            require(e.size() == dim, ErrorCode::Parse, "polynomial: exponent length differs from dim");
            const Complex c(t.value("re", 0.0), t.value("im", 0.0));
            auto [it, inserted] = terms.try_emplace(std::move(e), c);
            if (!inserted)
                it->second += c;
        }
        return Polynomial(dim, field, std::move(terms));
    });
}

Json to_json(const GroupElement& e)
{
    Json out = {{"kind", to_string(e.kind())}};
    switch (e.kind()) {
    case ElementKind::Permutation:
        out["source"] = e.source();
        break;
    case ElementKind::SignedPermutation: {
        out["source"] = e.source();
        Json signs = Json::array();
        for (const auto& ph : e.phases())
            signs.push_back(ph.is_zero() ? 1 : -1);
        out["signs"] = signs;
        break;
    }
    case ElementKind::DiagonalPhases:
    case ElementKind::PermutationLike: {
        if (e.kind() == ElementKind::PermutationLike)
            out["source"] = e.source();
        Json phases = Json::array();
        for (const auto& ph : e.phases())
            phases.push_back({ph.num, ph.den});
        out["phases"] = phases;
        break;
    }
    case ElementKind::Dense: {
        out["n"] = e.dimension();
        Json m = Json::array();
        for (Complex c : e.matrix())
            m.push_back(to_json(c));
        out["matrix"] = m;
        break;
    }
    }
    return out;
}

GroupElement element_from_json(const Json& j)
{
    return guarded("group element", [&] {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "perm")
            return GroupElement::permutation(index_list(j.at("source"), "source"));
        if (kind == "signed_perm")
            return GroupElement::signed_permutation(index_list(j.at("source"), "source"), j.at("signs").get<std::vector<int>>());
        if (kind == "phases" || kind == "perm_like") {
            std::vector<Phase> phases;
            for (const auto& p : j.at("phases"))
                phases.push_back(phase_from_json(p));
            if (kind == "phases")
                return GroupElement::diagonal_phases(std::move(phases));
            return GroupElement::permutation_like(index_list(j.at("source"), "source"), std::move(phases));
        }
        if (kind == "dense") {
            std::vector<Complex> m;
            for (const auto& v : j.at("matrix"))
                m.push_back(complex_from_json(v));
            return GroupElement::dense(j.at("n").get<std::size_t>(), std::move(m));
        }
        fail(ErrorCode::Parse, "unknown element kind '" + kind + "'");
    });
}

Json to_json(const GroupSpec& g)
{
    Json out = {{"kind", g.kind_name()}};
    using K = GroupSpec::Kind;
    switch (g.kind) {
    case K::Trivial:
        out["dim"] = g.dimension();
        break;
    case K::SymN:
        out["n"] = g.n;
        out["dim"] = g.dimension();
        break;
    case K::RTrunc:
    case K::RFGen:
    case K::SignedIndex:
        out["n"] = g.n;
        break;
    case K::BlockPerm:
        out["blocks"] = g.blocks;
        break;
    case K::Dyadic:
        out["level"] = g.level;
        break;
    case K::Circle:
        out["dim"] = g.dimension();
        out["acting"] = g.acting;
        out["quadrature_order"] = g.quadrature_order;
        break;
    case K::Custom: {
        Json gens = Json::array();
        for (const auto& e : g.custom)
            gens.push_back(to_json(e));
        out["generators"] = gens;
        break;
    }
    }
    return out;
}

GroupSpec group_spec_from_json(const Json& j)
{
    return guarded("group", [&] {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "trivial")
            return GroupSpec::trivial(j.at("dim").get<std::size_t>());
        if (kind == "symN" || kind == "sym") {
            const auto n = j.at("n").get<std::size_t>();
            return GroupSpec::sym(n, j.value("dim", n));
        }
        if (kind == "r_trunc")
            return GroupSpec::roots_of_unity(j.at("n").get<std::size_t>());
        if (kind == "rf_gen")
            return GroupSpec::roots_of_unity_generated(j.at("n").get<std::size_t>());
        if (kind == "block_perm")
            return GroupSpec::block_permutations(index_list(j.at("blocks"), "blocks"));
        if (kind == "signed_index")
            return GroupSpec::signed_index(j.at("n").get<std::size_t>());
        if (kind == "dyadic")
            return GroupSpec::dyadic(j.at("level").get<std::size_t>());
        if (kind == "circle")
            return GroupSpec::circle(j.value("dim", std::size_t{1}),
                                     j.contains("acting") ? index_list(j.at("acting"), "acting") : std::vector<std::size_t>{},
                                     j.value("quadrature_order", std::size_t{0}));
        if (kind == "custom") {
            std::vector<GroupElement> gens;
            for (const auto& e : j.at("generators"))
                gens.push_back(element_from_json(e));
            return GroupSpec::from_generators(std::move(gens));
        }
        fail(ErrorCode::Parse, "unknown group kind '" + kind + "'");
    });
}

Json to_json(const SetSpec& k)
{
    if (const auto* b = std::get_if<LpBall>(&k))
        return {{"kind", "lp_ball"},
                {"dim", b->dimension},
                {"p", number_or_inf(b->p)},
                {"radius", b->radius},
                {"field", b->field == Field::Real ? "R" : "C"},
                {"unconditional", b->unconditional_basis}};
    if (const auto* c = std::get_if<PointCloud>(&k)) {
        Json pts = Json::array();
        for (const auto& p : c->points)
            pts.push_back(to_json(p));
        return {{"kind", "cloud"}, {"points", pts}};
    }
    const auto& n = std::get<NamedCase>(k);
    return {{"kind", "named"}, {"id", n.id}, {"params", Json::parse(n.params_json)}};
}

SetSpec set_spec_from_json(const Json& j)
{
    return guarded("set", [&]() -> SetSpec {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "lp_ball") {
            LpBall b;
            b.dimension = j.at("dim").get<std::size_t>();
            b.p = number_or_inf(j.at("p"));
            b.radius = j.value("radius", 1.0);
            b.field = j.contains("field") ? field_from_json(j.at("field")) : Field::Real;
            b.unconditional_basis = j.value("unconditional", true);
            SetSpec out = b;
            validate(out);
            return out;
        }
        if (kind == "cloud") {
            PointCloud c;
            for (const auto& p : j.at("points"))
                c.points.push_back(point_from_json(p));
            SetSpec out = c;
            validate(out);
            return out;
        }
        if (kind == "named")
            return NamedCase{j.at("id").get<std::string>(), j.value("params", Json::object()).dump()};
        fail(ErrorCode::Parse, "unknown set kind '" + kind + "'");
    });
}

Json to_json(const SupEstimate& s)
{
    return {{"value", s.value}, {"witness", to_json(s.witness)}, {"budget_used", s.budget_used}, {"method", s.method}};
}

Json to_json(const SeparationReport& r)
{
    Json out;
    out["sup"] = r.sup.value;
    out["witness"] = to_json(r.sup.witness);
    out["value_at_z"] = r.value_at_z;
    out["margin"] = r.margin;
    out["m"] = r.m ? Json(*r.m) : Json(nullptr);
    out["verdict"] = to_string(r.verdict);
    out["seed"] = r.seed;
    out["budget"] = r.budget;
    out["power"] = r.power;
    out["r"] = r.r;
    out["eta"] = r.eta ? Json(*r.eta) : Json(nullptr);
    out["sup_method"] = r.sup.method;
    if (r.chain)
        out["chain"] = {{"lhs", r.chain->lhs},
                        {"haar_average", r.chain->haar_average},
                        {"rhs", r.chain->rhs},
                        {"holds", r.chain->holds}};
    if (r.j_used)
        out["j_used"] = *r.j_used;
    if (r.invariance_deviation)
        out["invariance_deviation"] = *r.invariance_deviation;
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"m", s.m}, {"power", s.power}, {"sup", s.sup}, {"value", s.value}, {"margin", s.margin}});
    out["steps"] = steps;
    out["notes"] = r.notes;
    if (r.separator)
        out["separator"] = to_json(*r.separator);
    return out;
}

std::string steps_csv(const SeparationReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "m,power,sup,value,margin\n";
    for (const auto& s : r.steps)
        os << s.m << ',' << s.power << ',' << s.sup << ',' << s.value << ',' << s.margin << '\n';
    return os.str();
}

Json parse(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
}

} // namespace invsep::io
