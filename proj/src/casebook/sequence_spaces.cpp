#include "internal.hpp"

#include "invsep/group_spec.hpp"
#include "invsep/random.hpp"
#include "invsep/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invsep::casebook {

using detail::param;
using detail::p_param;

namespace {

bool all_real(std::span<const Complex> z)
{
    return std::all_of(z.begin(), z.end(), [](Complex c) { return c.imag() == 0.0; });
}

Complex power_sum(std::span<const Complex> x, unsigned k)
{
    std::vector<Complex> v;
    v.reserve(x.size());
    for (Complex c : x)
        v.push_back(ipow(c, k));
    return sorted_sum(std::move(v));
}

double abs_power_sum(std::span<const Complex> x, double s)
{
    double total = 0.0;
    for (Complex c : x)
        total += std::pow(std::abs(c), s);
    return total;
}

LpBall ball_of(std::size_t dim, double p, Field field)
{
    LpBall b;
    b.dimension = dim;
    b.p = p;
    b.field = field;
    return b;
}

ScalarFunction power_sum_fn(unsigned m)
{
    return [m](std::span<const Complex> x) {
        Complex s{};
        for (Complex c : x)
            s += ipow(c, m);
        return s;
    };
}

/// ‖z‖_p of a head-plus-tail sequence.
double sequence_norm(const TailSequence& z, double p)
{
    const double head = lp_norm(z.head, p);
    const double tail = z.tail_norm(p);
    if (std::isinf(p))
        return std::max(head, tail);
    return std::pow(std::pow(head, p) + std::pow(tail, p), 1.0 / p);
}

void record_separator(CaseReport& rep, const SeparationReport& res)
{
    rep.constants["m"] = res.m ? Json(*res.m) : Json();
    rep.constants["power"] = res.power;
    rep.constants["margin"] = res.margin;
    rep.constants["sup"] = res.sup.value;
    rep.constants["value_at_z"] = res.value_at_z;
    if (res.j_used)
        rep.constants["j_used"] = *res.j_used;
    if (res.separator)
        rep.constants["separator"] = io::to_json(*res.separator);
    for (const auto& note : res.notes)
        rep.notes.push_back(note);
}

} // namespace

CaseReport case_roots_unity(const Json& params, const CaseContext& ctx)
{
    require(params.contains("z"), ErrorCode::Parse, "roots_unity: missing parameter 'z'");
    const auto z = parse_tail(params.at("z"));
    const double p = p_param(params, "p", 2.0);
    const std::size_t n = z.head.size();
    require(n >= 1, ErrorCode::InvalidArgument, "roots_unity: the head must be non-empty");

    CaseReport rep;
    rep.inputs = params;
    const auto G = std::get<FiniteGroup>(realize(GroupSpec::roots_of_unity(n)));
    const std::size_t jstar = detail::argmax_modulus(z.head);
    const double tail = z.tail_norm(p);
    require(std::isfinite(tail), ErrorCode::InvalidArgument, "roots_unity: the tail is not in the space");

    TruncationRequest req{G, ball_of(n, p, Field::Complex), z.head, tail, Polynomial::variable(n, jstar, Field::Complex),
                          {}};
    for (std::size_t j = jstar + 1; j <= n; ++j)
        req.schedule.push_back(j);
    const double norm = sequence_norm(z, p);
    rep.constants = {{"group_order", G.order()}, {"coordinate", jstar + 1}, {"tail_bound", tail}, {"norm", norm}};

    const auto res = truncation_pipeline(req, ctx.separation("pipeline"));
    record_separator(rep, res);
    detail::record_verdict(rep, params, res.verdict, "separated");
    if (res.verdict == Verdict::Separated) {
        rep.check("z lies outside the ball", norm, ">", 1.0);
        rep.check("separation margin", res.margin, ">", 0.0);
        rep.check("invariance deviation of the lifted separator", res.invariance_deviation.value_or(kInfinity), "<",
                  1e-9);
        rep.check_true("every exponent vector e satisfies j | e_j", detail::roots_of_unity_divisibility(*res.separator));
    } else {
        rep.check("z lies in the ball", norm, "<=", 1.0, 1e-12);
    }
    return rep;
}

namespace {

void power_sums_bounded(CaseReport& rep, const Json& params, double p)
{
    const int m = param<int>(params, "bounded_m", 1);
    require(m >= 1 && m < p && p < m + 1, ErrorCode::InvalidArgument, "power_sums: need m < p < m + 1");
    const double step = std::pow(2.0, -1.0 / (m + 1));
    TailSequence z;
    z.rule = TailSequence::Rule::Geometric;
    z.c = 1.0;
    z.b = step;
    for (int j = 1; j <= 24; ++j)
        z.head.emplace_back(std::pow(step, j));

    Json values = Json::array();
    for (int k = m + 1; k <= m + 6; ++k) {
        const auto ku = static_cast<unsigned>(k);
        const double Fk = std::abs(power_sum(z.head, ku) + z.tail_power_sum(ku));
        const double closed = 1.0 / (std::pow(2.0, static_cast<double>(k) / (m + 1)) - 1.0);
        rep.check("|F_" + std::to_string(k) + "(z)| matches 1/(2^(k/(m+1)) - 1)", Fk, "==", closed, 1e-10);
        rep.check("|F_" + std::to_string(k) + "(z)| <= 1", Fk, "<=", 1.0, 1e-12);
        values.push_back({{"k", k}, {"F_k", Fk}, {"closed_form", closed}});
    }
    const double norm_pp = abs_power_sum(z.head, p) + z.tail_abs_power_sum(p);
    const double closed_norm = 1.0 / (std::pow(2.0, p / (m + 1)) - 1.0);
    rep.check("||z||_p^p matches 1/(2^(p/(m+1)) - 1)", norm_pp, "==", closed_norm, 1e-10);
    rep.check("z lies outside the ball", norm_pp, ">", 1.0);
    rep.constants = {{"m", m},
                     {"F_k", values},
                     {"norm_p_power", norm_pp},
                     {"norm_p", std::pow(norm_pp, 1.0 / p)}};
    rep.notes.push_back("1/(2^(p/(m+1)) - 1) is the p-th power of the norm; the norm itself is " +
                        std::to_string(std::pow(norm_pp, 1.0 / p)));
    detail::record_verdict(rep, params, Verdict::NotSeparated, "not_separated");
}

} // namespace

CaseReport case_power_sums(const Json& params, const CaseContext& ctx)
{
    const double p = p_param(params, "p", 2.0);
    require(p >= 1.0 && std::isfinite(p), ErrorCode::InvalidArgument, "power_sums: need 1 <= p < inf");
    CaseReport rep;
    rep.inputs = params;
    if (params.contains("bounded_m")) {
        power_sums_bounded(rep, params, p);
        return rep;
    }

    require(params.contains("z"), ErrorCode::Parse, "power_sums: missing parameter 'z'");
    const auto z = parse_tail(params.at("z"));
    require(z.rule == TailSequence::Rule::None || z.rule == TailSequence::Rule::Geometric, ErrorCode::Unsupported,
            "power_sums: the tail must be empty or geometric");
    const auto& h = z.head;
    require(!h.empty(), ErrorCode::InvalidArgument, "power_sums: the head must be non-empty");
    const double tail_pp = z.tail_abs_power_sum(p);
    const double norm_pp = abs_power_sum(h, p) + tail_pp;
    rep.constants = {{"norm_p_power", norm_pp}, {"tail_p_power", tail_pp}};
    rep.check("tail mass sum_{j>N} |z_j|^p below 1", tail_pp, "<", 1.0);

    std::vector<Complex> big;
    std::vector<Complex> small;
    for (Complex c : h)
        (std::abs(c) > 1.0 ? big : small).push_back(c);

    Verdict verdict = Verdict::Inconclusive;
    if (!big.empty()) {
        const auto rest = [&](unsigned m) { return abs_power_sum(small, m) + z.tail_abs_power_sum(m); };
        const auto m_min = static_cast<unsigned>(std::ceil(p));
        const auto ps = detail::power_search(big, rest, 1.0, m_min, ctx.m_max);
        rep.check_true("return exponent found within m_max", ps.found);
        if (ps.found) {
            const unsigned m = ps.m;
            const double Fm = std::abs(power_sum(h, m) + z.tail_power_sum(m));
            rep.check("|F_m(z)| at least the return lower bound", Fm, ">=", ps.lower_bound,
                      1e-9 * std::max(1.0, ps.lower_bound));
            rep.check("return lower bound exceeds the ball bound 1", ps.lower_bound, ">", 1.0);
            rep.check("m >= p", m, ">=", p);
            const auto sup = sup_on_set(power_sum_fn(m), ball_of(h.size(), p, Field::Complex), ctx.budget,
                                        ctx.stream("sup", m), true);
            rep.check("sampled sup over the ball of |F_m| within 1", sup.value, "<=", 1.0, 1e-9);
            const double margin = Fm - std::max(1.0, sup.value);
            rep.check("separation margin", margin, ">", 0.0);
            rep.constants["m"] = m;
            rep.constants["F_m"] = Fm;
            rep.constants["lower_bound"] = ps.lower_bound;
            rep.constants["defect"] = ps.defect;
            rep.constants["sup"] = sup.value;
            rep.constants["margin"] = margin;
            verdict = Verdict::Separated;
        }
    } else if (std::floor(p) == p && std::all_of(h.begin(), h.end(), [](Complex c) {
                   return c.imag() == 0.0 && c.real() >= 0.0;
               }) && (z.rule == TailSequence::Rule::None || (z.c.imag() == 0.0 && z.c.real() >= 0.0))) {
        const auto k = static_cast<unsigned>(p);
        const double Fp = (power_sum(h, k) + z.tail_power_sum(k)).real();
        rep.check("F_p(z) equals ||z||_p^p", Fp, "==", norm_pp, 1e-12 * std::max(1.0, norm_pp));
        rep.check("F_p(z) > 1", Fp, ">", 1.0);
        rep.constants["m"] = k;
        rep.constants["F_m"] = Fp;
        verdict = Verdict::Separated;
    } else {
        rep.notes.push_back("no coordinate exceeds 1 in modulus; elementary invariants may or may not separate");
    }
    detail::record_verdict(rep, params, verdict, "separated");
    return rep;
}

CaseReport case_block_permutations(const Json& params, const CaseContext& ctx)
{
    const auto blocks = param<std::vector<std::size_t>>(params, "blocks", {});
    require(!blocks.empty(), ErrorCode::InvalidArgument, "block_permutations: blocks must be non-empty");
    const Point z = detail::point_param(params, "z");
    const double p = p_param(params, "p", 2.0);
    const std::size_t n = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
    require(z.size() == n, ErrorCode::DimensionMismatch, "block_permutations: z must cover every block");

    CaseReport rep;
    rep.inputs = params;
    const auto spec = GroupSpec::block_permutations(blocks);
    const auto G = std::get<FiniteGroup>(realize(spec));
    const std::size_t jstar = detail::argmax_modulus(z);
    const Field field = all_real(z) ? Field::Real : Field::Complex;

    TruncationRequest req{G, ball_of(n, p, field), z, 0.0, Polynomial::variable(n, jstar, field), {}};
    std::size_t boundary = 0;
    for (std::size_t b : blocks) {
        boundary += b;
        if (boundary >= jstar + 1)
            req.schedule.push_back(boundary);
    }
    const double norm = lp_norm(z, p);
    rep.constants = {{"group_order", G.order()}, {"coordinate", jstar + 1}, {"norm", norm}};

    const auto res = truncation_pipeline(req, ctx.separation("pipeline"));
    record_separator(rep, res);
    detail::record_verdict(rep, params, res.verdict, "separated");
    if (res.verdict == Verdict::Separated) {
        rep.check("z lies outside the ball", norm, ">", 1.0);
        rep.check("separation margin", res.margin, ">", 0.0);
        rep.check("within-block generator deviation", detail::generator_deviation(*res.separator, spec.generators()), "<",
                  1e-9);
        rep.check("sampled invariance deviation", res.invariance_deviation.value_or(kInfinity), "<", 1e-9);
    } else {
        rep.check("z lies in the ball", norm, "<=", 1.0, 1e-12);
    }
    return rep;
}

namespace {

struct Removal {
    std::vector<std::size_t> removed; ///< 1-based indices j with |scale·z_j| > 1
    double residual = 0.0;            ///< sup of the remaining |scale·z_j|
};

/// Splits scale·z into a finitely supported part (coordinates above 1) and the rest.
/// Requires scale·limsup < 1 so the split is finite.
Removal remove_large(const TailSequence& z, double scale)
{
    Removal out;
    const auto visit = [&](std::size_t j, double v) {
        if (v > 1.0)
            out.removed.push_back(j);
        else
            out.residual = std::max(out.residual, v);
    };
    for (std::size_t j = 1; j <= z.head.size(); ++j)
        visit(j, scale * std::abs(z.head[j - 1]));
    const std::size_t limit = z.head.size() + 100000;
    switch (z.rule) {
    case TailSequence::Rule::None:
        break;
    case TailSequence::Rule::Geometric:
        for (std::size_t j = z.head.size() + 1; j <= limit; ++j) {
            const double v = scale * std::abs(z.coordinate(j));
            visit(j, v);
            if (v <= 1.0)
                break;
        }
        break;
    case TailSequence::Rule::Constant:
        visit(z.head.size() + 1, scale * std::abs(z.c));
        require(scale * std::abs(z.c) <= 1.0, ErrorCode::InvalidArgument, "constant tail above 1 is not finite");
        break;
    case TailSequence::Rule::Approach:
        for (std::size_t j = z.head.size() + 1;; ++j) {
            require(j <= limit, ErrorCode::InvalidArgument, "approach tail does not settle below 1");
            const double bound = scale * (std::abs(z.level) + std::abs(z.c) * std::pow(z.b, static_cast<double>(j)));
            if (bound <= 1.0) {
                out.residual = std::max(out.residual, bound);
                break;
            }
            visit(j, scale * std::abs(z.coordinate(j)));
        }
        break;
    case TailSequence::Rule::Bound:
        fail(ErrorCode::InvalidArgument, "a bound-only tail has no explicit coordinates");
    }
    return out;
}

} // namespace

CaseReport case_linf_limsup(const Json& params, const CaseContext&)
{
    require(params.contains("z"), ErrorCode::Parse, "linf_limsup: missing parameter 'z'");
    const auto z = parse_tail(params.at("z"));
    const double alpha = z.limsup();

    CaseReport rep;
    rep.inputs = params;
    rep.constants = {{"limsup", alpha}};
    const Verdict verdict = alpha > 1.0 ? Verdict::Separated : Verdict::NotSeparated;
    if (alpha > 1.0) {
        const double delta = alpha - 1.0;
        const double threshold = 1.0 + delta / 2.0;
        Json subsequence = Json::array();
        for (std::size_t j = z.head.size() + 1; subsequence.size() < 10 && j <= z.head.size() + 100000; ++j) {
            const double v = std::abs(z.coordinate(j));
            if (v >= threshold)
                subsequence.push_back({{"j", j}, {"modulus", v}});
        }
        rep.check("limsup |z_j| > 1", alpha, ">", 1.0);
        rep.check("subsequence terms found above 1 + delta/2", static_cast<double>(subsequence.size()), "==", 10.0);
        rep.constants["delta"] = delta;
        rep.constants["threshold"] = threshold;
        rep.constants["subsequence"] = subsequence;
        rep.notes.push_back("certificate of the limsup criterion, not the ultrafilter functional itself");
    } else {
        rep.check("limsup |z_j| <= 1", alpha, "<=", 1.0);
        if (alpha < 1.0) {
            const auto split = remove_large(z, 1.0);
            rep.check("|z - w|_inf <= 1 after removing the finitely many large coordinates", split.residual, "<=",
                      1.0);
            rep.constants["removed"] = split.removed;
            rep.constants["residual_sup"] = split.residual;
            if (!split.removed.empty())
                rep.notes.push_back("coordinates above 1 in modulus form an element of c_0 and are subtracted");
        } else {
            Json scaled = Json::array();
            for (double r : {0.9, 0.99, 0.999}) {
                const auto split = remove_large(z, r);
                rep.check("r = " + std::to_string(r) + ": |r z - w|_inf <= 1", split.residual, "<=", 1.0);
                scaled.push_back({{"r", r}, {"removed", split.removed.size()}, {"residual_sup", split.residual}});
            }
            rep.constants["scaled"] = scaled;
            rep.notes.push_back("limsup equals 1: each r z with r < 1 is reduced to the ball, then r -> 1");
        }
        for (Complex c : z.head)
            if (std::abs(c) > 1.0) {
                rep.notes.push_back("head coordinates above 1 do not affect invariant polynomials");
                break;
            }
    }
    detail::record_verdict(rep, params, verdict);
    return rep;
}

namespace {

/// T_k(x) = Σ_{A} x_i^k − Σ_{−A} x_i^k with A on coordinates [0, n) and −A on [n, 2n).
Complex supersymmetric_t(std::span<const Complex> x, std::size_t n, unsigned k)
{
    return power_sum(x.subspan(0, n), k) - power_sum(x.subspan(n, n), k);
}

} // namespace

CaseReport case_supersymmetric(const Json& params, const CaseContext& ctx)
{
    const auto n = param<std::size_t>(params, "n", 0);
    const Point z = detail::point_param(params, "z");
    const double p = p_param(params, "p", 2.0);
    const auto k_max = param<unsigned>(params, "k_max", 12);
    require(n >= 1 && z.size() == 2 * n, ErrorCode::DimensionMismatch, "supersymmetric: z needs 2n coordinates");
    require(p >= 1.0 && std::isfinite(p), ErrorCode::InvalidArgument, "supersymmetric: need 1 <= p < inf");
    const auto k_min = static_cast<unsigned>(std::ceil(p));

    CaseReport rep;
    rep.inputs = params;
    const std::span<const Complex> zs(z);

    Point mirror(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        mirror[i] = mirror[n + i] = z[i];
    double mirror_max = 0.0;
    for (unsigned k = 1; k <= k_max; ++k)
        mirror_max = std::max(mirror_max, std::abs(supersymmetric_t(mirror, n, k)));
    rep.check("T_k vanishes at the mirror point for every k <= k_max", mirror_max, "==", 0.0);

    double perm_dev = 0.0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        auto rng = make_rng(ctx.seed, "lambda", trial);
        std::vector<std::size_t> src(2 * n);
        std::iota(src.begin(), src.end(), 0);
        std::shuffle(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(n), rng);
        std::shuffle(src.begin() + static_cast<std::ptrdiff_t>(n), src.end(), rng);
        const auto moved = GroupElement::permutation(src).apply(z);
        for (unsigned k = 1; k <= k_max; ++k)
            perm_dev = std::max(perm_dev, std::abs(supersymmetric_t(moved, n, k) - supersymmetric_t(z, n, k)));
    }
    rep.check("T_k deviation under 50 random signed-index permutations", perm_dev, "==", 0.0);

    double max_a = 0.0;
    double max_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_a = std::max(max_a, std::abs(z[i]));
        max_m = std::max(max_m, std::abs(z[n + i]));
    }
    const bool is_mirror = std::equal(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n),
                                      z.begin() + static_cast<std::ptrdiff_t>(n));
    rep.constants = {{"max_A", max_a}, {"max_minus_A", max_m}, {"norm", lp_norm(z, p)}};

    Verdict verdict = Verdict::Inconclusive;
    const bool a_side = max_a > 1.0 && max_m <= 1.0;
    const bool m_side = max_m > 1.0 && max_a <= 1.0;
    if (a_side || m_side) {
        std::vector<Complex> big;
        std::vector<Complex> rest_coords;
        const std::size_t lo = a_side ? 0 : n;
        for (std::size_t i = 0; i < 2 * n; ++i)
            ((i >= lo && i < lo + n && std::abs(z[i]) > 1.0) ? big : rest_coords).push_back(z[i]);
        const auto rest = [&](unsigned m) { return abs_power_sum(rest_coords, m); };
        const auto ps = detail::power_search(big, rest, 1.0, k_min, ctx.m_max);
        rep.check_true("return exponent found within m_max", ps.found);
        if (ps.found) {
            const unsigned m = ps.m;
            const double Tm = std::abs(supersymmetric_t(z, n, m));
            rep.check("|T_m(z)| at least the return lower bound", Tm, ">=", ps.lower_bound,
                      1e-9 * std::max(1.0, ps.lower_bound));
            rep.check("return lower bound exceeds the ball bound 1", ps.lower_bound, ">", 1.0);
            const ScalarFunction fn = [n, m](std::span<const Complex> x) { return supersymmetric_t(x, n, m); };
            const auto sup = sup_on_set(fn, ball_of(2 * n, p, Field::Complex), ctx.budget, ctx.stream("sup", m), true);
            rep.check("sampled sup over the ball of |T_m| within 1", sup.value, "<=", 1.0, 1e-9);
            const double margin = Tm - std::max(1.0, sup.value);
            rep.check("separation margin", margin, ">", 0.0);
            std::optional<unsigned> first;
            for (unsigned k = k_min; k <= std::max(k_max, m) && !first; ++k)
                if (std::abs(supersymmetric_t(z, n, k)) > 1.0)
                    first = k;
            rep.check("direct scan finds a separating k <= m", first ? static_cast<double>(*first) : kInfinity, "<=",
                      static_cast<double>(m));
            rep.constants["side"] = a_side ? "A" : "-A";
            rep.constants["m"] = m;
            rep.constants["T_m"] = Tm;
            rep.constants["lower_bound"] = ps.lower_bound;
            rep.constants["sup"] = sup.value;
            rep.constants["margin"] = margin;
            rep.constants["first_direct_k"] = first ? Json(*first) : Json();
            verdict = Verdict::Separated;
        }
    } else if (is_mirror) {
        double zmax = 0.0;
        for (unsigned k = 1; k <= k_max; ++k)
            zmax = std::max(zmax, std::abs(supersymmetric_t(z, n, k)));
        rep.check("T_k(z) = 0 for every k <= k_max", zmax, "==", 0.0);
        rep.notes.push_back("z_j = z_-j: every supersymmetric polynomial takes the value P(0) at z");
        verdict = Verdict::NotSeparated;
    } else {
        rep.notes.push_back("neither side satisfies the one-sided hypothesis");
    }
    detail::record_verdict(rep, params, verdict);
    return rep;
}

} // namespace invsep::casebook
