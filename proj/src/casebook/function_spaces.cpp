#include "internal.hpp"

#include "invsep/diophantine.hpp"
#include "invsep/group_spec.hpp"
#include "invsep/random.hpp"
#include "invsep/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invsep::casebook {

using detail::param;

namespace {

LpBall polydisk(std::size_t dim)
{
    LpBall b;
    b.dimension = dim;
    b.p = kInfinity;
    b.field = Field::Complex;
    return b;
}

Complex random_complex(Rng& rng) { return {gaussian(rng), gaussian(rng)}; }

/// Random polynomial of total degree ≤ degree with Gaussian complex coefficients.
Polynomial random_polynomial(std::size_t dim, unsigned degree, Rng& rng)
{
    Polynomial out(dim, Field::Complex);
    Exponents e(dim, 0);
    const std::function<void(std::size_t, unsigned)> fill = [&](std::size_t i, unsigned left) {
        if (i == dim) {
            out = out + Polynomial::monomial(e, random_complex(rng), Field::Complex);
            return;
        }
        for (unsigned d = 0; d <= left; ++d) {
            e[i] = d;
            fill(i + 1, left - d);
        }
        e[i] = 0;
    };
    fill(0, degree);
    return out;
}

/// Largest deviation |F(g) − F(g̃)| over `count` random G-invariant polynomials.
double reduction_deviation(const FiniteGroup& G, std::span<const Complex> g, std::span<const Complex> reduced,
                           unsigned degree, std::size_t count, std::uint64_t seed)
{
    double worst = 0.0;
    for (std::size_t t = 0; t < count; ++t) {
        auto rng = make_rng(seed, "invariant", t);
        const auto F = symmetrize(random_polynomial(G.dimension(), degree, rng), G);
        worst = std::max(worst, std::abs(F.eval(g) - F.eval(reduced)));
    }
    return worst;
}

/// Scans simultaneous returns (tolerance 1/2) of the angles from m = 1 until `good(m, defect)`.
std::optional<diophantine::ReturnResult> scan_returns(std::span<const Complex> values, std::uint64_t m_max,
                                                      const std::function<bool(unsigned, double)>& good)
{
    std::vector<double> args;
    for (Complex v : values)
        args.push_back(std::arg(v));
    const auto set = diophantine::make_angle_set(args);
    std::uint64_t from = 1;
    while (from <= m_max) {
        diophantine::ReturnResult ret;
        try {
            ret = diophantine::simultaneous_return(set, 0.5, m_max, from);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExponentExhausted)
                throw;
            return std::nullopt;
        }
        if (good(static_cast<unsigned>(ret.m), ret.max_defect))
            return ret;
        from = ret.m + 1;
    }
    return std::nullopt;
}

} // namespace

CaseReport case_c01(const Json& params, const CaseContext& ctx)
{
    const Complex g0 = detail::complex_param(params, "g0", 0.0);
    const Complex g1 = detail::complex_param(params, "g1", 0.0);
    const auto m_max = param<unsigned>(params, "m_max", 5000);
    const double a0 = std::abs(g0);
    const double a1 = std::abs(g1);
    const double M = std::max(a0, a1);

    CaseReport rep;
    rep.inputs = params;
    rep.constants = {{"max_endpoint_modulus", M}};
    const auto P = [](Complex a, Complex b, unsigned m) { return 0.5 * (ipow(a, m) + ipow(b, m)); };

    if (params.contains("t0")) {
        const double t0 = param<double>(params, "t0", 0.5);
        const double peak = std::abs(detail::complex_param(params, "peak", 0.0));
        rep.check("interior point t0 lies in (0, 1)", t0 * (1.0 - t0), ">", 0.0);
        rep.check("delta_t0 separates g from the ball: |g(t0)| > 1", peak, ">", 1.0);
        rep.notes.push_back("the evaluation at t0 separates, but it is not an H-invariant");
    }

    Verdict verdict;
    if (M > 1.0) {
        const double r = (1.0 + M) / 2.0;
        std::optional<unsigned> first_direct;
        for (unsigned m = 1; m <= m_max && !first_direct; ++m)
            if (std::abs(P(g0, g1, m)) > 1.0)
                first_direct = m;
        const Complex both[] = {g0, g1};
        const auto ret = scan_returns(both, m_max, [&](unsigned m, double) {
            return 0.25 * (std::pow(a0, m) + std::pow(a1, m)) > 1.0;
        });
        rep.check_true("return exponent found within m_max", ret.has_value());
        if (!ret) {
            detail::record_verdict(rep, params, Verdict::Inconclusive);
            return rep;
        }
        const auto m = static_cast<unsigned>(ret->m);
        const double value = std::abs(P(g0, g1, m));
        const double quarter = 0.25 * (std::pow(a0, m) + std::pow(a1, m));
        rep.check("|P_m(g)| >= (|g(0)|^m + |g(1)|^m)/4", value, ">=", quarter, 1e-12 * quarter);
        rep.check("(|g(0)|^m + |g(1)|^m)/4 >= r^m/4", quarter, ">=", 0.25 * std::pow(r, m));
        rep.check("|P_m(g)| > 1", value, ">", 1.0);
        rep.check("P_m is invariant under the endpoint swap", std::abs(P(g0, g1, m) - P(g1, g0, m)), "==", 0.0);
        const ScalarFunction fn = [m, &P](std::span<const Complex> x) { return P(x[0], x[1], m); };
        const auto sup = sup_on_set(fn, polydisk(2), ctx.budget, ctx.stream("sup", m), true);
        rep.check("sampled sup over the ball of |P_m| within 1", sup.value, "<=", 1.0, 1e-12);
        const double margin = value - std::max(1.0, sup.value);
        rep.check("separation margin", margin, ">", 0.0);
        rep.constants["r"] = r;
        rep.constants["m"] = m;
        rep.constants["defect"] = ret->max_defect;
        rep.constants["P_m"] = value;
        rep.constants["sup"] = sup.value;
        rep.constants["margin"] = margin;
        rep.constants["first_direct_m"] = first_direct ? Json(*first_direct) : Json();
        if (m_max >= 12)
            rep.constants["P_12"] = std::abs(P(g0, g1, 12));
        verdict = Verdict::Separated;
    } else {
        const Complex reduced[] = {g0 * (1.0 - 0.0) + g1 * 0.0, g0 * (1.0 - 1.0) + g1 * 1.0};
        const Complex g[] = {g0, g1};
        double interp_sup = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = i / 1000.0;
            interp_sup = std::max(interp_sup, std::abs(g0 * (1.0 - t) + g1 * t));
        }
        rep.check("||g~||_inf = max(|g(0)|, |g(1)|)", interp_sup, "==", M, 1e-15);
        rep.check("g~ lies in the ball", interp_sup, "<=", 1.0, 1e-15);
        const auto swap = std::get<FiniteGroup>(realize(GroupSpec::sym(2)));
        rep.check("F(g) = F(g~) on 50 random invariants", reduction_deviation(swap, g, reduced, 4, 50, ctx.seed), "==",
                  0.0);
        double worst = 0.0;
        for (unsigned m = 1; m <= 50; ++m)
            worst = std::max(worst, std::abs(P(g0, g1, m)));
        rep.check("|P_m(g)| <= 1 for m <= 50", worst, "<=", 1.0, 1e-12);
        verdict = Verdict::NotSeparated;
    }
    detail::record_verdict(rep, params, verdict);
    return rep;
}

CaseReport case_tshape(const Json& params, const CaseContext& ctx)
{
    const Point g = detail::point_param(params, "g");
    require(g.size() == 4, ErrorCode::DimensionMismatch, "tshape: g lists the values at 0, 1, -1, i");
    const auto m_max = param<unsigned>(params, "m_max", 5000);

    CaseReport rep;
    rep.inputs = params;
    const AveragingGroup G = std::get<FiniteGroup>(realize(GroupSpec::block_permutations({1, 3})));
    const double a0 = std::abs(g[0]);
    const double outer = std::max({std::abs(g[1]), std::abs(g[2]), std::abs(g[3])});
    const double M = std::max(a0, outer);
    rep.constants = {{"max_modulus", M}};

    const auto P = [](std::span<const Complex> f, unsigned m) {
        return 0.25 * (ipow(f[0], m) + sorted_sum({f[1], f[2], f[3]}));
    };
    const auto R = [](std::span<const Complex> f, unsigned m) {
        return 0.25 * (f[0] + sorted_sum({ipow(f[1], m), ipow(f[2], m), ipow(f[3], m)}));
    };

    Verdict verdict = Verdict::NotSeparated;
    if (M > 1.0) {
        unsigned m = 0;
        ScalarFunction fn;
        if (a0 > 1.0) {
            const double r = (1.0 + a0) / 2.0;
            const double s = std::abs(g[1] + g[2] + g[3]);
            for (unsigned k = 1; k <= m_max && m == 0; ++k)
                if (0.25 * (std::pow(r, k) - s) > 1.0)
                    m = k;
            rep.check_true("exponent found within m_max", m != 0);
            if (m == 0) {
                detail::record_verdict(rep, params, Verdict::Inconclusive);
                return rep;
            }
            fn = [m, &P](std::span<const Complex> x) { return P(x, m); };
            const double value = std::abs(fn(g));
            const double lower = 0.25 * (std::pow(a0, m) - s);
            rep.check("|P_m(g)| >= (|g(0)|^m - |g(1)+g(-1)+g(i)|)/4", value, ">=", lower, 1e-12 * std::max(1.0, lower));
            rep.check("bound at r: (r^m - |g(1)+g(-1)+g(i)|)/4 > 1", 0.25 * (std::pow(r, m) - s), ">", 1.0);
            rep.constants["branch"] = "i";
            rep.constants["r"] = r;
        } else {
            const double r = (1.0 + outer) / 2.0;
            const auto mass = [&](unsigned k) {
                return std::pow(std::abs(g[1]), k) + std::pow(std::abs(g[2]), k) + std::pow(std::abs(g[3]), k);
            };
            const auto ret = scan_returns(std::span<const Complex>(g).subspan(1), m_max, [&](unsigned k, double) {
                return mass(k) / 8.0 - a0 / 4.0 > 1.0;
            });
            rep.check_true("return exponent found within m_max", ret.has_value());
            if (!ret) {
                detail::record_verdict(rep, params, Verdict::Inconclusive);
                return rep;
            }
            m = static_cast<unsigned>(ret->m);
            fn = [m, &R](std::span<const Complex> x) { return R(x, m); };
            const double value = std::abs(fn(g));
            const double lower = mass(m) / 8.0 - a0 / 4.0;
            rep.check("|R_m(g)| >= (|g(1)|^m + |g(-1)|^m + |g(i)|^m)/8 - |g(0)|/4", value, ">=", lower,
                      1e-12 * std::max(1.0, lower));
            rep.check("bound at r: r^m/8 - |g(0)|/4 <= the mass bound", std::pow(r, m) / 8.0 - a0 / 4.0, "<=", lower);
            rep.check("mass bound exceeds 1", lower, ">", 1.0);
            rep.constants["branch"] = "ii";
            rep.constants["r"] = r;
            rep.constants["defect"] = ret->max_defect;
        }
        const double value = std::abs(fn(g));
        rep.check("separator invariant under homeomorphisms of K (fix 0, permute 1, -1, i)",
                  verify_invariance(G, fn, 20, ctx.stream("invariance")).max_deviation, "==", 0.0);
        const auto sup = sup_on_set(fn, polydisk(4), ctx.budget, ctx.stream("sup", m), false);
        rep.check("sampled sup over the ball within 1", sup.value, "<=", 1.0, 1e-12);
        const double margin = value - std::max(1.0, sup.value);
        rep.check("separation margin", margin, ">", 0.0);
        rep.constants["m"] = m;
        rep.constants["value"] = value;
        rep.constants["sup"] = sup.value;
        rep.constants["margin"] = margin;
        verdict = Verdict::Separated;
    } else {
        // g~ = g(0)(1 − κ1 − κ2 − κ3) + g(1)κ1 + g(−1)κ2 + g(i)κ3 at a point a + ib of K.
        const auto reduced_at = [&](double a, double b) {
            const double k1 = (b == 0.0 && a >= 0.0) ? a : 0.0;
            const double k2 = (b == 0.0 && a <= 0.0) ? -a : 0.0;
            const double k3 = b;
            return g[0] * (1.0 - k1 - k2 - k3) + g[1] * k1 + g[2] * k2 + g[3] * k3;
        };
        const Point reduced = {reduced_at(0.0, 0.0), reduced_at(1.0, 0.0), reduced_at(-1.0, 0.0), reduced_at(0.0, 1.0)};
        double sup_reduced = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = i / 1000.0;
            sup_reduced = std::max({sup_reduced, std::abs(reduced_at(t, 0.0)), std::abs(reduced_at(-t, 0.0)),
                                    std::abs(reduced_at(0.0, t))});
        }
        rep.check("g~ agrees with g at 0, 1, -1, i", distance(reduced, g), "==", 0.0);
        rep.check("||g~||_inf <= max of the four moduli", sup_reduced, "<=", M, 1e-15);
        rep.check("g~ lies in the ball", sup_reduced, "<=", 1.0, 1e-15);
        rep.check("F(g) = F(g~) on 50 random invariants",
                  reduction_deviation(std::get<FiniteGroup>(G), g, reduced, 3, 50, ctx.seed), "==", 0.0);
    }
    detail::record_verdict(rep, params, verdict);
    return rep;
}

CaseReport case_lp01(const Json& params, const CaseContext& ctx)
{
    const auto N = param<unsigned>(params, "N", 0);
    require(N <= 12, ErrorCode::InvalidArgument, "lp01: level N above 12 is not supported");
    StepFunction x{N, detail::point_param(params, "a")};
    const std::size_t len = std::size_t{1} << N;
    require(x.values.size() == len, ErrorCode::DimensionMismatch, "lp01: a needs 2^N values");
    const double p = detail::p_param(params, "p", 2.0);
    const auto k = param<unsigned>(params, "k", 1);
    require(p >= 1.0 && std::isfinite(p) && k >= 1 && k <= p, ErrorCode::InvalidArgument, "lp01: need 1 <= k <= p < inf");

    CaseReport rep;
    rep.inputs = params;
    Json moments = Json::array();
    unsigned best = 1;
    double best_abs = -1.0;
    for (unsigned j = 1; j <= k; ++j) {
        const Complex mu = x.moment(j);
        moments.push_back(io::to_json(mu));
        if (std::abs(mu) > best_abs) {
            best_abs = std::abs(mu);
            best = j;
        }
    }
    const double norm_pp = x.norm_p_power(p);
    rep.constants = {{"moments", moments}, {"j", best}, {"norm_p_power", norm_pp}};
    rep.check("Hoelder: |int x^j| <= ||x||_p^j", best_abs, "<=", std::pow(norm_pp, best / p), 1e-12);

    LpBall ball;
    ball.dimension = len;
    ball.p = p;
    ball.radius = std::pow(2.0, static_cast<double>(N) / p);
    ball.field = Field::Complex;
    const ScalarFunction fn = [best, N](std::span<const Complex> a) {
        return StepFunction{N, Point(a.begin(), a.end())}.moment(best);
    };
    const auto sup = sup_on_set(fn, ball, ctx.budget, ctx.stream("sup", best), true);
    rep.check("sampled sup over the ball of |int x^j| within 1", sup.value, "<=", 1.0, 1e-9);
    rep.constants["sup"] = sup.value;

    Verdict verdict = Verdict::Inconclusive;
    if (best_abs > 1.0) {
        const double margin = best_abs - std::max(1.0, sup.value);
        rep.check("|int x^j| > 1", best_abs, ">", 1.0);
        rep.check("separation margin", margin, ">", 0.0);
        rep.constants["margin"] = margin;
        verdict = Verdict::Separated;
    } else if (norm_pp <= 1.0) {
        rep.check("x lies in the ball", norm_pp, "<=", 1.0);
        verdict = Verdict::NotSeparated;
    } else {
        rep.notes.push_back("x lies outside the ball but no moment up to k exceeds 1");
    }

    double moment_dev = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        auto rng = make_rng(ctx.seed, "dyadic", t);
        StepFunction y = x;
        std::shuffle(y.values.begin(), y.values.end(), rng);
        for (unsigned j = 1; j <= k; ++j)
            moment_dev = std::max(moment_dev, std::abs(y.moment(j) - x.moment(j)));
    }
    rep.check("moment deviation under 100 random dyadic permutations", moment_dev, "==", 0.0);

    double norm_dev = 0.0;
    double worst_norm = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto rng = make_rng(ctx.seed, "ball_sample", t);
        Point a(len);
        for (auto& v : a)
            v = random_complex(rng);
        const double scale = ball.radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(len)) / lp_norm(a, p);
        for (auto& v : a)
            v *= scale;
        StepFunction s{N, a};
        StepFunction moved = s;
        std::shuffle(moved.values.begin(), moved.values.end(), rng);
        norm_dev = std::max(norm_dev, std::abs(moved.norm_p_power(p) - s.norm_p_power(p)));
        worst_norm = std::max(worst_norm, moved.norm_p_power(p));
    }
    rep.check("permuted ball samples keep their norm", norm_dev, "==", 0.0);
    rep.check("permuted ball samples stay in the ball", worst_norm, "<=", 1.0, 1e-12);

    detail::record_verdict(rep, params, verdict);
    return rep;
}

} // namespace invsep::casebook
