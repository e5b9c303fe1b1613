#include "internal.hpp"

#include "invsep/group_spec.hpp"
#include "invsep/symmetrize.hpp"

#include <cmath>

namespace invsep::casebook {

using detail::param;

namespace {

double alpha_bound(int N, int n, double eps)
{
    double bound = eps / 2.0 * std::pow(1.0 / (n - 1.0), (2.0 * N - 1.0) / (2.0 * N));
    for (int l = 1; l <= N - 1; ++l) {
        const double inner =
            (n / (n - 1.0)) * (std::pow(1.0 / ((1.0 + eps) * std::pow(n, 1.0 / (2.0 * N))), 2.0 * l) - 1.0 / n);
        require(inner > 0.0, ErrorCode::InvalidArgument, "counterexample: epsilon leaves no admissible alpha");
        bound = std::min(bound, std::pow(inner, 1.0 / (2.0 * l)));
    }
    return bound;
}

double rel_tol(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

} // namespace

CaseReport case_counterexample(const Json& params, const CaseContext& ctx)
{
    const int N = param<int>(params, "N", 2);
    const int k = param<int>(params, "k", 1);
    require(N >= 2 && k >= 1, ErrorCode::InvalidArgument, "counterexample: need N >= 2 and k >= 1");
    const int n = 2 * k + 1;

    CaseReport rep;
    rep.inputs = params;
    const double eps_bound = std::pow(n, 1.0 / (2.0 * (N - 1)) - 1.0 / (2.0 * N)) - 1.0;
    const double eps = param<double>(params, "epsilon", eps_bound / 2.0);
    require(eps > 0.0 && eps < eps_bound, ErrorCode::InvalidArgument, "counterexample: epsilon violates its bound");
    const double a_bound = alpha_bound(N, n, eps);
    const double alpha = param<double>(params, "alpha", a_bound / 2.0);
    require(alpha > 0.0 && alpha < a_bound, ErrorCode::InvalidArgument,
            "counterexample: alpha violates its bound");
    rep.constants = {{"n", n},
                     {"epsilon_bound", eps_bound},
                     {"epsilon", eps},
                     {"alpha_bound", a_bound},
                     {"alpha", alpha}};

    std::vector<Complex> coeffs(n, -alpha);
    coeffs[0] = 1.0;
    const auto L = Polynomial::linear(coeffs, Field::Real);
    const auto Q = L * L;
    LpBall ball;
    ball.dimension = static_cast<std::size_t>(n);
    ball.p = 2.0 * N;
    const SetSpec K = ball;
    Point z(n);
    z[0] = 1.0 + eps;

    // (a) Q separates.
    const double holder = std::pow(1.0 + alpha * std::pow(n - 1.0, (2.0 * N - 1.0) / (2.0 * N)), 2.0);
    rep.check("Hoelder bound on sup_K |Q| below (1+eps/2)^2", holder, "<", std::pow(1.0 + eps / 2.0, 2.0));
    const auto supQ = sup_on_set(Q, K, ctx.budget, ctx.stream("sup_Q"));
    rep.check("sampled sup_K |Q| within the Hoelder bound", supQ.value, "<=", holder, 1e-9);
    const double Qz = Q.eval(z).real();
    rep.check("Q(z) = (1+eps)^2", Qz, "==", std::pow(1.0 + eps, 2.0), rel_tol(Qz));
    rep.check("Q separates: |Q(z)| exceeds sampled sup_K |Q|", Qz, ">", supQ.value, 0.0, 1e-3);
    rep.constants["sup_Q"] = supQ.value;

    // (b) P_l fails for l < N at the alternating witness.
    const auto G = std::get<FiniteGroup>(realize(GroupSpec::sym(n)));
    const double root = std::pow(n, -1.0 / (2.0 * N));
    Point w(n);
    w[0] = root;
    for (int i = 1; i < n; ++i)
        w[i] = (i % 2 == 1) ? root : -root;
    rep.check("witness lies in K", lp_norm(w, 2.0 * N), "<=", 1.0, 1e-12);

    Json per_l = Json::array();
    for (int l = 1; l <= N - 1; ++l) {
        const auto Pl = m_symmetrization(L, G, 2 * l);
        double vw = Pl.eval(w).real();
        const double vz = Pl.eval(z).real();
        const double threshold = std::pow(n, -static_cast<double>(l) / N);
        const double closed_z = std::pow(1.0 + eps, 2.0 * l) * (1.0 / n + (n - 1.0) / n * std::pow(alpha, 2.0 * l));
        const double closed_w = (n + 1.0) / (2.0 * n) * std::pow(root, 2.0 * l) +
                                (n - 1.0) / (2.0 * n) * std::pow(root * (1.0 + 2.0 * alpha), 2.0 * l);
        const auto tag = "P_" + std::to_string(l);
        rep.check(tag + "(z) matches its closed form", vz, "==", closed_z, rel_tol(closed_z));
        rep.check(tag + "(witness) matches its closed form", vw, "==", closed_w, rel_tol(closed_w));
        if (vw <= vz) {
            const auto s = sup_on_set(Pl, K, ctx.budget, ctx.stream("fallback", l));
            rep.notes.push_back(tag + ": documented witness did not exceed P(z); sampled witness used");
            vw = s.value;
        }
        rep.check(tag + "(witness) exceeds n^(-l/N)", vw, ">", threshold);
        rep.check(tag + "(z) below n^(-l/N)", vz, "<", threshold);
        rep.check(tag + " does not separate: P(witness) > P(z)", vw, ">", vz, 0.0, 1e-6);

        // Reading with Q^{2l} = L^{4l} in place of the l-th symmetrization.
        const auto alt = m_symmetrization(L, G, 4 * l);
        const double aw = alt.eval(w).real();
        const double az = alt.eval(z).real();
        per_l.push_back({{"l", l}, {"P_witness", vw}, {"P_z", vz}, {"alt_witness", aw}, {"alt_z", az}});
        if ((aw > az) != (vw > vz))
            rep.notes.push_back(tag + ": the Q^(2l) reading gives a different verdict at the witness");
    }
    rep.constants["failing_levels"] = per_l;

    // (c) P_N separates.
    const auto PN = m_symmetrization(L, G, 2 * N);
    const double pz = PN.eval(z).real();
    const double closed = std::pow(1.0 + eps, 2.0 * N) * (1.0 / n + (n - 1.0) / n * std::pow(alpha, 2.0 * N));
    rep.check("P_N(z) matches its closed form", pz, "==", closed, rel_tol(closed));
    rep.check("P_N(z) > 1/n", pz, ">", 1.0 / n);
    const auto supPN = sup_on_set(PN, K, ctx.budget, ctx.stream("sup_PN"));
    rep.check("P_N separates: P_N(z) exceeds sampled sup_K |P_N|", pz, ">", supPN.value, 0.0, 1e-6);
    rep.constants["P_N_z"] = pz;
    rep.constants["sup_P_N"] = supPN.value;

    // The generic search from the linear form reaches the same exponent.
    auto opts = ctx.separation("even_search");
    opts.m_max = static_cast<unsigned>(N + 2);
    const auto found = find_even_exponent(L, G, K, z, opts);
    rep.check("even-exponent search from L returns m = N", found.m ? static_cast<double>(*found.m) : 0.0, "==",
              static_cast<double>(N));
    return rep;
}

CaseReport case_circle_nonseparation(const Json& params, const CaseContext& ctx)
{
    const int m_max = param<int>(params, "m_max", 16);
    require(m_max >= 1, ErrorCode::InvalidArgument, "circle case: m_max must be positive");
    CaseReport rep;
    rep.inputs = params;
    const auto order = default_quadrature_order(m_max);
    const AveragingGroup T = TorusGroup{1, {0}, order};
    rep.constants = {{"quadrature_nodes", order}};

    for (int d = 0; d <= m_max; ++d) {
        const auto s = symmetrize(Polynomial::monomial({static_cast<std::uint32_t>(d)}, 1.0, Field::Complex), T);
        const double symbolic = std::abs(s.coefficient({static_cast<std::uint32_t>(d)}));
        const double numeric = std::abs(haar_average(
            [d](const GroupElement& e) {
                const auto x = e.apply(Point{1.0});
                return ipow(x[0], static_cast<unsigned>(d));
            },
            T));
        if (d == 0) {
            rep.check("S_G(1) = 1 (quadrature)", numeric, "==", 1.0, 1e-12);
            rep.check("S_G(1) = 1 (symbolic)", symbolic, "==", 1.0, 1e-12);
        } else {
            rep.check("|S_G(z^" + std::to_string(d) + ")| vanishes (quadrature)", numeric, "<", 1e-12);
            rep.check("S_G(z^" + std::to_string(d) + ") is the zero polynomial", s.is_zero() ? 1.0 : 0.0, "==", 1.0);
        }
    }

    LpBall disk;
    disk.dimension = 1;
    disk.p = 2.0;
    disk.field = Field::Complex;
    const Point w{2.0};
    const auto f = Polynomial::variable(1, 0, Field::Complex);
    auto opts = ctx.separation("circle");
    const auto direct = evaluate_separation(f, disk, w, opts);
    rep.check("f(z) = z separates w = 2 from the disk", direct.value_at_z, ">", direct.sup.value, 0.0, 1e-6);
    opts.m_max = 8;
    const auto sym = separate(f, T, disk, w, opts);
    rep.check("no symmetrized power of f separates (verdict not_separated)",
              sym.verdict == Verdict::NotSeparated ? 1.0 : 0.0, "==", 1.0);
    rep.constants["largest_symmetrized_value_at_w"] = sym.value_at_z;
    return rep;
}

} // namespace invsep::casebook
