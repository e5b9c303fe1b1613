#include "invsep/setspec.hpp"

#include "invsep/diophantine.hpp"
#include "invsep/error.hpp"
#include "invsep/random.hpp"
#include "invsep/symmetrize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace invsep {

namespace {

constexpr double kFeasibilityTol = 1e-9;

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool is_real_point(std::span<const Complex> z)
{
    return std::all_of(z.begin(), z.end(), [](Complex c) { return c.imag() == 0.0; });
}

// ---------------------------------------------------------------- sup estimation

class BallSampler {
public:
    BallSampler(const LpBall& ball, bool homogeneous) : ball_(ball), homogeneous_(homogeneous) {}

    Point draw(std::uint64_t seed, std::size_t index) const
    {
        auto rng = make_rng(seed, "sup.sample", index);
        const std::size_t n = ball_.dimension;
        Point x(n);
        const bool complex = ball_.field == Field::Complex;
        switch (index % 3) {
        case 0: // dense gaussian direction
            for (auto& c : x)
                c = complex ? Complex(gaussian(rng), gaussian(rng)) : Complex(gaussian(rng), 0.0);
            break;
        case 1: { // sparse support
            const auto s = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
            for (std::size_t k = 0; k < s; ++k) {
                const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
                x[i] = complex ? Complex(gaussian(rng), gaussian(rng)) : Complex(gaussian(rng), 0.0);
            }
            break;
        }
        default: // unimodular-ish entries near the corners
            for (auto& c : x) {
                const double mag = 0.5 + 0.5 * uniform01(rng);
                if (complex)
                    c = std::polar(mag, 2.0 * std::numbers::pi * uniform01(rng));
                else
                    c = uniform01(rng) < 0.5 ? -mag : mag;
            }
            break;
        }
        double scale = ball_.radius;
        if (!homogeneous_ && index % 2 == 1)
            scale *= std::pow(uniform01(rng), 1.0 / static_cast<double>(n));
        return to_radius(std::move(x), scale);
    }

    std::vector<Point> structured() const
    {
        const std::size_t n = ball_.dimension;
        const bool complex = ball_.field == Field::Complex;
        std::vector<Point> out;
        for (std::size_t i = 0; i < n; ++i) {
            Point e(n);
            e[i] = ball_.radius;
            out.push_back(e);
            e[i] = -ball_.radius;
            out.push_back(e);
            if (complex) {
                e[i] = Complex(0.0, ball_.radius);
                out.push_back(e);
            }
        }
        const std::size_t units = complex ? 4 : 2;
        const std::size_t digits = n;
        std::size_t patterns = 1;
        bool enumerate = true;
        for (std::size_t i = 0; i < digits && enumerate; ++i) {
            patterns *= units;
            enumerate = patterns <= 4096;
        }
        if (enumerate) {
            const Complex unit[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (std::size_t code = 0; code < patterns; ++code) {
                Point x(n);
                auto c = code;
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] = unit[c % units];
                    c /= units;
                }
                out.push_back(to_radius(std::move(x), ball_.radius));
            }
        }
        return out;
    }

    // Coordinate ascent on |f| with halving steps, kept inside the ball (on the sphere when homogeneous).
    double polish(const ScalarFunction& f, Point& x, double value, std::size_t steps) const
    {
        const std::size_t n = ball_.dimension;
        std::vector<Complex> dirs = {{1, 0}, {-1, 0}};
        if (ball_.field == Field::Complex) {
            dirs.emplace_back(0, 1);
            dirs.emplace_back(0, -1);
        }
        double h = 0.1 * ball_.radius;
        for (std::size_t s = 0; s < steps && h > 1e-10 * ball_.radius; ++s) {
            bool improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                for (Complex d : dirs) {
                    Point y = x;
                    y[i] += h * d;
                    const double norm = lp_norm(y, ball_.p);
                    if (norm == 0.0)
                        continue;
                    if (homogeneous_ || norm > ball_.radius)
                        y = to_radius(std::move(y), ball_.radius);
                    const double v = std::abs(f(y));
                    if (v > value) {
                        value = v;
                        x = std::move(y);
                        improved = true;
                    }
                }
            }
            if (!improved)
                h *= 0.5;
        }
        return value;
    }

    Point to_radius(Point x, double radius) const
    {
        const double norm = lp_norm(x, ball_.p);
        if (norm == 0.0)
            return x;
        for (auto& c : x)
            c *= radius / norm;
        return x;
    }

private:
    const LpBall& ball_;
    bool homogeneous_;
};

SupEstimate sup_on_ball(const ScalarFunction& f, const LpBall& ball, const SampleBudget& budget, std::uint64_t seed,
                        bool homogeneous)
{
    BallSampler sampler(ball, homogeneous);
    SupEstimate best;
    best.witness = Point(ball.dimension);
    best.value = std::abs(f(best.witness));
    best.method = "sampling";

    auto consider = [&](std::vector<Point> candidates) {
        std::size_t arg = 0;
        double top = -1.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const double v = std::abs(f(candidates[i]));
            if (v > top) {
                top = v;
                arg = i;
            }
        }
        if (candidates.empty())
            return;
        if (top > best.value) {
            best.value = top;
            best.witness = candidates[arg];
            best.method = "sampling";
        }
        Point x = candidates[arg];
        const double polished = sampler.polish(f, x, top, budget.polish_steps);
        if (polished > best.value) {
            best.value = polished;
            best.witness = std::move(x);
            best.method = "polish";
        }
    };

    consider(sampler.structured());
    for (std::size_t start = 0; start < budget.samples; start += kSupChunk) {
        const auto stop = std::min(budget.samples, start + kSupChunk);
        std::vector<Point> chunk;
        chunk.reserve(stop - start);
        for (auto i = start; i < stop; ++i)
            chunk.push_back(sampler.draw(seed, i));
        consider(std::move(chunk));
    }
    best.budget_used = budget.samples;
    // Re-check feasibility; polishing renormalizes, so this only guards rounding.
    const double norm = lp_norm(best.witness, ball.p);
    if (norm > ball.radius * (1.0 + kFeasibilityTol)) {
        best.witness = sampler.to_radius(best.witness, ball.radius);
        best.value = std::abs(f(best.witness));
    }
    return best;
}

// ---------------------------------------------------------------- separation helpers

std::uint64_t child_seed(const SeparationOptions& opts, const char* name, std::uint64_t index = 0)
{
    return substream_seed(opts.seed, name, index);
}

SeparationReport blank_report(const SeparationOptions& opts)
{
    SeparationReport r;
    r.seed = opts.seed;
    r.budget = opts.budget.samples;
    return r;
}

void adopt(SeparationReport& into, const SeparationReport& step)
{
    into.sup = step.sup;
    into.value_at_z = step.value_at_z;
    into.margin = step.margin;
    into.separator = step.separator;
    into.verdict = step.verdict;
}

// Separation check for a symmetrized power, symbolic when the expansion fits, numeric otherwise.
SeparationReport check_power(const Polynomial& q, const FiniteGroup& g, unsigned power, const SetSpec& k,
                             std::span<const Complex> z, const SeparationOptions& opts, std::uint64_t index,
                             const char* stream)
{
    SeparationOptions local = opts;
    local.seed = child_seed(opts, stream, index);
    try {
        const auto p = m_symmetrization(q, g, power, opts.degree_cap);
        auto rep = evaluate_separation(p, k, z, local);
        rep.seed = opts.seed;
        return rep;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegreeOverflow)
            throw;
    }
    SymmetrizedEvaluator ev(q, AveragingGroup(g), power);
    auto rep = evaluate_separation([&ev](std::span<const Complex> w) { return ev(w); }, homogeneity(q).homogeneous, k, z,
                                   local);
    rep.seed = opts.seed;
    rep.notes.push_back("numeric evaluation (degree " + std::to_string(power * static_cast<unsigned>(q.degree())) +
                        " exceeds the expansion cap)");
    return rep;
}

bool set_is_real(const SetSpec& k)
{
    if (const auto* b = std::get_if<LpBall>(&k))
        return b->field == Field::Real;
    if (const auto* c = std::get_if<PointCloud>(&k))
        return std::all_of(c->points.begin(), c->points.end(), [](const Point& p) { return is_real_point(p); });
    return false;
}

SeparationReport search_finite(const Polynomial& q, const FiniteGroup& g, const SetSpec& k, std::span<const Complex> z,
                               const SeparationOptions& opts)
{
    const bool real = q.field() == Field::Real && g.is_real() && is_real_point(z) && set_is_real(k);
    return real ? find_even_exponent(q, g, k, z, opts) : find_complex_exponent(q, g, k, z, opts);
}

// ---------------------------------------------------------------- Wolfe nearest point

// Minimum-norm point of conv(columns of P).
Eigen::VectorXd min_norm_point(const Eigen::MatrixXd& P)
{
    const double scale = std::max(1.0, P.colwise().squaredNorm().maxCoeff());
    const double tol = 1e-12 * scale;

    Eigen::Index start = 0;
    P.colwise().squaredNorm().minCoeff(&start);
    std::vector<Eigen::Index> S{start};
    std::vector<double> lambda{1.0};
    Eigen::VectorXd x = P.col(start);

    for (int major = 0; major < 10000; ++major) {
        Eigen::Index j = 0;
        (P.transpose() * x).minCoeff(&j);
        if (x.dot(P.col(j)) > x.squaredNorm() - tol)
            break;
        if (std::find(S.begin(), S.end(), j) != S.end())
            break;
        S.push_back(j);
        lambda.push_back(0.0);

        for (int minor = 0; minor < 10000; ++minor) {
            const auto s = static_cast<Eigen::Index>(S.size());
            Eigen::MatrixXd A(s + 1, s + 1);
            for (Eigen::Index a = 0; a < s; ++a)
                for (Eigen::Index b = 0; b < s; ++b)
                    A(a, b) = P.col(S[a]).dot(P.col(S[b]));
            A.row(s).setOnes();
            A.col(s).setOnes();
            A(s, s) = 0.0;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
            rhs(s) = 1.0;
            const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
            const Eigen::VectorXd mu = sol.head(s);

            if ((mu.array() > 1e-12).all()) {
                for (Eigen::Index a = 0; a < s; ++a)
                    lambda[a] = mu(a);
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < s; ++a)
                if (mu(a) <= 1e-12)
                    theta = std::min(theta, lambda[a] / (lambda[a] - mu(a)));
            for (Eigen::Index a = 0; a < s; ++a)
                lambda[a] += theta * (mu(a) - lambda[a]);
            std::vector<Eigen::Index> S2;
            std::vector<double> l2;
            for (Eigen::Index a = 0; a < s; ++a)
                if (lambda[a] > 1e-12) {
                    S2.push_back(S[a]);
                    l2.push_back(lambda[a]);
                }
            S = std::move(S2);
            lambda = std::move(l2);
            const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
            for (auto& l : lambda)
                l /= total;
        }
        x.setZero();
        for (std::size_t a = 0; a < S.size(); ++a)
            x += lambda[a] * P.col(S[a]);
    }
    return x;
}

// ---------------------------------------------------------------- truncation helpers

double gradient_bound(const Polynomial& q, double radius, const LpBall& ball, std::uint64_t seed)
{
    std::vector<Polynomial> partials;
    for (std::size_t i = 0; i < q.dimension(); ++i)
        partials.push_back(derivative(q, i));
    ScalarFunction g = [&partials](std::span<const Complex> x) {
        double s = 0.0;
        for (const auto& d : partials)
            s += std::abs(d.eval(x));
        return Complex(s, 0.0);
    };
    LpBall big = ball;
    big.radius = radius;
    return sup_on_set(g, big, SampleBudget{2000, 50}, seed, false).value;
}

} // namespace

// ---------------------------------------------------------------- sets

double lp_norm(std::span<const Complex> x, double p)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (Complex c : x)
            m = std::max(m, std::abs(c));
        return m;
    }
    double s = 0.0;
    for (Complex c : x)
        s += std::pow(std::abs(c), p);
    return std::pow(s, 1.0 / p);
}

std::size_t set_dimension(const SetSpec& k)
{
    if (const auto* b = std::get_if<LpBall>(&k))
        return b->dimension;
    if (const auto* c = std::get_if<PointCloud>(&k))
        return c->points.empty() ? 0 : c->points.front().size();
    fail(ErrorCode::Unsupported, "named sets have no intrinsic dimension");
}

void validate(const SetSpec& k)
{
    if (const auto* b = std::get_if<LpBall>(&k)) {
        require(b->dimension >= 1, ErrorCode::InvalidArgument, "lp ball: dimension must be positive");
        require(b->p >= 1.0, ErrorCode::InvalidArgument, "lp ball: p must be at least 1");
        require(b->radius > 0.0, ErrorCode::InvalidArgument, "lp ball: radius must be positive");
    } else if (const auto* c = std::get_if<PointCloud>(&k)) {
        require(!c->points.empty(), ErrorCode::InvalidArgument, "point cloud: no points");
        const auto n = c->points.front().size();
        for (const auto& p : c->points)
            require(p.size() == n, ErrorCode::DimensionMismatch, "point cloud: points of different dimensions");
    }
}

bool contains(const SetSpec& k, std::span<const Complex> x, double tol)
{
    if (const auto* b = std::get_if<LpBall>(&k)) {
        if (b->field == Field::Real &&
            std::any_of(x.begin(), x.end(), [&](Complex c) { return std::abs(c.imag()) > tol * std::max(1.0, b->radius); }))
            return false;
        return x.size() == b->dimension && lp_norm(x, b->p) <= b->radius * (1.0 + tol);
    }
    if (const auto* c = std::get_if<PointCloud>(&k))
        return std::any_of(c->points.begin(), c->points.end(), [&](const Point& p) {
            return p.size() == x.size() && distance(p, x) <= tol * std::max(1.0, lp_norm(p, 2.0));
        });
    fail(ErrorCode::Unsupported, "membership in a named set is decided by its case");
}

SupEstimate sup_on_set(const ScalarFunction& f, const SetSpec& k, const SampleBudget& budget, std::uint64_t seed,
                       bool homogeneous)
{
    validate(k);
    if (const auto* c = std::get_if<PointCloud>(&k)) {
        SupEstimate best;
        best.method = "exact";
        best.value = -1.0;
        for (const auto& p : c->points) {
            const double v = std::abs(f(p));
            if (v > best.value) {
                best.value = v;
                best.witness = p;
            }
        }
        best.budget_used = c->points.size();
        return best;
    }
    if (const auto* b = std::get_if<LpBall>(&k))
        return sup_on_ball(f, *b, budget, seed, homogeneous);
    fail(ErrorCode::Unsupported, "sup over a named set is computed by its case");
}

SupEstimate sup_on_set(const Polynomial& p, const SetSpec& k, const SampleBudget& budget, std::uint64_t seed)
{
    validate(k);
    require(p.dimension() == set_dimension(k), ErrorCode::DimensionMismatch,
            "sup: polynomial dimension " + std::to_string(p.dimension()) + " differs from set dimension " +
                std::to_string(set_dimension(k)));
    const auto h = homogeneity(p);
    return sup_on_set([&p](std::span<const Complex> x) { return p.eval(x); }, k, budget, seed,
                      h.homogeneous && h.degree >= 1);
}

// ---------------------------------------------------------------- normalization

Normalization normalization_constant(double sup, double value, double margin_tol)
{
    require(value - sup > margin_tol, ErrorCode::NotSeparating,
            "Q does not separate: sup over K is " + fmt(sup) + " against |Q(z)| = " + fmt(value));
    Normalization n;
    n.sup = sup;
    n.value = value;
    n.t = sup > 0.0 ? std::sqrt(sup * value) : 0.5 * value;
    n.r = sup / n.t;
    return n;
}

NormalizedSeparator normalize_separator(const Polynomial& q, const SetSpec& k, std::span<const Complex> z,
                                        const SampleBudget& budget, std::uint64_t seed, double margin_tol)
{
    require(z.size() == q.dimension(), ErrorCode::DimensionMismatch, "normalize: point dimension");
    auto sup = sup_on_set(q, k, budget, seed);
    const auto scale = normalization_constant(sup.value, std::abs(q.eval(z)), margin_tol);
    return {q.scaled(1.0 / scale.t), scale, std::move(sup)};
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Separated:
        return "separated";
    case Verdict::NotSeparated:
        return "not_separated";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

// ---------------------------------------------------------------- verdicts

SeparationReport evaluate_separation(const ScalarFunction& f, bool homogeneous, const SetSpec& k,
                                     std::span<const Complex> z, const SeparationOptions& opts)
{
    auto rep = blank_report(opts);
    rep.sup = sup_on_set(f, k, opts.budget, opts.seed, homogeneous);
    rep.value_at_z = std::abs(f(z));
    rep.margin = rep.value_at_z - rep.sup.value;
    rep.verdict = rep.margin > opts.margin_tol ? Verdict::Separated : Verdict::NotSeparated;
    return rep;
}

SeparationReport evaluate_separation(const Polynomial& p, const SetSpec& k, std::span<const Complex> z,
                                     const SeparationOptions& opts)
{
    require(z.size() == p.dimension(), ErrorCode::DimensionMismatch, "separation: point dimension");
    auto rep = blank_report(opts);
    rep.sup = sup_on_set(p, k, opts.budget, opts.seed);
    rep.value_at_z = std::abs(p.eval(z));
    rep.margin = rep.value_at_z - rep.sup.value;
    rep.verdict = rep.margin > opts.margin_tol ? Verdict::Separated : Verdict::NotSeparated;
    rep.separator = p;
    return rep;
}

SeparationReport find_even_exponent(const Polynomial& q, const FiniteGroup& g, const SetSpec& k,
                                    std::span<const Complex> z, const SeparationOptions& opts)
{
    require(q.field() == Field::Real && g.is_real(), ErrorCode::InvalidArgument,
            "even-exponent search needs a real polynomial and a real group");
    require(q.dimension() == g.dimension() && z.size() == q.dimension(), ErrorCode::DimensionMismatch,
            "even-exponent search: dimensions of Q, G and z differ");
    const auto ns = normalize_separator(q, k, z, opts.budget, child_seed(opts, "normalize"), opts.margin_tol);

    auto report = blank_report(opts);
    report.r = ns.scale.r;
    for (unsigned m = 1; m <= opts.m_max; ++m) {
        auto step = check_power(ns.q, g, 2 * m, k, z, opts, m, "even");
        report.steps.push_back({m, 2 * m, step.sup.value, step.value_at_z, step.margin});
        for (auto& n : step.notes)
            report.notes.push_back("m=" + std::to_string(m) + ": " + n);
        if (step.verdict == Verdict::Separated) {
            adopt(report, step);
            report.m = m;
            report.power = 2 * m;
            return report;
        }
        adopt(report, step);
    }
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("no m <= " + std::to_string(opts.m_max) + " separated; this is not a disproof");
    return report;
}

ArgCondition check_arg_condition(const Polynomial& q, const FiniteGroup& g, std::span<const Complex> z, double eta,
                                 double angle_tol)
{
    require(eta > 0.0 && eta < 1.0, ErrorCode::InvalidArgument, "argument condition: eta must lie in (0, 1)");
    const SymmetrizedEvaluator ev(q, AveragingGroup(g), 1);
    const auto values = ev.orbit_values(z);
    const auto set = diophantine::angle_cluster(values, eta, angle_tol);
    ArgCondition out;
    out.angles = set.angles;
    out.multiplicity = set.multiplicity;
    out.orbit_size = values.size();
    for (auto c : set.multiplicity)
        out.kept += c;
    return out;
}

SeparationReport find_complex_exponent(const Polynomial& q, const FiniteGroup& g, const SetSpec& k,
                                       std::span<const Complex> z, const SeparationOptions& opts)
{
    require(q.dimension() == g.dimension() && z.size() == q.dimension(), ErrorCode::DimensionMismatch,
            "complex search: dimensions of Q, G and z differ");
    const auto ns = normalize_separator(q, k, z, opts.budget, child_seed(opts, "normalize"), opts.margin_tol);
    const double r = ns.scale.r;
    const double eta = opts.eta.value_or(0.5 * r);
    require(eta > 0.0 && eta < 1.0, ErrorCode::InvalidArgument, "complex search: eta must lie in (0, 1)");

    auto report = blank_report(opts);
    report.r = r;
    report.eta = eta;

    const SymmetrizedEvaluator base(ns.q, AveragingGroup(g), 1);
    const auto orbit_values = base.orbit_values(z);
    const auto angles = diophantine::angle_cluster(orbit_values, eta, opts.angle_tol);
    report.notes.push_back(std::to_string(angles.size()) + " distinct orbit angle(s) among values of modulus >= eta");
    const double tol = std::max(r, 1e-9);

    std::uint64_t m_min = 1;
    while (m_min <= opts.m_max) {
        diophantine::ReturnResult ret;
        try {
            ret = diophantine::simultaneous_return(angles, tol, opts.m_max, m_min);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExponentExhausted)
                throw;
            break;
        }
        const auto m = static_cast<unsigned>(ret.m);

        ChainCheck chain;
        double avg = 0.0;
        for (Complex v : orbit_values)
            avg += std::pow(std::abs(v), m);
        avg /= static_cast<double>(orbit_values.size());
        chain.lhs = std::abs(SymmetrizedEvaluator(ns.q, AveragingGroup(g), m)(z));
        chain.haar_average = avg;
        chain.rhs = (1.0 - r) * avg - 2.0 * std::pow(eta, m);
        chain.holds = chain.lhs >= chain.rhs - 1e-8;

        auto step = check_power(ns.q, g, m, k, z, opts, m, "complex");
        report.steps.push_back({m, m, step.sup.value, step.value_at_z, step.margin});
        for (auto& n : step.notes)
            report.notes.push_back("m=" + std::to_string(m) + ": " + n);
        adopt(report, step);
        report.chain = chain;
        if (!chain.holds)
            report.notes.push_back("m=" + std::to_string(m) + ": lower-bound chain failed (" + fmt(chain.lhs) + " < " +
                                   fmt(chain.rhs) + ")");
        if (step.verdict == Verdict::Separated && chain.holds) {
            report.m = m;
            report.power = m;
            return report;
        }
        m_min = ret.m + 1;
    }
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("no return exponent <= " + std::to_string(opts.m_max) + " separated; this is not a disproof");
    return report;
}

SeparationReport separate(const Polynomial& q, const AveragingGroup& g, const SetSpec& k, std::span<const Complex> z,
                          const SeparationOptions& opts)
{
    validate(k);
    require(q.dimension() == group_dimension(g) && q.dimension() == set_dimension(k) && z.size() == q.dimension(),
            ErrorCode::DimensionMismatch, "separate: dimensions of Q, G, K and z differ");

    if (std::holds_alternative<TorusGroup>(g)) {
        auto report = blank_report(opts);
        const unsigned tries = std::min(opts.m_max, 8u);
        const bool homogeneous = homogeneity(q).homogeneous;
        for (unsigned m = 1; m <= tries; ++m) {
            SymmetrizedEvaluator ev(q, g, m);
            SeparationOptions local = opts;
            local.seed = child_seed(opts, "torus", m);
            auto step = evaluate_separation([&ev](std::span<const Complex> w) { return ev(w); }, homogeneous, k, z, local);
            report.steps.push_back({m, m, step.sup.value, step.value_at_z, step.margin});
            adopt(report, step);
            report.seed = opts.seed;
            if (step.verdict == Verdict::Separated) {
                report.m = m;
                report.power = m;
                return report;
            }
        }
        report.verdict = Verdict::NotSeparated;
        report.notes.push_back("circle group: only constant polynomials are invariant, so every symmetrized power "
                               "is constant and cannot separate");
        return report;
    }

    const auto& fg = std::get<FiniteGroup>(g);
    SeparationOptions local = opts;
    local.seed = child_seed(opts, "base");
    auto base = evaluate_separation(q, k, z, local);
    if (base.verdict != Verdict::Separated) {
        base.seed = opts.seed;
        base.separator.reset();
        base.notes.push_back("Q itself does not separate z from K, so no symmetrization is attempted");
        return base;
    }
    return search_finite(q, fg, k, z, opts);
}

// ---------------------------------------------------------------- linear separator

LinearSeparator find_linear_separator(const PointCloud& k, std::span<const Complex> z, Field field)
{
    validate(SetSpec(k));
    const std::size_t n = k.points.front().size();
    require(z.size() == n, ErrorCode::DimensionMismatch, "linear separator: point dimension");
    const bool complex = field == Field::Complex;
    const std::size_t d = complex ? 2 * n : n;

    auto realify = [&](std::span<const Complex> x, Eigen::Ref<Eigen::VectorXd> out) {
        for (std::size_t j = 0; j < n; ++j) {
            if (complex) {
                out(static_cast<Eigen::Index>(2 * j)) = x[j].real();
                out(static_cast<Eigen::Index>(2 * j + 1)) = x[j].imag();
            } else {
                out(static_cast<Eigen::Index>(j)) = x[j].real();
            }
        }
    };
    Eigen::VectorXd zr(static_cast<Eigen::Index>(d));
    realify(z, zr);

    for (std::size_t phases = complex ? 4 : 2; phases <= (complex ? 64u : 2u); phases *= 2) {
        const auto cols = static_cast<Eigen::Index>(k.points.size() * phases);
        Eigen::MatrixXd P(static_cast<Eigen::Index>(d), cols);
        Eigen::Index c = 0;
        for (const auto& pt : k.points)
            for (std::size_t s = 0; s < phases; ++s) {
                const Complex u = complex ? std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) /
                                                               static_cast<double>(phases))
                                          : Complex(s == 0 ? 1.0 : -1.0, 0.0);
                Point rotated(pt.size());
                for (std::size_t j = 0; j < n; ++j)
                    rotated[j] = u * pt[j];
                Eigen::VectorXd col(static_cast<Eigen::Index>(d));
                realify(rotated, col);
                P.col(c++) = col - zr;
            }
        const Eigen::VectorXd y = min_norm_point(P);
        require(y.norm() > 1e-10, ErrorCode::NotSeparating,
                "z lies in the closed convex balanced hull of K: no degree-1 separator exists");
        const Eigen::VectorXd dir = -y;

        LinearSeparator out;
        out.phases = phases;
        out.coefficients.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            out.coefficients[j] = complex ? Complex(dir(static_cast<Eigen::Index>(2 * j)), -dir(static_cast<Eigen::Index>(2 * j + 1)))
                                          : Complex(dir(static_cast<Eigen::Index>(j)), 0.0);
        auto apply = [&](std::span<const Complex> w) {
            Complex s{};
            for (std::size_t j = 0; j < n; ++j)
                s += out.coefficients[j] * w[j];
            return s;
        };
        double sup = 0.0;
        for (const auto& pt : k.points)
            sup = std::max(sup, std::abs(apply(pt)));
        const double value = std::abs(apply(z));
        if (value - sup <= 1e-9 * std::max(1.0, value))
            continue;
        const double scale = sup > 0.0 ? 1.0 / sup : 1.0 / value;
        for (auto& cf : out.coefficients)
            cf *= scale;
        out.sup = sup * scale;
        out.value = value * scale;
        out.margin = out.value - out.sup;
        return out;
    }
    fail(ErrorCode::NotSeparating, "no linear functional found separating z from the balanced hull of K");
}

// ---------------------------------------------------------------- truncation

SeparationReport truncation_pipeline(const TruncationRequest& req, const SeparationOptions& opts)
{
    const std::size_t L = req.group.dimension();
    require(req.ball.dimension == L && req.z_head.size() == L && req.q.dimension() == L, ErrorCode::DimensionMismatch,
            "truncation: group, ball, z and Q must share the head length");
    require(!req.schedule.empty(), ErrorCode::InvalidArgument, "truncation: empty schedule");
    require(req.tail_bound >= 0.0, ErrorCode::InvalidArgument, "truncation: negative tail bound");

    auto report = blank_report(opts);
    if (!req.ball.unconditional_basis)
        report.notes.push_back("assumption: pi_j(K) subset of K is not implied by the declared basis and is assumed");

    double slack = 0.0;
    if (req.tail_bound > 0.0) {
        const double lip = gradient_bound(req.q, lp_norm(req.z_head, req.ball.p) + req.tail_bound, req.ball,
                                          child_seed(opts, "lipschitz"));
        slack = lip * req.tail_bound;
        report.notes.push_back("tail slack " + fmt(slack) + " (gradient bound " + fmt(lip) + " times tail " +
                               fmt(req.tail_bound) + ")");
    }

    bool any_group = false;
    std::string last_witness;
    for (std::size_t idx = 0; idx < req.schedule.size(); ++idx) {
        const auto j = req.schedule[idx];
        require(j >= 1 && j <= L, ErrorCode::InvalidArgument, "truncation: level out of range");
        const auto proj = project_group(req.group, j);
        if (!proj.is_group) {
            last_witness = proj.witness.value_or("");
            report.notes.push_back("j=" + std::to_string(j) + ": projected set is not a group (" + last_witness + ")");
            continue;
        }
        any_group = true;

        const auto qj = restrict_leading(req.q, j);
        const Point zj(req.z_head.begin(), req.z_head.begin() + static_cast<std::ptrdiff_t>(j));
        LpBall bj = req.ball;
        bj.dimension = j;
        SeparationOptions local = opts;
        local.seed = child_seed(opts, "truncation.base", j);
        const auto base = evaluate_separation(qj, SetSpec(bj), zj, local);
        report.steps.push_back({0, 1, base.sup.value, base.value_at_z, base.margin});
        if (base.margin <= opts.margin_tol + slack) {
            report.notes.push_back("j=" + std::to_string(j) + ": margin " + fmt(base.margin) +
                                   " does not exceed tolerance plus tail slack");
            adopt(report, base);
            report.separator.reset();
            continue;
        }

        const FiniteGroup gj(j, proj.elements);
        auto found = search_finite(qj, gj, SetSpec(bj), zj, opts);
        found.j_used = j;
        found.notes.insert(found.notes.begin(), report.notes.begin(), report.notes.end());
        if (found.verdict == Verdict::Separated && found.separator) {
            const auto lifted = extend_dimension(*found.separator, L);
            const bool real = lifted.field() == Field::Real && req.group.is_real();
            found.invariance_deviation =
                verify_invariance(AveragingGroup(req.group), lifted, 200, child_seed(opts, "invariance"), real).max_deviation;
            found.separator = lifted;
        }
        return found;
    }
    if (!any_group)
        fail(ErrorCode::NotInvertible,
             "truncation: the projected set is not a group at any scheduled level (" + last_witness + ")");
    report.verdict = Verdict::NotSeparated;
    report.notes.push_back("no scheduled level captures the margin");
    return report;
}

} // namespace invsep
