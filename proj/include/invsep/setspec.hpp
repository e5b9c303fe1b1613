#pragma once

#include "invsep/groups.hpp"
#include "invsep/poly.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace invsep {

struct PointCloud {
    std::vector<Point> points;
};

/// {x : ‖x‖_p ≤ radius} in K^n. p = +∞ gives the sup-norm ball.
struct LpBall {
    std::size_t dimension = 1;
    double p = 2.0;
    double radius = 1.0;
    Field field = Field::Real;
    /// Declares the coordinate basis 1-unconditional, so coordinate truncation maps the ball into itself.
    bool unconditional_basis = true;
};

struct NamedCase {
    std::string id;
    std::string params_json = "{}";
};

using SetSpec = std::variant<PointCloud, LpBall, NamedCase>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

double lp_norm(std::span<const Complex> x, double p);
std::size_t set_dimension(const SetSpec& k);
/// Membership within a relative tolerance. NamedCase is unsupported.
bool contains(const SetSpec& k, std::span<const Complex> x, double tol = 1e-9);
void validate(const SetSpec& k);

struct SampleBudget {
    std::size_t samples = 20000;
    std::size_t polish_steps = 200;
};

/// A lower bound for sup_K |P|: value = |P(witness)| and witness ∈ K.
struct SupEstimate {
    double value = 0.0;
    Point witness;
    std::size_t budget_used = 0;
    std::string method; ///< "exact", "sampling" or "polish"
};

using ScalarFunction = std::function<Complex(std::span<const Complex>)>;

/// Exact maximum over a point cloud. On a ball: seeded random samples in chunks of
/// kSupChunk, each chunk's best point polished by coordinate ascent, plus a fixed set of
/// structured candidates (coordinate vectors, sign patterns). The estimate is the max over
/// chunks, so raising the budget in whole chunks never lowers it.
SupEstimate sup_on_set(const Polynomial& p, const SetSpec& k, const SampleBudget& budget, std::uint64_t seed);
SupEstimate sup_on_set(const ScalarFunction& f, const SetSpec& k, const SampleBudget& budget, std::uint64_t seed,
                       bool homogeneous);

inline constexpr std::size_t kSupChunk = 1000;

struct Normalization {
    double t = 1.0;     ///< Q_scaled = Q / t
    double r = 0.0;     ///< sup_K |Q_scaled|
    double sup = 0.0;   ///< sup_K |Q| estimate
    double value = 0.0; ///< |Q(z)|
};

/// t = √(sup·|Q(z)|). Throws NotSeparating unless value − sup > margin_tol.
Normalization normalization_constant(double sup, double value, double margin_tol = 1e-6);

struct NormalizedSeparator {
    Polynomial q;
    Normalization scale;
    SupEstimate sup;
};

NormalizedSeparator normalize_separator(const Polynomial& q, const SetSpec& k, std::span<const Complex> z,
                                        const SampleBudget& budget, std::uint64_t seed, double margin_tol = 1e-6);

enum class Verdict { Separated, NotSeparated, Inconclusive };
const char* to_string(Verdict v);

struct SeparationOptions {
    SampleBudget budget;
    std::uint64_t seed = 42;
    double margin_tol = 1e-6;
    unsigned m_max = 200;
    std::optional<double> eta; ///< defaults to r/2
    double angle_tol = 1e-9;
    int degree_cap = Polynomial::kDefaultDegreeCap;
};

struct SeparationStep {
    unsigned m = 0;
    unsigned power = 0;
    double sup = 0.0;
    double value = 0.0;
    double margin = 0.0;
};

/// Numeric form of the complex lower-bound chain at one exponent.
struct ChainCheck {
    double lhs = 0.0;          ///< |P_m(z)|
    double haar_average = 0.0; ///< avg |Q(γz)|^m
    double rhs = 0.0;          ///< (1−r)·haar_average − 2η^m
    bool holds = false;
};

struct SeparationReport {
    SupEstimate sup;
    double value_at_z = 0.0;
    double margin = 0.0;
    std::optional<unsigned> m;
    unsigned power = 0; ///< exponent applied to Q inside the average (2m in the real search)
    std::optional<Polynomial> separator;
    Verdict verdict = Verdict::Inconclusive;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    std::vector<SeparationStep> steps;
    std::vector<std::string> notes;
    double r = 0.0;
    std::optional<double> eta;
    std::optional<ChainCheck> chain;
    std::optional<std::size_t> j_used;
    std::optional<double> invariance_deviation;
};

/// Direct verdict for a fixed P: sup over K against |P(z)|.
SeparationReport evaluate_separation(const Polynomial& p, const SetSpec& k, std::span<const Complex> z,
                                     const SeparationOptions& opts);
SeparationReport evaluate_separation(const ScalarFunction& f, bool homogeneous, const SetSpec& k,
                                     std::span<const Complex> z, const SeparationOptions& opts);

/// Real case: first m whose P_{2m} (built from the normalized Q) separates. Exhaustion gives Inconclusive.
SeparationReport find_even_exponent(const Polynomial& q, const FiniteGroup& g, const SetSpec& k,
                                    std::span<const Complex> z, const SeparationOptions& opts);

struct ArgCondition {
    std::vector<double> angles;
    std::vector<std::size_t> multiplicity;
    std::size_t orbit_size = 0;
    std::size_t kept = 0; ///< orbit values with modulus ≥ η
    bool finite = true;
};

ArgCondition check_arg_condition(const Polynomial& q, const FiniteGroup& g, std::span<const Complex> z, double eta,
                                 double angle_tol = 1e-9);

/// Complex case: simultaneous-return exponents for the orbit angles, each verified by the
/// lower-bound chain and a direct separation check; the first separating one is returned.
SeparationReport find_complex_exponent(const Polynomial& q, const FiniteGroup& g, const SetSpec& k,
                                       std::span<const Complex> z, const SeparationOptions& opts);

/// Chooses the real or complex search; a torus yields NotSeparated (only constants are invariant).
SeparationReport separate(const Polynomial& q, const AveragingGroup& g, const SetSpec& k, std::span<const Complex> z,
                          const SeparationOptions& opts);

struct LinearSeparator {
    std::vector<Complex> coefficients; ///< f(w) = Σ c_j w_j, scaled so sup over the cloud is 1
    double sup = 0.0;
    double value = 0.0;
    double margin = 0.0;
    std::size_t phases = 0; ///< unimodular multiples used for the balanced hull (2 real, ≥ 4 complex)
};

/// Supporting functional from the nearest point of the convex balanced hull of the cloud to z.
/// Throws NotSeparating when z lies in the hull.
LinearSeparator find_linear_separator(const PointCloud& k, std::span<const Complex> z, Field field);

struct TruncationRequest {
    FiniteGroup group; ///< the group at the full head length
    LpBall ball;       ///< the ball at the full head length
    Point z_head;
    double tail_bound = 0.0; ///< ‖tail of z‖ ≤ τ
    Polynomial q;
    std::vector<std::size_t> schedule;
};

/// Truncates to the first j in the schedule where Σ_j(G) is a group and Q∘π_j keeps a margin
/// beyond the tail slack, searches there, and lifts P̃ to P̃∘Π_j.
SeparationReport truncation_pipeline(const TruncationRequest& req, const SeparationOptions& opts);

} // namespace invsep
