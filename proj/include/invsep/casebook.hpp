#pragma once

#include "invsep/setspec.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace invsep::casebook {

using Json = nlohmann::ordered_json;

struct Check {
    std::string desc;
    double lhs = 0.0;
    std::string rel; ///< "<", "<=", ">", ">=", "=="
    double rhs = 0.0;
    double slack = 0.0; ///< signed distance from failure: positive when the relation holds strictly
    bool pass = false;
};

struct CaseReport {
    std::string case_id;
    Json inputs = Json::object();
    Json constants = Json::object();
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool overall_pass() const;

    /// Strict relations pass when slack > min_slack; "<=", ">=" and "==" tolerate |slack| ≤ tol.
    Check& check(std::string desc, double lhs, const std::string& rel, double rhs, double tol = 0.0,
                 double min_slack = 0.0);
    Check& check_true(std::string desc, bool holds);
};

struct CaseContext {
    std::uint64_t seed = 42;
    SampleBudget budget;
    unsigned m_max = 200;
    double margin_tol = 1e-6;
    std::optional<double> eta;

    SeparationOptions separation(std::string_view stream) const;
    std::uint64_t stream(std::string_view name, std::uint64_t index = 0) const;
};

/// Sequence given by a finite head and a closed-form rule for the coordinates after it.
/// Coordinates are 1-based: j ≤ head.size() reads the head, later j follow the rule.
struct TailSequence {
    enum class Rule { None, Geometric, Bound, Constant, Approach };

    std::vector<Complex> head;
    Rule rule = Rule::None;
    Complex c{0.0, 0.0}; ///< geometric: c·b^j; constant: c; approach: level − c·b^j
    double b = 0.5;
    double tau = 0.0;   ///< bound: ‖tail‖ ≤ τ (and every tail coordinate ≤ τ in modulus)
    double level = 1.0; ///< approach target

    /// Explicit coordinate; Bound has none beyond the head.
    Complex coordinate(std::size_t j) const;
    /// (Σ_{j>h} |z_j|^p)^{1/p} in closed form (p = ∞ gives the sup).
    double tail_norm(double p) const;
    /// Σ_{j>h} z_j^k in closed form; only for None and Geometric.
    Complex tail_power_sum(unsigned k) const;
    /// Σ_{j>h} |z_j|^s in closed form; only for None and Geometric.
    double tail_abs_power_sum(double s) const;
    /// limsup_j |z_j|; throws InvalidArgument when the rule does not determine it.
    double limsup() const;
};

TailSequence parse_tail(const Json& j);
Json to_json(const TailSequence& z);

struct StepFunction {
    unsigned level = 0;             ///< N
    std::vector<Complex> values;    ///< a_1..a_{2^N}

    /// ∫ x^j = 2^{−N} Σ a_i^j, summed in sorted order so permutations give identical results.
    Complex moment(unsigned j) const;
    /// ‖x‖_p^p = 2^{−N} Σ |a_i|^p, in sorted order.
    double norm_p_power(double p) const;
};

/// Σ v_i in a canonical (sorted) order, making the result independent of input order.
Complex sorted_sum(std::vector<Complex> v);

// Individual constructions. Each is pure given (params, ctx).
CaseReport case_counterexample(const Json& params, const CaseContext& ctx);
CaseReport case_circle_nonseparation(const Json& params, const CaseContext& ctx);
CaseReport case_roots_unity(const Json& params, const CaseContext& ctx);
CaseReport case_power_sums(const Json& params, const CaseContext& ctx);
CaseReport case_block_permutations(const Json& params, const CaseContext& ctx);
CaseReport case_linf_limsup(const Json& params, const CaseContext& ctx);
CaseReport case_supersymmetric(const Json& params, const CaseContext& ctx);
CaseReport case_c01(const Json& params, const CaseContext& ctx);
CaseReport case_tshape(const Json& params, const CaseContext& ctx);
CaseReport case_lp01(const Json& params, const CaseContext& ctx);

using CaseRunner = std::function<CaseReport(const Json&, const CaseContext&)>;

struct CaseEntry {
    std::string id;   ///< "<kind>/<instance>"
    std::string kind; ///< construction name, e.g. "counterexample"
    Json params;
};

/// The built-in suite in fixed order.
const std::vector<CaseEntry>& suite();
CaseRunner runner(const std::string& kind);

/// Entries whose id equals a selector or whose kind equals it. Throws UnknownCase.
std::vector<CaseEntry> select(const std::vector<std::string>& selectors);

/// Runs one entry with a seed derived from (ctx.seed, entry id).
CaseReport run(const CaseEntry& entry, const CaseContext& ctx);

/// Runs entries on up to `jobs` threads; results keep the input order.
std::vector<CaseReport> run_all(const std::vector<CaseEntry>& entries, const CaseContext& ctx, unsigned jobs = 1);

Json to_json(const CaseReport& report);

} // namespace invsep::casebook
