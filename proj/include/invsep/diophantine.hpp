#pragma once

#include "invsep/poly.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace invsep::diophantine {

/// θ = 2π·num/den.
struct RationalAngle {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// Unit-modulus targets e^{iθ_j}, deduplicated, with optional exact representations.
struct AngleSet {
    std::vector<double> angles; ///< in [0, 2π)
    std::vector<std::optional<RationalAngle>> rational;
    std::vector<std::size_t> multiplicity;

    std::size_t size() const { return angles.size(); }
    bool all_rational() const;
};

inline constexpr double kDefaultAngleTol = 1e-9;
inline constexpr std::uint64_t kDefaultMaxExponent = 1'000'000;

/// Wraps an angle into [0, 2π).
double wrap_angle(double theta);

AngleSet make_angle_set(std::span<const double> angles, double angle_tol = kDefaultAngleTol);
AngleSet make_rational_angle_set(std::span<const RationalAngle> angles);

/// max_j |e^{iθ_j m} − 1|; rational entries are reduced exactly before the sine is taken.
double return_defect(const AngleSet& set, std::uint64_t m);

struct ReturnResult {
    std::uint64_t m = 0;
    double max_defect = 0.0;
};

/// Smallest m in [m_min, m_max] with return_defect(set, m) < tol, by direct scan.
/// Throws ExponentExhausted if none exists in range.
ReturnResult simultaneous_return(const AngleSet& set, double tol, std::uint64_t m_max = kDefaultMaxExponent,
                                 std::uint64_t m_min = 1);

/// Exact least common return time lcm(q_j / gcd(p_j, q_j)). Requires every rational flag.
std::uint64_t rational_shortcut(const AngleSet& set);

/// Keeps values with modulus ≥ eta and clusters their arguments within angle_tol
/// (circularly); multiplicities count the members of each cluster.
AngleSet angle_cluster(std::span<const Complex> values, double eta, double angle_tol = kDefaultAngleTol);

} // namespace invsep::diophantine
