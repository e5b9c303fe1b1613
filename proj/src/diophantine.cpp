#include "invsep/diophantine.hpp"

#include "invsep/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace invsep::diophantine {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RationalAngle reduce(RationalAngle a)
{
    require(a.den > 0, ErrorCode::InvalidArgument, "rational angle: denominator must be positive");
    a.num %= a.den;
    if (a.num < 0)
        a.num += a.den;
    const auto g = std::gcd(a.num, a.den);
    return {a.num / g, a.den / g};
}

double chord(double theta) { return 2.0 * std::abs(std::sin(theta / 2.0)); }

struct Member {
    double angle;
    std::optional<RationalAngle> rational;
};

// Groups sorted angles whose circular gaps are below tol; the first member represents the cluster.
AngleSet cluster_sorted(std::vector<Member> members, double tol)
{
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) { return a.angle < b.angle; });
    AngleSet out;
    for (const auto& m : members) {
        if (!out.angles.empty() && m.angle - out.angles.back() < tol) {
            ++out.multiplicity.back();
            continue;
        }
        out.angles.push_back(m.angle);
        out.rational.push_back(m.rational);
        out.multiplicity.push_back(1);
    }
    // Wrap-around: a cluster near 2π belongs to the one at 0.
    if (out.angles.size() > 1 && out.angles.front() + kTwoPi - out.angles.back() < tol) {
        out.multiplicity.front() += out.multiplicity.back();
        out.angles.pop_back();
        out.rational.pop_back();
        out.multiplicity.pop_back();
    }
    return out;
}

} // namespace

bool AngleSet::all_rational() const
{
    return std::all_of(rational.begin(), rational.end(), [](const auto& r) { return r.has_value(); });
}

double wrap_angle(double theta)
{
    double t = std::fmod(theta, kTwoPi);
    if (t < 0)
        t += kTwoPi;
    if (t >= kTwoPi)
        t = 0.0;
    return t;
}

AngleSet make_angle_set(std::span<const double> angles, double angle_tol)
{
    std::vector<Member> members;
    for (double a : angles)
        members.push_back({wrap_angle(a), std::nullopt});
    return cluster_sorted(std::move(members), angle_tol);
}

AngleSet make_rational_angle_set(std::span<const RationalAngle> angles)
{
    std::vector<Member> members;
    for (auto a : angles) {
        const auto r = reduce(a);
        members.push_back({kTwoPi * static_cast<double>(r.num) / static_cast<double>(r.den), r});
    }
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
        return a.rational->num * b.rational->den < b.rational->num * a.rational->den;
    });
    AngleSet out;
    for (const auto& m : members) {
        if (!out.rational.empty() && out.rational.back()->num == m.rational->num &&
            out.rational.back()->den == m.rational->den) {
            ++out.multiplicity.back();
            continue;
        }
        out.angles.push_back(m.angle);
        out.rational.push_back(m.rational);
        out.multiplicity.push_back(1);
    }
    return out;
}

double return_defect(const AngleSet& set, std::uint64_t m)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < set.size(); ++j) {
        double d;
        if (const auto& r = set.rational[j]) {
            const auto residue = static_cast<std::int64_t>((static_cast<__int128>(r->num) * m) % r->den);
            d = residue == 0 ? 0.0 : chord(kTwoPi * static_cast<double>(residue) / static_cast<double>(r->den));
        } else {
            const long double turns = static_cast<long double>(set.angles[j]) * static_cast<long double>(m);
            d = chord(static_cast<double>(std::fmod(turns, 2.0L * std::numbers::pi_v<long double>)));
        }
        worst = std::max(worst, d);
    }
    return worst;
}

ReturnResult simultaneous_return(const AngleSet& set, double tol, std::uint64_t m_max, std::uint64_t m_min)
{
    require(tol > 0.0, ErrorCode::InvalidArgument, "simultaneous_return: tolerance must be positive");
    require(m_min >= 1, ErrorCode::InvalidArgument, "simultaneous_return: m_min must be at least 1");
    for (std::uint64_t m = m_min; m <= m_max; ++m) {
        const double d = return_defect(set, m);
        if (d < tol)
            return {m, d};
    }
    fail(ErrorCode::ExponentExhausted, "simultaneous_return: no exponent in [" + std::to_string(m_min) + ", " +
                                           std::to_string(m_max) + "] brings every target within " +
                                           std::to_string(tol) + " of 1");
}

std::uint64_t rational_shortcut(const AngleSet& set)
{
    require(set.all_rational(), ErrorCode::InvalidArgument, "rational_shortcut: every angle needs an exact representation");
    std::uint64_t m = 1;
    for (const auto& r : set.rational) {
        const auto red = reduce(*r);
        const auto period = static_cast<std::uint64_t>(red.den);
        m = std::lcm(m, period);
    }
    return m;
}

AngleSet angle_cluster(std::span<const Complex> values, double eta, double angle_tol)
{
    std::vector<Member> members;
    for (Complex v : values)
        if (std::abs(v) >= eta)
            members.push_back({wrap_angle(std::arg(v)), std::nullopt});
    return cluster_sorted(std::move(members), angle_tol);
}

} // namespace invsep::diophantine
