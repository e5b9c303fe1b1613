#include "invsep/symmetrize.hpp"

#include "invsep/error.hpp"

#include <string>

namespace invsep {

namespace {

void check_torus_exactness(const AveragingGroup& g, long long degree)
{
    if (const auto* t = std::get_if<TorusGroup>(&g))
        require(degree < static_cast<long long>(t->quadrature_order), ErrorCode::Unsupported,
                "symbolic torus averaging needs quadrature order above the degree (" + std::to_string(degree) +
                    " vs order " + std::to_string(t->quadrature_order) + "); use the numeric path");
}

Polynomial average_compositions(const Polynomial& q, const AveragingGroup& g)
{
    require(q.dimension() == group_dimension(g), ErrorCode::DimensionMismatch,
            "symmetrize: polynomial dimension " + std::to_string(q.dimension()) + " differs from group dimension " +
                std::to_string(group_dimension(g)));
    const Field field = group_is_real(g) ? q.field() : Field::Complex;
    TermMap acc;
    double weight = 0.0;
    for_each_element(g, [&](const GroupElement& e, double w) {
        weight = w;
        const auto composed = compose_linear(q, e);
        for (const auto& [exp, c] : composed.terms()) {
            auto [it, inserted] = acc.try_emplace(exp, c);
            if (!inserted)
                it->second += c;
        }
    });
    for (auto& [exp, c] : acc)
        c *= weight;
    return Polynomial(q.dimension(), field, std::move(acc));
}

} // namespace

Complex ipow(Complex base, unsigned e)
{
    Complex r{1.0, 0.0};
    while (e > 0) {
        if (e & 1u)
            r *= base;
        e >>= 1u;
        if (e > 0)
            base *= base;
    }
    return r;
}

Polynomial symmetrize(const Polynomial& q, const AveragingGroup& g)
{
    check_torus_exactness(g, q.degree());
    return average_compositions(q, g);
}

Polynomial m_symmetrization(const Polynomial& q, const AveragingGroup& g, unsigned m, int degree_cap)
{
    require(m >= 1, ErrorCode::InvalidArgument, "m_symmetrization: m must be at least 1");
    const auto powered = pow(q, m, degree_cap);
    check_torus_exactness(g, powered.degree());
    return average_compositions(powered, g);
}

Complex eval_m_symmetrization(const Polynomial& q, const AveragingGroup& g, unsigned m, std::span<const Complex> w)
{
    return SymmetrizedEvaluator(q, g, m)(w);
}

SymmetrizedEvaluator::SymmetrizedEvaluator(Polynomial q, const AveragingGroup& g, unsigned m)
    : q_(std::move(q)), weight_(0.0), m_(m)
{
    require(m >= 1, ErrorCode::InvalidArgument, "m-symmetrization: m must be at least 1");
    require(q_.dimension() == group_dimension(g), ErrorCode::DimensionMismatch,
            "m-symmetrization: polynomial and group dimensions differ");
    for_each_element(g, [&](const GroupElement& e, double w) {
        elements_.push_back(e);
        weight_ = w;
    });
}

Complex SymmetrizedEvaluator::operator()(std::span<const Complex> w) const
{
    require(w.size() == q_.dimension(), ErrorCode::DimensionMismatch, "m-symmetrization: point dimension");
    Complex acc{};
    for (const auto& e : elements_)
        acc += ipow(q_.eval(e.apply(w)), m_);
    return acc * weight_;
}

std::vector<Complex> SymmetrizedEvaluator::orbit_values(std::span<const Complex> w) const
{
    std::vector<Complex> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_)
        out.push_back(q_.eval(e.apply(w)));
    return out;
}

} // namespace invsep
