#pragma once

#include "invsep/groups.hpp"
#include "invsep/poly.hpp"

#include <vector>

namespace invsep {

/// S_G(Q) = ∫ Q∘γ dμ(γ), normalized by the group measure (so S_G(1) = 1).
///
/// Exact for finite groups. For a torus the root-of-unity rule is exact only below the
/// quadrature order, so a polynomial of degree ≥ order is rejected as Unsupported.
Polynomial symmetrize(const Polynomial& q, const AveragingGroup& g);

/// P_m = ∫ (Q∘γ)^m dμ(γ), expanded symbolically. Throws DegreeOverflow past degree_cap.
Polynomial m_symmetrization(const Polynomial& q, const AveragingGroup& g, unsigned m,
                            int degree_cap = Polynomial::kDefaultDegreeCap);

/// P_m(w) by direct averaging of Q(γ w)^m, without expansion.
Complex eval_m_symmetrization(const Polynomial& q, const AveragingGroup& g, unsigned m, std::span<const Complex> w);

/// Integer power by repeated squaring (exact for the quarter-turn phases).
Complex ipow(Complex base, unsigned e);

/// Reusable evaluator for w ↦ P_m(w): keeps the element list and scratch space between calls.
class SymmetrizedEvaluator {
public:
    SymmetrizedEvaluator(Polynomial q, const AveragingGroup& g, unsigned m);

    Complex operator()(std::span<const Complex> w) const;
    /// Orbit values Q(γ w) in canonical element order.
    std::vector<Complex> orbit_values(std::span<const Complex> w) const;

    const Polynomial& base() const { return q_; }
    unsigned exponent() const { return m_; }
    std::size_t dimension() const { return q_.dimension(); }
    std::size_t group_size() const { return elements_.size(); }
    double weight() const { return weight_; }

private:
    Polynomial q_;
    std::vector<GroupElement> elements_;
    double weight_;
    unsigned m_;
};

} // namespace invsep
