#pragma once

#include "invsep/groups.hpp"
#include "invsep/poly.hpp"
#include "invsep/random.hpp"

#include <cmath>

namespace testing_support {

using invsep::Complex;
using invsep::Point;

inline Point random_point(invsep::Rng& rng, std::size_t n, bool real = false)
{
    Point x(n);
    for (auto& v : x)
        v = real ? Complex(invsep::gaussian(rng), 0.0) : Complex(invsep::gaussian(rng), invsep::gaussian(rng));
    return x;
}

inline invsep::Polynomial random_polynomial(invsep::Rng& rng, std::size_t n, unsigned max_degree, std::size_t terms,
                                            bool real = false)
{
    const auto field = real ? invsep::Field::Real : invsep::Field::Complex;
    invsep::Polynomial p(n, field);
    for (std::size_t t = 0; t < terms; ++t) {
        invsep::Exponents e(n, 0);
        unsigned left = static_cast<unsigned>(std::uniform_int_distribution<unsigned>(0, max_degree)(rng));
        while (left > 0) {
            e[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] += 1;
            --left;
        }
        const Complex c = real ? Complex(invsep::gaussian(rng), 0.0) : Complex(invsep::gaussian(rng), invsep::gaussian(rng));
        p = p + invsep::Polynomial::monomial(e, c, field);
    }
    return p;
}

/// Term-by-term evaluation by repeated multiplication.
inline Complex naive_eval(const invsep::Polynomial& p, const Point& x)
{
    Complex s{};
    for (const auto& [e, c] : p.terms()) {
        Complex t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k)
                t *= x[i];
        s += t;
    }
    return s;
}

/// Mean of Q(γx)^m over the listed elements, applying each map to the point.
inline Complex brute_average(const invsep::Polynomial& q, const std::vector<invsep::GroupElement>& elements,
                             unsigned m, const Point& x)
{
    Complex s{};
    for (const auto& g : elements) {
        Complex v = naive_eval(q, g.apply(x));
        Complex pw{1.0, 0.0};
        for (unsigned k = 0; k < m; ++k)
            pw *= v;
        s += pw;
    }
    return s / static_cast<double>(elements.size());
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace testing_support
