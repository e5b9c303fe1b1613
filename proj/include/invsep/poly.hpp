#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace invsep {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;
using Exponents = std::vector<std::uint32_t>;

enum class Field { Real, Complex };

inline Field join(Field a, Field b) { return (a == Field::Complex || b == Field::Complex) ? Field::Complex : Field::Real; }

/// Graded lexicographic order: lower total degree first, then larger leading exponents first.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

using TermMap = std::map<Exponents, Complex, GradedLexLess>;

struct HomogeneityInfo {
    bool homogeneous = false;
    int degree = -1; ///< common total degree when homogeneous; -1 for the zero polynomial
};

/// Sparse multivariate polynomial with complex double coefficients.
///
/// Values are immutable once built; arithmetic returns new polynomials. Terms whose
/// coefficient magnitude falls below kZeroThreshold are dropped, and real-field
/// polynomials carry zero imaginary parts.
class Polynomial {
public:
    static constexpr double kZeroThreshold = 1e-12;
    static constexpr int kDefaultDegreeCap = 64;

    explicit Polynomial(std::size_t dimension = 1, Field field = Field::Real);
    Polynomial(std::size_t dimension, Field field, TermMap terms);

    static Polynomial constant(std::size_t dimension, Complex value, Field field = Field::Real);
    static Polynomial variable(std::size_t dimension, std::size_t index, Field field = Field::Real);
    static Polynomial monomial(Exponents exponents, Complex coeff, Field field = Field::Real);
    /// Σ_j coeffs[j] x_j.
    static Polynomial linear(std::span<const Complex> coeffs, Field field);

    std::size_t dimension() const { return dimension_; }
    Field field() const { return field_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    /// Highest total degree, -1 for the zero polynomial.
    int degree() const { return degree_; }
    Complex coefficient(const Exponents& e) const;

    Complex eval(std::span<const Complex> x) const;
    Complex operator()(std::span<const Complex> x) const { return eval(x); }

    Polynomial scaled(Complex factor) const;
    Polynomial with_field(Field field) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
    void normalize();

    std::size_t dimension_;
    Field field_;
    TermMap terms_;
    int degree_ = -1;
    std::vector<std::uint32_t> max_exponent_;
};

/// Symbolic m-th power by repeated squaring. Throws DegreeOverflow if m·degree exceeds degree_cap.
Polynomial pow(const Polynomial& p, unsigned m, int degree_cap = Polynomial::kDefaultDegreeCap);

HomogeneityInfo homogeneity(const Polynomial& p);

/// w ↦ P(A w) for a monomial map (A w)_i = factor[i] · w[source[i]].
Polynomial compose_monomial_map(const Polynomial& p, std::span<const std::size_t> source, std::span<const Complex> factor,
                                Field result_field);

/// w ↦ P(A w) for a dense row-major n×n matrix A.
Polynomial compose_dense(const Polynomial& p, std::span<const Complex> row_major, Field result_field);

/// ∂p/∂x_i.
Polynomial derivative(const Polynomial& p, std::size_t i);

/// Q∘ι_n: substitutes zero for every coordinate ≥ n and returns a polynomial on the first n coordinates.
Polynomial restrict_leading(const Polynomial& p, std::size_t n);

/// P̃∘Π_n: the same polynomial regarded on a larger ambient dimension (extra coordinates unused).
Polynomial extend_dimension(const Polynomial& p, std::size_t dimension);

/// Largest |coefficient difference| over the union of both supports.
double max_coefficient_distance(const Polynomial& a, const Polynomial& b);

} // namespace invsep
