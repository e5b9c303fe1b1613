#include "invsep/poly.hpp"

#include "invsep/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace invsep {

namespace {

std::uint32_t total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), std::uint32_t{0}); }

void require_same_shape(const Polynomial& a, const Polynomial& b, const char* op)
{
    require(a.dimension() == b.dimension(), ErrorCode::DimensionMismatch,
            std::string(op) + ": dimension mismatch (" + std::to_string(a.dimension()) + " vs " +
                std::to_string(b.dimension()) + ")");
}

Complex ipow(Complex base, std::uint32_t e)
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

void accumulate(TermMap& terms, const Exponents& e, Complex c)
{
    auto [it, inserted] = terms.try_emplace(e, c);
    if (!inserted)
        it->second += c;
}

} // namespace

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const
{
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db)
        return da < db;
    // Same degree: x_1 dominant, so the term with the larger leading exponent comes first.
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t dimension, Field field) : dimension_(dimension), field_(field)
{
    require(dimension > 0, ErrorCode::InvalidArgument, "polynomial dimension must be positive");
    max_exponent_.assign(dimension_, 0);
}

Polynomial::Polynomial(std::size_t dimension, Field field, TermMap terms)
    : dimension_(dimension), field_(field), terms_(std::move(terms))
{
    require(dimension > 0, ErrorCode::InvalidArgument, "polynomial dimension must be positive");
    for (const auto& [e, c] : terms_)
        require(e.size() == dimension_, ErrorCode::DimensionMismatch, "monomial length differs from polynomial dimension");
    normalize();
}

Polynomial Polynomial::constant(std::size_t dimension, Complex value, Field field)
{
    TermMap t;
    t.emplace(Exponents(dimension, 0), value);
    return Polynomial(dimension, field, std::move(t));
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t index, Field field)
{
    require(index < dimension, ErrorCode::InvalidArgument, "variable index out of range");
    Exponents e(dimension, 0);
    e[index] = 1;
    TermMap t;
    t.emplace(std::move(e), Complex{1.0, 0.0});
    return Polynomial(dimension, field, std::move(t));
}

Polynomial Polynomial::monomial(Exponents exponents, Complex coeff, Field field)
{
    const auto n = exponents.size();
    TermMap t;
    t.emplace(std::move(exponents), coeff);
    return Polynomial(n, field, std::move(t));
}

Polynomial Polynomial::linear(std::span<const Complex> coeffs, Field field)
{
    TermMap t;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        Exponents e(coeffs.size(), 0);
        e[j] = 1;
        t.emplace(std::move(e), coeffs[j]);
    }
    return Polynomial(coeffs.size(), field, std::move(t));
}

void Polynomial::normalize()
{
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (field_ == Field::Real)
            it->second = Complex{it->second.real(), 0.0};
        if (std::abs(it->second) < kZeroThreshold)
            it = terms_.erase(it);
        else
            ++it;
    }
    degree_ = -1;
    max_exponent_.assign(dimension_, 0);
    for (const auto& [e, c] : terms_) {
        degree_ = std::max(degree_, static_cast<int>(total_degree(e)));
        for (std::size_t j = 0; j < dimension_; ++j)
            max_exponent_[j] = std::max(max_exponent_[j], e[j]);
    }
}

Complex Polynomial::coefficient(const Exponents& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex{} : it->second;
}

Complex Polynomial::eval(std::span<const Complex> x) const
{
    require(x.size() == dimension_, ErrorCode::DimensionMismatch,
            "eval: point has " + std::to_string(x.size()) + " coordinates, polynomial expects " +
                std::to_string(dimension_));
    if (terms_.empty())
        return {};

    // powers[offset[j] + k] = x_j^k
    thread_local std::vector<Complex> powers;
    thread_local std::vector<std::size_t> offset;
    offset.resize(dimension_ + 1);
    offset[0] = 0;
    for (std::size_t j = 0; j < dimension_; ++j)
        offset[j + 1] = offset[j] + max_exponent_[j] + 1;
    powers.resize(offset[dimension_]);
    for (std::size_t j = 0; j < dimension_; ++j) {
        Complex acc{1.0, 0.0};
        powers[offset[j]] = acc;
        for (std::uint32_t k = 1; k <= max_exponent_[j]; ++k) {
            acc *= x[j];
            powers[offset[j] + k] = acc;
        }
    }

    Complex sum{};
    for (const auto& [e, c] : terms_) {
        Complex term = c;
        for (std::size_t j = 0; j < dimension_; ++j)
            if (e[j] != 0)
                term *= powers[offset[j] + e[j]];
        sum += term;
    }
    return sum;
}

Polynomial Polynomial::scaled(Complex factor) const
{
    TermMap t = terms_;
    for (auto& [e, c] : t)
        c *= factor;
    const Field f = (factor.imag() != 0.0) ? Field::Complex : field_;
    return Polynomial(dimension_, f, std::move(t));
}

Polynomial Polynomial::with_field(Field field) const { return Polynomial(dimension_, field, terms_); }

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    require_same_shape(a, b, "add");
    TermMap t = a.terms_;
    for (const auto& [e, c] : b.terms_)
        accumulate(t, e, c);
    return Polynomial(a.dimension_, join(a.field_, b.field_), std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    require_same_shape(a, b, "multiply");
    TermMap t;
    Exponents e(a.dimension_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t j = 0; j < e.size(); ++j)
                e[j] = ea[j] + eb[j];
            accumulate(t, e, ca * cb);
        }
    return Polynomial(a.dimension_, join(a.field_, b.field_), std::move(t));
}

bool operator==(const Polynomial& a, const Polynomial& b)
{
    return a.dimension_ == b.dimension_ && a.field_ == b.field_ && a.terms_.size() == b.terms_.size() &&
           std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin());
}

Polynomial pow(const Polynomial& p, unsigned m, int degree_cap)
{
    require(m >= 1, ErrorCode::InvalidArgument, "pow: exponent must be at least 1");
    if (p.degree() > 0 && static_cast<long long>(p.degree()) * m > degree_cap)
        fail(ErrorCode::DegreeOverflow, "pow: degree " + std::to_string(static_cast<long long>(p.degree()) * m) +
                                            " exceeds cap " + std::to_string(degree_cap) +
                                            "; use the numeric evaluation path");
    Polynomial result = Polynomial::constant(p.dimension(), 1.0, p.field());
    Polynomial base = p;
    while (m > 0) {
        if (m & 1u)
            result = result * base;
        m >>= 1u;
        if (m > 0)
            base = base * base;
    }
    return result;
}

HomogeneityInfo homogeneity(const Polynomial& p)
{
    if (p.is_zero())
        return {true, -1};
    const auto first = total_degree(p.terms().begin()->first);
    for (const auto& [e, c] : p.terms())
        if (total_degree(e) != first)
            return {false, -1};
    return {true, static_cast<int>(first)};
}

Polynomial compose_monomial_map(const Polynomial& p, std::span<const std::size_t> source, std::span<const Complex> factor,
                                Field result_field)
{
    const auto n = p.dimension();
    require(source.size() == n && factor.size() == n, ErrorCode::DimensionMismatch,
            "compose: map dimension differs from polynomial dimension");
    TermMap t;
    Exponents f(n);
    for (const auto& [e, c] : p.terms()) {
        std::fill(f.begin(), f.end(), 0u);
        Complex coeff = c;
        for (std::size_t i = 0; i < n; ++i) {
            if (e[i] == 0)
                continue;
            f[source[i]] += e[i];
            coeff *= ipow(factor[i], e[i]);
        }
        accumulate(t, f, coeff);
    }
    return Polynomial(n, join(p.field(), result_field), std::move(t));
}

Polynomial compose_dense(const Polynomial& p, std::span<const Complex> row_major, Field result_field)
{
    const auto n = p.dimension();
    require(row_major.size() == n * n, ErrorCode::DimensionMismatch, "compose: matrix size differs from polynomial dimension");
    const Field field = join(p.field(), result_field);
    std::vector<Polynomial> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        rows.push_back(Polynomial::linear(row_major.subspan(i * n, n), field));

    Polynomial result(n, field);
    for (const auto& [e, c] : p.terms()) {
        Polynomial term = Polynomial::constant(n, c, field);
        for (std::size_t i = 0; i < n; ++i)
            if (e[i] != 0)
                term = term * pow(rows[i], e[i], std::numeric_limits<int>::max());
        result = result + term;
    }
    return result;
}

Polynomial derivative(const Polynomial& p, std::size_t i)
{
    require(i < p.dimension(), ErrorCode::InvalidArgument, "derivative: coordinate out of range");
    TermMap t;
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0)
            continue;
        Exponents f = e;
        --f[i];
        t.emplace(std::move(f), c * static_cast<double>(e[i]));
    }
    return Polynomial(p.dimension(), p.field(), std::move(t));
}

Polynomial restrict_leading(const Polynomial& p, std::size_t n)
{
    require(n >= 1 && n <= p.dimension(), ErrorCode::InvalidArgument, "restrict: truncation level out of range");
    TermMap t;
    for (const auto& [e, c] : p.terms()) {
        if (std::any_of(e.begin() + static_cast<std::ptrdiff_t>(n), e.end(), [](auto v) { return v != 0; }))
            continue;
        t.emplace(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n)), c);
    }
    return Polynomial(n, p.field(), std::move(t));
}

Polynomial extend_dimension(const Polynomial& p, std::size_t dimension)
{
    require(dimension >= p.dimension(), ErrorCode::InvalidArgument, "extend: target dimension is smaller");
    TermMap t;
    for (const auto& [e, c] : p.terms()) {
        Exponents f(dimension, 0);
        std::copy(e.begin(), e.end(), f.begin());
        t.emplace(std::move(f), c);
    }
    return Polynomial(dimension, p.field(), std::move(t));
}

double max_coefficient_distance(const Polynomial& a, const Polynomial& b)
{
    require_same_shape(a, b, "distance");
    double d = 0.0;
    for (const auto& [e, c] : a.terms())
        d = std::max(d, std::abs(c - b.coefficient(e)));
    for (const auto& [e, c] : b.terms())
        d = std::max(d, std::abs(c - a.coefficient(e)));
    return d;
}

} // namespace invsep
