#pragma once

#include "invsep/poly.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace invsep {

/// Exact unit-modulus scalar e^{2πi num/den}, kept reduced with 0 ≤ num < den.
struct Phase {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Phase make(std::int64_t num, std::int64_t den);
    Complex value() const;
    bool is_zero() const { return num == 0; }

    friend Phase operator+(Phase a, Phase b);
    friend Phase operator-(Phase a);
    friend bool operator==(const Phase&, const Phase&) = default;
};

enum class ElementKind { Permutation, SignedPermutation, DiagonalPhases, PermutationLike, Dense };

const char* to_string(ElementKind kind);

/// Integer key identifying a group element; equal keys mean equal linear maps.
using ElementKey = std::vector<std::int64_t>;

/// A linear map on C^n from the structured families the group actions need.
///
/// Monomial maps (every kind but Dense) act as (g w)_i = e^{2πi phase_i} · w_{source_i}; the
/// stored kind is the narrowest one that describes the map, so keys are canonical.
class GroupElement {
public:
    static GroupElement identity(std::size_t n);
    static GroupElement permutation(std::vector<std::size_t> source);
    static GroupElement signed_permutation(std::vector<std::size_t> source, const std::vector<int>& signs);
    static GroupElement diagonal_phases(std::vector<Phase> phases);
    static GroupElement permutation_like(std::vector<std::size_t> source, std::vector<Phase> phases);
    /// Row-major n×n matrix.
    static GroupElement dense(std::size_t n, std::vector<Complex> row_major);
    /// The swap of coordinates i and j.
    static GroupElement transposition(std::size_t n, std::size_t i, std::size_t j);

    ElementKind kind() const { return kind_; }
    std::size_t dimension() const { return n_; }
    bool is_monomial() const { return kind_ != ElementKind::Dense; }
    const std::vector<std::size_t>& source() const { return source_; }
    const std::vector<Phase>& phases() const { return phases_; }
    std::vector<Complex> factors() const;
    std::vector<Complex> matrix() const; ///< row-major
    bool is_real() const;
    bool is_identity() const;

    Point apply(std::span<const Complex> x) const;
    /// this ∘ inner.
    GroupElement compose(const GroupElement& inner) const;
    GroupElement inverse() const;
    ElementKey key() const;

private:
    GroupElement() = default;
    void canonicalize();

    ElementKind kind_ = ElementKind::Permutation;
    std::size_t n_ = 0;
    std::vector<std::size_t> source_;
    std::vector<Phase> phases_;
    std::vector<Complex> dense_;
};

/// w ↦ P(A w), using exponent reindexing and phase scaling for monomial maps.
Polynomial compose_linear(const Polynomial& p, const GroupElement& a);

struct GenerationStats {
    std::size_t generators = 0;
    std::size_t products = 0;
    std::size_t levels = 0;
};

/// Finite group of linear maps with the uniform (normalized Haar) measure.
/// Elements are stored sorted by key, which fixes the reduction order of every average.
class FiniteGroup {
public:
    /// Validates identity, closure and inverses.
    FiniteGroup(std::size_t dimension, std::vector<GroupElement> elements);

    std::size_t dimension() const { return dimension_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<GroupElement>& elements() const { return elements_; }
    double weight() const { return 1.0 / static_cast<double>(elements_.size()); }
    const GenerationStats& stats() const { return stats_; }
    bool is_real() const;

private:
    friend FiniteGroup generate_group(const std::vector<GroupElement>&, std::size_t);
    struct Trusted {};
    FiniteGroup(Trusted, std::size_t dimension, std::vector<GroupElement> elements, GenerationStats stats);

    std::size_t dimension_;
    std::vector<GroupElement> elements_;
    GenerationStats stats_;
};

/// Torus T^k acting by independent phases on k coordinates, averaged with the tensor
/// root-of-unity rule (nodes e^{2πij/M}, weight 1/M each).
struct TorusGroup {
    std::size_t dimension = 1;
    std::vector<std::size_t> acting;
    std::size_t quadrature_order = 5;

    static TorusGroup circle(std::size_t quadrature_order);
    std::size_t node_count() const;
    GroupElement node(std::size_t index) const;
    double weight() const { return 1.0 / static_cast<double>(node_count()); }
};

/// Quadrature order that makes averaging of a degree-d polynomial exact: 4d + 1.
std::size_t default_quadrature_order(int max_degree);

using AveragingGroup = std::variant<FiniteGroup, TorusGroup>;

std::size_t group_dimension(const AveragingGroup& g);
std::size_t group_size(const AveragingGroup& g);
bool group_is_real(const AveragingGroup& g);
/// Visits every element (or quadrature node) with its weight, in canonical order.
void for_each_element(const AveragingGroup& g, const std::function<void(const GroupElement&, double)>& fn);

/// Breadth-first closure of the generators. Throws GroupTooLarge beyond cap elements.
FiniteGroup generate_group(const std::vector<GroupElement>& generators, std::size_t cap = 100000);

Complex haar_average(const std::function<Complex(const GroupElement&)>& f, const AveragingGroup& g);

/// Distinct points γ(z); points closer than 1e-10 are merged.
std::vector<Point> orbit(const FiniteGroup& g, std::span<const Complex> z);

struct ProjectionResult {
    std::vector<GroupElement> elements; ///< distinct elements of Σ_n(G)
    bool is_group = false;
    std::optional<std::string> witness;
    std::optional<GroupElement> witness_element;
};

/// Σ_n(G) = {Π_n ∘ g ∘ ι_n}; reports whether the projected family is a group.
ProjectionResult project_group(const FiniteGroup& g, std::size_t n);

struct InvarianceReport {
    double max_deviation = 0.0;
    Point witness;
    std::optional<GroupElement> witness_element;
};

/// max over sampled z and all γ of |P(γ z) − P(z)|.
InvarianceReport verify_invariance(const AveragingGroup& g, const Polynomial& p, std::size_t samples, std::uint64_t seed,
                                   bool real_points = false);
InvarianceReport verify_invariance(const AveragingGroup& g, const std::function<Complex(std::span<const Complex>)>& f,
                                   std::size_t samples, std::uint64_t seed, bool real_points = false);

struct SetInvarianceReport {
    bool invariant = false;
    double max_displacement = 0.0;
};

SetInvarianceReport verify_set_invariance(const FiniteGroup& g, const std::vector<Point>& cloud, double tol);

double distance(std::span<const Complex> a, std::span<const Complex> b);

} // namespace invsep
