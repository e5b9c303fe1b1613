#include "invsep/groups.hpp"

#include "invsep/error.hpp"
#include "invsep/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace invsep {

namespace {

constexpr std::int64_t kDenseKeyScale = 1000000000; // keys round dense entries to 1e-9

Eigen::MatrixXcd to_eigen(std::size_t n, const std::vector<Complex>& row_major)
{
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row_major[i * n + j];
    return m;
}

std::vector<Complex> from_eigen(const Eigen::MatrixXcd& m)
{
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<Complex> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

bool is_bijection(const std::vector<std::size_t>& source)
{
    std::vector<bool> seen(source.size(), false);
    for (auto s : source) {
        if (s >= source.size() || seen[s])
            return false;
        seen[s] = true;
    }
    return true;
}

std::string format_complex(Complex c)
{
    std::ostringstream os;
    os.precision(6);
    if (std::abs(c.imag()) < 1e-12)
        os << c.real();
    else
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return os.str();
}

} // namespace

Phase Phase::make(std::int64_t num, std::int64_t den)
{
    require(den > 0, ErrorCode::InvalidArgument, "phase denominator must be positive");
    num %= den;
    if (num < 0)
        num += den;
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
}

Complex Phase::value() const
{
    if (num == 0)
        return {1.0, 0.0};
    // Exact values for the quarter turns keep signed permutations real.
    if (2 * num == den)
        return {-1.0, 0.0};
    if (4 * num == den)
        return {0.0, 1.0};
    if (4 * num == 3 * den)
        return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return std::polar(1.0, angle);
}

Phase operator+(Phase a, Phase b)
{
    const auto l = std::lcm(a.den, b.den);
    return Phase::make(a.num * (l / a.den) + b.num * (l / b.den), l);
}

Phase operator-(Phase a) { return Phase::make(-a.num, a.den); }

const char* to_string(ElementKind kind)
{
    switch (kind) {
    case ElementKind::Permutation:
        return "perm";
    case ElementKind::SignedPermutation:
        return "signed_perm";
    case ElementKind::DiagonalPhases:
        return "phases";
    case ElementKind::PermutationLike:
        return "perm_like";
    case ElementKind::Dense:
        return "dense";
    }
    return "unknown";
}

GroupElement GroupElement::identity(std::size_t n)
{
    std::vector<std::size_t> src(n);
    std::iota(src.begin(), src.end(), 0);
    return permutation(std::move(src));
}

GroupElement GroupElement::permutation(std::vector<std::size_t> source)
{
    return permutation_like(std::move(source), {});
}

GroupElement GroupElement::signed_permutation(std::vector<std::size_t> source, const std::vector<int>& signs)
{
    require(signs.size() == source.size(), ErrorCode::DimensionMismatch, "signed permutation: sign vector length");
    std::vector<Phase> phases;
    for (int s : signs) {
        require(s == 1 || s == -1, ErrorCode::InvalidArgument, "signed permutation: signs must be ±1");
        phases.push_back(s == 1 ? Phase{} : Phase::make(1, 2));
    }
    return permutation_like(std::move(source), std::move(phases));
}

GroupElement GroupElement::diagonal_phases(std::vector<Phase> phases)
{
    std::vector<std::size_t> src(phases.size());
    std::iota(src.begin(), src.end(), 0);
    return permutation_like(std::move(src), std::move(phases));
}

GroupElement GroupElement::permutation_like(std::vector<std::size_t> source, std::vector<Phase> phases)
{
    require(!source.empty(), ErrorCode::InvalidArgument, "group element: empty dimension");
    require(is_bijection(source), ErrorCode::InvalidArgument, "group element: source is not a bijection");
    if (phases.empty())
        phases.assign(source.size(), Phase{});
    require(phases.size() == source.size(), ErrorCode::DimensionMismatch, "group element: phase vector length");
    GroupElement g;
    g.n_ = source.size();
    g.source_ = std::move(source);
    g.phases_.reserve(phases.size());
    for (const auto& p : phases)
        g.phases_.push_back(Phase::make(p.num, p.den));
    g.canonicalize();
    return g;
}

GroupElement GroupElement::dense(std::size_t n, std::vector<Complex> row_major)
{
    require(n > 0 && row_major.size() == n * n, ErrorCode::DimensionMismatch, "dense element: matrix size");
    const auto lu = to_eigen(n, row_major).fullPivLu();
    require(lu.isInvertible(), ErrorCode::NotInvertible, "dense element: matrix is singular");
    GroupElement g;
    g.kind_ = ElementKind::Dense;
    g.n_ = n;
    g.dense_ = std::move(row_major);
    return g;
}

GroupElement GroupElement::transposition(std::size_t n, std::size_t i, std::size_t j)
{
    require(i < n && j < n, ErrorCode::InvalidArgument, "transposition: index out of range");
    std::vector<std::size_t> src(n);
    std::iota(src.begin(), src.end(), 0);
    std::swap(src[i], src[j]);
    return permutation(std::move(src));
}

void GroupElement::canonicalize()
{
    const bool no_phase = std::all_of(phases_.begin(), phases_.end(), [](const Phase& p) { return p.is_zero(); });
    bool identity_source = true;
    for (std::size_t i = 0; i < n_; ++i)
        identity_source = identity_source && source_[i] == i;
    const bool signs_only =
        std::all_of(phases_.begin(), phases_.end(), [](const Phase& p) { return p.num == 0 || p.den == 2; });
    if (no_phase)
        kind_ = ElementKind::Permutation;
    else if (identity_source)
        kind_ = ElementKind::DiagonalPhases;
    else if (signs_only)
        kind_ = ElementKind::SignedPermutation;
    else
        kind_ = ElementKind::PermutationLike;
}

std::vector<Complex> GroupElement::factors() const
{
    require(is_monomial(), ErrorCode::Unsupported, "factors: dense element");
    std::vector<Complex> f;
    f.reserve(n_);
    for (const auto& p : phases_)
        f.push_back(p.value());
    return f;
}

std::vector<Complex> GroupElement::matrix() const
{
    if (!is_monomial())
        return dense_;
    std::vector<Complex> m(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        m[i * n_ + source_[i]] = phases_[i].value();
    return m;
}

bool GroupElement::is_real() const
{
    if (is_monomial())
        return std::all_of(phases_.begin(), phases_.end(), [](const Phase& p) { return p.num == 0 || p.den == 2; });
    return std::all_of(dense_.begin(), dense_.end(), [](Complex c) { return c.imag() == 0.0; });
}

bool GroupElement::is_identity() const
{
    if (is_monomial())
        return kind_ == ElementKind::Permutation && std::is_sorted(source_.begin(), source_.end());
    return key() == identity(n_).key();
}

Point GroupElement::apply(std::span<const Complex> x) const
{
    require(x.size() == n_, ErrorCode::DimensionMismatch, "apply: point dimension differs from element dimension");
    Point y(n_);
    if (is_monomial()) {
        for (std::size_t i = 0; i < n_; ++i)
            y[i] = phases_[i].is_zero() ? x[source_[i]] : phases_[i].value() * x[source_[i]];
        return y;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < n_; ++j)
            acc += dense_[i * n_ + j] * x[j];
        y[i] = acc;
    }
    return y;
}

GroupElement GroupElement::compose(const GroupElement& inner) const
{
    require(n_ == inner.n_, ErrorCode::DimensionMismatch, "compose: element dimensions differ");
    if (is_monomial() && inner.is_monomial()) {
        // (A(Bw))_i = a_i b_{σA(i)} w_{σB(σA(i))}
        std::vector<std::size_t> src(n_);
        std::vector<Phase> ph(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            src[i] = inner.source_[source_[i]];
            ph[i] = phases_[i] + inner.phases_[source_[i]];
        }
        return permutation_like(std::move(src), std::move(ph));
    }
    const Eigen::MatrixXcd prod = to_eigen(n_, matrix()) * to_eigen(n_, inner.matrix());
    return dense(n_, from_eigen(prod));
}

GroupElement GroupElement::inverse() const
{
    if (is_monomial()) {
        std::vector<std::size_t> src(n_);
        std::vector<Phase> ph(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            src[source_[i]] = i;
            ph[source_[i]] = -phases_[i];
        }
        return permutation_like(std::move(src), std::move(ph));
    }
    return dense(n_, from_eigen(to_eigen(n_, dense_).inverse()));
}

ElementKey GroupElement::key() const
{
    ElementKey k;
    k.reserve(2 + 3 * n_ + (is_monomial() ? 0 : 2 * n_ * n_));
    k.push_back(static_cast<std::int64_t>(kind_));
    k.push_back(static_cast<std::int64_t>(n_));
    if (is_monomial()) {
        for (std::size_t i = 0; i < n_; ++i) {
            k.push_back(static_cast<std::int64_t>(source_[i]));
            k.push_back(phases_[i].num);
            k.push_back(phases_[i].den);
        }
        return k;
    }
    for (Complex c : dense_) {
        k.push_back(std::llround(c.real() * kDenseKeyScale));
        k.push_back(std::llround(c.imag() * kDenseKeyScale));
    }
    return k;
}

Polynomial compose_linear(const Polynomial& p, const GroupElement& a)
{
    require(p.dimension() == a.dimension(), ErrorCode::DimensionMismatch,
            "compose_linear: element acts on dimension " + std::to_string(a.dimension()) + ", polynomial has " +
                std::to_string(p.dimension()));
    const Field f = a.is_real() ? Field::Real : Field::Complex;
    if (a.is_monomial()) {
        const auto factors = a.factors();
        return compose_monomial_map(p, a.source(), factors, f);
    }
    return compose_dense(p, a.matrix(), f);
}

FiniteGroup::FiniteGroup(std::size_t dimension, std::vector<GroupElement> elements) : dimension_(dimension)
{
    require(!elements.empty(), ErrorCode::InvalidArgument, "finite group: no elements");
    std::map<ElementKey, GroupElement> by_key;
    for (auto& e : elements) {
        require(e.dimension() == dimension, ErrorCode::DimensionMismatch, "finite group: element dimension");
        by_key.emplace(e.key(), std::move(e));
    }
    require(by_key.count(GroupElement::identity(dimension).key()) == 1, ErrorCode::InvalidArgument,
            "finite group: identity missing");
    for (const auto& [ka, a] : by_key) {
        require(by_key.count(a.inverse().key()) == 1, ErrorCode::InvalidArgument, "finite group: not closed under inverse");
        for (const auto& [kb, b] : by_key)
            require(by_key.count(a.compose(b).key()) == 1, ErrorCode::InvalidArgument,
                    "finite group: not closed under composition");
    }
    for (auto& [k, e] : by_key)
        elements_.push_back(std::move(e));
    stats_.products = elements_.size() * elements_.size();
}

FiniteGroup::FiniteGroup(Trusted, std::size_t dimension, std::vector<GroupElement> elements, GenerationStats stats)
    : dimension_(dimension), elements_(std::move(elements)), stats_(stats)
{
}

bool FiniteGroup::is_real() const
{
    return std::all_of(elements_.begin(), elements_.end(), [](const GroupElement& e) { return e.is_real(); });
}

TorusGroup TorusGroup::circle(std::size_t quadrature_order) { return TorusGroup{1, {0}, quadrature_order}; }

std::size_t TorusGroup::node_count() const
{
    std::size_t c = 1;
    for (std::size_t i = 0; i < acting.size(); ++i)
        c *= quadrature_order;
    return c;
}

GroupElement TorusGroup::node(std::size_t index) const
{
    std::vector<Phase> phases(dimension);
    const auto m = static_cast<std::int64_t>(quadrature_order);
    for (auto coord : acting) {
        phases[coord] = Phase::make(static_cast<std::int64_t>(index % quadrature_order), m);
        index /= quadrature_order;
    }
    return GroupElement::diagonal_phases(std::move(phases));
}

std::size_t default_quadrature_order(int max_degree) { return 4 * static_cast<std::size_t>(std::max(max_degree, 1)) + 1; }

std::size_t group_dimension(const AveragingGroup& g)
{
    return std::visit([](const auto& x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, FiniteGroup>)
            return x.dimension();
        else
            return x.dimension;
    }, g);
}

std::size_t group_size(const AveragingGroup& g)
{
    return std::visit([](const auto& x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, FiniteGroup>)
            return x.order();
        else
            return x.node_count();
    }, g);
}

bool group_is_real(const AveragingGroup& g)
{
    if (const auto* f = std::get_if<FiniteGroup>(&g))
        return f->is_real();
    const auto& t = std::get<TorusGroup>(g);
    return t.acting.empty();
}

void for_each_element(const AveragingGroup& g, const std::function<void(const GroupElement&, double)>& fn)
{
    if (const auto* f = std::get_if<FiniteGroup>(&g)) {
        const double w = f->weight();
        for (const auto& e : f->elements())
            fn(e, w);
        return;
    }
    const auto& t = std::get<TorusGroup>(g);
    const double w = t.weight();
    for (std::size_t i = 0; i < t.node_count(); ++i)
        fn(t.node(i), w);
}

FiniteGroup generate_group(const std::vector<GroupElement>& generators, std::size_t cap)
{
    require(!generators.empty(), ErrorCode::InvalidArgument, "generate_group: no generators");
    const auto n = generators.front().dimension();
    for (const auto& g : generators)
        require(g.dimension() == n, ErrorCode::DimensionMismatch, "generate_group: generators differ in dimension");

    GenerationStats stats;
    stats.generators = generators.size();
    std::map<ElementKey, GroupElement> found;
    std::vector<GroupElement> frontier{GroupElement::identity(n)};
    found.emplace(frontier.front().key(), frontier.front());
    while (!frontier.empty()) {
        ++stats.levels;
        std::vector<GroupElement> next;
        for (const auto& x : frontier)
            for (const auto& s : generators) {
                ++stats.products;
                auto y = s.compose(x);
                auto k = y.key();
                if (found.count(k))
                    continue;
                if (found.size() >= cap)
                    fail(ErrorCode::GroupTooLarge,
                         "generate_group: closure exceeds cap of " + std::to_string(cap) + " elements");
                found.emplace(std::move(k), y);
                next.push_back(std::move(y));
            }
        frontier = std::move(next);
    }
    // In a finite group every element has finite order, so closure under the generators
    // already contains all inverses.
    std::vector<GroupElement> elements;
    elements.reserve(found.size());
    for (auto& [k, e] : found)
        elements.push_back(std::move(e));
    return FiniteGroup(FiniteGroup::Trusted{}, n, std::move(elements), stats);
}

Complex haar_average(const std::function<Complex(const GroupElement&)>& f, const AveragingGroup& g)
{
    Complex acc{};
    for_each_element(g, [&](const GroupElement& e, double w) { acc += w * f(e); });
    return acc;
}

double distance(std::span<const Complex> a, std::span<const Complex> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<Point> orbit(const FiniteGroup& g, std::span<const Complex> z)
{
    require(z.size() == g.dimension(), ErrorCode::DimensionMismatch, "orbit: point dimension");
    std::vector<Point> out;
    for (const auto& e : g.elements()) {
        auto y = e.apply(z);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Point& p) { return distance(p, y) < 1e-10; });
        if (!seen)
            out.push_back(std::move(y));
    }
    return out;
}

namespace {

// Π_n ∘ g ∘ ι_n as a row-major n×n block, or as a monomial element when it stays one.
struct Projected {
    std::vector<Complex> block;
    std::optional<GroupElement> element;
};

Projected project_element(const GroupElement& g, std::size_t n)
{
    const auto full = g.matrix();
    const auto big = g.dimension();
    Projected p;
    p.block.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.block[i * n + j] = full[i * big + j];
    if (g.is_monomial()) {
        std::vector<std::size_t> src(n);
        std::vector<Phase> ph(n);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            ok = g.source()[i] < n;
            if (ok) {
                src[i] = g.source()[i];
                ph[i] = g.phases()[i];
            }
        }
        if (ok)
            p.element = GroupElement::permutation_like(std::move(src), std::move(ph));
        return p;
    }
    if (to_eigen(n, p.block).fullPivLu().isInvertible())
        p.element = GroupElement::dense(n, p.block);
    return p;
}

std::string describe_action(const std::vector<Complex>& block, std::size_t n)
{
    std::ostringstream os;
    os << "w -> (";
    for (std::size_t i = 0; i < n; ++i) {
        if (i)
            os << ", ";
        std::string row;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex c = block[i * n + j];
            if (std::abs(c) < 1e-12)
                continue;
            if (!row.empty())
                row += " + ";
            if (std::abs(c - Complex{1.0, 0.0}) > 1e-12)
                row += format_complex(c) + "*";
            row += "w" + std::to_string(j + 1);
        }
        os << (row.empty() ? "0" : row);
    }
    os << ")";
    return os.str();
}

} // namespace

ProjectionResult project_group(const FiniteGroup& g, std::size_t n)
{
    require(n >= 1 && n <= g.dimension(), ErrorCode::InvalidArgument, "project_group: level out of range");
    ProjectionResult result;
    std::map<ElementKey, GroupElement> members;
    for (const auto& e : g.elements()) {
        auto p = project_element(e, n);
        if (!p.element) {
            if (!result.witness)
                result.witness = "projection of a group element is not invertible: " + describe_action(p.block, n);
            continue;
        }
        auto k = p.element->key();
        members.emplace(std::move(k), std::move(*p.element));
    }
    for (auto& [k, e] : members)
        result.elements.push_back(e);
    if (result.witness)
        return result;

    if (!members.count(GroupElement::identity(n).key())) {
        result.witness = "identity is missing from the projected family";
        return result;
    }
    for (const auto& [ka, a] : members)
        for (const auto& [kb, b] : members) {
            auto c = a.compose(b);
            if (!members.count(c.key())) {
                result.witness = "product of projected elements leaves the family: " + describe_action(c.matrix(), n);
                result.witness_element = c;
                return result;
            }
        }
    result.is_group = true;
    return result;
}

namespace {

Point random_point(Rng& rng, std::size_t n, bool real)
{
    Point z(n);
    for (auto& c : z)
        c = real ? Complex{gaussian(rng), 0.0} : Complex{gaussian(rng), gaussian(rng)} / std::sqrt(2.0);
    return z;
}

} // namespace

InvarianceReport verify_invariance(const AveragingGroup& g, const std::function<Complex(std::span<const Complex>)>& f,
                                   std::size_t samples, std::uint64_t seed, bool real_points)
{
    const auto n = group_dimension(g);
    InvarianceReport report;
    auto rng = make_rng(seed, "verify_invariance");
    for (std::size_t s = 0; s < samples; ++s) {
        const auto z = random_point(rng, n, real_points);
        const Complex base = f(z);
        for_each_element(g, [&](const GroupElement& e, double) {
            const double dev = std::abs(f(e.apply(z)) - base);
            if (dev > report.max_deviation || report.witness.empty()) {
                report.max_deviation = dev;
                report.witness = z;
                report.witness_element = e;
            }
        });
    }
    return report;
}

InvarianceReport verify_invariance(const AveragingGroup& g, const Polynomial& p, std::size_t samples, std::uint64_t seed,
                                   bool real_points)
{
    require(p.dimension() == group_dimension(g), ErrorCode::DimensionMismatch, "verify_invariance: dimension mismatch");
    return verify_invariance(g, [&](std::span<const Complex> x) { return p.eval(x); }, samples, seed, real_points);
}

SetInvarianceReport verify_set_invariance(const FiniteGroup& g, const std::vector<Point>& cloud, double tol)
{
    require(!cloud.empty(), ErrorCode::InvalidArgument, "verify_set_invariance: empty set");
    SetInvarianceReport report;
    for (const auto& e : g.elements())
        for (const auto& k : cloud) {
            const auto y = e.apply(k);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : cloud)
                best = std::min(best, distance(y, q));
            report.max_displacement = std::max(report.max_displacement, best);
        }
    report.invariant = report.max_displacement <= tol;
    return report;
}

} // namespace invsep
