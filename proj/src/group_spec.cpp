#include "invsep/group_spec.hpp"

#include "invsep/error.hpp"

#include <numeric>

namespace invsep {

namespace {

// Transposition (first, first+1) and the cycle first -> first+1 -> ... on a block of
// `size` coordinates; together they generate the symmetric group of the block.
void append_block_generators(std::vector<GroupElement>& out, std::size_t dim, std::size_t first, std::size_t size)
{
    if (size < 2)
        return;
    out.push_back(GroupElement::transposition(dim, first, first + 1));
    if (size > 2) {
        std::vector<std::size_t> src(dim);
        std::iota(src.begin(), src.end(), 0);
        for (std::size_t i = 0; i < size; ++i)
            src[first + i] = first + (i + 1) % size;
        out.push_back(GroupElement::permutation(std::move(src)));
    }
}

} // namespace

GroupSpec GroupSpec::trivial(std::size_t dim)
{
    GroupSpec s;
    s.kind = Kind::Trivial;
    s.dim = dim;
    return s;
}

GroupSpec GroupSpec::sym(std::size_t n, std::size_t dim)
{
    GroupSpec s;
    s.kind = Kind::SymN;
    s.n = n;
    s.dim = dim;
    return s;
}

GroupSpec GroupSpec::roots_of_unity(std::size_t n)
{
    GroupSpec s;
    s.kind = Kind::RTrunc;
    s.n = n;
    return s;
}

GroupSpec GroupSpec::roots_of_unity_generated(std::size_t n)
{
    GroupSpec s;
    s.kind = Kind::RFGen;
    s.n = n;
    return s;
}

GroupSpec GroupSpec::block_permutations(std::vector<std::size_t> blocks)
{
    GroupSpec s;
    s.kind = Kind::BlockPerm;
    s.blocks = std::move(blocks);
    return s;
}

GroupSpec GroupSpec::signed_index(std::size_t a_size)
{
    GroupSpec s;
    s.kind = Kind::SignedIndex;
    s.n = a_size;
    return s;
}

GroupSpec GroupSpec::dyadic(std::size_t level)
{
    GroupSpec s;
    s.kind = Kind::Dyadic;
    s.level = level;
    return s;
}

GroupSpec GroupSpec::circle(std::size_t dim, std::vector<std::size_t> acting, std::size_t quadrature_order)
{
    GroupSpec s;
    s.kind = Kind::Circle;
    s.dim = dim;
    s.acting = acting.empty() ? std::vector<std::size_t>{0} : std::move(acting);
    s.quadrature_order = quadrature_order;
    return s;
}

GroupSpec GroupSpec::from_generators(std::vector<GroupElement> generators)
{
    require(!generators.empty(), ErrorCode::InvalidArgument, "custom group: no generators");
    GroupSpec s;
    s.kind = Kind::Custom;
    s.dim = generators.front().dimension();
    s.custom = std::move(generators);
    return s;
}

std::size_t GroupSpec::dimension() const
{
    switch (kind) {
    case Kind::Trivial:
        return dim;
    case Kind::SymN:
        return dim == 0 ? n : dim;
    case Kind::RTrunc:
    case Kind::RFGen:
        return n;
    case Kind::BlockPerm:
        return std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
    case Kind::SignedIndex:
        return 2 * n;
    case Kind::Dyadic:
        return std::size_t{1} << level;
    case Kind::Circle:
        return dim == 0 ? 1 : dim;
    case Kind::Custom:
        return custom.empty() ? 0 : custom.front().dimension();
    }
    return 0;
}

const char* GroupSpec::kind_name() const
{
    switch (kind) {
    case Kind::Trivial:
        return "trivial";
    case Kind::SymN:
        return "symN";
    case Kind::RTrunc:
        return "r_trunc";
    case Kind::RFGen:
        return "rf_gen";
    case Kind::BlockPerm:
        return "block_perm";
    case Kind::SignedIndex:
        return "signed_index";
    case Kind::Dyadic:
        return "dyadic";
    case Kind::Circle:
        return "circle";
    case Kind::Custom:
        return "custom";
    }
    return "unknown";
}

std::vector<GroupElement> GroupSpec::generators() const
{
    const auto d = dimension();
    require(d >= 1, ErrorCode::InvalidArgument, std::string("group spec '") + kind_name() + "': dimension must be positive");
    std::vector<GroupElement> gens;
    switch (kind) {
    case Kind::Trivial:
        break;
    case Kind::SymN:
        require(n >= 1 && n <= d, ErrorCode::InvalidArgument, "symN: n must lie in [1, dim]");
        append_block_generators(gens, d, 0, n);
        break;
    case Kind::RTrunc:
    case Kind::RFGen:
        // γ_m multiplies coordinate m (1-based) by e^{2πi/m}; the truncated R is generated by these.
        for (std::size_t m = 2; m <= d; ++m) {
            std::vector<Phase> ph(d);
            ph[m - 1] = Phase::make(1, static_cast<std::int64_t>(m));
            gens.push_back(GroupElement::diagonal_phases(std::move(ph)));
        }
        break;
    case Kind::BlockPerm: {
        std::size_t first = 0;
        for (auto b : blocks) {
            require(b >= 1, ErrorCode::InvalidArgument, "block_perm: empty block");
            append_block_generators(gens, d, first, b);
            first += b;
        }
        break;
    }
    case Kind::SignedIndex:
        // Coordinates 0..n-1 carry the indices of A, n..2n-1 those of -A.
        require(n >= 1, ErrorCode::InvalidArgument, "signed_index: |A| must be positive");
        append_block_generators(gens, d, 0, n);
        append_block_generators(gens, d, n, n);
        break;
    case Kind::Dyadic:
        append_block_generators(gens, d, 0, d);
        break;
    case Kind::Circle:
        break;
    case Kind::Custom:
        gens = custom;
        break;
    }
    return gens;
}

AveragingGroup realize(const GroupSpec& spec, std::size_t cap, int max_degree)
{
    if (spec.kind == GroupSpec::Kind::Circle) {
        TorusGroup t;
        t.dimension = spec.dimension();
        t.acting = spec.acting.empty() ? std::vector<std::size_t>{0} : spec.acting;
        for (auto a : t.acting)
            require(a < t.dimension, ErrorCode::InvalidArgument, "circle: acting coordinate out of range");
        t.quadrature_order = spec.quadrature_order ? spec.quadrature_order : default_quadrature_order(max_degree);
        return t;
    }
    auto gens = spec.generators();
    if (gens.empty())
        gens.push_back(GroupElement::identity(spec.dimension()));
    return generate_group(gens, cap);
}

} // namespace invsep
