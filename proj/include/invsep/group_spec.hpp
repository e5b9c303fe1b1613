#pragma once

#include "invsep/groups.hpp"

#include <string>
#include <vector>

namespace invsep {

/// Named description of one of the supported group actions, at a finite truncation level.
///
/// Coordinates are 0-based. The infinite groups (roots of unity, block permutations, finite
/// bijections, signed-index permutations, measure-preserving maps) only ever appear through
/// these finite-dimensional truncations.
struct GroupSpec {
    enum class Kind { Trivial, SymN, RTrunc, RFGen, BlockPerm, SignedIndex, Dyadic, Circle, Custom };

    Kind kind = Kind::Trivial;
    std::size_t n = 1;                  ///< SymN: permuted coordinates; RTrunc/RFGen: truncation level; SignedIndex: |A|
    std::size_t dim = 0;                ///< ambient dimension, 0 = natural for the kind
    std::vector<std::size_t> blocks;    ///< BlockPerm: consecutive block sizes
    std::size_t level = 0;              ///< Dyadic: level N (2^N intervals)
    std::vector<std::size_t> acting;    ///< Circle: acting coordinates (default {0})
    std::size_t quadrature_order = 0;   ///< Circle: 0 = default
    std::vector<GroupElement> custom;   ///< Custom generators

    static GroupSpec trivial(std::size_t dim);
    static GroupSpec sym(std::size_t n, std::size_t dim = 0);
    static GroupSpec roots_of_unity(std::size_t n);
    static GroupSpec roots_of_unity_generated(std::size_t n);
    static GroupSpec block_permutations(std::vector<std::size_t> blocks);
    static GroupSpec signed_index(std::size_t a_size);
    static GroupSpec dyadic(std::size_t level);
    static GroupSpec circle(std::size_t dim = 1, std::vector<std::size_t> acting = {}, std::size_t quadrature_order = 0);
    static GroupSpec from_generators(std::vector<GroupElement> generators);

    std::size_t dimension() const;
    /// Generators of the finite group (empty for the circle/torus).
    std::vector<GroupElement> generators() const;
    const char* kind_name() const;
};

/// Realizes a GroupSpec as an explicit finite group (closure of the generators) or a torus rule.
AveragingGroup realize(const GroupSpec& spec, std::size_t cap = 100000, int max_degree = 16);

} // namespace invsep
