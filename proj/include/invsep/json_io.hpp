#pragma once

#include "invsep/group_spec.hpp"
#include "invsep/groups.hpp"
#include "invsep/poly.hpp"
#include "invsep/setspec.hpp"

#include <json.hpp>

#include <string>

namespace invsep::io {

using Json = nlohmann::ordered_json;

/// Real values are written as plain numbers, others as [re, im].
/// Parsing accepts a number, [re, im] or {"re": .., "im": ..}.
Json to_json(Complex c);
Complex complex_from_json(const Json& j);
Json to_json(std::span<const Complex> p);
Point point_from_json(const Json& j);

/// { "dim": n, "field": "R"|"C", "terms": [ { "exp": [...], "re": r, "im": i } ] } in canonical order.
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

/// { "kind": "perm"|"signed_perm"|"phases"|"perm_like"|"dense", ... }
Json to_json(const GroupElement& e);
GroupElement element_from_json(const Json& j);

/// { "kind": "symN"|"r_trunc"|"rf_gen"|"block_perm"|"signed_index"|"dyadic"|"circle"|"custom"|"trivial", ... }
Json to_json(const GroupSpec& g);
GroupSpec group_spec_from_json(const Json& j);

/// { "kind": "lp_ball", "dim", "p" (number or "inf"), "radius", "field" } | { "kind": "cloud", "points" }
/// | { "kind": "named", "id", "params" }
Json to_json(const SetSpec& k);
SetSpec set_spec_from_json(const Json& j);

Json to_json(const SupEstimate& s);
Json to_json(const SeparationReport& r);
/// m,power,sup,value,margin per search step.
std::string steps_csv(const SeparationReport& r);

/// Parses text, mapping every JSON error to ErrorCode::Parse.
Json parse(const std::string& text);

} // namespace invsep::io
