#pragma once

// JSON encodings of groups, fields, subsets and subspaces. Emission is canonical:
// nlohmann::json keeps object keys sorted, and every set is emitted in its canonical order.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "matchlab/abelian.hpp"
#include "matchlab/ffext.hpp"
#include "matchlab/linear_matching.hpp"

namespace matchlab {

using Json = nlohmann::json;

/// Parses text, mapping syntax errors to InvalidInput.
Json parse_json(const std::string& text);
/// Canonical compact dump (sorted keys, UTF-8 preserved).
std::string canonical_dump(const Json& j);

Json to_json(const GroupSpec& g);
GroupSpec group_from_json(const Json& j);

Json to_json(const GroupElement& x);
/// Accepts {"free":[..],"torsion":[..]}; a bare integer is shorthand for groups with one component.
GroupElement element_from_json(const Json& j, const GroupSpec& g);

Json to_json(const GroupSubset& s);
/// Rejects duplicates and foreign elements; any order is accepted.
GroupSubset subset_from_json(const Json& j, const GroupSpec& g);

/// {"generators":[..],"elements":[..]}
Json to_json(const Subgroup& h);
/// Requires the element set to be a subgroup equal to the closure of the generators.
Subgroup subgroup_from_json(const Json& j, const GroupSpec& g);

Json to_json(const FieldCtx& f);
Field field_from_json(const Json& j);

Json to_json(const FqElement& x);
FqElement fq_from_json(const Json& j, const FieldCtx& f);

Json to_json(const Subspace& s);
/// Rows must already be in canonical reduced echelon form; otherwise the error message
/// carries the echelonized rows as a hint.
Subspace subspace_from_json(const Json& j, const Field& f);

Json to_json(const SubfieldDesc& h);

Json to_json(const std::vector<FqElement>& basis);
std::vector<FqElement> basis_from_json(const Json& j, const FieldCtx& f);

/// {"group":..,"A":..,"B":..}
struct GroupInstance {
  GroupSubset A;
  GroupSubset B;
};
GroupInstance group_instance_from_json(const Json& j);
Json to_json(const GroupInstance& inst);

/// {"field":..,"A":..,"B":..,"a_basis":[..]?}; A or B may be absent when a query needs only one.
struct FieldInstance {
  Field field;
  std::optional<Subspace> A;
  std::optional<Subspace> B;
  std::optional<std::vector<FqElement>> a_basis;
};
FieldInstance field_instance_from_json(const Json& j);
Json to_json(const FieldInstance& inst);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace matchlab
