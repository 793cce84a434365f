#pragma once

// Matchings A -> B in abelian groups: a bijection f with 0 not in B and
// a + f(a) not in A. Local matchings restrict the target to H ∩ B for finite
// subgroups H with a + H ⊆ A for some a in A.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "matchlab/abelian.hpp"

namespace matchlab {

using ElementPair = std::pair<GroupElement, GroupElement>;

struct Matching {
  GroupSubset domain;
  GroupSubset codomain;
  std::vector<ElementPair> pairs;  // sorted by domain element
};

struct HallViolator {
  GroupSubset domain;
  GroupSubset codomain;
  GroupSubset S;  // subset of the domain
  GroupSubset U;  // {b in B : s + b in A for all s in S}
};

struct LocalMatching {
  Subgroup H;
  GroupElement witness;  // a0 with a0 + H ⊆ A
  GroupSubset subdomain;
  std::vector<ElementPair> pairs;  // bijection subdomain -> H ∩ B
};

struct KneserCertificate {
  GroupSubset A;
  GroupSubset B;
  GroupSubset C;
  Subgroup H;
  std::int64_t slack = 0;
};

struct CheckResult {
  bool ok = true;
  std::string failure;  // first failing clause, empty when ok

  explicit operator bool() const { return ok; }
  static CheckResult pass() { return {}; }
  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Validates a proposed matching and reports the first failing clause.
/// Throws InvalidInput on group or size mismatch.
CheckResult is_matching(const GroupSubset& A, const GroupSubset& B, std::span<const ElementPair> pairs);

/// U = {b in B : s + b in A for all s in S}.
GroupSubset hall_u(const GroupSubset& A, const GroupSubset& B, const GroupSubset& S);

/// Maximum matching in the graph a -- b iff a + b not in A. Returns a perfect
/// matching or an inclusion-minimal Hall violator.
std::variant<Matching, HallViolator> find_matching(const GroupSubset& A, const GroupSubset& B);

/// Independent check by enumerating every bijection. Intended for #A <= 8.
std::optional<Matching> brute_force_matching(const GroupSubset& A, const GroupSubset& B);

/// First a in A (canonical order) with a + H ⊆ A.
std::optional<GroupElement> local_witness(const GroupSubset& A, const Subgroup& H);

/// Throws QualificationError if H is not proper, H ∩ B is empty, or no witness exists.
std::optional<LocalMatching> find_local_matching(const GroupSubset& A, const GroupSubset& B, const Subgroup& H);

struct LocalSubgroupReport {
  Subgroup H;
  GroupElement witness;
  std::optional<LocalMatching> matching;
};

struct LocalReport {
  bool locally_matched = true;
  std::vector<LocalSubgroupReport> qualifying;
};

/// Checks every qualifying proper subgroup with #H <= #A.
LocalReport check_local(const GroupSubset& A, const GroupSubset& B);
/// Same, with the candidate subgroups supplied (e.g. cached per group).
LocalReport check_local(const GroupSubset& A, const GroupSubset& B, std::span<const Subgroup> candidates);

bool is_locally_matched(const GroupSubset& A, const GroupSubset& B);

/// Torsion-free or cyclic of prime order.
bool decide_matching_property(const GroupSpec& G);

struct Counterexample {
  Subgroup H;
  GroupElement outside;
  GroupSubset A;
  GroupSubset B;
  HallViolator violator;
};

/// A = H, B = (H \ {0}) ∪ {g} for the subgroup generated by a prime-order
/// element of the first torsion generator. nullopt if G has the matching property.
std::optional<Counterexample> construct_counterexample(const GroupSpec& G);

/// Throws TheoremViolation if #(A+B) < #A + #B - #stab(A+B).
KneserCertificate kneser_verify(const GroupSubset& A, const GroupSubset& B);

}  // namespace matchlab
