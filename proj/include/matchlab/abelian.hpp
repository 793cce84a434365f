#pragma once

// Finitely generated abelian groups Z^r x Z/n1 x ... x Z/nk in invariant-factor
// form, their finite subsets, finite subgroups, sumsets and stabilizers.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace matchlab {

struct GroupElement {
  std::vector<std::int64_t> free;
  std::vector<std::int64_t> torsion;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& x);

class GroupSpec {
 public:
  GroupSpec() = default;

  /// Normalizes the torsion orders to invariant factors n1 | n2 | ... | nk.
  /// Throws InvalidInput for a negative rank or a torsion order < 2.
  static GroupSpec make(int free_rank, std::span<const std::int64_t> torsion_orders);
  static GroupSpec cyclic(std::int64_t n) { return make(0, std::vector<std::int64_t>{n}); }

  int free_rank() const { return free_rank_; }
  const std::vector<std::int64_t>& torsion() const { return torsion_; }

  bool is_finite() const { return free_rank_ == 0; }
  /// Group order, or nullopt for infinite groups.
  std::optional<std::uint64_t> order() const;
  std::uint64_t torsion_order() const;

  GroupElement zero() const;
  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement neg(const GroupElement& x) const;
  GroupElement sub(const GroupElement& x, const GroupElement& y) const { return add(x, neg(y)); }
  GroupElement scale(std::int64_t k, const GroupElement& x) const;
  /// Additive order of x; nullopt when x has infinite order.
  std::optional<std::uint64_t> element_order(const GroupElement& x) const;

  /// Shape and residue-range check (canonical form).
  bool contains(const GroupElement& x) const;
  /// Throws InvalidInput unless contains(x).
  void require(const GroupElement& x) const;
  GroupElement element(std::vector<std::int64_t> free, std::vector<std::int64_t> torsion) const;
  /// Shorthand for cyclic groups and pure-torsion groups.
  GroupElement torsion_element(std::vector<std::int64_t> residues) const;

  /// All elements with zero free part, in canonical order.
  std::vector<GroupElement> torsion_elements() const;
  /// All elements of a finite group, canonical order. Throws for infinite groups.
  std::vector<GroupElement> elements() const;

  std::string to_string() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  int free_rank_ = 0;
  std::vector<std::int64_t> torsion_;
};

/// All invariant-factor groups of the given finite order, in deterministic order.
std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t order);

/// A finite subset: duplicate-free, sorted canonically.
class GroupSubset {
 public:
  GroupSubset() = default;
  GroupSubset(GroupSpec group, std::vector<GroupElement> elements);

  const GroupSpec& group() const { return group_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const GroupElement& x) const;
  /// Position in canonical order, or nullopt.
  std::optional<std::size_t> index_of(const GroupElement& x) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }

  GroupSubset set_union(const GroupSubset& other) const;
  GroupSubset intersection(const GroupSubset& other) const;
  GroupSubset difference(const GroupSubset& other) const;
  GroupSubset translate(const GroupElement& g) const;
  bool is_subset_of(const GroupSubset& other) const;

  friend bool operator==(const GroupSubset& a, const GroupSubset& b) {
    return a.group_ == b.group_ && a.elements_ == b.elements_;
  }

 private:
  GroupSpec group_;
  std::vector<GroupElement> elements_;
};

std::string to_string(const GroupSubset& s);

/// A finite subgroup with its generators and materialized element set.
class Subgroup {
 public:
  Subgroup() = default;

  /// Closure of the generators. Every generator must have finite order.
  static Subgroup generated_by(const GroupSpec& group, std::vector<GroupElement> generators);
  /// Wraps a set already known to be a subgroup; generators are recomputed greedily.
  static Subgroup from_elements(const GroupSubset& elements);

  const GroupSpec& group() const { return elements_.group(); }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const GroupSubset& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const GroupElement& x) const { return elements_.contains(x); }
  bool is_proper() const;
  bool is_trivial() const { return elements_.size() == 1; }

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements_ == b.elements_; }

 private:
  std::vector<GroupElement> generators_;
  GroupSubset elements_;
};

/// True iff the set contains 0 and is closed under addition and negation.
bool is_subgroup(const GroupSubset& s);

enum class ElementOp { add, neg, zero };
GroupElement element_op(const GroupSpec& group, ElementOp kind, const GroupElement* x = nullptr,
                        const GroupElement* y = nullptr);

/// {a + b : a in A, b in B}. Throws on empty input or mixed groups.
GroupSubset sumset(const GroupSubset& a, const GroupSubset& b);

/// {g : g + C = C}, found by filtering the candidates C - c0.
Subgroup stabilizer(const GroupSubset& c);

/// Finite subgroups ordered by (order, elements). For an infinite group a bound is mandatory
/// and only torsion subgroups are produced.
std::vector<Subgroup> subgroups(const GroupSpec& group, std::optional<std::uint64_t> order_bound = {});

/// Smallest order of a non-zero finite subgroup; nullopt when the group is torsion-free.
std::optional<std::uint64_t> smallest_subgroup_order(const GroupSpec& group);

bool is_prime(std::uint64_t n);
std::uint64_t smallest_prime_factor(std::uint64_t n);

}  // namespace matchlab
