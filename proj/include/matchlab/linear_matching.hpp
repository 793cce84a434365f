#pragma once

// Matchings between K-subspaces of L = F_{p^n}.
//
// A basis (a_1..a_n) of A is matched to a basis (b_1..b_n) of B when
//   a_i b ∈ A  implies  b ∈ <b_1, .., b_{i-1}, b_{i+1}, .., b_n>   for every b ∈ B.
// Such a basis exists iff dim ∩_{i∈J}(a_i^{-1}A ∩ B) <= n - #J for every J.
// Writing V_i = a_i^{-1}A ∩ B, the condition says V_i lies in the hyperplane
// ker(f_i) of the dual basis functional f_i, so a matched basis is the dual of an
// independent transversal f_i ∈ V_i^⊥.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matchlab/abelian_matching.hpp"
#include "matchlab/ffext.hpp"

namespace matchlab {

/// Ordered, linearly independent sequence of field elements.
struct BasisSeq {
  Field field;
  std::vector<FqElement> vectors;

  /// Throws InvalidInput when the vectors are dependent or foreign.
  static BasisSeq make(Field field, std::vector<FqElement> vectors);
  Subspace span() const { return Subspace::span(field, vectors); }
  std::size_t size() const { return vectors.size(); }
};

struct CriterionViolator {
  std::vector<std::size_t> J;  // 0-based positions, increasing
  Subspace witness;            // ∩_{i∈J}(a_i^{-1}A ∩ B)
  std::int64_t deficit = 0;    // dim witness - (n - #J), > 0
};

struct BasisMatching {
  BasisSeq a_basis;
  BasisSeq b_basis;
  Subspace ambient;  // A
  Subspace target;   // B
};

/// Criterion with an arbitrary ambient A and target (dim target = #a).
/// Returns the first violating J, ordered by size then lexicographically.
std::optional<CriterionViolator> criterion_check(std::span<const FqElement> a, const Subspace& target,
                                                 const Subspace& ambient);

/// a_basis must span A; dim A = dim B = n with 1 <= n <= 20.
std::optional<CriterionViolator> basis_matchable(const BasisSeq& a_basis, const Subspace& B, const Subspace& A);

/// Constructs a matched basis of B, or returns the violator. A criterion that holds
/// while the construction fails raises TheoremViolation.
std::variant<BasisMatching, CriterionViolator> find_matched_basis(const BasisSeq& a_basis, const Subspace& B,
                                                                  const Subspace& A);

/// Literal check of the hyperplane condition for every i and every b ∈ B.
CheckResult check_matched_bases(std::span<const FqElement> a, std::span<const FqElement> b, const Subspace& A);

/// Brute force over ordered bases of B (up to scalars) against the literal definition,
/// sharing nothing with the criterion path. Throws BudgetExceeded above ~10^7 tuples.
std::optional<std::vector<FqElement>> exhaustive_matched_basis(std::span<const FqElement> a, const Subspace& B,
                                                               const Subspace& A);

struct BasisMode {
  enum class Kind { exhaustive, sample, automatic };
  Kind kind = Kind::automatic;
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;  // ordered-basis count allowed for exhaustive

  static BasisMode exhaustive(std::uint64_t budget = 1'000'000) { return {Kind::exhaustive, 0, 0, budget}; }
  static BasisMode sample(std::uint64_t trials, std::uint64_t seed) { return {Kind::sample, trials, seed, 1'000'000}; }
};

struct MatchedReport {
  bool matched = true;
  std::string mode;  // "exhaustive" or "sample"
  std::uint64_t bases_checked = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<BasisSeq> failing_basis;
  std::optional<CriterionViolator> violator;
};

/// Ordered bases of an m-dimensional F_p-space: prod_{i<m} (p^m - p^i).
std::uint64_t ordered_basis_count(std::size_t m, std::uint32_t p);
/// Number of m-dimensional subspaces of F_p^k.
std::uint64_t gaussian_binomial(std::size_t k, std::size_t m, std::uint32_t p);

/// Every basis of A (or a sample) is tested with the criterion against B.
MatchedReport is_matched(const Subspace& A, const Subspace& B, const BasisMode& mode);

/// <AB> ∩ A = {0}.
bool strong_matching_exists(const Subspace& A, const Subspace& B);

struct PrimitiveReport {
  bool primitive = true;
  std::optional<SubfieldDesc> offender;
};

/// B meets no proper subfield F_{p^d}, d | n, d < n.
PrimitiveReport primitive_check(const Subspace& B);

/// Per-basis form of "Ã is A-matched to B̃".
bool a_matched_basis(std::span<const FqElement> a_tilde, const Subspace& b_tilde, const Subspace& A);
/// Subspace form: every basis (or a sample) of Ã.
MatchedReport a_matched(const Subspace& a_tilde, const Subspace& b_tilde, const Subspace& A, const BasisMode& mode);

struct LocalSearchConfig {
  std::uint64_t subspace_budget = 100'000;  // exhaustive Ã enumeration limit
  std::uint64_t subspace_trials = 200;      // sampled Ã candidates otherwise
  std::uint64_t seed = 0;
  BasisMode basis_mode{};
};

struct LinearSubfieldReport {
  SubfieldDesc H;
  Subspace h_cap_b;
  Subspace module;  // {a ∈ A : aH ⊆ A}
  std::optional<Subspace> a_tilde;
  std::string search_mode;
  std::uint64_t candidates_checked = 0;
};

struct LinearLocalReport {
  bool locally_matched = true;
  std::vector<LinearSubfieldReport> qualifying;
};

/// Requires dim A = dim B >= 1 and 1 ∉ B.
LinearLocalReport linear_locally_matched(const Subspace& A, const Subspace& B, const LocalSearchConfig& config = {});

struct Theorem51Report {
  LinearLocalReport local;
  MatchedReport matched;
  bool implication_holds = true;
};

/// Evaluates both sides and reports whether "locally matched => matched" held.
Theorem51Report evaluate_theorem51(const Subspace& A, const Subspace& B, const LocalSearchConfig& local,
                                   const BasisMode& mode);
/// As evaluate_theorem51, but throws TheoremViolation when the implication fails.
Theorem51Report theorem51_check(const Subspace& A, const Subspace& B, const LocalSearchConfig& local,
                                const BasisMode& mode);

// Enumeration and sampling helpers shared with campaigns.

/// Coefficient vectors of length m whose first nonzero entry is 1, lexicographic.
std::vector<linalg::Vec> projective_points(std::size_t m, std::uint32_t p);

/// Visits every basis of the space up to order and scalars; stop by returning false.
void for_each_basis(const Subspace& space, const std::function<bool(const std::vector<FqElement>&)>& visit);

/// Visits every m-dimensional subspace of the ambient space in echelon order.
void for_each_subspace(const Subspace& ambient, std::size_t m, const std::function<bool(const Subspace&)>& visit);

using Rng = std::mt19937_64;
FqElement random_element(const FieldCtx& ctx, Rng& rng);
Subspace random_subspace(const Field& field, std::size_t dim, Rng& rng);
/// Random m-dimensional subspace of the ambient space.
Subspace random_subspace_of(const Subspace& ambient, std::size_t m, Rng& rng);
BasisSeq random_basis(const Subspace& space, Rng& rng);

}  // namespace matchlab
