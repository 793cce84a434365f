#include "matchlab/abelian_matching.hpp"

#include <algorithm>
#include <numeric>

#include "matchlab/bipartite.hpp"
#include "matchlab/error.hpp"

namespace matchlab {

namespace {

void require_valid_pair(const GroupSubset& A, const GroupSubset& B) {
  if (!(A.group() == B.group())) throw InvalidInput("group mismatch between A and B");
  if (A.size() != B.size())
    throw InvalidInput("size mismatch: #A=" + std::to_string(A.size()) + " #B=" + std::to_string(B.size()));
}

void require_matching_pre(const GroupSubset& A, const GroupSubset& B) {
  require_valid_pair(A, B);
  if (A.empty()) throw InvalidInput("A and B must be nonempty");
  if (B.contains(B.group().zero())) throw InvalidInput("0 must not belong to B");
}

}  // namespace

CheckResult is_matching(const GroupSubset& A, const GroupSubset& B, std::span<const ElementPair> pairs) {
  require_valid_pair(A, B);
  const auto& g = A.group();
  if (B.contains(g.zero())) return CheckResult::fail("0 belongs to B");
  if (pairs.size() != A.size())
    return CheckResult::fail("expected " + std::to_string(A.size()) + " pairs, got " + std::to_string(pairs.size()));
  std::vector<bool> used_a(A.size(), false), used_b(B.size(), false);
  for (const auto& [a, b] : pairs) {
    if (!g.contains(a) || !g.contains(b)) throw InvalidInput("pair element outside the group");
    auto ia = A.index_of(a);
    if (!ia) return CheckResult::fail(to_string(a) + " is not in A");
    auto ib = B.index_of(b);
    if (!ib) return CheckResult::fail(to_string(b) + " is not in B");
    if (used_a[*ia]) return CheckResult::fail(to_string(a) + " is matched twice");
    if (used_b[*ib]) return CheckResult::fail(to_string(b) + " is hit twice");
    used_a[*ia] = used_b[*ib] = true;
    auto s = g.add(a, b);
    if (A.contains(s)) return CheckResult::fail(to_string(a) + "+" + to_string(b) + "=" + to_string(s) + "∈A");
  }
  return CheckResult::pass();
}

GroupSubset hall_u(const GroupSubset& A, const GroupSubset& B, const GroupSubset& S) {
  const auto& g = A.group();
  std::vector<GroupElement> u;
  for (const auto& b : B) {
    bool all = std::all_of(S.begin(), S.end(), [&](const GroupElement& s) { return A.contains(g.add(s, b)); });
    if (all) u.push_back(b);
  }
  return GroupSubset(g, std::move(u));
}

namespace {

// #(B \ U) equals the neighbourhood size of S in the graph a -- b iff a + b not in A.
bool violates(const GroupSubset& A, const GroupSubset& B, const GroupSubset& S) {
  return B.size() - hall_u(A, B, S).size() < S.size();
}

}  // namespace

std::variant<Matching, HallViolator> find_matching(const GroupSubset& A, const GroupSubset& B) {
  require_matching_pre(A, B);
  const auto& g = A.group();
  const std::size_t n = A.size();
  BipartiteMatcher bm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!A.contains(g.add(A[i], B[j]))) bm.add_edge(i, j);

  if (bm.solve() == n) {
    Matching m{A, B, {}};
    for (std::size_t i = 0; i < n; ++i) m.pairs.emplace_back(A[i], B[static_cast<std::size_t>(bm.row_match()[i])]);
    return m;
  }

  std::vector<bool> rows, cols;
  bm.alternating_reach(rows, cols);
  std::vector<GroupElement> s;
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i]) s.push_back(A[i]);

  // Shrink to an inclusion-minimal violator, dropping elements in canonical order.
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t i = 0;
    while (i < s.size()) {
      auto trial = s;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (!trial.empty() && violates(A, B, GroupSubset(g, trial))) {
        s = std::move(trial);
        changed = true;
      } else {
        ++i;
      }
    }
  }
  GroupSubset S(g, std::move(s));
  GroupSubset U = hall_u(A, B, S);
  if (B.size() - U.size() >= S.size()) throw TheoremViolation("extracted Hall violator does not violate");
  return HallViolator{A, B, std::move(S), std::move(U)};
}

std::optional<Matching> brute_force_matching(const GroupSubset& A, const GroupSubset& B) {
  require_valid_pair(A, B);
  const auto& g = A.group();
  if (B.contains(g.zero())) return std::nullopt;
  std::vector<std::size_t> perm(B.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < A.size() && ok; ++i) ok = !A.contains(g.add(A[i], B[perm[i]]));
    if (ok) {
      Matching m{A, B, {}};
      for (std::size_t i = 0; i < A.size(); ++i) m.pairs.emplace_back(A[i], B[perm[i]]);
      return m;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::optional<GroupElement> local_witness(const GroupSubset& A, const Subgroup& H) {
  const auto& g = A.group();
  for (const auto& a : A) {
    bool inside = std::all_of(H.elements().begin(), H.elements().end(),
                              [&](const GroupElement& h) { return A.contains(g.add(a, h)); });
    if (inside) return a;
  }
  return std::nullopt;
}

std::optional<LocalMatching> find_local_matching(const GroupSubset& A, const GroupSubset& B, const Subgroup& H) {
  if (!(A.group() == B.group()) || !(H.group() == A.group())) throw InvalidInput("group mismatch");
  if (!H.is_proper()) throw QualificationError("H is not a proper subgroup");
  GroupSubset target = H.elements().intersection(B);
  if (target.empty()) throw QualificationError("H ∩ B is empty");
  auto witness = local_witness(A, H);
  if (!witness) throw QualificationError("no a in A with a+H ⊆ A");

  const auto& g = A.group();
  // Rows are the targets so that each b takes the first free a in canonical order.
  BipartiteMatcher bm(target.size(), A.size());
  for (std::size_t j = 0; j < target.size(); ++j)
    for (std::size_t i = 0; i < A.size(); ++i)
      if (!A.contains(g.add(A[i], target[j]))) bm.add_edge(j, i);
  if (bm.solve() < target.size()) return std::nullopt;

  std::vector<ElementPair> pairs;
  std::vector<GroupElement> sub;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const auto& a = A[static_cast<std::size_t>(bm.row_match()[j])];
    pairs.emplace_back(a, target[j]);
    sub.push_back(a);
  }
  std::sort(pairs.begin(), pairs.end());
  return LocalMatching{H, *witness, GroupSubset(g, std::move(sub)), std::move(pairs)};
}

LocalReport check_local(const GroupSubset& A, const GroupSubset& B, std::span<const Subgroup> candidates) {
  require_matching_pre(A, B);
  LocalReport report;
  for (const auto& H : candidates) {
    if (!H.is_proper() || H.order() > A.size()) continue;
    if (H.elements().intersection(B).empty()) continue;
    auto witness = local_witness(A, H);
    if (!witness) continue;
    LocalSubgroupReport entry{H, *witness, find_local_matching(A, B, H)};
    if (!entry.matching) report.locally_matched = false;
    report.qualifying.push_back(std::move(entry));
  }
  return report;
}

LocalReport check_local(const GroupSubset& A, const GroupSubset& B) {
  auto candidates = subgroups(A.group(), A.size());
  return check_local(A, B, candidates);
}

bool is_locally_matched(const GroupSubset& A, const GroupSubset& B) { return check_local(A, B).locally_matched; }

bool decide_matching_property(const GroupSpec& G) {
  if (G.torsion().empty()) return true;
  return G.free_rank() == 0 && G.torsion().size() == 1 && is_prime(static_cast<std::uint64_t>(G.torsion()[0]));
}

std::optional<Counterexample> construct_counterexample(const GroupSpec& G) {
  if (decide_matching_property(G)) return std::nullopt;
  // torsion is nonempty here; the first invariant factor is the smallest.
  auto n1 = G.torsion()[0];
  auto p = static_cast<std::int64_t>(smallest_prime_factor(static_cast<std::uint64_t>(n1)));
  std::vector<std::int64_t> residues(G.torsion().size(), 0);
  residues[0] = n1 / p;
  Subgroup H = Subgroup::generated_by(G, {G.torsion_element(residues)});

  std::optional<GroupElement> outside;
  for (const auto& x : G.torsion_elements()) {
    if (!H.contains(x)) {
      outside = x;
      break;
    }
  }
  if (!outside) {
    // Torsion part equals H, so G has a free factor.
    GroupElement e = G.zero();
    e.free[0] = 1;
    outside = e;
  }

  std::vector<GroupElement> b;
  for (const auto& h : H.elements())
    if (h != G.zero()) b.push_back(h);
  b.push_back(*outside);
  GroupSubset A = H.elements();
  GroupSubset B(G, std::move(b));
  auto result = find_matching(A, B);
  if (std::holds_alternative<Matching>(result))
    throw TheoremViolation("constructed counterexample in " + G.to_string() + " admits a matching");
  return Counterexample{H, *outside, A, B, std::get<HallViolator>(std::move(result))};
}

KneserCertificate kneser_verify(const GroupSubset& A, const GroupSubset& B) {
  GroupSubset C = sumset(A, B);
  Subgroup H = stabilizer(C);
  auto slack = static_cast<std::int64_t>(C.size()) - static_cast<std::int64_t>(A.size()) -
               static_cast<std::int64_t>(B.size()) + static_cast<std::int64_t>(H.order());
  if (slack < 0)
    throw TheoremViolation("Kneser inequality fails for A=" + to_string(A) + " B=" + to_string(B) +
                           " (slack " + std::to_string(slack) + ")");
  return KneserCertificate{A, B, std::move(C), std::move(H), slack};
}

}  // namespace matchlab
