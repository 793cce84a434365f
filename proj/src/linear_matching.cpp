#include "matchlab/linear_matching.hpp"

#include <algorithm>
#include <bit>

#include "matchlab/error.hpp"

namespace matchlab {

using linalg::Rows;
using linalg::Vec;

namespace {

constexpr std::size_t kMaxCriterionDim = 20;

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Rows coords_of(const Subspace& space, const Subspace& inside) {
  Rows out;
  for (const auto& r : inside.rows()) {
    auto c = space.coordinates(FqElement{r});
    if (!c) throw InvalidInput("subspace is not contained in its ambient space");
    out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace

BasisSeq BasisSeq::make(Field field, std::vector<FqElement> vectors) {
  if (!field) throw InvalidInput("basis without field");
  for (const auto& v : vectors) field->require(v);
  Subspace s = Subspace::span(field, vectors);
  if (s.dim() != vectors.size()) throw InvalidInput("basis vectors are linearly dependent");
  return BasisSeq{std::move(field), std::move(vectors)};
}

std::optional<CriterionViolator> criterion_check(std::span<const FqElement> a, const Subspace& target,
                                                 const Subspace& ambient) {
  require_same_field(target, ambient);
  const std::size_t m = a.size();
  if (m == 0) throw InvalidInput("criterion needs at least one vector");
  if (m > kMaxCriterionDim) throw BudgetExceeded("criterion limited to dimension 20");
  if (target.dim() != m)
    throw InvalidInput("dimension mismatch: " + std::to_string(m) + " vectors vs target of dim " +
                       std::to_string(target.dim()));

  std::vector<Subspace> v;
  v.reserve(m);
  for (const auto& ai : a) v.push_back(intersect(scale_space(ai, ambient, true), target));

  std::vector<std::size_t> chosen;
  std::optional<CriterionViolator> found;
  // Combinations of a fixed size k in lexicographic order; a zero prefix intersection
  // cannot lead to a violation.
  auto rec = [&](auto&& self, std::size_t k, std::size_t start, const Subspace& acc) -> bool {
    if (chosen.size() == k) {
      auto bound = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(k);
      auto d = static_cast<std::int64_t>(acc.dim());
      if (d > bound) {
        found = CriterionViolator{chosen, acc, d - bound};
        return true;
      }
      return false;
    }
    for (std::size_t i = start; i + (k - chosen.size()) <= m; ++i) {
      Subspace next = chosen.empty() ? v[i] : intersect(acc, v[i]);
      if (next.is_zero()) continue;
      chosen.push_back(i);
      bool stop = self(self, k, i + 1, next);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  };
  for (std::size_t k = 1; k <= m; ++k)
    if (rec(rec, k, 0, target)) break;
  return found;
}

std::optional<CriterionViolator> basis_matchable(const BasisSeq& a_basis, const Subspace& B, const Subspace& A) {
  require_same_field(A, B);
  if (A.dim() != B.dim()) throw InvalidInput("dimension mismatch between A and B");
  if (A.dim() == 0) throw InvalidInput("A and B must be nonzero");
  if (!(a_basis.span() == A)) throw InvalidInput("a_basis does not span A");
  return criterion_check(a_basis.vectors, B, A);
}

namespace {

// Rado condition for extending the chosen functionals by one from each remaining space.
bool extendable(const Rows& chosen, const std::vector<const Rows*>& remaining, std::size_t m, std::uint32_t p) {
  const std::size_t r = remaining.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
    Rows rows = chosen;
    for (std::size_t j = 0; j < r; ++j)
      if (mask >> j & 1) rows.insert(rows.end(), remaining[j]->begin(), remaining[j]->end());
    if (rows.empty()) return false;
    if (linalg::rank(rows, p) < chosen.size() + static_cast<std::size_t>(std::popcount(mask))) return false;
  }
  (void)m;
  return true;
}

}  // namespace

std::variant<BasisMatching, CriterionViolator> find_matched_basis(const BasisSeq& a_basis, const Subspace& B,
                                                                  const Subspace& A) {
  if (auto v = basis_matchable(a_basis, B, A)) return *v;

  const std::size_t m = B.dim();
  const std::uint32_t p = B.ctx().p();
  // W_i = annihilator of V_i in B-coordinates.
  std::vector<Rows> w(m);
  std::vector<Subspace> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = intersect(scale_space(a_basis.vectors[i], A, true), B);
    Rows vc = coords_of(B, v[i]);
    if (vc.empty()) {
      for (std::size_t k = 0; k < m; ++k) {
        Vec e(m, 0);
        e[k] = 1;
        w[i].push_back(std::move(e));
      }
    } else {
      w[i] = linalg::nullspace(vc, m, p);
    }
  }

  Rows chosen;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<const Rows*> rest;
    for (std::size_t j = i + 1; j < m; ++j) rest.push_back(&w[j]);
    const std::size_t k = w[i].size();
    const std::uint64_t count = ipow(p, k);
    bool placed = false;
    Vec coeffs(k, 0);
    for (std::uint64_t idx = 1; idx < count && !placed; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t c = k; c-- > 0;) {
        coeffs[c] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      Vec f = linalg::combine(coeffs, w[i], m, p);
      Rows trial = chosen;
      trial.push_back(f);
      if (linalg::rank(trial, p) != trial.size()) continue;
      if (!rest.empty() && !extendable(trial, rest, m, p)) continue;
      chosen = std::move(trial);
      placed = true;
    }
    if (!placed)
      throw TheoremViolation("criterion holds but no matched basis could be constructed at position " +
                             std::to_string(i + 1));
  }

  auto finv = linalg::inverse(chosen, p);
  if (!finv) throw TheoremViolation("chosen functionals are dependent");
  std::vector<FqElement> b;
  for (std::size_t j = 0; j < m; ++j) {
    Vec col(m);
    for (std::size_t k = 0; k < m; ++k) col[k] = (*finv)[k][j];
    b.push_back(B.combination(col));
  }

  const auto& ctx = A.ctx();
  for (std::size_t i = 0; i < m; ++i) {
    if (A.contains(ctx.mul(a_basis.vectors[i], b[i])))
      throw TheoremViolation("constructed pair " + std::to_string(i + 1) + " has a_i b_i in A");
    std::vector<FqElement> others;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) others.push_back(b[j]);
    if (!Subspace::span(A.field(), others).contains(v[i]))
      throw TheoremViolation("constructed basis violates the hyperplane condition at " + std::to_string(i + 1));
  }
  return BasisMatching{a_basis, BasisSeq::make(B.field(), std::move(b)), A, B};
}

CheckResult check_matched_bases(std::span<const FqElement> a, std::span<const FqElement> b, const Subspace& A) {
  if (a.size() != b.size()) return CheckResult::fail("bases have different lengths");
  if (a.empty()) return CheckResult::fail("empty bases");
  const auto& field = A.field();
  const auto& ctx = *field;
  Subspace B = Subspace::span(field, std::vector<FqElement>(b.begin(), b.end()));
  if (B.dim() != b.size()) return CheckResult::fail("b vectors are dependent");
  auto elems = B.elements();
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<FqElement> others;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (j != i) others.push_back(b[j]);
    Subspace hyper = Subspace::span(field, others);
    for (const auto& x : elems) {
      if (A.contains(ctx.mul(a[i], x)) && !hyper.contains(x))
        return CheckResult::fail("a_" + std::to_string(i + 1) + "*" + to_string(x) +
                                 " ∈ A but the element is outside the hyperplane of b_" + std::to_string(i + 1));
    }
  }
  return CheckResult::pass();
}

std::optional<std::vector<FqElement>> exhaustive_matched_basis(std::span<const FqElement> a, const Subspace& B,
                                                               const Subspace& A) {
  require_same_field(A, B);
  const std::size_t m = B.dim();
  if (a.size() != m || m == 0) throw InvalidInput("dimension mismatch");
  const std::uint32_t p = B.ctx().p();
  const std::uint64_t total = ipow(p, m);
  if (total > 4096) throw BudgetExceeded("target space too large for exhaustive search");
  std::uint64_t tuples = ordered_basis_count(m, p) / ipow(p - 1, m);
  if (tuples > 10'000'000) throw BudgetExceeded("too many candidate bases for exhaustive search");

  const auto& ctx = A.ctx();
  auto index_of = [&](const Vec& c) {
    std::uint64_t idx = 0;
    for (auto x : c) idx = idx * p + x;
    return idx;
  };
  auto coords_at = [&](std::uint64_t idx) {
    Vec c(m);
    for (std::size_t k = m; k-- > 0;) {
      c[k] = static_cast<std::uint32_t>(idx % p);
      idx /= p;
    }
    return c;
  };

  // bad[i]: coordinate indices of b with a_i b ∈ A.
  std::vector<std::vector<std::uint64_t>> bad(m);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    FqElement x = B.combination(coords_at(idx));
    for (std::size_t i = 0; i < m; ++i)
      if (A.contains(ctx.mul(a[i], x))) bad[i].push_back(idx);
  }

  auto points = projective_points(m, p);
  std::vector<std::size_t> pick;
  std::vector<bool> in_span(total);
  std::optional<std::vector<FqElement>> result;

  auto satisfied = [&]() {
    for (std::size_t i = 0; i < m; ++i) {
      std::fill(in_span.begin(), in_span.end(), false);
      const std::uint64_t combos = ipow(p, m - 1);
      Vec coeff(m - 1);
      for (std::uint64_t t = 0; t < combos; ++t) {
        std::uint64_t u = t;
        for (std::size_t k = 0; k + 1 < m; ++k) {
          coeff[k] = static_cast<std::uint32_t>(u % p);
          u /= p;
        }
        Vec sum(m, 0);
        std::size_t k = 0;
        for (std::size_t j = 0; j < m; ++j) {
          if (j == i) continue;
          const auto& pt = points[pick[j]];
          for (std::size_t c = 0; c < m; ++c) sum[c] = (sum[c] + linalg::mul_mod(coeff[k], pt[c], p)) % p;
          ++k;
        }
        in_span[index_of(sum)] = true;
      }
      for (auto idx : bad[i])
        if (!in_span[idx]) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self) -> bool {
    if (pick.size() == m) {
      if (!satisfied()) return false;
      std::vector<FqElement> out;
      for (auto k : pick) out.push_back(B.combination(points[k]));
      result = std::move(out);
      return true;
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (std::find(pick.begin(), pick.end(), k) != pick.end()) continue;
      Rows rows;
      for (auto q : pick) rows.push_back(points[q]);
      rows.push_back(points[k]);
      if (linalg::rank(rows, p) != rows.size()) continue;
      pick.push_back(k);
      if (self(self)) return true;
      pick.pop_back();
    }
    return false;
  };
  rec(rec);
  return result;
}

std::uint64_t ordered_basis_count(std::size_t m, std::uint32_t p) {
  const std::uint64_t q = ipow(p, m);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t factor = q - ipow(p, i);
    if (count > UINT64_MAX / factor) return UINT64_MAX;
    count *= factor;
  }
  return count;
}

std::uint64_t gaussian_binomial(std::size_t k, std::size_t m, std::uint32_t p) {
  if (m > k) return 0;
  // prod_{i<m} (p^{k-i} - 1) / (p^{i+1} - 1), accumulated as an exact fraction.
  unsigned __int128 num = 1, den = 1;
  for (std::size_t i = 0; i < m; ++i) {
    num *= ipow(p, k - i) - 1;
    den *= ipow(p, i + 1) - 1;
  }
  unsigned __int128 r = num / den;
  return r > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(r);
}

std::vector<Vec> projective_points(std::size_t m, std::uint32_t p) {
  std::vector<Vec> out;
  const std::uint64_t total = ipow(p, m);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    Vec c(m);
    std::uint64_t t = idx;
    for (std::size_t k = m; k-- > 0;) {
      c[k] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    auto first = std::find_if(c.begin(), c.end(), [](std::uint32_t x) { return x != 0; });
    if (*first == 1) out.push_back(std::move(c));
  }
  return out;
}

void for_each_basis(const Subspace& space, const std::function<bool(const std::vector<FqElement>&)>& visit) {
  const std::size_t m = space.dim();
  if (m == 0) return;
  const std::uint32_t p = space.ctx().p();
  auto points = projective_points(m, p);
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> bool {
    if (pick.size() == m) {
      std::vector<FqElement> basis;
      for (auto k : pick) basis.push_back(space.combination(points[k]));
      return !visit(basis);
    }
    for (std::size_t k = start; k + (m - pick.size()) <= points.size(); ++k) {
      Rows rows;
      for (auto q : pick) rows.push_back(points[q]);
      rows.push_back(points[k]);
      if (linalg::rank(rows, p) != rows.size()) continue;
      pick.push_back(k);
      bool stop = self(self, k + 1);
      pick.pop_back();
      if (stop) return true;
    }
    return false;
  };
  rec(rec, 0);
}

void for_each_subspace(const Subspace& ambient, std::size_t m, const std::function<bool(const Subspace&)>& visit) {
  const std::size_t k = ambient.dim();
  if (m > k) return;
  const std::uint32_t p = ambient.ctx().p();
  if (m == 0) {
    visit(Subspace::zero(ambient.field()));
    return;
  }
  std::vector<std::size_t> piv;
  bool stop = false;
  auto emit = [&]() {
    // Free slots: (row r, column c) with c > piv[r] and c not a pivot.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = piv[r] + 1; c < k; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
    const std::uint64_t count = ipow(p, slots.size());
    for (std::uint64_t idx = 0; idx < count && !stop; ++idx) {
      Rows mat(m, Vec(k, 0));
      for (std::size_t r = 0; r < m; ++r) mat[r][piv[r]] = 1;
      std::uint64_t t = idx;
      for (std::size_t s = slots.size(); s-- > 0;) {
        mat[slots[s].first][slots[s].second] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      std::vector<FqElement> vs;
      for (const auto& row : mat) vs.push_back(ambient.combination(row));
      if (!visit(Subspace::span(ambient.field(), vs))) stop = true;
    }
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (stop) return;
    if (piv.size() == m) {
      emit();
      return;
    }
    for (std::size_t c = start; c + (m - piv.size()) <= k && !stop; ++c) {
      piv.push_back(c);
      self(self, c + 1);
      piv.pop_back();
    }
  };
  rec(rec, 0);
}

FqElement random_element(const FieldCtx& ctx, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, ctx.p() - 1);
  FqElement x = ctx.zero();
  for (auto& c : x.coeffs) c = dist(rng);
  return x;
}

Subspace random_subspace_of(const Subspace& ambient, std::size_t m, Rng& rng) {
  if (m > ambient.dim()) throw InvalidInput("requested dimension exceeds the ambient space");
  std::uniform_int_distribution<std::uint32_t> dist(0, ambient.ctx().p() - 1);
  std::vector<FqElement> vs;
  Subspace cur = Subspace::zero(ambient.field());
  while (cur.dim() < m) {
    Vec coeffs(ambient.dim());
    for (auto& c : coeffs) c = dist(rng);
    FqElement x = ambient.combination(coeffs);
    if (cur.contains(x)) continue;
    vs.push_back(x);
    cur = Subspace::span(ambient.field(), vs);
  }
  return cur;
}

Subspace random_subspace(const Field& field, std::size_t dim, Rng& rng) {
  return random_subspace_of(Subspace::full(field), dim, rng);
}

BasisSeq random_basis(const Subspace& space, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, space.ctx().p() - 1);
  std::vector<FqElement> vs;
  Subspace cur = Subspace::zero(space.field());
  while (vs.size() < space.dim()) {
    Vec coeffs(space.dim());
    for (auto& c : coeffs) c = dist(rng);
    FqElement x = space.combination(coeffs);
    if (cur.contains(x)) continue;
    vs.push_back(x);
    cur = Subspace::span(space.field(), vs);
  }
  return BasisSeq{space.field(), std::move(vs)};
}

namespace {

// Shared driver for "every basis of S satisfies the criterion against T inside A".
MatchedReport every_basis_matchable(const Subspace& S, const Subspace& T, const Subspace& A, const BasisMode& mode) {
  MatchedReport report;
  const std::uint64_t ordered = ordered_basis_count(S.dim(), S.ctx().p());
  bool exhaustive = mode.kind == BasisMode::Kind::exhaustive ||
                    (mode.kind == BasisMode::Kind::automatic && ordered <= mode.budget);
  if (mode.kind == BasisMode::Kind::exhaustive && ordered > mode.budget)
    throw BudgetExceeded("ordered-basis count " + std::to_string(ordered) + " exceeds budget " +
                         std::to_string(mode.budget));
  if (exhaustive) {
    report.mode = "exhaustive";
    for_each_basis(S, [&](const std::vector<FqElement>& basis) {
      ++report.bases_checked;
      if (auto v = criterion_check(basis, T, A)) {
        report.matched = false;
        report.failing_basis = BasisSeq{S.field(), basis};
        report.violator = std::move(v);
        return false;
      }
      return true;
    });
  } else {
    report.mode = "sample";
    report.trials = mode.trials;
    report.seed = mode.seed;
    Rng rng(mode.seed);
    for (std::uint64_t t = 0; t < mode.trials; ++t) {
      BasisSeq basis = random_basis(S, rng);
      ++report.bases_checked;
      if (auto v = criterion_check(basis.vectors, T, A)) {
        report.matched = false;
        report.failing_basis = std::move(basis);
        report.violator = std::move(v);
        break;
      }
    }
  }
  return report;
}

}  // namespace

MatchedReport is_matched(const Subspace& A, const Subspace& B, const BasisMode& mode) {
  require_same_field(A, B);
  if (A.dim() != B.dim()) throw InvalidInput("dimension mismatch between A and B");
  if (A.dim() == 0) throw InvalidInput("A and B must be nonzero");
  return every_basis_matchable(A, B, A, mode);
}

bool strong_matching_exists(const Subspace& A, const Subspace& B) {
  require_same_field(A, B);
  if (A.is_zero() || B.is_zero()) throw InvalidInput("strong matching needs nonzero spaces");
  return intersect(product_span(A, B), A).is_zero();
}

PrimitiveReport primitive_check(const Subspace& B) {
  if (B.is_zero()) throw InvalidInput("primitivity of the zero space");
  PrimitiveReport report;
  for (auto& sf : subfield_lattice(B.field())) {
    if (sf.d == B.ctx().n()) continue;
    if (!intersect(sf.space, B).is_zero()) {
      report.primitive = false;
      report.offender = std::move(sf);
      break;
    }
  }
  return report;
}

bool a_matched_basis(std::span<const FqElement> a_tilde, const Subspace& b_tilde, const Subspace& A) {
  Subspace span = Subspace::span(A.field(), std::vector<FqElement>(a_tilde.begin(), a_tilde.end()));
  if (span.dim() != a_tilde.size()) throw InvalidInput("Ã basis vectors are dependent");
  if (!A.contains(span)) throw InvalidInput("Ã is not contained in A");
  return !criterion_check(a_tilde, b_tilde, A).has_value();
}

MatchedReport a_matched(const Subspace& a_tilde, const Subspace& b_tilde, const Subspace& A, const BasisMode& mode) {
  require_same_field(a_tilde, b_tilde);
  if (a_tilde.dim() != b_tilde.dim() || a_tilde.is_zero()) throw InvalidInput("Ã and B̃ need equal positive dimension");
  if (!A.contains(a_tilde)) throw InvalidInput("Ã is not contained in A");
  return every_basis_matchable(a_tilde, b_tilde, A, mode);
}

LinearLocalReport linear_locally_matched(const Subspace& A, const Subspace& B, const LocalSearchConfig& config) {
  require_same_field(A, B);
  if (A.dim() != B.dim() || A.is_zero()) throw InvalidInput("A and B need equal positive dimension");
  if (B.contains(B.ctx().one())) throw InvalidInput("1 must not belong to B");
  const std::uint32_t p = A.ctx().p();
  const unsigned n = A.ctx().n();

  LinearLocalReport report;
  for (auto& sf : subfield_lattice(A.field())) {
    if (sf.d == n) continue;
    Subspace hb = intersect(sf.space, B);
    if (hb.is_zero()) continue;
    Subspace module = A;
    for (const auto& h : sf.space.basis()) module = intersect(module, scale_space(h, A, true));
    if (module.is_zero()) continue;
    if (sf.d >= n) throw TheoremViolation("qualifying subfield equals L");

    LinearSubfieldReport entry{sf, hb, module, std::nullopt, "", 0};
    const std::size_t m = hb.dim();
    if (m <= A.dim()) {
      auto try_candidate = [&](const Subspace& cand) {
        ++entry.candidates_checked;
        BasisMode mode = config.basis_mode;
        mode.seed = config.basis_mode.seed ^ (entry.candidates_checked * 0x9E3779B97F4A7C15ull);
        if (a_matched(cand, hb, A, mode).matched) {
          entry.a_tilde = cand;
          return false;
        }
        return true;
      };
      if (gaussian_binomial(A.dim(), m, p) <= config.subspace_budget) {
        entry.search_mode = "exhaustive";
        for_each_subspace(A, m, try_candidate);
      } else {
        entry.search_mode = "sample";
        Rng rng(config.seed ^ (static_cast<std::uint64_t>(sf.d) << 32));
        for (std::uint64_t t = 0; t < config.subspace_trials; ++t)
          if (!try_candidate(random_subspace_of(A, m, rng))) break;
      }
    } else {
      entry.search_mode = "impossible";
    }
    if (!entry.a_tilde) report.locally_matched = false;
    report.qualifying.push_back(std::move(entry));
  }
  return report;
}

Theorem51Report evaluate_theorem51(const Subspace& A, const Subspace& B, const LocalSearchConfig& local,
                                   const BasisMode& mode) {
  Theorem51Report r;
  r.local = linear_locally_matched(A, B, local);
  r.matched = is_matched(A, B, mode);
  r.implication_holds = !r.local.locally_matched || r.matched.matched;
  return r;
}

Theorem51Report theorem51_check(const Subspace& A, const Subspace& B, const LocalSearchConfig& local,
                                const BasisMode& mode) {
  auto r = evaluate_theorem51(A, B, local, mode);
  if (!r.implication_holds)
    throw TheoremViolation("A=" + to_string(A) + " is locally matched to B=" + to_string(B) + " but not matched");
  return r;
}

}  // namespace matchlab
