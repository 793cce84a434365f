#include <algorithm>
#include <random>

#include "doctest.h"
#include "matchlab/error.hpp"
#include "matchlab/linear_matching.hpp"

using namespace matchlab;

namespace {

Subspace span_of(const Field& f, std::vector<FqElement> v) { return Subspace::span(f, v); }

// Literal definition: some ordered basis (b_i) of B such that a_i b ∈ A forces
// b into the span of the other b_j. Every ordered tuple of nonzero vectors is tried.
bool literal_matchable(const std::vector<FqElement>& a, const Subspace& B, const Subspace& A) {
  const auto& f = *B.field();
  std::vector<FqElement> nonzero;
  for (const auto& x : B.elements())
    if (!f.is_zero(x)) nonzero.push_back(x);
  const std::size_t n = a.size();
  std::vector<std::size_t> idx(n, 0);
  auto bel = B.elements();
  for (;;) {
    std::vector<FqElement> b;
    for (auto i : idx) b.push_back(nonzero[i]);
    if (Subspace::span(B.field(), b).dim() == n) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        std::vector<FqElement> others;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) others.push_back(b[j]);
        auto hyper = Subspace::span(B.field(), others);
        for (const auto& y : bel)
          if (A.contains(f.mul(a[i], y)) && !hyper.contains(y)) {
            ok = false;
            break;
          }
      }
      if (ok) return true;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == nonzero.size()) idx[k++] = 0;
    if (k == n) return false;
  }
}

std::uint64_t gauss_rec(std::size_t k, std::size_t m, std::uint64_t p) {
  if (m == 0 || m == k) return 1;
  if (m > k) return 0;
  std::uint64_t pm = 1;
  for (std::size_t i = 0; i < m; ++i) pm *= p;
  return gauss_rec(k - 1, m - 1, p) + pm * gauss_rec(k - 1, m, p);
}

}  // namespace

TEST_CASE("criterion on F_4") {
  auto f4 = FieldCtx::make(2, 2);
  auto one = span_of(f4, {f4->one()}), w = span_of(f4, {f4->generator()});
  auto a = BasisSeq::make(f4, {f4->one()});
  CHECK(!basis_matchable(a, w, one));
  auto v = basis_matchable(a, one, one);
  REQUIRE(v);
  CHECK(v->J == std::vector<std::size_t>{0});
  CHECK(v->witness == one);
  CHECK(v->deficit == 1);

  auto m = find_matched_basis(a, w, one);
  REQUIRE(std::holds_alternative<BasisMatching>(m));
  CHECK(std::get<BasisMatching>(m).b_basis.vectors == std::vector<FqElement>{f4->generator()});
  CHECK(std::holds_alternative<CriterionViolator>(find_matched_basis(a, one, one)));

  CHECK(is_matched(one, w, BasisMode::exhaustive()).matched);
  CHECK(is_matched(one, w, BasisMode::exhaustive()).bases_checked == 1);
  CHECK(!is_matched(one, one, BasisMode::exhaustive()).matched);
  CHECK_THROWS_AS(BasisSeq::make(f4, {f4->one(), f4->one()}), InvalidInput);
  CHECK_THROWS_AS(basis_matchable(a, Subspace::full(f4), one), InvalidInput);
}

TEST_CASE("criterion agrees with the literal definition") {
  std::mt19937_64 rng(77);
  std::size_t ok = 0, bad = 0;
  for (auto [p, n, mmax] : std::vector<std::tuple<std::uint32_t, unsigned, std::size_t>>{
           {2, 2, 2}, {2, 3, 3}, {2, 4, 3}, {3, 2, 2}, {3, 3, 2}, {2, 6, 2}}) {
    auto f = FieldCtx::make(p, n);
    for (int t = 0; t < 120; ++t) {
      std::size_t m = 1 + rng() % mmax;
      auto A = random_subspace(f, m, rng), B = random_subspace(f, m, rng);
      auto a = random_basis(A, rng);
      bool crit = !basis_matchable(a, B, A);
      CHECK(crit == literal_matchable(a.vectors, B, A));
      auto res = find_matched_basis(a, B, A);
      CHECK(std::holds_alternative<BasisMatching>(res) == crit);
      if (crit) {
        ++ok;
        const auto& bm = std::get<BasisMatching>(res);
        CHECK(check_matched_bases(a.vectors, bm.b_basis.vectors, A).ok);
        CHECK(bm.b_basis.span() == B);
        for (std::size_t i = 0; i < m; ++i) CHECK(!A.contains(f->mul(a.vectors[i], bm.b_basis.vectors[i])));
      } else {
        ++bad;
        const auto& v = std::get<CriterionViolator>(res);
        // Witness recomputed from J.
        Subspace w = B;
        for (auto i : v.J) w = intersect(w, scale_space(a.vectors[i], A, true));
        CHECK(w == v.witness);
        CHECK(static_cast<std::int64_t>(w.dim()) - static_cast<std::int64_t>(m - v.J.size()) == v.deficit);
        CHECK(v.deficit > 0);
      }
      CHECK(exhaustive_matched_basis(a.vectors, B, A).has_value() == crit);
    }
  }
  CHECK(ok > 50);
  CHECK(bad > 50);
}

TEST_CASE("criterion monotone along subsets") {
  std::mt19937_64 rng(78);
  auto f = FieldCtx::make(2, 5);
  for (int t = 0; t < 100; ++t) {
    std::size_t m = 2 + rng() % 3;
    auto A = random_subspace(f, m, rng), B = random_subspace(f, m, rng);
    auto a = random_basis(A, rng);
    std::vector<Subspace> v;
    for (const auto& x : a.vectors) v.push_back(intersect(scale_space(x, A, true), B));
    for (std::uint32_t big = 1; big < (1u << m); ++big)
      for (std::uint32_t small = big; small; small = (small - 1) & big) {
        Subspace ws = B, wb = B;
        for (std::size_t i = 0; i < m; ++i) {
          if (small >> i & 1) ws = intersect(ws, v[i]);
          if (big >> i & 1) wb = intersect(wb, v[i]);
        }
        CHECK(ws.dim() >= wb.dim());
        CHECK(ws.contains(wb));
      }
  }
}

TEST_CASE("basis and subspace counts") {
  CHECK(ordered_basis_count(2, 2) == 6);
  CHECK(ordered_basis_count(3, 3) == 26 * 24 * 18);
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t k = 1; k <= 5; ++k)
      for (std::size_t m = 0; m <= k; ++m) {
        CHECK(gaussian_binomial(k, m, p) == gauss_rec(k, m, p));
        if (p == 3 && k == 5) continue;
        auto f = FieldCtx::make(p, static_cast<unsigned>(k));
        std::vector<Subspace> seen;
        for_each_subspace(Subspace::full(f), m, [&](const Subspace& s) {
          CHECK(s.dim() == m);
          seen.push_back(s);
          return true;
        });
        CHECK(seen.size() == gauss_rec(k, m, p));
        for (std::size_t i = 1; i < seen.size(); ++i) CHECK(!(seen[i] == seen[i - 1]));
      }
  // Unordered bases up to scalars: ordered count / (m! (p-1)^m).
  auto f = FieldCtx::make(3, 3);
  std::size_t bases = 0;
  for_each_basis(Subspace::full(f), [&](const std::vector<FqElement>& b) {
    CHECK(Subspace::span(f, b).dim() == 3);
    ++bases;
    return true;
  });
  CHECK(bases == ordered_basis_count(3, 3) / (6 * 8));
  CHECK(projective_points(2, 3).size() == 4);
}

TEST_CASE("strong matching and primitivity") {
  auto f16 = FieldCtx::make(2, 4);
  auto t = f16->generator();
  auto lat = subfield_lattice(f16);
  auto F4 = lat[1].space;
  CHECK(strong_matching_exists(span_of(f16, {t}), span_of(f16, {t})));
  CHECK(!strong_matching_exists(F4, F4));
  auto one = span_of(f16, {f16->one()});
  CHECK(strong_matching_exists(one, span_of(f16, {t})));
  CHECK(!strong_matching_exists(one, one));

  auto w = F4.basis()[1];  // in F_4 but not in F_2
  auto pr = primitive_check(span_of(f16, {w}));
  CHECK(!pr.primitive);
  CHECK(pr.offender->d == 2);
  CHECK(primitive_check(span_of(f16, {t})).primitive);
  auto p1 = primitive_check(one);
  CHECK(!p1.primitive);
  CHECK(p1.offender->d == 1);

  // Primitive means every nonzero element generates the whole field.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto B = random_subspace(f16, 1 + rng() % 2, rng);
    bool all_generate = true;
    for (const auto& x : B.elements()) {
      if (f16->is_zero(x)) continue;
      if (f16->pow(x, 4) == x) all_generate = false;  // x lies in F_4
    }
    CHECK(primitive_check(B).primitive == all_generate);
  }
}

TEST_CASE("primitive targets are matched in F_16 and F_64") {
  auto f16 = FieldCtx::make(2, 4);
  std::vector<Subspace> spaces;
  for_each_subspace(Subspace::full(f16), 2, [&](const Subspace& s) {
    spaces.push_back(s);
    return true;
  });
  for (const auto& B : spaces) {
    if (!primitive_check(B).primitive) continue;
    for (const auto& A : spaces) CHECK(is_matched(A, B, BasisMode::exhaustive()).matched);
  }
  std::mt19937_64 rng(6);
  auto f64 = FieldCtx::make(2, 6);
  int tested = 0;
  while (tested < 100) {
    auto B = random_subspace(f64, 1 + rng() % 3, rng);
    if (!primitive_check(B).primitive) continue;
    ++tested;
    auto A = random_subspace(f64, B.dim(), rng);
    CHECK(is_matched(A, B, BasisMode::sample(20, rng())).matched);
  }
}

TEST_CASE("matched subspaces in sample mode are reproducible") {
  auto f = FieldCtx::make(2, 6);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto A = random_subspace(f, 3, rng), B = random_subspace(f, 3, rng);
    auto r1 = is_matched(A, B, BasisMode::sample(30, 99));
    auto r2 = is_matched(A, B, BasisMode::sample(30, 99));
    CHECK(r1.matched == r2.matched);
    CHECK(r1.mode == "sample");
    CHECK(r1.seed == 99);
    if (!r1.matched) CHECK(r1.failing_basis->vectors == r2.failing_basis->vectors);
  }
  auto big = FieldCtx::make(2, 8);
  auto A = random_subspace(big, 6, rng), B = random_subspace(big, 6, rng);
  CHECK_THROWS_AS(is_matched(A, B, BasisMode::exhaustive(1000)), BudgetExceeded);
  CHECK(is_matched(A, B, BasisMode{BasisMode::Kind::automatic, 5, 1, 1000}).mode == "sample");
}

TEST_CASE("A-matched subspaces") {
  auto f16 = FieldCtx::make(2, 4);
  auto t = f16->generator();
  auto F4 = subfield_lattice(f16)[1].space;
  auto one = span_of(f16, {f16->one()});
  // m = 1: ab outside A.
  auto A = span_of(f16, {f16->one(), t});
  CHECK(a_matched_basis(std::vector<FqElement>{f16->one()}, span_of(f16, {f16->mul(t, t)}), A));
  CHECK(!a_matched_basis(std::vector<FqElement>{f16->one()}, span_of(f16, {t}), A));
  CHECK(!a_matched(one, one, F4, BasisMode::exhaustive()).matched);
}

TEST_CASE("local matching over subfields") {
  auto f16 = FieldCtx::make(2, 4);
  auto lat = subfield_lattice(f16);
  auto F4 = lat[1].space;
  auto w = F4.basis()[1];
  auto t = f16->generator();
  auto t3 = f16->pow(t, 3);

  // F_4 meets B in a line inside A = F_4: no line of A can be A-matched to it.
  auto B = span_of(f16, {w, t});
  REQUIRE(!B.contains(f16->one()));
  auto r = linear_locally_matched(F4, B);
  CHECK(!r.locally_matched);
  REQUIRE(r.qualifying.size() == 1);
  CHECK(r.qualifying[0].H.d == 2);
  CHECK(!r.qualifying[0].a_tilde);
  CHECK(r.qualifying[0].search_mode == "exhaustive");

  // Primitive B: nothing qualifies.
  auto prim = span_of(f16, {t, t3});
  REQUIRE(primitive_check(prim).primitive);
  auto v = linear_locally_matched(F4, prim);
  CHECK(v.locally_matched);
  CHECK(v.qualifying.empty());

  // Prime degree: only F_p is proper, and 1 ∉ B keeps it from qualifying.
  auto f32 = FieldCtx::make(2, 5);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    auto A = random_subspace(f32, 2, rng), Bp = random_subspace(f32, 2, rng);
    if (Bp.contains(f32->one())) continue;
    CHECK(linear_locally_matched(A, Bp).qualifying.empty());
  }
  CHECK_THROWS_AS(linear_locally_matched(F4, span_of(f16, {f16->one(), t})), InvalidInput);

  // Qualifying subfields are always proper; an A-matched Ã has the dimension of H ∩ B.
  auto f64 = FieldCtx::make(2, 6);
  for (int i = 0; i < 100; ++i) {
    auto A = random_subspace(f64, 2 + rng() % 2, rng);
    auto Bq = random_subspace(f64, A.dim(), rng);
    if (Bq.contains(f64->one())) continue;
    auto rep = linear_locally_matched(A, Bq);
    for (const auto& q : rep.qualifying) {
      CHECK(q.H.d < 6);
      CHECK(!q.h_cap_b.is_zero());
      CHECK(!q.module.is_zero());
      if (q.a_tilde) {
        CHECK(q.a_tilde->dim() == q.h_cap_b.dim());
        CHECK(A.contains(*q.a_tilde));
        CHECK(a_matched(*q.a_tilde, q.h_cap_b, A, BasisMode::exhaustive()).matched);
      }
    }
  }
}

TEST_CASE("locally matched implies matched in F_16 and F_9") {
  std::mt19937_64 rng(51);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 4}, {3, 2}}) {
    auto f = FieldCtx::make(p, n);
    for (int i = 0; i < 200; ++i) {
      auto A = random_subspace(f, 1 + rng() % (n - 1), rng);
      auto B = random_subspace(f, A.dim(), rng);
      if (B.contains(f->one())) continue;
      auto rep = theorem51_check(A, B, {}, BasisMode::exhaustive());
      CHECK(rep.implication_holds);
      if (rep.local.locally_matched) CHECK(rep.matched.matched);
    }
  }
}

TEST_CASE("strong pairs are matched") {
  std::mt19937_64 rng(52);
  auto f = FieldCtx::make(2, 6);
  int found = 0;
  for (int i = 0; i < 2000 && found < 50; ++i) {
    auto A = random_subspace(f, 2, rng), B = random_subspace(f, 2, rng);
    if (!strong_matching_exists(A, B)) continue;
    ++found;
    CHECK(is_matched(A, B, BasisMode::exhaustive()).matched);
  }
  CHECK(found == 50);
}
