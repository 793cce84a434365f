#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "matchlab/error.hpp"
#include "matchlab/ffext.hpp"
#include "matchlab/linear_matching.hpp"

using namespace matchlab;

namespace {

unsigned bits(const FqElement& x) {
  unsigned v = 0;
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) v |= x.coeffs[i] << i;
  return v;
}

// Carry-less product reduced modulo a binary polynomial given as a bit mask.
unsigned gf2_mul(unsigned a, unsigned b, unsigned modulus, unsigned n) {
  unsigned r = 0;
  for (unsigned i = 0; i < n; ++i)
    if (b >> i & 1) r ^= a << i;
  for (int d = 2 * static_cast<int>(n) - 2; d >= static_cast<int>(n); --d)
    if (r >> d & 1) r ^= modulus << (d - n);
  return r;
}

bool gf2_irreducible(unsigned f, unsigned deg) {
  for (unsigned g = 2; g < (1u << (deg / 2 + 1)); ++g) {
    unsigned dg = 31 - __builtin_clz(g);
    if (dg == 0 || dg > deg / 2) continue;
    unsigned r = f;
    for (int d = static_cast<int>(deg); d >= static_cast<int>(dg); --d)
      if (r >> d & 1) r ^= g << (d - dg);
    if (r == 0) return false;
  }
  return true;
}

Subspace span_of(const Field& f, std::vector<FqElement> v) { return Subspace::span(f, v); }

}  // namespace

TEST_CASE("modulus selection") {
  CHECK(FieldCtx::make(2, 2)->modulus() == poly::Poly{1, 1, 1});
  // First irreducible quartic over F_2 when reading the coefficients as a binary number.
  unsigned first = 0;
  for (unsigned f = 16; f < 32 && !first; ++f)
    if (gf2_irreducible(f, 4)) first = f;
  CHECK(first == 0b10011);
  auto f16 = FieldCtx::make(2, 4);
  CHECK(f16->modulus() == poly::Poly{1, 1, 0, 0, 1});
  auto f3 = FieldCtx::make(3, 1);
  CHECK(f3->modulus().size() == 2);
  CHECK(f3->modulus()[1] == 1);
  // Degree-3 count over F_2: x^3+x+1 and x^3+x^2+1.
  std::size_t cubics = 0;
  for (unsigned f = 8; f < 16; ++f) cubics += gf2_irreducible(f, 3);
  CHECK(cubics == 2);
  for (unsigned f = 8; f < 16; ++f) {
    poly::Poly p;
    for (unsigned i = 0; i < 4; ++i) p.push_back(f >> i & 1);
    CHECK(poly::is_irreducible(p, 2) == gf2_irreducible(f, 3));
  }
  CHECK_THROWS_AS(FieldCtx::make(4, 2), InvalidInput);
  CHECK_THROWS_AS(FieldCtx::make(2, 2, poly::Poly{1, 0, 1}), InvalidInput);
  CHECK_THROWS_AS(FieldCtx::make(2, 0), InvalidInput);
  CHECK(FieldCtx::make(2, 4, poly::Poly{1, 0, 0, 1, 1})->modulus() == poly::Poly{1, 0, 0, 1, 1});
}

TEST_CASE("field arithmetic") {
  auto f4 = FieldCtx::make(2, 2);
  auto w = f4->generator();
  CHECK(fq_arith(*f4, FqOp::mul, w, &w) == f4->add(w, f4->one()));
  CHECK(fq_arith(*f4, FqOp::inv, w) == f4->add(w, f4->one()));
  CHECK(f4->mul(f4->one(), w) == w);
  CHECK_THROWS_AS(f4->inv(f4->zero()), InvalidInput);

  auto f16 = FieldCtx::make(2, 4);
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b)
      CHECK(bits(f16->mul(f16->from_index(a), f16->from_index(b))) == gf2_mul(a, b, 0b10011, 4));

  std::mt19937_64 rng(4);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{3, 2}, {5, 3}, {2, 6}, {7, 2}, {3, 4}}) {
    auto f = FieldCtx::make(p, n);
    for (int t = 0; t < 100; ++t) {
      auto x = random_element(*f, rng), y = random_element(*f, rng), z = random_element(*f, rng);
      CHECK(f->mul(x, f->add(y, z)) == f->add(f->mul(x, y), f->mul(x, z)));
      CHECK(f->mul(x, y) == f->mul(y, x));
      CHECK(f->mul(f->mul(x, y), z) == f->mul(x, f->mul(y, z)));
      CHECK(f->pow(x, f->size()) == x);
      if (!f->is_zero(x)) CHECK(f->mul(x, f->inv(x)) == f->one());
      CHECK(fq_arith(*f, FqOp::pow, x, nullptr, 5) == f->mul(f->pow(x, 2), f->pow(x, 3)));
    }
  }
}

TEST_CASE("subfield lattice") {
  auto f16 = FieldCtx::make(2, 4);
  auto lat = subfield_lattice(f16);
  REQUIRE(lat.size() == 3);
  CHECK(lat[0].d == 1);
  CHECK(lat[1].d == 2);
  CHECK(lat[2].d == 4);
  auto f4 = lat[1].space;
  CHECK(f4.cardinality() == 4);
  auto el = f4.elements();
  for (const auto& x : el)
    for (const auto& y : el) CHECK(f4.contains(f16->mul(x, y)));
  // The elements fixed by squaring twice, found directly.
  std::set<FqElement> fixed;
  for (unsigned i = 0; i < 16; ++i) {
    auto x = f16->from_index(i);
    if (f16->pow(x, 4) == x) fixed.insert(x);
  }
  CHECK(std::set<FqElement>(el.begin(), el.end()) == fixed);

  auto f8 = subfield_lattice(FieldCtx::make(2, 3));
  REQUIRE(f8.size() == 2);
  CHECK(f8[0].d == 1);
  CHECK(f8[1].d == 3);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 6}, {3, 4}, {2, 12}, {5, 2}})
    for (const auto& s : subfield_lattice(FieldCtx::make(p, n))) {
      CHECK(n % s.d == 0);
      CHECK(s.space.dim() == s.d);
      CHECK(is_subfield(s.space));
    }
}

TEST_CASE("subspace canonical form") {
  auto f4 = FieldCtx::make(2, 2);
  auto w = f4->generator();
  CHECK(Subspace::span(f4, {}).dim() == 0);
  CHECK(span_of(f4, {f4->one(), w, f4->add(f4->one(), w)}).dim() == 2);
  CHECK(span_of(f4, {w, w}).dim() == 1);

  std::mt19937_64 rng(9);
  auto f = FieldCtx::make(3, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<FqElement> v;
    for (int k = 0; k < 3; ++k) v.push_back(random_element(*f, rng));
    auto s = Subspace::span(f, v);
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(Subspace::span(f, v) == s);
    CHECK(Subspace::span(f, s.basis()) == s);
    CHECK(Subspace::from_canonical_rows(f, s.rows()).has_value());
    for (const auto& x : v) CHECK(s.contains(x));
  }
  auto rows = linalg::Rows{{0, 0, 0, 1}, {0, 1, 0, 0}};
  CHECK(!Subspace::from_canonical_rows(FieldCtx::make(2, 4), rows));
  CHECK(!Subspace::from_canonical_rows(FieldCtx::make(2, 4), linalg::Rows{{1, 1, 0, 0}, {0, 1, 0, 0}}));
}

TEST_CASE("meet and join") {
  auto f4 = FieldCtx::make(2, 2);
  auto one = span_of(f4, {f4->one()}), w = span_of(f4, {f4->generator()});
  auto mj = meet_join(one, w);
  CHECK(mj.meet.is_zero());
  CHECK(mj.join == Subspace::full(f4));
  CHECK(intersect(one, one) == one);
  CHECK(join(one, one) == one);
  auto z = Subspace::zero(f4);
  CHECK(join(z, w) == w);
  CHECK(intersect(z, w).is_zero());

  std::mt19937_64 rng(12);
  auto f = FieldCtx::make(2, 6);
  for (int t = 0; t < 300; ++t) {
    auto u = random_subspace(f, rng() % 7, rng), v = random_subspace(f, rng() % 7, rng);
    auto m = meet_join(u, v);
    CHECK(u.dim() + v.dim() == m.meet.dim() + m.join.dim());
    std::size_t common = 0;
    for (const auto& x : u.elements()) common += v.contains(x);
    CHECK(common == m.meet.cardinality());
  }
  CHECK_THROWS_AS(intersect(one, span_of(FieldCtx::make(2, 4), {})), InvalidInput);
}

TEST_CASE("scaling and products") {
  auto f4 = FieldCtx::make(2, 2);
  auto w = f4->generator();
  auto one = span_of(f4, {f4->one()});
  CHECK(scale_space(w, one) == span_of(f4, {w}));
  CHECK(scale_space(f4->one(), Subspace::full(f4)) == Subspace::full(f4));
  CHECK_THROWS_AS(scale_space(f4->zero(), one), InvalidInput);

  auto f16 = FieldCtx::make(2, 4);
  auto t = f16->generator();
  CHECK(product_span(span_of(f16, {t}), span_of(f16, {t})) == span_of(f16, {f16->mul(t, t)}));
  auto F4 = subfield_lattice(f16)[1].space;
  CHECK(product_span(F4, F4) == F4);

  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    auto W = random_subspace(f16, 1 + rng() % 3, rng);
    auto a = random_element(*f16, rng);
    if (f16->is_zero(a)) continue;
    CHECK(scale_space(a, W).dim() == W.dim());
    CHECK(scale_space(a, scale_space(a, W), true) == W);
    CHECK(product_span(span_of(f16, {f16->one()}), W) == W);
    // Span of all elementwise products.
    auto B = random_subspace(f16, 1 + rng() % 2, rng);
    std::vector<FqElement> prods;
    for (const auto& x : W.elements())
      for (const auto& y : B.elements()) prods.push_back(f16->mul(x, y));
    CHECK(product_span(W, B) == Subspace::span(f16, prods));
  }
}

TEST_CASE("stabilizer subfield") {
  auto f16 = FieldCtx::make(2, 4);
  auto lat = subfield_lattice(f16);
  CHECK(stabilizer_subfield(lat[1].space).d == 2);
  CHECK(stabilizer_subfield(span_of(f16, {f16->one()})).d == 1);
  CHECK(stabilizer_subfield(Subspace::full(f16)).d == 4);
  CHECK_THROWS_AS(stabilizer_subfield(Subspace::zero(f16)), InvalidInput);

  std::mt19937_64 rng(31);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 4}, {2, 6}, {3, 4}}) {
    auto f = FieldCtx::make(p, n);
    auto lattice = subfield_lattice(f);
    for (int t = 0; t < 60; ++t) {
      auto W = random_subspace(f, 1 + rng() % n, rng);
      if (t % 4 == 0) W = product_span(lattice[rng() % lattice.size()].space, W);
      auto s = stabilizer_subfield(W);
      CHECK(std::any_of(lattice.begin(), lattice.end(), [&](const SubfieldDesc& l) { return l.space == s.space; }));
      // Direct: every x with xW ⊆ W.
      std::vector<FqElement> stab;
      for (std::uint64_t i = 0; i < f->size(); ++i) {
        auto x = f->from_index(i);
        bool ok = true;
        for (const auto& w : W.basis()) ok = ok && W.contains(f->mul(x, w));
        if (ok) stab.push_back(x);
      }
      CHECK(stab.size() == s.space.cardinality());
      for (const auto& x : stab) CHECK(s.space.contains(x));
    }
  }
}

TEST_CASE("linear Kneser") {
  auto f16 = FieldCtx::make(2, 4);
  auto F4 = subfield_lattice(f16)[1].space;
  auto k = linear_kneser_verify(F4, F4);
  CHECK(k.AB.dim() == 2);
  CHECK(k.H.d == 2);
  CHECK(k.slack == 0);
  std::mt19937_64 rng(41);
  auto one = span_of(f16, {f16->one()});
  for (int t = 0; t < 50; ++t) {
    auto B = random_subspace(f16, 1 + rng() % 4, rng);
    auto c = linear_kneser_verify(one, B);
    CHECK(c.slack == static_cast<std::int64_t>(c.H.d) - 1);
  }
  auto f32 = FieldCtx::make(2, 5);
  for (int t = 0; t < 500; ++t) {
    auto A = random_subspace(f32, 2, rng), B = random_subspace(f32, 2, rng);
    CHECK(linear_kneser_verify(A, B).slack >= 0);
  }
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 6}, {3, 4}, {2, 8}}) {
    auto f = FieldCtx::make(p, n);
    for (int t = 0; t < 200; ++t) {
      auto A = random_subspace(f, 1 + rng() % (n / 2), rng), B = random_subspace(f, 1 + rng() % (n / 2), rng);
      auto c = linear_kneser_verify(A, B);
      CHECK(c.slack >= 0);
      CHECK(c.slack == static_cast<std::int64_t>(c.AB.dim()) - static_cast<std::int64_t>(A.dim()) -
                           static_cast<std::int64_t>(B.dim()) + static_cast<std::int64_t>(c.H.d));
    }
  }
  CHECK_THROWS_AS(linear_kneser_verify(Subspace::zero(f16), F4), InvalidInput);
}
