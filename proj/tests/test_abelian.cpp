#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "matchlab/abelian.hpp"
#include "matchlab/abelian_matching.hpp"
#include "matchlab/error.hpp"

using namespace matchlab;

namespace {

GroupSpec cyc(std::int64_t n) { return GroupSpec::cyclic(n); }
GroupSpec prod(std::vector<std::int64_t> t) { return GroupSpec::make(0, t); }

GroupSubset zset(const GroupSpec& g, std::vector<std::int64_t> xs) {
  std::vector<GroupElement> e;
  for (auto x : xs) e.push_back(g.torsion_element({x}));
  return GroupSubset(g, e);
}

GroupSubset zfree(std::vector<std::int64_t> xs) {
  GroupSpec z = GroupSpec::make(1, std::vector<std::int64_t>{});
  std::vector<GroupElement> e;
  for (auto x : xs) e.push_back(z.element({x}, {}));
  return GroupSubset(z, e);
}

GroupSubset random_subset(const GroupSpec& g, std::size_t k, std::mt19937_64& rng) {
  auto all = g.elements();
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return GroupSubset(g, all);
}

// Stabilizer by testing every group element.
std::set<GroupElement> brute_stabilizer(const GroupSubset& c) {
  std::set<GroupElement> out;
  for (const auto& g : c.group().elements()) {
    bool ok = true;
    for (const auto& x : c)
      if (!c.contains(c.group().add(x, g))) ok = false;
    if (ok) out.insert(g);
  }
  return out;
}

// Subgroups by scanning every subset for closure (small groups only).
std::size_t brute_subgroup_count(const GroupSpec& g) {
  auto el = g.elements();
  std::size_t n = el.size(), count = 0;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    if (!(mask & 1)) continue;  // element 0 comes first in canonical order
    std::set<GroupElement> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.insert(el[i]);
    bool closed = true;
    for (const auto& x : s)
      for (const auto& y : s)
        if (!s.count(g.sub(x, y))) closed = false;
    if (closed) ++count;
  }
  return count;
}

std::size_t divisor_count(std::int64_t n) {
  std::size_t c = 0;
  for (std::int64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

}  // namespace

TEST_CASE("invariant-factor normalization") {
  CHECK(prod({2, 3}) == cyc(6));
  CHECK(prod({2, 4}).torsion() == std::vector<std::int64_t>{2, 4});
  CHECK(prod({4, 6}).torsion() == std::vector<std::int64_t>{2, 12});
  CHECK(prod({3, 2, 2}).torsion() == std::vector<std::int64_t>{2, 6});
  CHECK(cyc(8).torsion() == std::vector<std::int64_t>{8});
  CHECK_THROWS_AS(prod({1}), InvalidInput);
  CHECK_THROWS_AS(GroupSpec::make(-1, std::vector<std::int64_t>{}), InvalidInput);
  auto z = GroupSpec::make(1, std::vector<std::int64_t>{});
  CHECK(!z.is_finite());
  CHECK(!z.order());

  // Divisibility chain and preserved order on random products.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::int64_t> orders;
    std::int64_t total = 1;
    for (int k = 0; k < 3; ++k) {
      orders.push_back(2 + rng() % 10);
      total *= orders.back();
    }
    auto g = prod(orders);
    CHECK(*g.order() == static_cast<std::uint64_t>(total));
    for (std::size_t i = 0; i + 1 < g.torsion().size(); ++i) CHECK(g.torsion()[i + 1] % g.torsion()[i] == 0);
    for (auto n : g.torsion()) CHECK(n >= 2);
  }
}

TEST_CASE("element arithmetic") {
  auto g = cyc(8);
  auto x = [&](std::int64_t v) { return g.torsion_element({v}); };
  auto two = x(2), six = x(6), three = x(3);
  CHECK(element_op(g, ElementOp::add, &two, &six) == x(0));
  CHECK(element_op(g, ElementOp::neg, &three) == x(5));
  CHECK(element_op(g, ElementOp::zero) == x(0));
  auto z = GroupSpec::make(1, std::vector<std::int64_t>{});
  auto one = z.element({1}, {}), minus = z.element({-1}, {});
  CHECK(z.add(one, minus) == z.zero());
  CHECK(*g.element_order(x(6)) == 4);
  CHECK(!z.element_order(one));
  CHECK_THROWS_AS(g.require(GroupElement{{}, {8}}), InvalidInput);
}

TEST_CASE("abelian groups of each order") {
  // Product over primes of partition counts of the exponents.
  const std::map<std::uint64_t, std::size_t> expected = {{1, 1},  {2, 1},  {4, 2},  {8, 3},  {12, 2},
                                                         {16, 5}, {36, 4}, {72, 6}, {30, 1}, {32, 7}};
  for (auto [n, c] : expected) {
    auto gs = abelian_groups_of_order(n);
    CHECK(gs.size() == c);
    for (const auto& g : gs) CHECK(*g.order() == n);
  }
}

TEST_CASE("sumset") {
  auto g = cyc(8);
  auto B = zset(g, {1, 3, 4});
  CHECK(sumset(zset(g, {0}), B) == B);
  CHECK(sumset(zset(g, {0, 2}), zset(g, {1, 3})) == zset(g, {1, 3, 5}));
  CHECK(sumset(zfree({0, 1}), zfree({0, 1})) == zfree({0, 1, 2}));
  CHECK_THROWS_AS(sumset(GroupSubset(g, {}), B), InvalidInput);
  CHECK_THROWS_AS(sumset(zset(cyc(4), {0}), B), InvalidInput);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    auto gs = abelian_groups_of_order(2 + rng() % 23);
    const auto& G = gs[rng() % gs.size()];
    std::size_t n = *G.order();
    auto A = random_subset(G, 1 + rng() % n, rng);
    auto Bs = random_subset(G, 1 + rng() % n, rng);
    auto C = random_subset(G, 1 + rng() % n, rng);
    CHECK(sumset(A, Bs) == sumset(Bs, A));
    CHECK(sumset(sumset(A, Bs), C) == sumset(A, sumset(Bs, C)));
    std::set<GroupElement> direct;
    for (const auto& a : A)
      for (const auto& b : Bs) direct.insert(G.add(a, b));
    CHECK(sumset(A, Bs).elements() == std::vector<GroupElement>(direct.begin(), direct.end()));
  }
}

TEST_CASE("stabilizer") {
  auto z4 = cyc(4);
  CHECK(stabilizer(zset(z4, {0, 1, 2, 3})).order() == 4);
  CHECK(stabilizer(zset(z4, {1, 3})).elements() == zset(z4, {0, 2}));
  CHECK(stabilizer(zset(cyc(8), {5})).is_trivial());
  CHECK(stabilizer(zfree({0, 3, 7})).is_trivial());
  CHECK_THROWS_AS(stabilizer(GroupSubset(z4, {})), InvalidInput);

  // Exact and maximal: equals the brute-force stabilizer, and no subgroup beyond it fixes C.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto gs = abelian_groups_of_order(2 + rng() % 15);
    const auto& G = gs[rng() % gs.size()];
    auto C = random_subset(G, 1 + rng() % *G.order(), rng);
    auto H = stabilizer(C);
    auto brute = brute_stabilizer(C);
    CHECK(std::set<GroupElement>(H.elements().begin(), H.elements().end()) == brute);
    CHECK(sumset(C, H.elements()) == C);
    for (const auto& K : subgroups(G))
      if (sumset(C, K.elements()) == C) CHECK(K.elements().is_subset_of(H.elements()));
  }
}

TEST_CASE("subgroup enumeration") {
  auto z8 = subgroups(cyc(8));
  REQUIRE(z8.size() == 4);
  CHECK(z8[0].order() == 1);
  CHECK(z8[1].elements() == zset(cyc(8), {0, 4}));
  CHECK(z8[2].elements() == zset(cyc(8), {0, 2, 4, 6}));
  CHECK(z8[3].order() == 8);
  CHECK(subgroups(prod({2, 2})).size() == 5);
  auto z = GroupSpec::make(1, std::vector<std::int64_t>{});
  CHECK(subgroups(z, 10).size() == 1);
  CHECK_THROWS_AS(subgroups(z), InvalidInput);

  for (std::int64_t n = 1; n <= 40; ++n)
    if (n > 1) CHECK(subgroups(cyc(n)).size() == divisor_count(n));
  for (std::uint64_t order = 2; order <= 12; ++order)
    for (const auto& G : abelian_groups_of_order(order)) {
      CAPTURE(G.to_string());
      auto subs = subgroups(G);
      CHECK(subs.size() == brute_subgroup_count(G));
      for (const auto& H : subs) {
        CHECK(is_subgroup(H.elements()));
        CHECK(Subgroup::generated_by(G, H.generators()) == H);
      }
    }
  // Torsion subgroups of Z x Z/6 bounded by order.
  auto mixed = GroupSpec::make(1, std::vector<std::int64_t>{6});
  CHECK(subgroups(mixed, 6).size() == 4);
}

TEST_CASE("smallest subgroup order") {
  CHECK(*smallest_subgroup_order(cyc(8)) == 2);
  CHECK(*smallest_subgroup_order(cyc(15)) == 3);
  CHECK(*smallest_subgroup_order(prod({5, 35})) == 5);
  CHECK(!smallest_subgroup_order(GroupSpec::make(1, std::vector<std::int64_t>{})));
  CHECK(*smallest_subgroup_order(GroupSpec::make(2, std::vector<std::int64_t>{9})) == 3);
}

TEST_CASE("Kneser inequality on random pairs") {
  CHECK(kneser_verify(zfree({0, 1}), zfree({0, 1})).slack == 0);
  auto k = kneser_verify(zset(cyc(4), {0, 2}), zset(cyc(4), {0, 2}));
  CHECK(k.C == zset(cyc(4), {0, 2}));
  CHECK(k.H.order() == 2);
  CHECK(k.slack == 0);
  auto single = kneser_verify(zset(cyc(12), {0}), zset(cyc(12), {1, 4, 7, 10}));
  CHECK(single.slack == static_cast<std::int64_t>(single.H.order()) - 1);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 2000; ++t) {
    auto gs = abelian_groups_of_order(2 + rng() % 29);
    const auto& G = gs[rng() % gs.size()];
    std::size_t n = *G.order();
    auto A = random_subset(G, 1 + rng() % n, rng);
    auto B = random_subset(G, 1 + rng() % n, rng);
    auto cert = kneser_verify(A, B);
    auto brute = brute_stabilizer(sumset(A, B));
    std::int64_t slack = static_cast<std::int64_t>(cert.C.size()) - static_cast<std::int64_t>(A.size()) -
                         static_cast<std::int64_t>(B.size()) + static_cast<std::int64_t>(brute.size());
    CHECK(slack >= 0);
    CHECK(cert.slack == slack);
  }
}
