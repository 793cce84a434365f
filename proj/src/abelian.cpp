#include "matchlab/abelian.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "matchlab/error.hpp"

namespace matchlab {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

std::map<std::uint64_t, int> factorize(std::uint64_t n) {
  std::map<std::uint64_t, int> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

std::string to_string(const GroupElement& x) {
  std::ostringstream os;
  bool single = x.free.size() + x.torsion.size() == 1;
  if (!single) os << '(';
  bool first = true;
  for (auto v : x.free) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  for (auto v : x.torsion) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  if (!single) os << ')';
  return os.str();
}

GroupSpec GroupSpec::make(int free_rank, std::span<const std::int64_t> torsion_orders) {
  if (free_rank < 0) throw InvalidInput("free rank must be non-negative");
  std::map<std::uint64_t, std::vector<int>> exponents;
  for (auto n : torsion_orders) {
    if (n < 2) throw InvalidInput("torsion order " + std::to_string(n) + " is < 2");
    for (auto [p, e] : factorize(static_cast<std::uint64_t>(n))) exponents[p].push_back(e);
  }
  std::size_t k = 0;
  for (auto& [p, es] : exponents) {
    std::sort(es.begin(), es.end(), std::greater<>());
    k = std::max(k, es.size());
  }
  // factors[0] is the largest invariant factor.
  std::vector<std::int64_t> factors(k, 1);
  for (auto& [p, es] : exponents)
    for (std::size_t i = 0; i < es.size(); ++i) factors[i] *= static_cast<std::int64_t>(ipow(p, es[i]));
  std::reverse(factors.begin(), factors.end());

  GroupSpec g;
  g.free_rank_ = free_rank;
  g.torsion_ = std::move(factors);
  return g;
}

std::optional<std::uint64_t> GroupSpec::order() const {
  if (!is_finite()) return std::nullopt;
  return torsion_order();
}

std::uint64_t GroupSpec::torsion_order() const {
  std::uint64_t r = 1;
  for (auto n : torsion_) r *= static_cast<std::uint64_t>(n);
  return r;
}

GroupElement GroupSpec::zero() const {
  return GroupElement{std::vector<std::int64_t>(free_rank_, 0), std::vector<std::int64_t>(torsion_.size(), 0)};
}

GroupElement GroupSpec::add(const GroupElement& x, const GroupElement& y) const {
  GroupElement r = x;
  for (int i = 0; i < free_rank_; ++i) r.free[i] += y.free[i];
  for (std::size_t i = 0; i < torsion_.size(); ++i) r.torsion[i] = mod(r.torsion[i] + y.torsion[i], torsion_[i]);
  return r;
}

GroupElement GroupSpec::neg(const GroupElement& x) const {
  GroupElement r = x;
  for (auto& v : r.free) v = -v;
  for (std::size_t i = 0; i < torsion_.size(); ++i) r.torsion[i] = mod(-r.torsion[i], torsion_[i]);
  return r;
}

GroupElement GroupSpec::scale(std::int64_t k, const GroupElement& x) const {
  GroupElement r = x;
  for (auto& v : r.free) v *= k;
  for (std::size_t i = 0; i < torsion_.size(); ++i) r.torsion[i] = mod(mod(k, torsion_[i]) * r.torsion[i], torsion_[i]);
  return r;
}

std::optional<std::uint64_t> GroupSpec::element_order(const GroupElement& x) const {
  for (auto v : x.free)
    if (v != 0) return std::nullopt;
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    auto n = static_cast<std::uint64_t>(torsion_[i]);
    auto t = static_cast<std::uint64_t>(x.torsion[i]);
    std::uint64_t o = n / std::gcd(n, t);
    ord = std::lcm(ord, o);
  }
  return ord;
}

bool GroupSpec::contains(const GroupElement& x) const {
  if (x.free.size() != static_cast<std::size_t>(free_rank_) || x.torsion.size() != torsion_.size()) return false;
  for (std::size_t i = 0; i < torsion_.size(); ++i)
    if (x.torsion[i] < 0 || x.torsion[i] >= torsion_[i]) return false;
  return true;
}

void GroupSpec::require(const GroupElement& x) const {
  if (!contains(x)) throw InvalidInput("element " + matchlab::to_string(x) + " is not a canonical element of " + to_string());
}

GroupElement GroupSpec::element(std::vector<std::int64_t> free, std::vector<std::int64_t> torsion) const {
  GroupElement x{std::move(free), std::move(torsion)};
  require(x);
  return x;
}

GroupElement GroupSpec::torsion_element(std::vector<std::int64_t> residues) const {
  return element(std::vector<std::int64_t>(free_rank_, 0), std::move(residues));
}

std::vector<GroupElement> GroupSpec::torsion_elements() const {
  std::vector<GroupElement> out;
  GroupElement cur = zero();
  out.reserve(torsion_order());
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(torsion_.size()) - 1;
    while (i >= 0 && cur.torsion[i] + 1 == torsion_[i]) {
      cur.torsion[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur.torsion[i];
  }
  return out;
}

std::vector<GroupElement> GroupSpec::elements() const {
  if (!is_finite()) throw InvalidInput("cannot list the elements of an infinite group");
  return torsion_elements();
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << 'Z';
    if (free_rank_ > 1) os << '^' << free_rank_;
    first = false;
  }
  for (auto n : torsion_) {
    if (!first) os << " x ";
    os << "Z/" << n;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t order) {
  std::vector<GroupSpec> out;
  if (order == 0) return out;
  // Chains n1 | n2 | ... | nk with product = order, n1 >= 2.
  std::vector<std::int64_t> chain;
  auto rec = [&](auto&& self, std::uint64_t prev, std::uint64_t rem) -> void {
    if (rem == 1) {
      out.push_back(GroupSpec::make(0, chain));
      return;
    }
    for (std::uint64_t n = 2; n <= rem; ++n) {
      if (rem % n != 0 || n % prev != 0) continue;
      std::uint64_t rest = rem / n;
      if (rest != 1 && rest % n != 0) continue;
      chain.push_back(static_cast<std::int64_t>(n));
      self(self, n, rest);
      chain.pop_back();
    }
  };
  rec(rec, 1, order);
  std::sort(out.begin(), out.end(), [](const GroupSpec& a, const GroupSpec& b) {
    if (a.torsion().size() != b.torsion().size()) return a.torsion().size() < b.torsion().size();
    return a.torsion() < b.torsion();
  });
  return out;
}

GroupSubset::GroupSubset(GroupSpec group, std::vector<GroupElement> elements)
    : group_(std::move(group)), elements_(std::move(elements)) {
  for (const auto& x : elements_) group_.require(x);
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool GroupSubset::contains(const GroupElement& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::optional<std::size_t> GroupSubset::index_of(const GroupElement& x) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
  if (it == elements_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

static void require_same_group(const GroupSpec& a, const GroupSpec& b) {
  if (!(a == b)) throw InvalidInput("group mismatch: " + a.to_string() + " vs " + b.to_string());
}

GroupSubset GroupSubset::set_union(const GroupSubset& other) const {
  require_same_group(group_, other.group_);
  std::vector<GroupElement> out;
  std::set_union(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                 std::back_inserter(out));
  GroupSubset r;
  r.group_ = group_;
  r.elements_ = std::move(out);
  return r;
}

GroupSubset GroupSubset::intersection(const GroupSubset& other) const {
  require_same_group(group_, other.group_);
  std::vector<GroupElement> out;
  std::set_intersection(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                        std::back_inserter(out));
  GroupSubset r;
  r.group_ = group_;
  r.elements_ = std::move(out);
  return r;
}

GroupSubset GroupSubset::difference(const GroupSubset& other) const {
  require_same_group(group_, other.group_);
  std::vector<GroupElement> out;
  std::set_difference(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                      std::back_inserter(out));
  GroupSubset r;
  r.group_ = group_;
  r.elements_ = std::move(out);
  return r;
}

GroupSubset GroupSubset::translate(const GroupElement& g) const {
  std::vector<GroupElement> out;
  out.reserve(elements_.size());
  for (const auto& x : elements_) out.push_back(group_.add(x, g));
  return GroupSubset(group_, std::move(out));
}

bool GroupSubset::is_subset_of(const GroupSubset& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

std::string to_string(const GroupSubset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += to_string(s[i]);
  }
  return out + "}";
}

namespace {

// Smallest subgroup containing `base` (already a subgroup) and g.
std::vector<GroupElement> extend_subgroup(const GroupSpec& group, const std::vector<GroupElement>& base,
                                          const GroupElement& g) {
  std::set<GroupElement> out(base.begin(), base.end());
  GroupElement m = g;
  while (!out.count(m)) {
    for (const auto& h : base) out.insert(group.add(h, m));
    m = group.add(m, g);
  }
  return {out.begin(), out.end()};
}

// Greedy generating set: walk the elements in canonical order, keep those outside
// the subgroup generated so far.
std::vector<GroupElement> greedy_generators(const GroupSpec& group, const std::vector<GroupElement>& elems) {
  std::vector<GroupElement> gens;
  std::vector<GroupElement> span{group.zero()};
  std::set<GroupElement> span_set(span.begin(), span.end());
  for (const auto& x : elems) {
    if (span_set.count(x)) continue;
    gens.push_back(x);
    span = extend_subgroup(group, span, x);
    span_set = std::set<GroupElement>(span.begin(), span.end());
  }
  return gens;
}

}  // namespace

Subgroup Subgroup::generated_by(const GroupSpec& group, std::vector<GroupElement> generators) {
  std::vector<GroupElement> span{group.zero()};
  for (const auto& g : generators) {
    group.require(g);
    if (!group.element_order(g)) throw InvalidInput("generator " + to_string(g) + " has infinite order");
    span = extend_subgroup(group, span, g);
  }
  Subgroup h;
  h.generators_ = std::move(generators);
  h.elements_ = GroupSubset(group, std::move(span));
  return h;
}

Subgroup Subgroup::from_elements(const GroupSubset& elements) {
  Subgroup h;
  h.generators_ = greedy_generators(elements.group(), elements.elements());
  h.elements_ = elements;
  return h;
}

bool Subgroup::is_proper() const {
  auto ord = group().order();
  return !ord || order() < *ord;
}

bool is_subgroup(const GroupSubset& s) {
  const auto& g = s.group();
  if (!s.contains(g.zero())) return false;
  for (const auto& x : s) {
    if (!s.contains(g.neg(x))) return false;
    for (const auto& y : s)
      if (!s.contains(g.add(x, y))) return false;
  }
  return true;
}

GroupElement element_op(const GroupSpec& group, ElementOp kind, const GroupElement* x, const GroupElement* y) {
  switch (kind) {
    case ElementOp::zero:
      return group.zero();
    case ElementOp::neg:
      if (!x) throw InvalidInput("neg needs one operand");
      group.require(*x);
      return group.neg(*x);
    case ElementOp::add:
      if (!x || !y) throw InvalidInput("add needs two operands");
      group.require(*x);
      group.require(*y);
      return group.add(*x, *y);
  }
  throw InvalidInput("unknown element operation");
}

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b) {
  if (a.empty() || b.empty()) throw InvalidInput("sumset of an empty set");
  require_same_group(a.group(), b.group());
  std::vector<GroupElement> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(a.group().add(x, y));
  return GroupSubset(a.group(), std::move(out));
}

Subgroup stabilizer(const GroupSubset& c) {
  if (c.empty()) throw InvalidInput("stabilizer of an empty set");
  const auto& group = c.group();
  const auto& c0 = c[0];
  std::vector<GroupElement> members;
  for (const auto& x : c) {
    GroupElement g = group.sub(x, c0);
    bool ok = true;
    for (const auto& y : c) {
      if (!c.contains(group.add(y, g))) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(std::move(g));
  }
  return Subgroup::from_elements(GroupSubset(group, std::move(members)));
}

std::vector<Subgroup> subgroups(const GroupSpec& group, std::optional<std::uint64_t> order_bound) {
  if (!group.is_finite() && !order_bound)
    throw InvalidInput("subgroup enumeration of an infinite group needs an order bound");
  std::uint64_t bound = order_bound.value_or(group.torsion_order());

  std::vector<GroupElement> candidates;
  for (auto& x : group.torsion_elements()) {
    auto o = group.element_order(x);
    if (*o > 1 && *o <= bound) candidates.push_back(std::move(x));
  }

  std::map<std::vector<GroupElement>, std::vector<GroupElement>> found;  // elements -> generators
  std::deque<std::vector<GroupElement>> queue;
  std::vector<GroupElement> trivial{group.zero()};
  found.emplace(trivial, std::vector<GroupElement>{});
  queue.push_back(trivial);
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    std::set<GroupElement> cur_set(cur.begin(), cur.end());
    for (const auto& g : candidates) {
      if (cur_set.count(g)) continue;
      auto next = extend_subgroup(group, cur, g);
      if (next.size() > bound || found.count(next)) continue;
      auto gens = found.at(cur);
      gens.push_back(g);
      found.emplace(next, std::move(gens));
      queue.push_back(std::move(next));
    }
  }

  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& [elems, gens] : found) out.push_back(Subgroup::generated_by(group, gens));
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements().elements() < b.elements().elements();
  });
  return out;
}

std::optional<std::uint64_t> smallest_subgroup_order(const GroupSpec& group) {
  if (group.torsion().empty()) return std::nullopt;
  std::uint64_t best = 0;
  for (auto n : group.torsion()) {
    auto p = smallest_prime_factor(static_cast<std::uint64_t>(n));
    if (best == 0 || p < best) best = p;
  }
  return best;
}

}  // namespace matchlab
