#include "matchlab/ffext.hpp"

#include <algorithm>
#include <sstream>

#include "matchlab/abelian.hpp"
#include "matchlab/error.hpp"

namespace matchlab {

using linalg::mul_mod;
using linalg::Rows;
using linalg::Vec;

std::string to_string(const FqElement& x) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) os << (i ? "," : "") << x.coeffs[i];
  os << ']';
  return os.str();
}

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  Poly mm = m;
  trim(mm);
  if (mm.empty()) throw InvalidInput("polynomial division by zero");
  std::uint32_t lead_inv = linalg::inv_mod(mm.back(), p);
  while (a.size() >= mm.size()) {
    std::uint32_t c = mul_mod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - mm.size();
    for (std::size_t i = 0; i < mm.size(); ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - mul_mod(c, mm[i], p)) % p);
    trim(a);
  }
  return a;
}

Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mul_mod(a[i], b[j], p)) % p;
  trim(out);
  return out;
}

Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_irreducible(const Poly& f_in, std::uint32_t p) {
  Poly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  // Ben-Or: gcd(f, x^{p^i} - x) = 1 for 1 <= i <= n/2.
  Poly xp = Poly{0, 1};
  for (std::size_t i = 1; i <= n / 2; ++i) {
    // xp <- xp^p mod f
    Poly acc{1};
    Poly base = xp;
    std::uint64_t e = p;
    while (e) {
      if (e & 1) acc = mod(mul(acc, base, p), f, p);
      base = mod(mul(base, base, p), f, p);
      e >>= 1;
    }
    xp = acc;
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    Poly g = gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

Poly first_irreducible(std::uint32_t p, unsigned n) {
  // Enumerate c_{n-1}, ..., c_0 as base-p digits, most significant first.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < n; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(n + 1, 0);
    f[n] = 1;
    std::uint64_t v = idx;
    for (unsigned i = 0; i < n; ++i) {
      f[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (is_irreducible(f, p)) return f;
  }
  throw InvalidInput("no irreducible polynomial found");
}

}  // namespace poly

Field FieldCtx::make(std::uint32_t p, unsigned n, std::optional<poly::Poly> modulus) {
  if (!is_prime(p)) throw InvalidInput("characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1u << 16)) throw InvalidInput("characteristic must be below 65536");
  if (n == 0) throw InvalidInput("extension degree must be >= 1");
  auto ctx = std::make_shared<FieldCtx>();
  ctx->p_ = p;
  ctx->n_ = n;
  if (modulus) {
    if (modulus->size() != n + 1 || modulus->back() != 1) throw InvalidInput("modulus must be monic of degree n");
    for (auto c : *modulus)
      if (c >= p) throw InvalidInput("modulus coefficient out of range");
    if (!poly::is_irreducible(*modulus, p)) throw InvalidInput("modulus is reducible over F_" + std::to_string(p));
    ctx->modulus_ = *modulus;
  } else {
    ctx->modulus_ = poly::first_irreducible(p, n);
  }
  return ctx;
}

std::uint64_t FieldCtx::size() const {
  std::uint64_t s = 1;
  for (unsigned i = 0; i < n_; ++i) s *= p_;
  return s;
}

FqElement FieldCtx::zero() const { return FqElement{Vec(n_, 0)}; }

FqElement FieldCtx::one() const {
  FqElement x = zero();
  x.coeffs[0] = 1;
  return x;
}

FqElement FieldCtx::generator() const {
  if (n_ == 1) return FqElement{Vec{(p_ - modulus_[0]) % p_}};
  FqElement x = zero();
  x.coeffs[1] = 1;
  return x;
}

bool FieldCtx::contains(const FqElement& x) const {
  if (x.coeffs.size() != n_) return false;
  return std::all_of(x.coeffs.begin(), x.coeffs.end(), [&](std::uint32_t c) { return c < p_; });
}

void FieldCtx::require(const FqElement& x) const {
  if (!contains(x)) throw InvalidInput("element " + matchlab::to_string(x) + " is not a canonical element of " + to_string());
}

FqElement FieldCtx::element(Vec coeffs) const {
  FqElement x{std::move(coeffs)};
  require(x);
  return x;
}

FqElement FieldCtx::add(const FqElement& x, const FqElement& y) const {
  FqElement r = x;
  for (unsigned i = 0; i < n_; ++i) r.coeffs[i] = (r.coeffs[i] + y.coeffs[i]) % p_;
  return r;
}

FqElement FieldCtx::sub(const FqElement& x, const FqElement& y) const {
  FqElement r = x;
  for (unsigned i = 0; i < n_; ++i) r.coeffs[i] = (r.coeffs[i] + p_ - y.coeffs[i]) % p_;
  return r;
}

FqElement FieldCtx::scalar(std::uint32_t c, const FqElement& x) const {
  FqElement r = x;
  for (auto& v : r.coeffs) v = mul_mod(v, c % p_, p_);
  return r;
}

FqElement FieldCtx::mul(const FqElement& x, const FqElement& y) const {
  Vec prod(2 * n_ - 1, 0);
  for (unsigned i = 0; i < n_; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (unsigned j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + mul_mod(x.coeffs[i], y.coeffs[j], p_)) % p_;
  }
  // t^n = -(m_0 + ... + m_{n-1} t^{n-1})
  for (std::size_t k = prod.size(); k-- > n_;) {
    std::uint32_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    std::size_t shift = k - n_;
    for (unsigned i = 0; i < n_; ++i)
      prod[shift + i] = static_cast<std::uint32_t>((prod[shift + i] + p_ - mul_mod(c, modulus_[i], p_)) % p_);
  }
  prod.resize(n_);
  return FqElement{std::move(prod)};
}

FqElement FieldCtx::inv(const FqElement& x) const {
  if (is_zero(x)) throw InvalidInput("inverse of zero");
  // Extended Euclid on (x, modulus): track s with s*x ≡ r (mod m).
  poly::Poly r0 = modulus_, r1 = x.coeffs;
  poly::trim(r1);
  poly::Poly s0{}, s1{1};
  while (r1.size() > 1) {
    // q, r = divmod(r0, r1)
    poly::Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
    poly::Poly rem = r0;
    std::uint32_t lead_inv = linalg::inv_mod(r1.back(), p_);
    while (rem.size() >= r1.size()) {
      std::uint32_t c = mul_mod(rem.back(), lead_inv, p_);
      std::size_t shift = rem.size() - r1.size();
      q[shift] = c;
      for (std::size_t i = 0; i < r1.size(); ++i)
        rem[shift + i] = static_cast<std::uint32_t>((rem[shift + i] + p_ - mul_mod(c, r1[i], p_)) % p_);
      poly::trim(rem);
    }
    poly::trim(q);
    poly::Poly qs = poly::mul(q, s1, p_);
    poly::Poly s2(std::max(s0.size(), qs.size()), 0);
    for (std::size_t i = 0; i < s2.size(); ++i) {
      std::uint32_t a = i < s0.size() ? s0[i] : 0;
      std::uint32_t b = i < qs.size() ? qs[i] : 0;
      s2[i] = (a + p_ - b) % p_;
    }
    poly::trim(s2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant since the modulus is irreducible.
  std::uint32_t c = linalg::inv_mod(r1[0], p_);
  poly::Poly s = poly::mod(s1, modulus_, p_);
  Vec out(n_, 0);
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = mul_mod(s[i], c, p_);
  return FqElement{std::move(out)};
}

FqElement FieldCtx::pow(const FqElement& x, std::uint64_t e) const {
  FqElement result = one();
  FqElement base = x;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FqElement FieldCtx::from_index(std::uint64_t index) const {
  FqElement x = zero();
  for (unsigned i = 0; i < n_; ++i) {
    x.coeffs[i] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  return x;
}

std::string FieldCtx::to_string() const {
  std::ostringstream os;
  os << "F_" << p_ << "^" << n_ << " mod [";
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  os << ']';
  return os.str();
}

FqElement fq_arith(const FieldCtx& ctx, FqOp kind, const FqElement& x, const FqElement* y, std::uint64_t exponent) {
  ctx.require(x);
  switch (kind) {
    case FqOp::mul:
      if (!y) throw InvalidInput("mul needs two operands");
      ctx.require(*y);
      return ctx.mul(x, *y);
    case FqOp::inv:
      return ctx.inv(x);
    case FqOp::pow:
      return ctx.pow(x, exponent);
  }
  throw InvalidInput("unknown field operation");
}

// ---------------------------------------------------------------------------

Subspace Subspace::span(Field field, std::span<const FqElement> vectors) {
  if (!field) throw InvalidInput("subspace without field");
  Subspace s;
  for (const auto& v : vectors) {
    field->require(v);
    s.rows_.push_back(v.coeffs);
  }
  s.pivots_ = linalg::rref(s.rows_, field->p());
  s.field_ = std::move(field);
  return s;
}

Subspace Subspace::full(Field field) {
  std::vector<FqElement> basis;
  for (unsigned i = 0; i < field->n(); ++i) {
    FqElement e = field->zero();
    e.coeffs[i] = 1;
    basis.push_back(e);
  }
  return span(std::move(field), basis);
}

std::optional<Subspace> Subspace::from_canonical_rows(Field field, const Rows& rows) {
  std::vector<FqElement> vs;
  for (const auto& r : rows) vs.push_back(field->element(r));
  Subspace s = span(std::move(field), vs);
  if (s.rows_ != rows) return std::nullopt;
  return s;
}

std::vector<FqElement> Subspace::basis() const {
  std::vector<FqElement> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(FqElement{r});
  return out;
}

std::optional<Vec> Subspace::coordinates(const FqElement& x) const {
  return linalg::coordinates(x.coeffs, rows_, pivots_, field_->p());
}

bool Subspace::contains(const FqElement& x) const { return coordinates(x).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const Vec& r) { return contains(FqElement{r}); });
}

FqElement Subspace::combination(const Vec& coords) const {
  return FqElement{linalg::combine(coords, rows_, field_->n(), field_->p())};
}

std::uint64_t Subspace::cardinality() const {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) s *= field_->p();
  return s;
}

std::vector<FqElement> Subspace::elements() const {
  const std::uint64_t count = cardinality();
  if (count > (1u << 20)) throw BudgetExceeded("subspace has too many elements to list");
  const std::uint32_t p = field_->p();
  std::vector<FqElement> out;
  out.reserve(count);
  Vec coords(rows_.size(), 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t v = idx;
    // Last coordinate varies fastest, so the list is lexicographic in coordinates.
    for (std::size_t i = rows_.size(); i-- > 0;) {
      coords[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    out.push_back(combination(coords));
  }
  return out;
}

std::string to_string(const Subspace& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.rows().size(); ++i) {
    if (i) out += ' ';
    out += to_string(FqElement{s.rows()[i]});
  }
  return out + ">";
}

void require_same_field(const Subspace& a, const Subspace& b) {
  if (!a.field() || !b.field() || !a.field()->same_as(*b.field())) throw InvalidInput("field mismatch");
}

Subspace intersect(const Subspace& u, const Subspace& v) {
  require_same_field(u, v);
  Rows rows = linalg::intersect(u.rows(), v.rows(), u.ctx().n(), u.ctx().p());
  std::vector<FqElement> vs;
  for (auto& r : rows) vs.push_back(FqElement{std::move(r)});
  return Subspace::span(u.field(), vs);
}

Subspace join(const Subspace& u, const Subspace& v) {
  require_same_field(u, v);
  auto vs = u.basis();
  auto more = v.basis();
  vs.insert(vs.end(), more.begin(), more.end());
  return Subspace::span(u.field(), vs);
}

MeetJoin meet_join(const Subspace& u, const Subspace& v) {
  MeetJoin r{intersect(u, v), join(u, v)};
  if (u.dim() + v.dim() != r.meet.dim() + r.join.dim())
    throw TheoremViolation("dimension identity fails for " + to_string(u) + " and " + to_string(v));
  return r;
}

Subspace scale_space(const FqElement& a, const Subspace& w, bool inverse) {
  const auto& ctx = w.ctx();
  ctx.require(a);
  if (ctx.is_zero(a)) throw InvalidInput("cannot scale a subspace by zero");
  FqElement f = inverse ? ctx.inv(a) : a;
  std::vector<FqElement> vs;
  for (const auto& r : w.rows()) vs.push_back(ctx.mul(f, FqElement{r}));
  return Subspace::span(w.field(), vs);
}

Subspace product_span(const Subspace& a, const Subspace& b) {
  require_same_field(a, b);
  const auto& ctx = a.ctx();
  std::vector<FqElement> vs;
  for (const auto& x : a.rows())
    for (const auto& y : b.rows()) vs.push_back(ctx.mul(FqElement{x}, FqElement{y}));
  return Subspace::span(a.field(), vs);
}

std::vector<SubfieldDesc> subfield_lattice(const Field& field) {
  const unsigned n = field->n();
  const std::uint32_t p = field->p();
  std::vector<SubfieldDesc> out;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d) continue;
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d; ++i) q *= p;
    // Matrix of x -> x^{p^d} - x; row i collects coordinate i of each column image.
    Rows m(n, Vec(n, 0));
    for (unsigned k = 0; k < n; ++k) {
      FqElement tk = field->zero();
      tk.coeffs[k] = 1;
      FqElement img = field->sub(field->pow(tk, q), tk);
      for (unsigned i = 0; i < n; ++i) m[i][k] = img.coeffs[i];
    }
    Rows ker = linalg::nullspace(m, n, p);
    std::vector<FqElement> vs;
    for (auto& r : ker) vs.push_back(FqElement{std::move(r)});
    Subspace space = Subspace::span(field, vs);
    if (space.dim() != d) throw TheoremViolation("fixed field of Frobenius^" + std::to_string(d) + " has wrong dimension");
    out.push_back(SubfieldDesc{d, std::move(space)});
  }
  return out;
}

bool is_subfield(const Subspace& s) {
  const auto& ctx = s.ctx();
  if (!s.contains(ctx.one())) return false;
  for (const auto& x : s.rows())
    for (const auto& y : s.rows())
      if (!s.contains(ctx.mul(FqElement{x}, FqElement{y}))) return false;
  return true;
}

SubfieldDesc stabilizer_subfield(const Subspace& w) {
  if (w.is_zero()) throw InvalidInput("stabilizer of the zero space");
  const auto& ctx = w.ctx();
  const unsigned n = ctx.n();
  const std::uint32_t p = ctx.p();
  Rows annihilator = linalg::nullspace(w.rows(), n, p);
  // x w_j ∈ W  <=>  y . (x w_j) = 0 for every y in W^perp; linear in x.
  Rows constraints;
  for (const auto& wr : w.rows()) {
    FqElement wj{wr};
    std::vector<FqElement> images;
    for (unsigned k = 0; k < n; ++k) {
      FqElement tk = ctx.zero();
      tk.coeffs[k] = 1;
      images.push_back(ctx.mul(tk, wj));
    }
    for (const auto& y : annihilator) {
      Vec row(n, 0);
      for (unsigned k = 0; k < n; ++k) {
        std::uint64_t acc = 0;
        for (unsigned i = 0; i < n; ++i) acc += static_cast<std::uint64_t>(y[i]) * images[k].coeffs[i] % p;
        row[k] = static_cast<std::uint32_t>(acc % p);
      }
      constraints.push_back(std::move(row));
    }
  }
  Rows sol = constraints.empty() ? Subspace::full(w.field()).rows() : linalg::nullspace(constraints, n, p);
  std::vector<FqElement> vs;
  for (auto& r : sol) vs.push_back(FqElement{std::move(r)});
  Subspace stab = Subspace::span(w.field(), vs);
  for (auto& sf : subfield_lattice(w.field()))
    if (sf.space == stab) return sf;
  throw TheoremViolation("stabilizer of " + to_string(w) + " is not a subfield");
}

LinearKneserCertificate linear_kneser_verify(const Subspace& a, const Subspace& b) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) throw InvalidInput("linear Kneser needs nonzero subspaces");
  Subspace ab = product_span(a, b);
  SubfieldDesc h = stabilizer_subfield(ab);
  auto slack = static_cast<std::int64_t>(ab.dim()) - static_cast<std::int64_t>(a.dim()) -
               static_cast<std::int64_t>(b.dim()) + static_cast<std::int64_t>(h.d);
  if (slack < 0)
    throw TheoremViolation("linear Kneser inequality fails for A=" + to_string(a) + " B=" + to_string(b));
  return LinearKneserCertificate{a, b, std::move(ab), std::move(h), slack};
}

}  // namespace matchlab
