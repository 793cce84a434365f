#pragma once

// The extension K = F_p ⊂ L = F_{p^n}, with L represented in the power basis of a
// root t of a monic irreducible modulus. K-subspaces of L are kept in reduced row
// echelon form so equal subspaces compare equal row by row.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matchlab/linalg.hpp"

namespace matchlab {

/// Coefficients c0..c_{n-1} of c0 + c1 t + ... (little-endian).
struct FqElement {
  linalg::Vec coeffs;

  friend auto operator<=>(const FqElement&, const FqElement&) = default;
  friend bool operator==(const FqElement&, const FqElement&) = default;
};

std::string to_string(const FqElement& x);

class FieldCtx;
using Field = std::shared_ptr<const FieldCtx>;

/// Polynomials over F_p, little-endian coefficient vectors without trailing zeros
/// (except the zero polynomial, which is empty).
namespace poly {
using Poly = linalg::Vec;
void trim(Poly& f);
Poly mod(Poly a, const Poly& m, std::uint32_t p);
Poly mul(const Poly& a, const Poly& b, std::uint32_t p);
Poly gcd(Poly a, Poly b, std::uint32_t p);
bool is_irreducible(const Poly& f, std::uint32_t p);
/// First monic irreducible of degree n, ordering candidates by coefficients from the
/// highest degree down (equivalently by the base-p integer they encode).
Poly first_irreducible(std::uint32_t p, unsigned n);
}  // namespace poly

class FieldCtx {
 public:
  /// Throws InvalidInput for composite p, n = 0, or a modulus that is not monic
  /// irreducible of degree n. Without a modulus the first irreducible is chosen.
  static Field make(std::uint32_t p, unsigned n, std::optional<poly::Poly> modulus = std::nullopt);

  std::uint32_t p() const { return p_; }
  unsigned n() const { return n_; }
  /// Length n + 1, little-endian, leading coefficient 1.
  const poly::Poly& modulus() const { return modulus_; }
  /// p^n.
  std::uint64_t size() const;

  FqElement zero() const;
  FqElement one() const;
  /// The root t of the modulus (for n = 1 this is a scalar).
  FqElement generator() const;
  FqElement element(linalg::Vec coeffs) const;  // validates
  bool contains(const FqElement& x) const;
  void require(const FqElement& x) const;

  FqElement add(const FqElement& x, const FqElement& y) const;
  FqElement sub(const FqElement& x, const FqElement& y) const;
  FqElement scalar(std::uint32_t c, const FqElement& x) const;
  FqElement mul(const FqElement& x, const FqElement& y) const;
  /// Throws InvalidInput for x = 0.
  FqElement inv(const FqElement& x) const;
  FqElement pow(const FqElement& x, std::uint64_t e) const;
  bool is_zero(const FqElement& x) const { return linalg::is_zero(x.coeffs); }

  /// The element whose coefficients are the base-p digits of index (c0 least significant).
  FqElement from_index(std::uint64_t index) const;

  std::string to_string() const;

  bool same_as(const FieldCtx& other) const {
    return p_ == other.p_ && n_ == other.n_ && modulus_ == other.modulus_;
  }

 private:
  std::uint32_t p_ = 2;
  unsigned n_ = 1;
  poly::Poly modulus_;
};

enum class FqOp { mul, inv, pow };
FqElement fq_arith(const FieldCtx& ctx, FqOp kind, const FqElement& x, const FqElement* y = nullptr,
                   std::uint64_t exponent = 0);

class Subspace {
 public:
  Subspace() = default;

  /// Span of the vectors, canonicalized. No vectors gives the zero space.
  static Subspace span(Field field, std::span<const FqElement> vectors);
  static Subspace zero(Field field) { return span(std::move(field), {}); }
  static Subspace full(Field field);
  /// Accepts rows only when already in canonical reduced echelon form.
  static std::optional<Subspace> from_canonical_rows(Field field, const linalg::Rows& rows);

  const Field& field() const { return field_; }
  const FieldCtx& ctx() const { return *field_; }
  std::size_t dim() const { return rows_.size(); }
  bool is_zero() const { return rows_.empty(); }
  const linalg::Rows& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::vector<FqElement> basis() const;

  bool contains(const FqElement& x) const;
  bool contains(const Subspace& other) const;
  /// Coordinates in the echelon basis, or nullopt if x is outside.
  std::optional<linalg::Vec> coordinates(const FqElement& x) const;
  FqElement combination(const linalg::Vec& coords) const;

  /// Number of elements p^dim.
  std::uint64_t cardinality() const;
  /// Every element, ordered by coordinate vector. Throws BudgetExceeded above 2^20.
  std::vector<FqElement> elements() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.rows_ == b.rows_ && ((!a.field_ && !b.field_) || (a.field_ && b.field_ && a.field_->same_as(*b.field_)));
  }

 private:
  Field field_;
  linalg::Rows rows_;
  std::vector<std::size_t> pivots_;
};

std::string to_string(const Subspace& s);

struct MeetJoin {
  Subspace meet;
  Subspace join;
};

/// U ∩ V and U + V; asserts dim U + dim V = dim(U ∩ V) + dim(U + V).
MeetJoin meet_join(const Subspace& u, const Subspace& v);
Subspace intersect(const Subspace& u, const Subspace& v);
Subspace join(const Subspace& u, const Subspace& v);

/// aW, or a^{-1}W when inverse is set. Throws InvalidInput for a = 0.
Subspace scale_space(const FqElement& a, const Subspace& w, bool inverse = false);

/// <AB>, the span of all products.
Subspace product_span(const Subspace& a, const Subspace& b);

struct SubfieldDesc {
  unsigned d = 1;
  Subspace space;  // F_{p^d} inside L
};

/// One entry per divisor d of n, increasing d.
std::vector<SubfieldDesc> subfield_lattice(const Field& field);

/// {x : xW ⊆ W}, matched against the subfield lattice. Throws for W = 0.
SubfieldDesc stabilizer_subfield(const Subspace& w);

/// True iff the space contains 1 and is closed under multiplication.
bool is_subfield(const Subspace& s);

struct LinearKneserCertificate {
  Subspace A;
  Subspace B;
  Subspace AB;
  SubfieldDesc H;
  std::int64_t slack = 0;
};

/// Throws TheoremViolation when dim<AB> < dim A + dim B - dim H.
LinearKneserCertificate linear_kneser_verify(const Subspace& a, const Subspace& b);

void require_same_field(const Subspace& a, const Subspace& b);

}  // namespace matchlab
