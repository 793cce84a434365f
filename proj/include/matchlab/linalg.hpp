#pragma once

// Dense linear algebra over the prime field F_p. Vectors are residue sequences.

#include <cstdint>
#include <optional>
#include <vector>

namespace matchlab::linalg {

using Vec = std::vector<std::uint32_t>;
using Rows = std::vector<Vec>;

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

/// In-place reduced row echelon form; zero rows dropped, pivots normalized to 1,
/// rows ordered by increasing pivot column. Returns the pivot columns.
std::vector<std::size_t> rref(Rows& rows, std::uint32_t p);

std::size_t rank(Rows rows, std::uint32_t p);

/// Basis (in RREF) of {x in F_p^ncols : r . x = 0 for every row r}.
Rows nullspace(const Rows& rows, std::size_t ncols, std::uint32_t p);

/// RREF basis of span(u) ∩ span(v), vectors of length ncols.
Rows intersect(const Rows& u, const Rows& v, std::size_t ncols, std::uint32_t p);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<Rows> inverse(const Rows& m, std::uint32_t p);

/// Row vector times matrix: sum_i coeffs[i] * rows[i].
Vec combine(const Vec& coeffs, const Rows& rows, std::size_t ncols, std::uint32_t p);

bool is_zero(const Vec& v);

/// Coordinates of v in an RREF basis (the values at the pivot columns), or nullopt if v is
/// outside the span.
std::optional<Vec> coordinates(const Vec& v, const Rows& rref_rows, const std::vector<std::size_t>& pivots,
                               std::uint32_t p);

std::vector<std::size_t> pivot_columns(const Rows& rref_rows);

}  // namespace matchlab::linalg
