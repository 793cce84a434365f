#include "matchlab/linalg.hpp"

#include <algorithm>

#include "matchlab/error.hpp"

namespace matchlab::linalg {

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw InvalidInput("inverse of zero residue");
  return pow_mod(a, p - 2, p);
}

std::vector<std::size_t> rref(Rows& rows, std::uint32_t p) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    std::uint32_t inv = inv_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = mul_mod(x, inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      std::uint32_t f = rows[i][c];
      for (std::size_t k = c; k < ncols; ++k)
        rows[i][k] = static_cast<std::uint32_t>((rows[i][k] + p - mul_mod(f, rows[r][k], p)) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::size_t rank(Rows rows, std::uint32_t p) { return rref(rows, p).size(); }

Rows nullspace(const Rows& rows, std::size_t ncols, std::uint32_t p) {
  Rows m = rows;
  auto pivots = rref(m, p);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Rows basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Vec x(ncols, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = (p - m[i][f]) % p;
    basis.push_back(std::move(x));
  }
  rref(basis, p);
  return basis;
}

Rows intersect(const Rows& u, const Rows& v, std::size_t ncols, std::uint32_t p) {
  if (u.empty() || v.empty()) return {};
  // Columns of M are the u rows followed by the negated v rows; kernel vectors (c, d)
  // give c.u = d.v, which spans the intersection.
  const std::size_t k = u.size() + v.size();
  Rows m(ncols, Vec(k, 0));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t c = 0; c < ncols; ++c) m[c][i] = u[i][c];
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t c = 0; c < ncols; ++c) m[c][u.size() + j] = (p - v[j][c]) % p;
  Rows ker = nullspace(m, k, p);
  Rows out;
  for (const auto& sol : ker) {
    Vec coeffs(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(u.size()));
    out.push_back(combine(coeffs, u, ncols, p));
  }
  rref(out, p);
  return out;
}

std::optional<Rows> inverse(const Rows& m, std::uint32_t p) {
  const std::size_t n = m.size();
  Rows aug(n, Vec(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(m[i].begin(), m[i].end(), aug[i].begin());
    aug[i][n + i] = 1;
  }
  // Reduce only on the left block.
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && aug[sel][c] == 0) ++sel;
    if (sel == n) return std::nullopt;
    std::swap(aug[c], aug[sel]);
    std::uint32_t inv = inv_mod(aug[c][c], p);
    for (auto& x : aug[c]) x = mul_mod(x, inv, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      std::uint32_t f = aug[i][c];
      for (std::size_t k = 0; k < 2 * n; ++k)
        aug[i][k] = static_cast<std::uint32_t>((aug[i][k] + p - mul_mod(f, aug[c][k], p)) % p);
    }
  }
  Rows out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(aug[i].begin() + static_cast<std::ptrdiff_t>(n), aug[i].end());
  return out;
}

Vec combine(const Vec& coeffs, const Rows& rows, std::size_t ncols, std::uint32_t p) {
  Vec out(ncols, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t c = 0; c < ncols; ++c) out[c] = (out[c] + mul_mod(coeffs[i], rows[i][c], p)) % p;
  }
  return out;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

std::optional<Vec> coordinates(const Vec& v, const Rows& rref_rows, const std::vector<std::size_t>& pivots,
                               std::uint32_t p) {
  Vec coords(rref_rows.size());
  for (std::size_t i = 0; i < pivots.size(); ++i) coords[i] = v[pivots[i]];
  if (combine(coords, rref_rows, v.size(), p) != v) return std::nullopt;
  return coords;
}

std::vector<std::size_t> pivot_columns(const Rows& rref_rows) {
  std::vector<std::size_t> out;
  for (const auto& r : rref_rows) {
    auto it = std::find_if(r.begin(), r.end(), [](std::uint32_t x) { return x != 0; });
    out.push_back(static_cast<std::size_t>(it - r.begin()));
  }
  return out;
}

}  // namespace matchlab::linalg
