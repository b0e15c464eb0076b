#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <utility>
#include <vector>

#include "dehn/errors.hpp"

namespace dehn {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw BudgetExceeded("integer overflow in kernel computation");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r))
    throw BudgetExceeded("integer overflow in kernel computation");
  return r;
}

/// col[dst] -= q * col[src] in both M and U.
inline void column_axpy(IntMatrix& m, IntMatrix& u, std::size_t dst, std::size_t src, std::int64_t q) {
  if (q == 0)
    return;
  for (auto& row : m)
    row[dst] = checked_sub(row[dst], checked_mul(q, row[src]));
  for (auto& row : u)
    row[dst] = checked_sub(row[dst], checked_mul(q, row[src]));
}

inline void column_swap(IntMatrix& m, IntMatrix& u, std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (auto& row : m)
    std::swap(row[a], row[b]);
  for (auto& row : u)
    std::swap(row[a], row[b]);
}

/// Integer row echelon form with positive pivots and reduced entries above
/// each pivot. Unimodular row operations only, so the row lattice is kept.
inline IntMatrix hermite_rows(IntMatrix rows, std::size_t width) {
  std::size_t lead = 0;
  for (std::size_t col = 0; col < width && lead < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = lead; r < rows.size(); ++r)
        if (rows[r][col] != 0 && (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col])))
          best = r;
      if (best == rows.size())
        break;
      std::swap(rows[lead], rows[best]);
      bool done = true;
      for (std::size_t r = lead + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0)
          continue;
        std::int64_t q = rows[r][col] / rows[lead][col];
        for (std::size_t c = 0; c < width; ++c)
          rows[r][c] = checked_sub(rows[r][c], checked_mul(q, rows[lead][c]));
        if (rows[r][col] != 0)
          done = false;
      }
      if (done)
        break;
    }
    if (lead >= rows.size() || rows[lead][col] == 0)
      continue;
    if (rows[lead][col] < 0)
      for (auto& v : rows[lead])
        v = -v;
    for (std::size_t r = 0; r < lead; ++r) {
      std::int64_t q = rows[r][col] / rows[lead][col];
      if (rows[r][col] - q * rows[lead][col] < 0)
        --q;
      for (std::size_t c = 0; c < width; ++c)
        rows[r][c] = checked_sub(rows[r][c], checked_mul(q, rows[lead][c]));
    }
    ++lead;
  }
  rows.resize(lead);
  return rows;
}

} // namespace detail

/// Z-basis of {v in Z^n : M v = 0} for an m x n integer matrix.
///
/// Column operations reduce M to lower echelon form while the same operations
/// are applied to the identity; the columns of the transform that end up under
/// zero columns of M span the integer kernel. The basis is then put into
/// Hermite form so the output is canonical. Every basis vector is primitive.
inline IntMatrix integer_kernel_basis(const IntMatrix& matrix, std::size_t n) {
  IntMatrix m = matrix;
  IntMatrix u(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    u[i][i] = 1;

  std::size_t pivot = 0;
  for (std::size_t r = 0; r < m.size() && pivot < n; ++r) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t c = pivot; c < n; ++c)
        if (m[r][c] != 0 && (best == n || std::llabs(m[r][c]) < std::llabs(m[r][best])))
          best = c;
      if (best == n)
        break;
      detail::column_swap(m, u, pivot, best);
      bool done = true;
      for (std::size_t c = pivot + 1; c < n; ++c) {
        if (m[r][c] == 0)
          continue;
        detail::column_axpy(m, u, c, pivot, m[r][c] / m[r][pivot]);
        if (m[r][c] != 0)
          done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }

  IntMatrix basis;
  for (std::size_t c = pivot; c < n; ++c) {
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = u[i][c];
    basis.push_back(std::move(v));
  }
  return detail::hermite_rows(std::move(basis), n);
}

inline IntVector multiply(const IntMatrix& m, const IntVector& v) {
  IntVector out(m.size(), 0);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      out[r] += m[r][c] * v[c];
  return out;
}

inline std::int64_t content(const IntVector& v) {
  std::int64_t g = 0;
  for (auto x : v)
    g = std::gcd(g, x);
  return g;
}

} // namespace dehn
