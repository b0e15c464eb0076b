#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "dehn/errors.hpp"

namespace dehn {

using residue = std::int64_t;

/// Canonical representative of x mod m in [0, m).
constexpr residue mod(residue x, residue m) noexcept {
  residue r = x % m;
  return r < 0 ? r + m : r;
}

/// base^exp mod m by square-and-multiply. Requires m < 2^31 so products fit.
constexpr residue pow_mod(residue base, std::uint64_t exp, residue m) noexcept {
  residue result = 1 % m;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1U)
      result = (result * base) % m;
    base = (base * base) % m;
    exp >>= 1U;
  }
  return result;
}

constexpr bool is_prime(std::int64_t n) noexcept {
  if (n < 2)
    return false;
  if (n % 2 == 0)
    return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0)
      return false;
  return true;
}

/// Largest prime accepted for colorings; keeps residue products inside 64 bits.
inline constexpr std::int64_t max_prime = 46337;

/// Throws InputError unless p is an odd prime in the supported range.
inline void require_odd_prime(std::int64_t p) {
  if (p < 3 || !is_prime(p) || p > max_prime)
    throw InputError("p must be an odd prime <= " + std::to_string(max_prime) + ", got " + std::to_string(p));
}

/// Multiplicative inverse of a unit s mod prime p.
constexpr residue inverse_mod(residue s, residue p) noexcept { return pow_mod(s, static_cast<std::uint64_t>(p - 2), p); }

/// floor(log2 n) for n >= 1.
constexpr int floor_log2(std::int64_t n) noexcept {
  int k = -1;
  while (n > 0) {
    n >>= 1;
    ++k;
  }
  return k;
}

} // namespace dehn
