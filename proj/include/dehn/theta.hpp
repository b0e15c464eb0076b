#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dehn/errors.hpp"
#include "dehn/lb_algebra.hpp"
#include "dehn/modular.hpp"

namespace dehn {

/// theta_p((a,b),(a,c)) = (a-b) * ((a-b+2c)^p + (a+b)^p - 2(a+c)^p) / p  mod p.
///
/// The numerator only matters mod p^2 before the exact division by p, so it
/// is evaluated in Z_{p^2}. Inputs are reduced to 0..p-1 first.
inline residue theta_eval(residue p, RawGen2 g) {
  const residue a = mod(g.a, p), b = mod(g.b, p), c = mod(g.c, p);
  const residue p2 = p * p;
  const auto e = static_cast<std::uint64_t>(p);
  residue numerator = mod(pow_mod(a - b + 2 * c, e, p2) + pow_mod(a + b, e, p2) - 2 * pow_mod(a + c, e, p2), p2);
  if (numerator % p != 0)
    throw InvariantViolation("theta numerator not divisible by p");
  return mod((a - b) * (numerator / p), p);
}

/// theta_p as a callable with a lookup table for small p.
class ThetaCocycle {
public:
  static constexpr residue table_limit = 64;

  explicit ThetaCocycle(residue p) : p_(p) {
    require_odd_prime(p);
    if (p <= table_limit) {
      const auto n = static_cast<std::size_t>(p);
      table_.resize(n * n * n);
      for (residue a = 0; a < p; ++a)
        for (residue b = 0; b < p; ++b)
          for (residue c = 0; c < p; ++c)
            table_[index(a, b, c)] = static_cast<std::uint8_t>(theta_eval(p, {a, b, c}));
    }
  }

  residue p() const noexcept { return p_; }

  residue operator()(RawGen2 g) const {
    if (table_.empty())
      return theta_eval(p_, g);
    return table_[index(mod(g.a, p_), mod(g.b, p_), mod(g.c, p_))];
  }

private:
  residue p_;
  std::vector<std::uint8_t> table_;

  std::size_t index(residue a, residue b, residue c) const noexcept {
    const auto n = static_cast<std::size_t>(p_);
    return (static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n + static_cast<std::size_t>(c);
  }
};

/// Linear extension of a 2-cochain to a normal-form chain.
template <typename Cocycle>
residue evaluate(const Cocycle& theta, const NormalChain2& chain, residue p) {
  residue sum = 0;
  for (const auto& [g, k] : chain.free)
    sum = mod(sum + mod(k, p) * theta(RawGen2{g[0], g[1], g[2]}), p);
  // Torsion generators ((a,a),(a,b)) map to theta of themselves; for theta_p
  // this is zero, but a perturbed cochain may differ.
  for (const auto& t : chain.torsion)
    sum = mod(sum + theta(RawGen2{t[0], t[0], t[1]}), p);
  return sum;
}

/// Linear extension of a 2-cochain to a raw degree-2 chain.
template <typename Cocycle>
residue evaluate(const Cocycle& theta, const RawChain& chain, residue p) {
  residue sum = 0;
  for (const auto& [t, k] : chain.terms)
    sum = mod(sum + mod(k, p) * theta(RawGen2{t[0], t[1], t[2]}), p);
  return sum;
}

/// Outcome of an exhaustive check; `counterexample` describes the first failure.
struct VerificationReport {
  std::string suite;
  residue p = 0;
  bool passed = true;
  std::uint64_t checks = 0;
  std::optional<std::string> counterexample;

  void fail(std::string what) {
    if (passed) {
      passed = false;
      counterexample = std::move(what);
    }
  }
};

inline std::string describe(RawGen2 g) {
  return "((" + std::to_string(g.a) + "," + std::to_string(g.b) + "),(" + std::to_string(g.a) + "," +
         std::to_string(g.c) + "))";
}

inline constexpr residue max_exhaustive_prime = 31;

/// Checks that `theta` is a 2-cocycle of the symmetric complex over Z_p:
/// it vanishes on degenerate generators and on both rho-relations, and
/// theta(boundary_3(g)) = 0 for every ((a,b),(a,c),(a,d)).
template <typename Cocycle>
VerificationReport verify_theta_cocycle(residue p, const Cocycle& theta) {
  require_odd_prime(p);
  if (p > max_exhaustive_prime)
    throw InputError("exhaustive cocycle verification supports p <= " + std::to_string(max_exhaustive_prime));
  VerificationReport rep{"cocycle", p, true, 0, std::nullopt};
  for (residue a = 0; a < p; ++a)
    for (residue b = 0; b < p; ++b) {
      ++rep.checks;
      if (theta(RawGen2{a, b, b}) != 0)
        rep.fail("theta" + describe({a, b, b}) + " != 0");
      for (residue c = 0; c < p; ++c) {
        const residue base = theta(RawGen2{a, b, c});
        const residue d = tribracket(a, b, c, p);
        // (rho(a,b), (a,c) over-star (a,b)) = ((b,a),(b,[a,b,c]))
        ++rep.checks;
        if (mod(base + theta(RawGen2{b, a, d}), p) != 0)
          rep.fail("rho-condition (over) fails at " + describe({a, b, c}));
        // ((a,b) under-star (a,c), rho(a,c)) = ((c,[a,b,c]),(c,a))
        ++rep.checks;
        if (mod(base + theta(RawGen2{c, d, a}), p) != 0)
          rep.fail("rho-condition (under) fails at " + describe({a, b, c}));
      }
    }
  for (residue a = 0; a < p; ++a)
    for (residue b = 0; b < p; ++b)
      for (residue c = 0; c < p; ++c)
        for (residue d = 0; d < p; ++d) {
          ++rep.checks;
          // Expanded boundary_3 of ((a,b),(a,c),(a,d)).
          const residue bc = tribracket(a, b, c, p), bd = tribracket(a, b, d, p), cd = tribracket(a, c, d, p);
          residue s = -theta(RawGen2{a, c, d}) + theta(RawGen2{b, bc, bd}) + theta(RawGen2{a, b, d}) -
                      theta(RawGen2{c, bc, cd}) - theta(RawGen2{a, b, c}) + theta(RawGen2{d, bd, cd});
          if (mod(s, p) != 0 && rep.passed)
            rep.fail("theta(boundary) != 0 at ((" + std::to_string(a) + "," + std::to_string(b) + "),(" +
                     std::to_string(a) + "," + std::to_string(c) + "),(" + std::to_string(a) + "," +
                     std::to_string(d) + "))");
        }
  return rep;
}

inline VerificationReport verify_theta_cocycle(residue p) { return verify_theta_cocycle(p, ThetaCocycle(p)); }

/// Exhaustive chain-level checks over Z_p:
///   boundary o boundary = 0 on all degree-3 generators;
///   boundaries of degenerate and rho-relation generators vanish in the
///   symmetric quotient (degrees 2 and 3);
///   the rho-relations of degree 2 reduce to 0 in normal form.
inline VerificationReport verify_chain_complex(residue p) {
  require_odd_prime(p);
  if (p > 13)
    throw InputError("exhaustive chain verification supports p <= 13");
  VerificationReport rep{"chain", p, true, 0, std::nullopt};
  auto tuple_str = [](const RawTuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i)
      s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
  };

  for (residue a = 0; a < p; ++a)
    for (residue b = 0; b < p; ++b)
      for (residue c = 0; c < p; ++c) {
        RawTuple g{a, b, c};
        NormalChain2 base = normalize_gen2({a, b, c}, 1, p);
        for (std::size_t i = 1; i <= 2; ++i) {
          ++rep.checks;
          RawTuple partner = rho_partner(g, i, p);
          NormalChain2 rel = base + normalize_gen2({partner[0], partner[1], partner[2]}, 1, p);
          if (!rel.is_zero())
            rep.fail("rho-relation " + std::to_string(i) + " of " + tuple_str(g) + " is nonzero in normal form");
          ++rep.checks;
          RawChain both;
          both.add(g, 1);
          both.add(partner, 1);
          if (!normalize_raw1(boundary_raw(2, both, p)).is_zero())
            rep.fail("boundary of rho-relation " + std::to_string(i) + " of " + tuple_str(g) + " is nonzero");
        }
        if (b == c) {
          ++rep.checks;
          if (!boundary2(RawGen2{a, b, c}, p).is_zero())
            rep.fail("boundary of degenerate " + tuple_str(g) + " is nonzero");
        }
        ++rep.checks;
        if (!(boundary2(base, p) == boundary2(RawGen2{a, b, c}, p)))
          rep.fail("boundary does not commute with normalization at " + tuple_str(g));
      }

  for (residue a = 0; a < p; ++a)
    for (residue b = 0; b < p; ++b)
      for (residue c = 0; c < p; ++c)
        for (residue d = 0; d < p; ++d) {
          RawTuple g{a, b, c, d};
          RawChain dg = boundary_n_raw(3, g, p);
          ++rep.checks;
          if (!boundary_raw(2, dg, p).is_zero())
            rep.fail("boundary o boundary != 0 at " + tuple_str(g));
          if (b == c || c == d) {
            ++rep.checks;
            if (!normalize_raw2(dg, p).is_zero())
              rep.fail("boundary of degenerate " + tuple_str(g) + " is nonzero in the quotient");
          }
          for (std::size_t i = 1; i <= 3; ++i) {
            ++rep.checks;
            RawChain rel;
            rel.add(g, 1);
            rel.add(rho_partner(g, i, p), 1);
            if (!normalize_raw2(boundary_raw(3, rel, p), p).is_zero())
              rep.fail("boundary of rho-relation " + std::to_string(i) + " of " + tuple_str(g) +
                       " is nonzero in the quotient");
          }
        }
  return rep;
}

} // namespace dehn
