#pragma once

#include <stdexcept>
#include <string>

namespace dehn {

/// Malformed or semantically invalid user input (PD codes, tables, primes).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or analysis would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed; indicates a bug, never bad input.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace dehn
