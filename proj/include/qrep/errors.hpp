#pragma once

#include <stdexcept>
#include <string>

namespace qrep {

// Malformed input: files, schemas, wrong algebra, bad parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive scan or enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A module has an indecomposable summand that is not in the universe.
class UniverseExhausted : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

// A structural self-check failed (convention bug or theorem violation).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A theorem precondition (e.g. exactness of i^!) is not certified.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrep
