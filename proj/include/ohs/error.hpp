#pragma once

#include <stdexcept>
#include <string>

namespace ohs {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A query or construction needs more dimensions than an object carries.
class TruncationError : public Error {
public:
  using Error::Error;
};

// A construction would exceed its arity, weight or cell-count budget.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

// Input data violates an algebraic law; the message carries a witness.
class LawViolation : public Error {
public:
  using Error::Error;
};

} // namespace ohs
