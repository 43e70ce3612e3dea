#pragma once

#include <stdexcept>
#include <string>

namespace stiefel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the input was violated (wrong ring, singular form, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or elimination would exceed its configured resource cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace stiefel
