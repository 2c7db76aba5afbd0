#pragma once

#include <stdexcept>
#include <string>

namespace kzred {

// Base of every error the library throws on a broken precondition or a
// numerical failure it can detect.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DegenerateRotation : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class BothZero : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested value is not known in closed form (e.g. Hermite constants).
class Unknown : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

// Raised in 53-bit watchdog mode when an integer entry leaves the range of
// consecutive integers representable in a double.
class OverflowWatch : public Error {
 public:
  using Error::Error;
};

class SquareRootFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kzred
