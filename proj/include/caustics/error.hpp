#pragma once

#include <stdexcept>
#include <string>

namespace caustics {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (realness violations, bad configurations).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Non-positive radius, loss of convexity, coincident points.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Argument outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two independent evaluation routes disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace caustics
