#pragma once

#include <stdexcept>
#include <string>

namespace blockacs {

// Every failure raised by the library derives from Error so callers can map
// the concrete kind onto an exit code or a report field.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

// A measurement A*a admits no s-block-sparse code in B within tolerance.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace blockacs
