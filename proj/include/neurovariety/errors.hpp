#pragma once

#include <stdexcept>
#include <string>

namespace nv {

// Base of every error raised by the library. The CLI maps UsageError to exit
// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class DegreeMismatchError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFieldError : public Error {
 public:
  using Error::Error;
};

class SingularScalingError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

}  // namespace nv
