#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semideg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& name)
      : Error("unknown symbol '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Raised when an ln survives into a computation that needs a rational function.
class NonRationalExpression : public Error {
 public:
  using Error::Error;
};

class SingularPoint : public Error {
 public:
  using Error::Error;
};

class InvalidChart : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class SlotOutOfRange : public Error {
 public:
  using Error::Error;
};

class MixedVariance : public Error {
 public:
  using Error::Error;
};

class WrongOrder : public Error {
 public:
  using Error::Error;
};

class GradientsDependent : public Error {
 public:
  using Error::Error;
};

class NonPolynomialBlowup : public Error {
 public:
  using Error::Error;
};

class InvalidFamily : public Error {
 public:
  using Error::Error;
};

class NotExtendable : public Error {
 public:
  using Error::Error;
};

class SingularPath : public Error {
 public:
  using Error::Error;
};

class PathDependence : public Error {
 public:
  using Error::Error;
};

class FamilyNotContained : public Error {
 public:
  using Error::Error;
};

class FitFailed : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class UnknownCheck : public Error {
 public:
  using Error::Error;
};

}  // namespace semideg
