#pragma once

#include <stdexcept>
#include <string>

namespace nirom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: files, dimensions, parameter ranges.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but carries no usable information (e.g. constant data).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed (factorization, eigensolver, blow-up).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A forecast was requested past the admissible horizon without forcing.
class HorizonError : public Error {
 public:
  HorizonError(const std::string& what, double t_star) : Error(what), t_star_(t_star) {}
  double t_star() const noexcept { return t_star_; }

 private:
  double t_star_;
};

}  // namespace nirom
