#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracrd {

/// Base of all solver-reported failures. Precondition violations on
/// arguments are reported as std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field or coefficient tensor contained NaN or Inf.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// The time stepper produced non-finite values.
class BlowUpError : public Error {
 public:
  BlowUpError(std::size_t step, std::size_t species, const std::string& what)
      : Error(what), step_(step), species_(species) {}

  std::size_t step() const { return step_; }
  std::size_t species() const { return species_; }

 private:
  std::size_t step_;
  std::size_t species_;
};

/// The inner fixed-point iteration grew instead of contracting.
class FixedPointDivergence : public Error {
 public:
  FixedPointDivergence(std::size_t step, double first_change, double last_change,
                       const std::string& what)
      : Error(what), step_(step), first_(first_change), last_(last_change) {}

  std::size_t step() const { return step_; }
  double first_change() const { return first_; }
  double last_change() const { return last_; }

 private:
  std::size_t step_;
  double first_;
  double last_;
};

}  // namespace fracrd
