#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace homoglab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated hypotheses, malformed geometry, wrong regime.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The numerics failed on admissible input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define HOMOGLAB_DEFINE_ERROR(Name, Base) \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  }

HOMOGLAB_DEFINE_ERROR(NonPositiveProfile, InputError);
HOMOGLAB_DEFINE_ERROR(NotPeriodic, InputError);
HOMOGLAB_DEFINE_ERROR(InterfaceEscapesDomain, InputError);
HOMOGLAB_DEFINE_ERROR(ResolutionMismatch, InputError);
HOMOGLAB_DEFINE_ERROR(NoInterface, InputError);
HOMOGLAB_DEFINE_ERROR(PointOutsideDomain, InputError);
HOMOGLAB_DEFINE_ERROR(NotCaseA, InputError);
HOMOGLAB_DEFINE_ERROR(RegimeMismatch, InputError);
HOMOGLAB_DEFINE_ERROR(InvalidArgument, InputError);

HOMOGLAB_DEFINE_ERROR(SingularAfterBC, NumericalError);
HOMOGLAB_DEFINE_ERROR(LineSearchStalled, NumericalError);
HOMOGLAB_DEFINE_ERROR(LinearSolveFailure, NumericalError);
HOMOGLAB_DEFINE_ERROR(SingularCellSystem, NumericalError);

HOMOGLAB_DEFINE_ERROR(IoFailure, Error);
HOMOGLAB_DEFINE_ERROR(UsageError, Error);

#undef HOMOGLAB_DEFINE_ERROR

/// Configuration rejected; carries every violated assumption, not just the first.
class ValidationError : public InputError {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace homoglab
