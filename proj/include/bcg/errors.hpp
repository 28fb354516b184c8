#pragma once

#include <stdexcept>
#include <string>

namespace bcg {

// Base of every error raised by the library. Derived types mirror the
// failure modes callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BCG_DECLARE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

BCG_DECLARE_ERROR(FieldMismatch);
BCG_DECLARE_ERROR(DimensionMismatch);
BCG_DECLARE_ERROR(DivisionByZero);
BCG_DECLARE_ERROR(NotPositiveDefinite);
BCG_DECLARE_ERROR(SingularTransform);
BCG_DECLARE_ERROR(OriginNotInterior);
BCG_DECLARE_ERROR(UnsupportedKind);
BCG_DECLARE_ERROR(RejectionBudgetExceeded);
BCG_DECLARE_ERROR(RetryExhausted);
BCG_DECLARE_ERROR(InsufficientSamples);
BCG_DECLARE_ERROR(UnsupportedBodyForProjection);
BCG_DECLARE_ERROR(NotUnimodular);
BCG_DECLARE_ERROR(NotUnitScalarInvariant);
BCG_DECLARE_ERROR(InvalidArgument);

#undef BCG_DECLARE_ERROR

// Malformed scenario file; line is 1-based, 0 when unknown.
class SchemaError : public Error {
 public:
  SchemaError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bcg
