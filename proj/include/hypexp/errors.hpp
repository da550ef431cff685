#pragma once

#include <stdexcept>
#include <string>

namespace hypexp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HYPEXP_ERROR(Name)                \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

HYPEXP_ERROR(ShapeError)
HYPEXP_ERROR(DomainError)
HYPEXP_ERROR(DimensionError)
HYPEXP_ERROR(SingularReciprocalError)
HYPEXP_ERROR(DivergentIntegralError)
HYPEXP_ERROR(RepresentationError)
HYPEXP_ERROR(ValidationError)
HYPEXP_ERROR(OrderError)
HYPEXP_ERROR(PositivityError)
HYPEXP_ERROR(NumericalFailure)
HYPEXP_ERROR(DegenerateDataError)
HYPEXP_ERROR(SpanError)
HYPEXP_ERROR(UsageError)

#undef HYPEXP_ERROR

}  // namespace hypexp
