#pragma once

#include <stdexcept>
#include <string>

namespace cohodyn {

/// Broad error categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  Dimension,
  DegenerateInput,
  Degree,
  Model,
  Capability,
  Lookup,
  Naming,
  Parse,
  Dominance,
  Spectrum,
  IncidenceData,
  Precondition,
  Numerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define COHODYN_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

COHODYN_DEFINE_ERROR(DimensionError, Dimension)
COHODYN_DEFINE_ERROR(DegenerateInputError, DegenerateInput)
COHODYN_DEFINE_ERROR(DegreeError, Degree)
COHODYN_DEFINE_ERROR(ModelError, Model)
COHODYN_DEFINE_ERROR(CapabilityError, Capability)
COHODYN_DEFINE_ERROR(LookupError, Lookup)
COHODYN_DEFINE_ERROR(NamingError, Naming)
COHODYN_DEFINE_ERROR(ParseError, Parse)
COHODYN_DEFINE_ERROR(DominanceError, Dominance)
COHODYN_DEFINE_ERROR(SpectrumError, Spectrum)
COHODYN_DEFINE_ERROR(IncidenceDataError, IncidenceData)
COHODYN_DEFINE_ERROR(PreconditionError, Precondition)
COHODYN_DEFINE_ERROR(NumericalError, Numerical)

#undef COHODYN_DEFINE_ERROR

}  // namespace cohodyn
