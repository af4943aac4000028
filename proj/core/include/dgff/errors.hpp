#pragma once

#include <stdexcept>
#include <string>

namespace dgff {

// Base type for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define DGFF_DECLARE_ERROR(Name)                                      \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what_arg) : Error(what_arg) {}   \
  }

// Domain / lattice construction.
DGFF_DECLARE_ERROR(InvalidDomain);
DGFF_DECLARE_ERROR(EmptyDiscretization);
DGFF_DECLARE_ERROR(EmptyInterior);
DGFF_DECLARE_ERROR(UnsupportedShape);
DGFF_DECLARE_ERROR(NoTriangles);

// Potential theory.
DGFF_DECLARE_ERROR(SingularSystem);
DGFF_DECLARE_ERROR(VertexOutsideDomain);
DGFF_DECLARE_ERROR(PointOutsideDomain);
DGFF_DECLARE_ERROR(MethodUnsupported);
DGFF_DECLARE_ERROR(QuadratureUnconverged);
DGFF_DECLARE_ERROR(ParameterOutOfDisc);
DGFF_DECLARE_ERROR(KernelNotPSD);

// Gaussian fields.
DGFF_DECLARE_ERROR(DenseLimitExceeded);
DGFF_DECLARE_ERROR(NotSubdomain);
DGFF_DECLARE_ERROR(InsufficientSamples);

// Extremal statistics.
DGFF_DECLARE_ERROR(DomainError);
DGFF_DECLARE_ERROR(InsufficientExceedances);
DGFF_DECLARE_ERROR(WindowEmpty);
DGFF_DECLARE_ERROR(InsufficientReplicas);

// LQG measure.
DGFF_DECLARE_ERROR(UnsupportedDomainShape);
DGFF_DECLARE_ERROR(SeriesNotConverged);
DGFF_DECLARE_ERROR(GridMismatch);
DGFF_DECLARE_ERROR(PartitionTooFine);
DGFF_DECLARE_ERROR(CovarianceNotOrdered);

// Harness.
DGFF_DECLARE_ERROR(ConfigInvalid);
DGFF_DECLARE_ERROR(IoError);

#undef DGFF_DECLARE_ERROR

}  // namespace dgff
