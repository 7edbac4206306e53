#ifndef REPCAP_ERRORS_HPP
#define REPCAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace repcap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParams : Error {
  using Error::Error;
};
struct AbsoluteContinuityViolated : Error {
  using Error::Error;
};
struct EnumerationTooLarge : Error {
  using Error::Error;
};
struct NotConverged : Error {
  using Error::Error;
};
struct InsufficientRate : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct EmptyClass : Error {
  using Error::Error;
};
struct DegenerateMeans : Error {
  using Error::Error;
};
struct MissingTargets : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace repcap

#endif
