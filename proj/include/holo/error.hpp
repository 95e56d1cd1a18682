#pragma once

#include <stdexcept>
#include <string>

namespace holo {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOLO_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

HOLO_DEFINE_ERROR(ParseError)
HOLO_DEFINE_ERROR(UnsupportedFormat)
HOLO_DEFINE_ERROR(InvalidShift)
HOLO_DEFINE_ERROR(InvalidConfig)
HOLO_DEFINE_ERROR(InvalidInput)
HOLO_DEFINE_ERROR(DecodeError)
HOLO_DEFINE_ERROR(RateError)
HOLO_DEFINE_ERROR(InvalidSubset)
HOLO_DEFINE_ERROR(ContainerError)

#undef HOLO_DEFINE_ERROR

// Failure of an external encoder/decoder process. Carries whatever the tool
// wrote to stdout/stderr.
class ExternalCodecError : public Error {
 public:
  ExternalCodecError(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace holo
