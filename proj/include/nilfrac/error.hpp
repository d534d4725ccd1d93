#pragma once

#include <stdexcept>
#include <string>

namespace nilfrac {

enum class ErrorKind {
  InvalidInput,
  ModeMismatch,
  NotNilpotent,
  Undecidable,
  Monodromic,
  NonTriangular,
  ExponentOverflow,
  StepUnderflow,
  LeftDomain,
  InsufficientRange,
  MemoryBound,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// command-line layer can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nilfrac
