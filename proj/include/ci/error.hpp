#ifndef CI_ERROR_HPP
#define CI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ci {

enum class ErrorCode {
  MalformedInput,
  UnknownSymbol,
  AlphabetMismatch,
  StateBlowup,
  EmptyLanguage,
  InfiniteLanguage,
  EmptyRange,
  AmbiguityDetected,
  ShapeMismatch,
  CapExceeded,
  UnsupportedCombination,
  Unsupported,
  Internal,
};

const char* error_code_name(ErrorCode c);

/// Thrown for unrecoverable misuse; "expected" outcomes like CYCLIC or
/// INFEASIBLE are returned as values, not thrown.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ci

#endif
