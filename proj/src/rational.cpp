#include "ci/rational.hpp"

#include "ci/error.hpp"

namespace ci {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedInput: return "MALFORMED_INPUT";
    case ErrorCode::UnknownSymbol: return "UNKNOWN_SYMBOL";
    case ErrorCode::AlphabetMismatch: return "ALPHABET_MISMATCH";
    case ErrorCode::StateBlowup: return "STATE_BLOWUP";
    case ErrorCode::EmptyLanguage: return "EMPTY_LANGUAGE";
    case ErrorCode::InfiniteLanguage: return "INFINITE_LANGUAGE";
    case ErrorCode::EmptyRange: return "EMPTY_RANGE";
    case ErrorCode::AmbiguityDetected: return "AMBIGUITY_DETECTED";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::UnsupportedCombination: return "UNSUPPORTED_COMBINATION";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

Rational parse_rational(const std::string& text) {
  auto bad = [&] {
    return Error(ErrorCode::MalformedInput, "bad rational '" + text + "'");
  };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt n(text.substr(0, slash));
    BigInt d(text.substr(slash + 1));
    if (d <= 0) throw bad();
    return Rational(n, d);
  } catch (const std::runtime_error&) {
    throw bad();
  }
}

std::string format_rational(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

}  // namespace ci
