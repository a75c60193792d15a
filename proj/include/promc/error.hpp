#pragma once

#include <stdexcept>
#include <string>

namespace promc {

enum class ErrorKind {
  malformed,           // payload does not match its declared shape
  validation,          // a structural axiom fails (functoriality, naturality, poset axioms)
  precondition,        // the caller violated an operation's contract
  unsupported_regime,  // the operation is not available for this index regime
  depth_exhausted,     // an omega-regime check did not settle within the truncation depth
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::malformed: return "malformed";
    case ErrorKind::validation: return "validation";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::unsupported_regime: return "unsupported-regime";
    case ErrorKind::depth_exhausted: return "depth-exhausted";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string witness = {})
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const { return kind_; }
  /// Names the offending element, level or pair when there is one.
  const std::string& witness() const { return witness_; }

 private:
  ErrorKind kind_;
  std::string witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what, std::string witness = {}) {
  throw Error(kind, what, std::move(witness));
}

inline void require(bool cond, ErrorKind kind, const std::string& what, std::string witness = {}) {
  if (!cond) fail(kind, what, std::move(witness));
}

}  // namespace promc
