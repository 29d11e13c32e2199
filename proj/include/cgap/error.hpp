#pragma once

#include <stdexcept>
#include <string>

namespace cgap {

enum class ErrorKind {
  kInvalidArgument,
  kDomain,
  kOverflow,
  kNotInvolution,
  kNotGenerating,
  kSizeCap,
  kDisconnected,
  kNoConvergence,
  kNotExpander,
  kInsufficientRange,
  kBudget,
  kParse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kNotInvolution: return "non-involution generator";
    case ErrorKind::kNotGenerating: return "non-generating set";
    case ErrorKind::kSizeCap: return "size cap exceeded";
    case ErrorKind::kDisconnected: return "disconnected graph";
    case ErrorKind::kNoConvergence: return "no convergence";
    case ErrorKind::kNotExpander: return "not an expander instance";
    case ErrorKind::kInsufficientRange: return "insufficient range";
    case ErrorKind::kBudget: return "budget exceeded";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cgap
