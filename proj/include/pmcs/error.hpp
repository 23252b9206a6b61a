#pragma once

#include <stdexcept>
#include <string>

namespace pmcs {

enum class ErrorKind {
  domain,           // argument outside the supported domain
  degree_overflow,  // polynomial / factorial degree above the fixed caps
  overflow,         // intermediate magnitude leaves double range
  truncation,       // Fock truncation tail mass above tolerance
  headroom,         // not enough levels above the occupied region
  degenerate_state, // zero vector, e.g. a^N acting on the vacuum
  divergence,       // trace summand does not decay at the given dimension
  undefined_ratio,  // A3 denominator vanishes
  config,           // CLI / sweep configuration problem
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::degree_overflow: return "degree_overflow";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::headroom: return "headroom";
    case ErrorKind::degenerate_state: return "degenerate_state";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::undefined_ratio: return "undefined_ratio";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by numerical convergence rather than bad input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::truncation || kind_ == ErrorKind::headroom ||
           kind_ == ErrorKind::divergence || kind_ == ErrorKind::overflow;
  }

 private:
  ErrorKind kind_;
};

}  // namespace pmcs
