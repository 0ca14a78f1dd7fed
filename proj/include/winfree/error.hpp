#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace winfree {

enum class ErrorKind {
  NonConvergence,
  DegenerateMonodromy,
  InvalidMargin,
  SingularIntegrand,
  NonPositive,
  OutOfDomain,
  NonFinite,
  NotMonotone,
  PreconditionViolated,
  ConfigError,
};

std::string_view kind_name(ErrorKind kind);

/// Operational failure raised by the numerics. Scientific outcomes (a
/// certificate that does not exist, a check that fails) are reported as
/// values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateMonodromy: return "DegenerateMonodromy";
    case ErrorKind::InvalidMargin: return "InvalidMargin";
    case ErrorKind::SingularIntegrand: return "SingularIntegrand";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

}  // namespace winfree
