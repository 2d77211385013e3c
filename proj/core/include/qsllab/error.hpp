#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsllab {

enum class ErrorKind {
  InvalidParams,
  InvalidState,
  NotHermitian,
  DegenerateNormalization,
  StepOverflow,
  NotPure,
  DegeneratePurity,
  BadGrid,
  QuadratureNonconvergent,
  NumericalDomain,
  InvalidSpec,
  IoError,
};

/// Stable CamelCase name, printed by the CLI on failure.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsllab
