#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace compactkit {

enum class ErrorCode {
  invalid_exponent,
  grid_mismatch,
  empty_family,
  tiling_misaligned,
  dimension_error,
  shape_error,
  exponent_undefined,
  exponent_error,
  prerequisites_unmet,
  not_certifiable,
  contract_violation,
  landmarks_insufficient,
  bounds_violated,
  invalid_argument,
  parse_error,
  size_mismatch,
  non_finite_value,
  io_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_exponent: return "invalid-exponent";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::empty_family: return "empty-family";
    case ErrorCode::tiling_misaligned: return "tiling-misaligned";
    case ErrorCode::dimension_error: return "dimension-error";
    case ErrorCode::shape_error: return "shape-error";
    case ErrorCode::exponent_undefined: return "exponent-undefined";
    case ErrorCode::exponent_error: return "exponent-error";
    case ErrorCode::prerequisites_unmet: return "prerequisites-unmet";
    case ErrorCode::not_certifiable: return "not-certifiable-at-resolution";
    case ErrorCode::contract_violation: return "contract-violation";
    case ErrorCode::landmarks_insufficient: return "landmarks-insufficient";
    case ErrorCode::bounds_violated: return "bounds-violated";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::size_mismatch: return "size-mismatch";
    case ErrorCode::non_finite_value: return "non-finite-value";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// Exception carrying a machine-readable code. Resolution failures
/// (prerequisites_unmet, not_certifiable) are verdicts, not disproofs.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_resolution_verdict() const noexcept {
    return code_ == ErrorCode::prerequisites_unmet || code_ == ErrorCode::not_certifiable;
  }

 private:
  ErrorCode code_;
};

}  // namespace compactkit
