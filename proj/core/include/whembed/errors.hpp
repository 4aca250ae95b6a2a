#pragma once

#include <stdexcept>
#include <string>

namespace whembed {

enum class ErrorCode {
  invalid_argument,
  decay_too_slow,
  contour_hit,
  singular_matrix,
  singular_at_incidence,
  kernel_zero,
  winding_nonzero,
  optical_boundary,
  degenerate_base,
  not_converged,
  gauge_ambiguous,
  pole_hit,
  empty_mask,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace whembed
