#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idmps {

enum class errc {
  shape_mismatch,
  empty_shape,
  cut_out_of_range,
  convergence_failure,
  keep_out_of_range,
  zero_state,
  center_out_of_range,
  dim_chain_broken,
  form_mismatch,
  policy_empty,
  index_out_of_range,
  length_mismatch,
  degree_too_large,
  insufficient_nodes,
  invalid_params,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::empty_shape: return "EmptyShape";
    case errc::cut_out_of_range: return "CutOutOfRange";
    case errc::convergence_failure: return "ConvergenceFailure";
    case errc::keep_out_of_range: return "KeepOutOfRange";
    case errc::zero_state: return "ZeroState";
    case errc::center_out_of_range: return "CenterOutOfRange";
    case errc::dim_chain_broken: return "DimChainBroken";
    case errc::form_mismatch: return "FormMismatch";
    case errc::policy_empty: return "PolicyEmpty";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::degree_too_large: return "DegreeTooLarge";
    case errc::insufficient_nodes: return "InsufficientNodes";
    case errc::invalid_params: return "InvalidParams";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an idmps::error carrying one
/// of the codes above; callers branch on code(), not on the message text.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

  /// True for failures of the numerics rather than of the input.
  bool numerical() const noexcept {
    return code_ == errc::convergence_failure || code_ == errc::zero_state;
  }

 private:
  errc code_;
};

}  // namespace idmps
