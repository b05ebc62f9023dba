#pragma once

#include <stdexcept>
#include <string>

namespace pse {

// One class per reportable failure mode. The numeric value doubles as the
// CLI process exit code, so codes must stay distinct and stable.
enum class ErrorCode : int {
  empty_dataset = 10,
  degenerate_se = 11,
  degenerate_variance = 12,
  invalid_alpha = 13,
  nonpositive_se = 14,
  odd_run_count = 15,
  grid_infeasible = 16,
  too_few_seeds = 17,
  sign_reference_undefined = 18,
  degenerate_differences = 19,
  all_zero_differences = 20,
  invalid_probability = 21,
  invalid_spec = 22,
  malformed_input = 23,
  duplicate_record = 24,
  non_finite_value = 25,
  unknown_metric = 26,
  orphan_seeds = 27,
  empty_after_pairing = 28,
  missing_parameter = 29,
  invalid_config = 30,
  io_error = 31,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace pse
