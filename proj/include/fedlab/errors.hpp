#pragma once
#include <stdexcept>
#include <string>

namespace fedlab {

// Stable numeric codes; the C layer maps these onto its enum.
enum class ErrorCode {
  internal = 1,
  invalid_argument = 2,
  singular_matrix = 3,
  unsupported = 4,
  too_large = 5,
  inconsistent_params = 6,
  not_applicable = 7,
  assumption_violation = 8,
  divergence = 9,
  invalid_condition = 10,
  complex_roots = 11,
  domain_error = 12,
  phi_too_small = 13,
  zero_matrix = 14,
  empty_selection = 15,
  config_error = 16,
  io_error = 17,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

}  // namespace fedlab
