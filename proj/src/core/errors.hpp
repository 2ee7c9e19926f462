#pragma once

#include <stdexcept>
#include <string>

namespace sg {

enum class ErrorCode {
  invalid_argument = 1,
  zero_frequency,
  grid_too_coarse,
  annulus_too_wide,
  scale_overflow,
  grid_mismatch,
  too_large,
  no_convergence,
  not_positive_definite,
  singular,
  empty_test_set,
  cone_empty,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace sg
