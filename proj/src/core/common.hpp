#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dph {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode : int {
  kOk = 0,
  kConfig = 1,
  kNumeric = 2,
  kCheckFailed = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail_config(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(ErrorCode::kNumeric, msg); }

inline void require_finite(double v, const char* fn, double arg) {
  if (!std::isfinite(v)) {
    fail_numeric(std::string("non-finite value from ") + fn + " at argument " + std::to_string(arg));
  }
}

inline double sq(double v) { return v * v; }

}  // namespace dph
