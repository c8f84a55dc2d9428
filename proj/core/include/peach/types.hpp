#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace peach {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
  InvalidCorrelation,
  EmptyDimension,
  PilotShapeMismatch,
  NotPositiveSemiDefinite,
  NotPositiveDefinite,
  ShapeError,
  SingularCovariance,
  RankDeficientPilot,
  UnsupportedPilot,
  DivergentExpansion,
  IllConditionedWeights,
  InvalidRegularization,
  WindowSizeError,
  InsufficientSamples,
  SingularLimit,
  ZeroTraceError,
  UnsupportedEstimator,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Antenna and pilot dimensions of one link.
///
/// `m()` is the length of the vectorized received pilot block (B * N_r),
/// `n()` the number of channel coefficients (N_t * N_r).
struct Dims {
  Index n_r = 1;
  Index n_t = 1;
  Index b = 1;

  [[nodiscard]] Index m() const noexcept { return b * n_r; }
  [[nodiscard]] Index n() const noexcept { return n_t * n_r; }

  void validate() const {
    if (n_r < 1 || n_t < 1 || b < 1) {
      throw Error(ErrorCode::EmptyDimension, "antenna counts and pilot length must be >= 1");
    }
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

}  // namespace peach
