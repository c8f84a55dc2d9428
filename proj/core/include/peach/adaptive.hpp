#pragma once

#include <deque>
#include <span>

#include "peach/estimators.hpp"
#include "peach/linalg.hpp"
#include "peach/model.hpp"
#include "peach/rng.hpp"

namespace peach {

/// Sliding-window approximation of the W-PEACH weight system.
///
/// Keeps, for k = 0..2L, the window average
///   M_k = (1/T) sum_t Re[ y_t^H P~ R^2 P~^H (alpha_w z)^k y_t ]
/// so that A~_ij = alpha_w^2 M_{i+j} and b~_i = alpha_w^2 M_{i-1} for i >= 1
/// (0-based). b~_0 is a random-probe estimate of alpha_w tr(P~ R^2 P~^H),
/// drawn once per statistics epoch.
///
/// Single writer: call update() sequentially; const accessors may be read
/// between updates.
class AdaptiveState {
 public:
  struct Update {
    CVector weights;
    bool fallback = false;     ///< solve failed; previous weights kept
    bool regularized = false;  ///< Tikhonov guard was applied
  };

  /// Fills the window with exactly `window_len` warmup observations.
  /// Throws WindowSizeError when the warmup length differs.
  AdaptiveState(const StatModel& stats, int window_len, int degree, double alpha_w,
                std::span<const CVector> warmup, RngStream& probe_rng);

  /// Slides the window: `y_new` enters, the oldest observation leaves.
  Update update(const CVector& y_new);

  [[nodiscard]] CMatrix a_approx() const;
  [[nodiscard]] CVector b_approx() const;
  [[nodiscard]] const CVector& weights() const noexcept { return weights_; }
  [[nodiscard]] const std::deque<CVector>& window() const noexcept { return window_; }
  [[nodiscard]] int window_len() const noexcept { return window_len_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] double alpha_w() const noexcept { return alpha_w_; }

  /// Re[ y^H P~ R^2 P~^H (alpha_w z)^k y ] for k = 0..2L via one vector chain.
  [[nodiscard]] RVector quadratic_forms(const CVector& y) const;

 private:
  Update solve();

  StatModel stats_;
  int window_len_;
  int degree_;
  double alpha_w_;
  double probe_b0_ = 0.0;
  RVector moments_;
  std::deque<CVector> window_;
  CVector weights_;
};

AdaptiveState adaptive_init(const StatModel& stats, int window_len, int degree, double alpha_w,
                            std::span<const CVector> warmup, RngStream& probe_rng);

/// Algorithm-style update with an explicit leaving sample; `y_old` must be the
/// oldest observation in the window (WindowSizeError otherwise).
AdaptiveState::Update adaptive_update(AdaptiveState& state, const CVector& y_new,
                                      const CVector& y_old);

// ---------------------------------------------------------------------------
// Shrinkage toward the diagonal of the sample covariance

struct ShrinkageEstimate {
  CMatrix c_hat;
  CMatrix c_sample;
  double kappa = 0.0;
  double phi_sample = 0.0;  ///< E||C_sample - C||_F^2
  double phi_diag = 0.0;    ///< E||C_d - C||_F^2
  double psi = 0.0;         ///< E tr((C_d - C)(C_sample - C))
};

/// kappa minimizing kappa^2 phi_d + (1-kappa)^2 phi_s + 2 kappa (1-kappa) psi,
/// clamped to [0, 1]. A vanishing denominator (relative to `scale`) yields 0.
double shrinkage_kappa(double phi_sample, double phi_diag, double psi, double scale);

/// Plug-in mode: Phi and Psi estimated from the samples themselves.
/// Throws InsufficientSamples for fewer than two samples.
ShrinkageEstimate shrinkage_covariance(std::span<const CVector> samples);

/// Oracle mode: Phi and Psi evaluated against the true covariance for this draw.
ShrinkageEstimate shrinkage_covariance(std::span<const CVector> samples, const CMatrix& c_true);

/// ||kappa C_d + (1 - kappa) C_sample - C||_F^2.
double shrinkage_loss(const CMatrix& c_sample, const CMatrix& c_true, double kappa);

}  // namespace peach
