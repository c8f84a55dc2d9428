#pragma once

#include <string_view>

#include "peach/estimators.hpp"
#include "peach/types.hpp"

namespace peach {

enum class EstimatorKind { Mmse, Mvu, Diagonal, Peach, WPeach };

std::string_view to_string(EstimatorKind kind);

// ---------------------------------------------------------------------------
// Error floors as the pilot power grows without bound

struct NoiseLimitedFloors {
  double peach = 0.0;
  double wpeach = 0.0;
};

/// Limits with S = sigma^2 I. PEACH uses Lambda = lambda_max(R) + lambda_min(R);
/// W-PEACH uses optimal weights at scaling `alpha_w` (1 / lambda_max(R) when <= 0),
/// solved in the orthonormal basis of wpeach_optimal_spectral.
NoiseLimitedFloors floor_noise_limited(const CMatrix& r_cov, int degree, double alpha_w = 0.0);

struct ContaminatedFloors {
  double mmse = 0.0;
  double diagonal = 0.0;
  double peach = 0.0;
  double wpeach = 0.0;
  double mvu = 0.0;  ///< tr(sum_interf)
};

/// Limits with S = P_t sum_interf + sigma^2 I, where `sum_interf` already
/// carries the beta weights. Throws SingularLimit when R + sum_interf is singular.
ContaminatedFloors floor_contaminated(const CMatrix& r_cov, const CMatrix& sum_interf, int degree,
                                      double alpha_w = 0.0);

/// tr(R) + tr(R B z B^H R) - 2 Re tr(R B R) with B = (2/Lambda) sum_l (I - (2/Lambda) z)^l.
double peach_limit_mse(const CMatrix& r_cov, const CMatrix& z_limit, int degree);

/// gamma / (1 + gamma K beta).
double sinr(double gamma, int k_interferers, double beta);

/// mse / tr(R). Throws ZeroTraceError when tr(R) = 0.
double normalized_mse(double mse, const CMatrix& r_cov);

double db_to_linear(double db);

// ---------------------------------------------------------------------------
// FLOP cost model

struct FlopModel {
  Dims dims;
  int degree = 0;
  double q_ratio = 1.0;  ///< tau_s / tau_c
  double tau_s = 1.0;
  double tau_c = 1.0;
  double t_tot = 1.0;
  double k_s = 1.0;  ///< t_tot / tau_s
  double k_c = 1.0;  ///< t_tot / tau_c

  /// From coherence times; all must be positive.
  static FlopModel from_times(const Dims& dims, int degree, double tau_s, double tau_c,
                              double t_tot);

  /// T_tot = tau_s, so k_s = 1 and k_c = q.
  static FlopModel from_q(const Dims& dims, int degree, double q);

  void validate() const;
};

/// General chi formulas in M = b n_r and N = n_t n_r. Throws UnsupportedEstimator
/// for kinds without a cost model.
double flops(EstimatorKind kind, const FlopModel& fm);

/// Simplified forms for b == n_t (M = N). Throws ShapeError otherwise.
double flops_table(EstimatorKind kind, const FlopModel& fm);

/// Threshold on M above which the polynomial estimator needs fewer FLOPs than
/// MMSE (dominant terms): q (3L/2 + 3/8) for PEACH, q (3L + 9/8) for W-PEACH.
double crossover_m(EstimatorKind kind, double q, int degree);

}  // namespace peach
