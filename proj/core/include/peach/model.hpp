#pragma once

#include <optional>
#include <vector>

#include "peach/rng.hpp"
#include "peach/types.hpp"

namespace peach {

/// Hermitian Toeplitz matrix with entry (i, j) = coeff^(j - i) for j >= i.
///
/// Throws InvalidCorrelation for |coeff| >= 1 and EmptyDimension for dim == 0.
CMatrix exp_correlation_matrix(Index dim, Complex coeff);

/// a (x) b, block (i, j) equal to a(i, j) * b.
CMatrix kronecker(const CMatrix& a, const CMatrix& b);

/// Kronecker covariance R_t (x) R_r built from two exponential-correlation factors.
CMatrix exp_kronecker_covariance(Index n_t, Complex coeff_t, Index n_r, Complex coeff_r,
                                 double scale = 1.0);

/// Pilot-contamination part of the disturbance: interferers i with covariance
/// beta_i * Sigma_i, plus white receiver noise of variance `noise_var`.
struct ContaminationSpec {
  std::vector<CMatrix> interferer_covs;
  std::vector<double> betas;
  double noise_var = 1.0;

  /// sum_i beta_i * Sigma_i (zero n x n matrix when there are no interferers).
  [[nodiscard]] CMatrix weighted_sum(Index n) const;
  void validate(Index n) const;
};

/// Second-order statistics of the vectorized pilot observation y = P~ h + n.
struct StatModel {
  Dims dims;
  CVector h_mean;     ///< n
  CMatrix r_cov;      ///< n x n, Hermitian PSD
  CVector n_mean;     ///< m
  CMatrix s_cov;      ///< m x m, Hermitian PD
  CMatrix pilot;      ///< n_t x b
  CMatrix pilot_ext;  ///< m x n, pilot^T (x) I_{n_r}

  /// Dense P~ R P~^H + S.
  [[nodiscard]] CMatrix z_matrix() const;

  /// (P~ R P~^H + S) v evaluated as P~(R(P~^H v)) + S v.
  [[nodiscard]] CVector apply_z(const CVector& v) const;

  /// d = y - P~ h_mean - n_mean.
  [[nodiscard]] CVector deviation(const CVector& y) const;

  /// sqrt(P_t) if the pilot is sqrt(P_t) * I with b == n_t, otherwise nullopt.
  [[nodiscard]] std::optional<double> identity_pilot_amplitude() const;

  void validate() const;
};

/// sqrt(pilot_power) * I_{n_t}; requires dims.b == dims.n_t.
CMatrix identity_pilot(const Dims& dims, double pilot_power);

/// P^T (x) I_{n_r}.
CMatrix extend_pilot(const CMatrix& pilot, Index n_r);

/// Model with the identity pilot and contamination-built disturbance covariance
/// S = sum_i beta_i P~ Sigma_i P~^H + sigma^2 I.
StatModel build_stat_model(const Dims& dims, CVector h_mean, CMatrix r_cov, CVector n_mean,
                           const ContaminationSpec& contamination, double pilot_power);

/// Model with caller-supplied pilot and disturbance covariance.
StatModel make_stat_model(const Dims& dims, CVector h_mean, CMatrix r_cov, CVector n_mean,
                          CMatrix s_cov, CMatrix pilot);

/// Draws mean + F z with F F^H = cov, precomputing F once.
class GaussianSampler {
 public:
  GaussianSampler(CVector mean, const CMatrix& cov);

  CVector operator()(RngStream& rng) const;

  [[nodiscard]] const CMatrix& factor() const noexcept { return factor_; }

 private:
  CVector mean_;
  CMatrix factor_;
};

CVector sample_gaussian(const CVector& mean, const CMatrix& cov, RngStream& rng);

struct Observation {
  CVector y;
  CVector d;
};

/// y = P~ h + n together with its deviation from the mean observation.
Observation observe(const StatModel& model, const CVector& h, const CVector& noise);

}  // namespace peach
