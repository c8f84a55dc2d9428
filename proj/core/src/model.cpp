#include "peach/model.hpp"

#include <cmath>
#include <string>

#include "peach/linalg.hpp"

namespace peach {

CMatrix exp_correlation_matrix(Index dim, Complex coeff) {
  if (dim <= 0) {
    throw Error(ErrorCode::EmptyDimension, "correlation matrix dimension must be positive");
  }
  if (!(std::abs(coeff) < 1.0)) {
    throw Error(ErrorCode::InvalidCorrelation, "correlation coefficient magnitude must be < 1");
  }
  CMatrix out(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    out(i, i) = 1.0;
    Complex power = 1.0;
    for (Index j = i + 1; j < dim; ++j) {
      power *= coeff;
      out(i, j) = power;
      out(j, i) = std::conj(power);
    }
  }
  return out;
}

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix exp_kronecker_covariance(Index n_t, Complex coeff_t, Index n_r, Complex coeff_r,
                                 double scale) {
  CMatrix out =
      scale * kronecker(exp_correlation_matrix(n_t, coeff_t), exp_correlation_matrix(n_r, coeff_r));
  return hermitian_part(out);
}

CMatrix ContaminationSpec::weighted_sum(Index n) const {
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < interferer_covs.size(); ++i) {
    sum += betas[i] * interferer_covs[i];
  }
  return hermitian_part(sum);
}

void ContaminationSpec::validate(Index n) const {
  if (interferer_covs.size() != betas.size()) {
    throw Error(ErrorCode::ShapeError, "interferer covariance and beta lists differ in length");
  }
  if (!(noise_var > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "noise variance must be positive");
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "beta must be nonnegative");
    }
    if (interferer_covs[i].rows() != n || interferer_covs[i].cols() != n) {
      throw Error(ErrorCode::ShapeError, "interferer covariance must be n x n");
    }
    require_psd(interferer_covs[i], "interferer covariance");
  }
}

CMatrix StatModel::z_matrix() const {
  CMatrix z = pilot_ext * r_cov * pilot_ext.adjoint() + s_cov;
  return hermitian_part(z);
}

CVector StatModel::apply_z(const CVector& v) const {
  CVector out = pilot_ext * (r_cov * (pilot_ext.adjoint() * v));
  out.noalias() += s_cov * v;
  return out;
}

CVector StatModel::deviation(const CVector& y) const {
  if (y.size() != dims.m()) {
    throw Error(ErrorCode::ShapeError, "observation length must equal b * n_r");
  }
  return y - pilot_ext * h_mean - n_mean;
}

std::optional<double> StatModel::identity_pilot_amplitude() const {
  if (pilot.rows() != pilot.cols()) {
    return std::nullopt;
  }
  const Complex p0 = pilot(0, 0);
  if (!(p0.real() > 0.0) || p0.imag() != 0.0) {
    return std::nullopt;
  }
  CMatrix expected = p0 * CMatrix::Identity(pilot.rows(), pilot.cols());
  if ((pilot - expected).norm() > 1e-14 * std::abs(p0) * static_cast<double>(pilot.rows())) {
    return std::nullopt;
  }
  return p0.real();
}

void StatModel::validate() const {
  dims.validate();
  const Index m = dims.m();
  const Index n = dims.n();
  if (h_mean.size() != n || r_cov.rows() != n || r_cov.cols() != n || n_mean.size() != m ||
      s_cov.rows() != m || s_cov.cols() != m || pilot.rows() != dims.n_t ||
      pilot.cols() != dims.b || pilot_ext.rows() != m || pilot_ext.cols() != n) {
    throw Error(ErrorCode::ShapeError, "statistical model dimensions are inconsistent");
  }
  require_psd(r_cov, "channel covariance");
  Eigen::LLT<CMatrix> llt(s_cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "disturbance covariance must be positive definite");
  }
}

CMatrix identity_pilot(const Dims& dims, double pilot_power) {
  if (!(pilot_power > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "pilot power must be positive");
  }
  if (dims.b != dims.n_t) {
    throw Error(ErrorCode::PilotShapeMismatch, "identity pilot requires b == n_t");
  }
  CMatrix out = std::sqrt(pilot_power) * CMatrix::Identity(dims.n_t, dims.b);
  return out;
}

CMatrix extend_pilot(const CMatrix& pilot, Index n_r) {
  return kronecker(pilot.transpose(), CMatrix::Identity(n_r, n_r));
}

StatModel build_stat_model(const Dims& dims, CVector h_mean, CMatrix r_cov, CVector n_mean,
                           const ContaminationSpec& contamination, double pilot_power) {
  dims.validate();
  const Index n = dims.n();
  const Index m = dims.m();
  if (r_cov.rows() != n || r_cov.cols() != n) {
    throw Error(ErrorCode::ShapeError, "channel covariance must be n x n");
  }
  require_psd(r_cov, "channel covariance");
  contamination.validate(n);

  StatModel model;
  model.dims = dims;
  model.pilot = identity_pilot(dims, pilot_power);
  model.pilot_ext = extend_pilot(model.pilot, dims.n_r);
  model.h_mean = std::move(h_mean);
  model.n_mean = std::move(n_mean);
  model.r_cov = hermitian_part(r_cov);

  CMatrix s = contamination.noise_var * CMatrix::Identity(m, m);
  if (!contamination.interferer_covs.empty()) {
    const CMatrix sum = contamination.weighted_sum(n);
    s += model.pilot_ext * sum * model.pilot_ext.adjoint();
  }
  model.s_cov = hermitian_part(s);
  model.validate();
  return model;
}

StatModel make_stat_model(const Dims& dims, CVector h_mean, CMatrix r_cov, CVector n_mean,
                          CMatrix s_cov, CMatrix pilot) {
  dims.validate();
  StatModel model;
  model.dims = dims;
  model.h_mean = std::move(h_mean);
  model.r_cov = hermitian_part(r_cov);
  model.n_mean = std::move(n_mean);
  model.s_cov = hermitian_part(s_cov);
  if (pilot.rows() != dims.n_t || pilot.cols() != dims.b) {
    throw Error(ErrorCode::PilotShapeMismatch, "pilot must be n_t x b");
  }
  model.pilot = std::move(pilot);
  model.pilot_ext = extend_pilot(model.pilot, dims.n_r);
  if (hermitian_defect(r_cov) > 1e-10 || hermitian_defect(s_cov) > 1e-10) {
    throw Error(ErrorCode::NotPositiveSemiDefinite, "covariances must be Hermitian");
  }
  model.validate();
  return model;
}

GaussianSampler::GaussianSampler(CVector mean, const CMatrix& cov)
    : mean_(std::move(mean)), factor_(psd_factor(cov)) {
  if (factor_.rows() != mean_.size()) {
    throw Error(ErrorCode::ShapeError, "mean and covariance sizes differ");
  }
}

CVector GaussianSampler::operator()(RngStream& rng) const {
  const CVector z = rng.complex_normal(factor_.cols());
  CVector out = mean_;
  out.noalias() += factor_ * z;
  return out;
}

CVector sample_gaussian(const CVector& mean, const CMatrix& cov, RngStream& rng) {
  return GaussianSampler(mean, cov)(rng);
}

Observation observe(const StatModel& model, const CVector& h, const CVector& noise) {
  if (h.size() != model.dims.n() || noise.size() != model.dims.m()) {
    throw Error(ErrorCode::ShapeError, "channel or noise length does not match the model");
  }
  Observation obs;
  obs.y = model.pilot_ext * h + noise;
  obs.d = model.deviation(obs.y);
  return obs;
}

}  // namespace peach
