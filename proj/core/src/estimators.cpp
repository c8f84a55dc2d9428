#include "peach/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace peach {

namespace {

void require_observation(const StatModel& model, const CVector& y) {
  if (y.size() != model.dims.m()) {
    throw Error(ErrorCode::ShapeError, "observation length must equal b * n_r");
  }
}

// Cholesky factor of S, applied as whitening for the MVU formulas.
struct Whitened {
  Eigen::LLT<CMatrix> s_llt;
  CMatrix normal;  // P~^H S^-1 P~
};

Whitened whiten(const StatModel& model) {
  Whitened w{Eigen::LLT<CMatrix>(model.s_cov), {}};
  if (w.s_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularCovariance, "disturbance covariance is not positive definite");
  }
  const CMatrix white_pilot = w.s_llt.matrixL().solve(model.pilot_ext);
  w.normal = hermitian_part(white_pilot.adjoint() * white_pilot);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(w.normal, Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 1e-12 * lambda.maxCoeff())) {
    throw Error(ErrorCode::RankDeficientPilot, "P~^H S^-1 P~ is singular (pilot too short?)");
  }
  return w;
}

// Gain U with h_mvu = U (y - n_mean).
CMatrix mvu_gain(const StatModel& model) {
  const Whitened w = whiten(model);
  const CMatrix s_inv_pilot = w.s_llt.solve(model.pilot_ext);
  return hpd_solve(w.normal, s_inv_pilot.adjoint());
}

struct DiagGains {
  RVector gain;  // per-coefficient multiplier on d
  double amplitude = 0.0;
};

DiagGains diag_gains(const StatModel& model) {
  const auto amplitude = model.identity_pilot_amplitude();
  if (!amplitude) {
    throw Error(ErrorCode::UnsupportedPilot,
                "diagonalized estimator needs the sqrt(P_t) * I pilot");
  }
  const double power = *amplitude * *amplitude;
  DiagGains out;
  out.amplitude = *amplitude;
  out.gain.resize(model.dims.n());
  for (Index j = 0; j < model.dims.n(); ++j) {
    const double r = model.r_cov(j, j).real();
    const double s = model.s_cov(j, j).real();
    out.gain(j) = *amplitude * r / (power * r + s);
  }
  return out;
}

// sum_{l=0}^{L} (I - alpha z)^l as a dense matrix.
CMatrix neumann_sum(const CMatrix& z, int degree, double alpha) {
  const Index dim = z.rows();
  const CMatrix x = CMatrix::Identity(dim, dim) - alpha * z;
  CMatrix acc = CMatrix::Identity(dim, dim);
  for (int l = 0; l < degree; ++l) {
    acc = CMatrix::Identity(dim, dim) + x * acc;
  }
  return acc;
}

// sum_l w_l alpha^(l+1) z^l as a dense matrix.
CMatrix weighted_poly(const CMatrix& z, const CVector& w, double alpha) {
  const Index dim = z.rows();
  const int degree = static_cast<int>(w.size()) - 1;
  CMatrix acc = w(degree) * CMatrix::Identity(dim, dim);
  for (int l = degree - 1; l >= 0; --l) {
    CMatrix next = (alpha * z) * acc;
    next.diagonal().array() += w(l);
    acc = std::move(next);
  }
  return alpha * acc;
}

// sum_{l=0}^{L} (I - alpha z)^l d, by v <- d + (v - alpha z v).
template <typename ApplyZ>
CVector neumann_apply(const CVector& d, int degree, double alpha, ApplyZ&& apply_z) {
  CVector v = d;
  for (int l = 0; l < degree; ++l) {
    CVector zv = apply_z(v);
    v = d + v - alpha * zv;
  }
  return v;
}

// sum_l w_l alpha^(l+1) z^l d, Horner in (alpha z).
template <typename ApplyZ>
CVector weighted_apply(const CVector& d, const CVector& w, double alpha, ApplyZ&& apply_z) {
  const int degree = static_cast<int>(w.size()) - 1;
  CVector u = w(degree) * d;
  for (int l = degree - 1; l >= 0; --l) {
    CVector zu = apply_z(u);
    u = w(l) * d + alpha * zu;
  }
  return alpha * u;
}

CMatrix mvu_z(const StatModel& model, double epsilon) {
  return hermitian_part(model.pilot_ext * model.pilot_ext.adjoint() + epsilon * model.s_cov);
}

}  // namespace

// ---------------------------------------------------------------------------

CVector mmse_estimate(const StatModel& model, const CVector& y) {
  const CVector d = model.deviation(y);
  const CVector x = hpd_solve(model.z_matrix(), d);
  return model.h_mean + model.r_cov * (model.pilot_ext.adjoint() * x);
}

double mmse_mse(const StatModel& model) {
  const CMatrix f = model.pilot_ext * model.r_cov;
  const CMatrix x = hpd_solve(model.z_matrix(), f);
  const double value = model.r_cov.trace().real() - (f.adjoint() * x).trace().real();
  return std::max(value, 0.0);
}

CVector mvu_estimate(const StatModel& model, const CVector& y) {
  require_observation(model, y);
  return mvu_gain(model) * (y - model.n_mean);
}

double mvu_variance(const StatModel& model) {
  const Whitened w = whiten(model);
  const Index n = model.dims.n();
  return hpd_solve(w.normal, CMatrix::Identity(n, n)).trace().real();
}

CVector diag_estimate(const StatModel& model, const CVector& y) {
  const DiagGains g = diag_gains(model);
  const CVector d = model.deviation(y);
  return model.h_mean + g.gain.cast<Complex>().cwiseProduct(d);
}

double diag_mse(const StatModel& model) {
  const auto amplitude = model.identity_pilot_amplitude();
  if (!amplitude) {
    throw Error(ErrorCode::UnsupportedPilot,
                "diagonalized estimator needs the sqrt(P_t) * I pilot");
  }
  const double power = *amplitude * *amplitude;
  double total = 0.0;
  for (Index j = 0; j < model.dims.n(); ++j) {
    const double r = model.r_cov(j, j).real();
    const double s = model.s_cov(j, j).real();
    if (r > 0.0) {
      total += r * s / (s + power * r);
    }
  }
  return total;
}

double affine_estimator_mse(const StatModel& model, const CMatrix& gain, const CVector& offset) {
  const Index n = model.dims.n();
  if (gain.rows() != n || gain.cols() != model.dims.m() || offset.size() != n) {
    throw Error(ErrorCode::ShapeError, "estimator gain does not match the model");
  }
  const CMatrix residual = CMatrix::Identity(n, n) - gain * model.pilot_ext;
  const double channel_part = (residual * model.r_cov * residual.adjoint()).trace().real();
  const double noise_part = (gain * model.s_cov * gain.adjoint()).trace().real();
  const CVector bias = residual * model.h_mean - offset - gain * model.n_mean;
  return channel_part + noise_part + bias.squaredNorm();
}

double linear_estimator_mse(const StatModel& model, const CMatrix& gain) {
  const CVector offset = model.h_mean - gain * (model.pilot_ext * model.h_mean + model.n_mean);
  return affine_estimator_mse(model, gain, offset);
}

// ---------------------------------------------------------------------------

double alpha_optimal(const CMatrix& z, EigenStrategy strategy) {
  const Spectrum s = extreme_eigenvalues(z, strategy);
  if (strategy == EigenStrategy::Exact && !(s.min > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "alpha_optimal needs a positive definite matrix");
  }
  if (!(s.max > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "alpha_optimal needs a positive definite matrix");
  }
  return 2.0 / (s.max + s.min);
}

double alpha_trace(const CMatrix& z) {
  const double tr = z.trace().real();
  if (!(tr > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "alpha_trace needs a positive trace");
  }
  return 2.0 / tr;
}

double alpha_w_default(const CMatrix& z, EigenStrategy strategy) {
  if (strategy == EigenStrategy::Gershgorin) {
    return 1.0 / extreme_eigenvalues(z, strategy).max;
  }
  const Spectrum s = extreme_eigenvalues(z, EigenStrategy::Exact);
  if (!(s.max > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "alpha_w needs a nonzero matrix");
  }
  return 1.0 / s.max;
}

void check_expansion(const CMatrix& z, double alpha) {
  const Spectrum s = extreme_eigenvalues(z);
  if (!(alpha > 0.0) || !(alpha * s.max < 2.0)) {
    throw Error(ErrorCode::DivergentExpansion,
                "alpha = " + std::to_string(alpha) + " violates 0 < alpha < 2 / lambda_max");
  }
}

// ---------------------------------------------------------------------------

PolyEstimator PolyEstimator::peach(int degree, double alpha) {
  PolyEstimator est;
  est.kind = PolyKind::Peach;
  est.degree = degree;
  est.alpha = alpha;
  est.weights = CVector::Ones(degree + 1);
  est.validate();
  return est;
}

PolyEstimator PolyEstimator::wpeach(double alpha_w, CVector weights) {
  PolyEstimator est;
  est.kind = PolyKind::WPeach;
  est.degree = static_cast<int>(weights.size()) - 1;
  est.alpha = alpha_w;
  est.weights = std::move(weights);
  est.validate();
  return est;
}

PolyEstimator PolyEstimator::mvu_peach(int degree, double alpha, double epsilon) {
  PolyEstimator est = peach(degree, alpha);
  est.kind = PolyKind::MvuPeach;
  est.epsilon = epsilon;
  est.validate();
  return est;
}

PolyEstimator PolyEstimator::mvu_wpeach(double alpha_w, CVector weights, double epsilon) {
  PolyEstimator est = wpeach(alpha_w, std::move(weights));
  est.kind = PolyKind::MvuWPeach;
  est.epsilon = epsilon;
  est.validate();
  return est;
}

void PolyEstimator::validate() const {
  if (degree < 0 || weights.size() != degree + 1) {
    throw Error(ErrorCode::ShapeError, "weights must have degree + 1 entries");
  }
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::DivergentExpansion, "alpha must be positive");
  }
  if ((kind == PolyKind::MvuPeach || kind == PolyKind::MvuWPeach) && !(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidRegularization, "epsilon must be positive");
  }
}

PolyEstimator make_peach(const StatModel& model, int degree, bool trace_alpha) {
  const CMatrix z = model.z_matrix();
  const double alpha = trace_alpha ? alpha_trace(z) : alpha_optimal(z);
  check_expansion(z, alpha);
  return PolyEstimator::peach(degree, alpha);
}

PolyEstimator make_wpeach(const StatModel& model, int degree) {
  const SpectralMeasure sm = spectral_measure(model);
  const double alpha_w = sm.lambda.maxCoeff() > 0.0 ? 1.0 / sm.lambda.maxCoeff() : 1.0;
  return PolyEstimator::wpeach(alpha_w, wpeach_optimal_spectral(sm, degree, alpha_w).weights);
}

CVector peach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y) {
  const CVector d = model.deviation(y);
  const CVector v =
      neumann_apply(d, est.degree, est.alpha, [&](const CVector& x) { return model.apply_z(x); });
  return model.h_mean + est.alpha * (model.r_cov * (model.pilot_ext.adjoint() * v));
}

double peach_mse(const StatModel& model, int degree, double alpha) {
  const CMatrix z = model.z_matrix();
  const CMatrix a_l = alpha * neumann_sum(z, degree, alpha);
  const CMatrix gain = model.r_cov * model.pilot_ext.adjoint() * a_l;
  const double value = model.r_cov.trace().real() + (gain * z * gain.adjoint()).trace().real() -
                       2.0 * (gain * model.pilot_ext * model.r_cov).trace().real();
  return value;
}

WeightSystem weight_system_from_moments(const CMatrix& f, const CMatrix& z, int degree,
                                        double alpha) {
  if (degree < 0) {
    throw Error(ErrorCode::ShapeError, "degree must be nonnegative");
  }
  const int count = 2 * degree + 2;
  RVector moments(count);  // tr(F^H (alpha z)^k F)
  CMatrix power_f = f;
  moments(0) = f.squaredNorm();
  for (int k = 1; k < count; ++k) {
    power_f = alpha * (z * power_f);
    moments(k) = (f.adjoint() * power_f).trace().real();
  }
  WeightSystem ws;
  ws.alpha_w = alpha;
  ws.a_mat.resize(degree + 1, degree + 1);
  ws.b_vec.resize(degree + 1);
  for (int i = 0; i <= degree; ++i) {
    ws.b_vec(i) = alpha * moments(i);
    for (int j = 0; j <= degree; ++j) {
      ws.a_mat(i, j) = alpha * moments(i + j + 1);
    }
  }
  return ws;
}

WeightSystem wpeach_weight_system(const StatModel& model, int degree, double alpha_w) {
  if (!(alpha_w > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "alpha_w must be positive");
  }
  return weight_system_from_moments(model.pilot_ext * model.r_cov, model.z_matrix(), degree,
                                    alpha_w);
}

GuardedSolution wpeach_weights_optimal(const WeightSystem& ws) {
  return guarded_hermitian_solve(ws.a_mat, ws.b_vec);
}

CVector wpeach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y) {
  const CVector d = model.deviation(y);
  const CVector p =
      weighted_apply(d, est.weights, est.alpha, [&](const CVector& x) { return model.apply_z(x); });
  return model.h_mean + model.r_cov * (model.pilot_ext.adjoint() * p);
}

double wpeach_mse_general(const WeightSystem& ws, double trace_r, const CVector& w) {
  if (w.size() != ws.b_vec.size()) {
    throw Error(ErrorCode::ShapeError, "weight vector length must be degree + 1");
  }
  // The optimal weights are large and alternate in sign; the quadratic form
  // cancels heavily, so accumulate it in extended precision.
  using LComplex = std::complex<long double>;
  long double quad = 0.0L;
  long double lin = 0.0L;
  for (Index i = 0; i < w.size(); ++i) {
    const LComplex wi = std::conj(LComplex(w(i)));
    LComplex row = 0.0L;
    for (Index j = 0; j < w.size(); ++j) {
      row += LComplex(ws.a_mat(i, j)) * LComplex(w(j));
    }
    quad += (wi * row).real();
    lin += (std::conj(LComplex(ws.b_vec(i))) * LComplex(w(i))).real();
  }
  return static_cast<double>(trace_r + quad - 2.0L * lin);
}

double wpeach_mse_general(const StatModel& model, int degree, double alpha_w, const CVector& w) {
  return wpeach_mse_general(wpeach_weight_system(model, degree, alpha_w),
                            model.r_cov.trace().real(), w);
}

double wpeach_mse_optimal(const WeightSystem& ws, double trace_r) {
  return trace_r - wpeach_weights_optimal(ws).b_dot_x;
}

SpectralMeasure spectral_measure(const CMatrix& f, const CMatrix& z, double trace_r) {
  if (z.rows() != z.cols() || f.rows() != z.rows()) {
    throw Error(ErrorCode::ShapeError, "spectral measure needs square z and F with matching rows");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(z));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveSemiDefinite, "eigendecomposition of z failed");
  }
  SpectralMeasure sm;
  sm.lambda = eig.eigenvalues();
  sm.g = (eig.eigenvectors().adjoint() * f).rowwise().squaredNorm();
  sm.trace_r = trace_r;
  return sm;
}

SpectralMeasure spectral_measure(const StatModel& model) {
  return spectral_measure(model.pilot_ext * model.r_cov, model.z_matrix(),
                          model.r_cov.trace().real());
}

OptimalWeights wpeach_optimal_spectral(const SpectralMeasure& sm, int degree, double alpha_w) {
  if (degree < 0) {
    throw Error(ErrorCode::ShapeError, "degree must be nonnegative");
  }
  if (!(alpha_w > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "alpha_w must be positive");
  }
  std::vector<double> ys, roots, targets;
  const double top = sm.lambda.cwiseAbs().maxCoeff();
  for (Index k = 0; k < sm.lambda.size(); ++k) {
    const double lam = sm.lambda(k);
    if (lam > 1e-14 * top && sm.g(k) > 0.0) {
      ys.push_back(alpha_w * lam);
      roots.push_back(std::sqrt(sm.g(k) * lam));
      targets.push_back(std::sqrt(sm.g(k) / lam));
    }
  }
  OptimalWeights out;
  out.weights = CVector::Zero(degree + 1);
  const Index count = static_cast<Index>(ys.size());

  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  // Scaled Vandermonde s_k y_k^l, one column per degree.
  LMatrix design(count, degree + 1);
  LVector rhs(count);
  for (Index k = 0; k < count; ++k) {
    long double v = roots[static_cast<std::size_t>(k)];
    for (int l = 0; l <= degree; ++l) {
      design(k, l) = v;
      v *= ys[static_cast<std::size_t>(k)];
    }
    rhs(k) = targets[static_cast<std::size_t>(k)];
  }

  // The estimator evaluates sum_l w_l (alpha z)^l in double precision; once
  // sum |w_l| grows past this, rounding outweighs the extra degree.
  constexpr long double kMaxCoefficientSum = 1e10L;
  RVector best = RVector::Zero(degree + 1);
  out.effective_degree = 0;
  long double best_residual = 0.0L;
  const int max_useful = static_cast<int>(std::min<Index>(degree, std::max<Index>(count - 1, 0)));
  for (int d = 0; d <= max_useful && count > 0; ++d) {
    LMatrix cols = design.leftCols(d + 1);
    LVector scale = cols.colwise().norm().transpose();
    for (int l = 0; l <= d; ++l) {
      if (scale(l) > 0.0L) cols.col(l) /= scale(l);
    }
    const LVector c = cols.colPivHouseholderQr().solve(rhs).cwiseQuotient(scale);
    if (!c.allFinite() || c.cwiseAbs().sum() / alpha_w > kMaxCoefficientSum) {
      break;
    }
    // Exact arithmetic never lets the residual grow with d; when it does, the
    // Vandermonde columns have run out of precision.
    const LVector used = c.cast<double>().cast<long double>();
    const long double residual = (rhs - design.leftCols(d + 1) * used).squaredNorm();
    if (d > 0 && residual > best_residual) {
      break;
    }
    best_residual = residual;
    best.setZero();
    best.head(d + 1) = c.cast<double>();
    out.effective_degree = d;
  }

  out.weights = (best / alpha_w).cast<Complex>();
  out.mse = wpeach_mse_spectral(sm, out.weights, alpha_w);
  return out;
}

double wpeach_mse_spectral(const SpectralMeasure& sm, const CVector& w, double alpha_w) {
  // Residual form: tr(R) - sum g / lambda is the MMSE, and each eigenvalue adds
  // (g / lambda) |1 - lambda p(lambda)|^2, so nothing cancels.
  const int degree = static_cast<int>(w.size()) - 1;
  double mse = sm.trace_r;
  for (Index k = 0; k < sm.lambda.size(); ++k) {
    const double lambda = sm.lambda(k);
    const double y = alpha_w * lambda;
    Complex p = w(degree);
    for (int l = degree - 1; l >= 0; --l) {
      p = p * y + w(l);
    }
    p *= alpha_w;
    if (lambda > 0.0) {
      mse += sm.g(k) / lambda * (std::norm(1.0 - lambda * p) - 1.0);
    } else {
      mse -= 2.0 * sm.g(k) * p.real();
    }
  }
  return mse;
}

CVector peach_as_wpeach_weights(int degree) {
  if (degree < 0) {
    throw Error(ErrorCode::ShapeError, "degree must be nonnegative");
  }
  // Pascal's triangle row by row; binom[n] holds C(l, n) for the current l.
  std::vector<double> binom(static_cast<std::size_t>(degree) + 1, 0.0);
  std::vector<double> sums(static_cast<std::size_t>(degree) + 1, 0.0);
  binom[0] = 1.0;
  for (int l = 0; l <= degree; ++l) {
    if (l > 0) {
      for (int n = l; n >= 1; --n) {
        binom[n] += binom[n - 1];
      }
    }
    for (int n = 0; n <= l; ++n) {
      sums[n] += binom[n];
    }
  }
  CVector w(degree + 1);
  for (int n = 0; n <= degree; ++n) {
    w(n) = (n % 2 == 0 ? 1.0 : -1.0) * sums[n];
  }
  return w;
}

StatModel mvu_substituted_model(const StatModel& model, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidRegularization, "epsilon must be positive");
  }
  StatModel out = model;
  const Index n = model.dims.n();
  out.r_cov = CMatrix::Identity(n, n) / epsilon;
  out.h_mean = CVector::Zero(n);
  return out;
}

CVector mvu_peach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y) {
  require_observation(model, y);
  if (!(est.epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidRegularization, "epsilon must be positive");
  }
  const CVector centered = y - model.n_mean;
  auto apply = [&](const CVector& x) -> CVector {
    CVector out = model.pilot_ext * (model.pilot_ext.adjoint() * x);
    out.noalias() += est.epsilon * (model.s_cov * x);
    return out;
  };
  if (est.kind == PolyKind::MvuPeach) {
    const CVector v = neumann_apply(centered, est.degree, est.alpha, apply);
    return est.alpha * (model.pilot_ext.adjoint() * v);
  }
  if (est.kind == PolyKind::MvuWPeach) {
    return model.pilot_ext.adjoint() * weighted_apply(centered, est.weights, est.alpha, apply);
  }
  throw Error(ErrorCode::UnsupportedEstimator, "mvu_peach_estimate needs an MVU polynomial kind");
}

CMatrix poly_gain(const StatModel& model, const PolyEstimator& est) {
  switch (est.kind) {
    case PolyKind::Peach: {
      const CMatrix z = model.z_matrix();
      return est.alpha * model.r_cov * model.pilot_ext.adjoint() *
             neumann_sum(z, est.degree, est.alpha);
    }
    case PolyKind::WPeach:
      return model.r_cov * model.pilot_ext.adjoint() *
             weighted_poly(model.z_matrix(), est.weights, est.alpha);
    case PolyKind::MvuPeach:
      return est.alpha * model.pilot_ext.adjoint() *
             neumann_sum(mvu_z(model, est.epsilon), est.degree, est.alpha);
    case PolyKind::MvuWPeach:
      return model.pilot_ext.adjoint() *
             weighted_poly(mvu_z(model, est.epsilon), est.weights, est.alpha);
  }
  throw Error(ErrorCode::UnsupportedEstimator, "unknown polynomial kind");
}

CVector poly_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y) {
  switch (est.kind) {
    case PolyKind::Peach: return peach_estimate(model, est, y);
    case PolyKind::WPeach: return wpeach_estimate(model, est, y);
    case PolyKind::MvuPeach:
    case PolyKind::MvuWPeach: return mvu_peach_estimate(model, est, y);
  }
  throw Error(ErrorCode::UnsupportedEstimator, "unknown polynomial kind");
}

// ---------------------------------------------------------------------------

ChannelEstimator make_mmse_estimator(const StatModel& model) {
  const CMatrix gain =
      model.r_cov * hpd_solve(model.z_matrix(), model.pilot_ext).adjoint();  // R P~^H z^-1
  const CVector offset = model.h_mean - gain * (model.pilot_ext * model.h_mean + model.n_mean);
  return [gain, offset](const CVector& y) -> CVector { return offset + gain * y; };
}

ChannelEstimator make_mvu_estimator(const StatModel& model) {
  const CMatrix gain = mvu_gain(model);
  const CVector offset = -(gain * model.n_mean);
  return [gain, offset](const CVector& y) -> CVector { return offset + gain * y; };
}

ChannelEstimator make_diag_estimator(const StatModel& model) {
  const DiagGains g = diag_gains(model);
  const CVector gain = g.gain.cast<Complex>();
  const CVector offset =
      model.h_mean - gain.cwiseProduct(model.pilot_ext * model.h_mean + model.n_mean);
  return [gain, offset](const CVector& y) -> CVector { return offset + gain.cwiseProduct(y); };
}

ChannelEstimator make_poly_estimator(const StatModel& model, PolyEstimator est) {
  est.validate();
  auto shared = std::make_shared<const StatModel>(model);
  return
      [shared, est = std::move(est)](const CVector& y) { return poly_estimate(*shared, est, y); };
}

}  // namespace peach
