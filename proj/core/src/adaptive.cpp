#include "peach/adaptive.hpp"

#include <algorithm>

namespace peach {

AdaptiveState::AdaptiveState(const StatModel& stats, int window_len, int degree, double alpha_w,
                             std::span<const CVector> warmup, RngStream& probe_rng)
    : stats_(stats), window_len_(window_len), degree_(degree), alpha_w_(alpha_w) {
  if (window_len < 1 || warmup.size() != static_cast<std::size_t>(window_len)) {
    throw Error(ErrorCode::WindowSizeError, "warmup must hold exactly T observations");
  }
  if (degree < 0) {
    throw Error(ErrorCode::ShapeError, "degree must be nonnegative");
  }
  if (!(alpha_w > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "alpha_w must be positive");
  }

  moments_ = RVector::Zero(2 * degree + 1);
  const double inv_t = 1.0 / window_len;
  for (const CVector& y : warmup) {
    if (y.size() != stats_.dims.m()) {
      throw Error(ErrorCode::ShapeError, "warmup observation has the wrong length");
    }
    moments_ += inv_t * quadratic_forms(y);
    window_.push_back(y);
  }

  // b~_0: probe average of v^H P~ R^2 P~^H v = ||R P~^H v||^2.
  double probe_sum = 0.0;
  for (int i = 0; i < window_len; ++i) {
    const CVector v = probe_rng.complex_normal(stats_.dims.m());
    probe_sum += (stats_.r_cov * (stats_.pilot_ext.adjoint() * v)).squaredNorm();
  }
  probe_b0_ = alpha_w_ * inv_t * probe_sum;

  weights_ = CVector::Zero(degree + 1);
  solve();
}

RVector AdaptiveState::quadratic_forms(const CVector& y) const {
  const CVector qy =
      stats_.pilot_ext * (stats_.r_cov * (stats_.r_cov * (stats_.pilot_ext.adjoint() * y)));
  RVector out(2 * degree_ + 1);
  CVector chain = y;
  for (int k = 0; k <= 2 * degree_; ++k) {
    if (k > 0) {
      chain = alpha_w_ * stats_.apply_z(chain);
    }
    out(k) = qy.dot(chain).real();
  }
  return out;
}

CMatrix AdaptiveState::a_approx() const {
  CMatrix a(degree_ + 1, degree_ + 1);
  const double scale = alpha_w_ * alpha_w_;
  for (int i = 0; i <= degree_; ++i) {
    for (int j = 0; j <= degree_; ++j) {
      a(i, j) = scale * moments_(i + j);
    }
  }
  return a;
}

CVector AdaptiveState::b_approx() const {
  CVector b(degree_ + 1);
  b(0) = probe_b0_;
  for (int i = 1; i <= degree_; ++i) {
    b(i) = alpha_w_ * alpha_w_ * moments_(i - 1);
  }
  return b;
}

AdaptiveState::Update AdaptiveState::solve() {
  Update out;
  try {
    const GuardedSolution sol = guarded_hermitian_solve(a_approx(), b_approx());
    weights_ = sol.x;
    out.regularized = sol.regularized;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditionedWeights) {
      throw;
    }
    out.fallback = true;
  }
  out.weights = weights_;
  return out;
}

AdaptiveState::Update AdaptiveState::update(const CVector& y_new) {
  if (y_new.size() != stats_.dims.m()) {
    throw Error(ErrorCode::ShapeError, "observation has the wrong length");
  }
  const CVector& y_old = window_.front();
  moments_ += (quadratic_forms(y_new) - quadratic_forms(y_old)) / static_cast<double>(window_len_);
  window_.pop_front();
  window_.push_back(y_new);
  return solve();
}

AdaptiveState adaptive_init(const StatModel& stats, int window_len, int degree, double alpha_w,
                            std::span<const CVector> warmup, RngStream& probe_rng) {
  return AdaptiveState(stats, window_len, degree, alpha_w, warmup, probe_rng);
}

AdaptiveState::Update adaptive_update(AdaptiveState& state, const CVector& y_new,
                                      const CVector& y_old) {
  if (state.window().empty() || state.window().front().size() != y_old.size() ||
      state.window().front() != y_old) {
    throw Error(ErrorCode::WindowSizeError, "y_old is not the sample leaving the window");
  }
  return state.update(y_new);
}

// ---------------------------------------------------------------------------

namespace {

CMatrix sample_covariance(std::span<const CVector> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "shrinkage needs at least two samples");
  }
  const Index dim = samples.front().size();
  CMatrix c = CMatrix::Zero(dim, dim);
  for (const CVector& s : samples) {
    if (s.size() != dim) {
      throw Error(ErrorCode::ShapeError, "samples differ in length");
    }
    c.noalias() += s * s.adjoint();
  }
  c /= static_cast<double>(samples.size());
  return hermitian_part(c);
}

ShrinkageEstimate finish(CMatrix c_sample, double phi_s, double phi_d, double psi) {
  ShrinkageEstimate est;
  est.phi_sample = phi_s;
  est.phi_diag = phi_d;
  est.psi = psi;
  est.kappa = shrinkage_kappa(phi_s, phi_d, psi, c_sample.squaredNorm());
  est.c_hat = hermitian_part(est.kappa * diagonal_part(c_sample) + (1.0 - est.kappa) * c_sample);
  est.c_sample = std::move(c_sample);
  return est;
}

}  // namespace

double shrinkage_kappa(double phi_sample, double phi_diag, double psi, double scale) {
  const double denom = phi_sample + phi_diag - 2.0 * psi;
  if (!(denom > 1e-14 * scale)) {
    return 0.0;
  }
  return std::clamp((phi_sample - psi) / denom, 0.0, 1.0);
}

ShrinkageEstimate shrinkage_covariance(std::span<const CVector> samples) {
  CMatrix c_sample = sample_covariance(samples);
  const double count = static_cast<double>(samples.size());

  double phi_s = 0.0;
  double phi_s_diag = 0.0;
  for (const CVector& s : samples) {
    const CMatrix dev = s * s.adjoint() - c_sample;
    phi_s += dev.squaredNorm();
    phi_s_diag += dev.diagonal().squaredNorm();
  }
  phi_s /= count * count;
  phi_s_diag /= count * count;

  // Cross term: C_d and C_sample share their (unbiased) diagonal errors, so
  // psi = E||diag error||^2. The off-diagonal energy of C is the observed one
  // minus its estimated sampling noise.
  const double psi = phi_s_diag;
  const double off_sample = (c_sample - diagonal_part(c_sample)).squaredNorm();
  const double off_true = std::max(0.0, off_sample - (phi_s - phi_s_diag));
  const double phi_d = phi_s_diag + off_true;
  return finish(std::move(c_sample), phi_s, phi_d, psi);
}

ShrinkageEstimate shrinkage_covariance(std::span<const CVector> samples, const CMatrix& c_true) {
  CMatrix c_sample = sample_covariance(samples);
  if (c_true.rows() != c_sample.rows() || c_true.cols() != c_sample.cols()) {
    throw Error(ErrorCode::ShapeError, "true covariance size does not match the samples");
  }
  const CMatrix err_s = c_sample - c_true;
  const CMatrix err_d = diagonal_part(c_sample) - c_true;
  const double phi_s = err_s.squaredNorm();
  const double phi_d = err_d.squaredNorm();
  const double psi = (err_d.adjoint() * err_s).trace().real();
  return finish(std::move(c_sample), phi_s, phi_d, psi);
}

double shrinkage_loss(const CMatrix& c_sample, const CMatrix& c_true, double kappa) {
  return (kappa * diagonal_part(c_sample) + (1.0 - kappa) * c_sample - c_true).squaredNorm();
}

}  // namespace peach
