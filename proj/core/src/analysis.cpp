#include "peach/analysis.hpp"

#include <cmath>

#include "peach/linalg.hpp"

namespace peach {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Mmse:
      return "mmse";
    case EstimatorKind::Mvu:
      return "mvu";
    case EstimatorKind::Diagonal:
      return "diagonal";
    case EstimatorKind::Peach:
      return "peach";
    case EstimatorKind::WPeach:
      return "wpeach";
  }
  return "unknown";
}

namespace {

void require_square(const CMatrix& x, std::string_view what) {
  if (x.rows() != x.cols() || x.rows() == 0) {
    throw Error(ErrorCode::ShapeError, std::string(what) + " must be square and non-empty");
  }
}

// Optimal W-PEACH limit with F = R and z = z_limit.
double wpeach_limit(const CMatrix& r_cov, const CMatrix& z_limit, int degree, double alpha_w) {
  const SpectralMeasure sm = spectral_measure(r_cov, z_limit, r_cov.trace().real());
  if (!(alpha_w > 0.0)) {
    const double top = sm.lambda.maxCoeff();
    alpha_w = top > 0.0 ? 1.0 / top : 1.0;
  }
  return wpeach_optimal_spectral(sm, degree, alpha_w).mse;
}

}  // namespace

double peach_limit_mse(const CMatrix& r_cov, const CMatrix& z_limit, int degree) {
  const Spectrum spec = extreme_eigenvalues(z_limit);
  const double lambda = spec.max + spec.min;
  const double trace_r = r_cov.trace().real();
  if (!(lambda > 0.0)) {
    return trace_r;
  }
  const double step = 2.0 / lambda;
  const Index n = r_cov.rows();
  const CMatrix x = CMatrix::Identity(n, n) - step * z_limit;
  CMatrix b = CMatrix::Identity(n, n);
  for (int l = 0; l < degree; ++l) {
    b = CMatrix::Identity(n, n) + x * b;
  }
  b *= step;
  const CMatrix rb = r_cov * b;
  return trace_r + (rb * z_limit * rb.adjoint()).trace().real() -
         2.0 * (rb * r_cov).trace().real();
}

NoiseLimitedFloors floor_noise_limited(const CMatrix& r_cov, int degree, double alpha_w) {
  require_square(r_cov, "channel covariance");
  require_psd(r_cov, "channel covariance");
  NoiseLimitedFloors out;
  out.peach = peach_limit_mse(r_cov, r_cov, degree);
  out.wpeach = wpeach_limit(r_cov, r_cov, degree, alpha_w);
  return out;
}

ContaminatedFloors floor_contaminated(const CMatrix& r_cov, const CMatrix& sum_interf, int degree,
                                      double alpha_w) {
  require_square(r_cov, "channel covariance");
  if (sum_interf.rows() != r_cov.rows() || sum_interf.cols() != r_cov.cols()) {
    throw Error(ErrorCode::ShapeError, "interference sum must match the channel covariance");
  }
  require_psd(r_cov, "channel covariance");
  require_psd(sum_interf, "interference sum");

  const CMatrix z_limit = hermitian_part(r_cov + sum_interf);
  const Spectrum spec = extreme_eigenvalues(z_limit);
  if (!(spec.min > 1e-12 * spec.max)) {
    throw Error(ErrorCode::SingularLimit, "R + sum of interferer covariances is singular");
  }

  ContaminatedFloors out;
  const double trace_r = r_cov.trace().real();
  const CMatrix solved = hpd_solve(z_limit, r_cov);
  out.mmse = std::max(0.0, trace_r - (r_cov * solved).trace().real());

  double diag = 0.0;
  for (Index j = 0; j < r_cov.rows(); ++j) {
    const double r = r_cov(j, j).real();
    const double s = sum_interf(j, j).real();
    if (r > 0.0) {
      diag += r - r * r / (r + s);
    }
  }
  out.diagonal = diag;
  out.peach = peach_limit_mse(r_cov, z_limit, degree);
  out.wpeach = wpeach_limit(r_cov, z_limit, degree, alpha_w);
  out.mvu = sum_interf.trace().real();
  return out;
}

double sinr(double gamma, int k_interferers, double beta) {
  if (!(gamma >= 0.0) || !(beta >= 0.0) || k_interferers < 0) {
    throw Error(ErrorCode::InvalidConfig, "sinr needs gamma >= 0, beta >= 0, K >= 0");
  }
  return gamma / (1.0 + gamma * k_interferers * beta);
}

double normalized_mse(double mse, const CMatrix& r_cov) {
  const double trace_r = r_cov.trace().real();
  if (!(trace_r > 0.0)) {
    throw Error(ErrorCode::ZeroTraceError, "normalized MSE needs tr(R) > 0");
  }
  return mse / trace_r;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---------------------------------------------------------------------------

FlopModel FlopModel::from_times(const Dims& dims, int degree, double tau_s, double tau_c,
                                double t_tot) {
  FlopModel fm;
  fm.dims = dims;
  fm.degree = degree;
  fm.tau_s = tau_s;
  fm.tau_c = tau_c;
  fm.t_tot = t_tot;
  fm.q_ratio = tau_s / tau_c;
  fm.k_s = t_tot / tau_s;
  fm.k_c = t_tot / tau_c;
  fm.validate();
  return fm;
}

FlopModel FlopModel::from_q(const Dims& dims, int degree, double q) {
  return from_times(dims, degree, 1.0, 1.0 / q, 1.0);
}

void FlopModel::validate() const {
  dims.validate();
  if (degree < 0) {
    throw Error(ErrorCode::InvalidConfig, "degree must be nonnegative");
  }
  if (!(tau_s > 0.0) || !(tau_c > 0.0) || !(t_tot > 0.0) || !(q_ratio > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "coherence times must be positive");
  }
  if (!(k_s >= 0.0) || !(k_c >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "k_s and k_c must be nonnegative");
  }
}

double flops(EstimatorKind kind, const FlopModel& fm) {
  const double m = static_cast<double>(fm.dims.m());
  const double n = static_cast<double>(fm.dims.n());
  const double l = fm.degree;
  switch (kind) {
    case EstimatorKind::Mmse:
      return fm.k_c * (n * (2 * m - 1)) +
             fm.k_s * (m * m * m / 3 + (3 * n - 0.5) * m * m + (2 * n * n + 2 * n - 1.5) * m);
    case EstimatorKind::Mvu:
      return fm.k_c * (n * (2 * m - 1)) +
             fm.k_s * (m * m * m / 3 + 2 * n * m * m + (3 * n * n + n) * m + n * n * n / 3 -
                       0.5 * n * n - 0.5 * n);
    case EstimatorKind::Peach:
      return fm.k_c * (2 * l * m * m + ((4 * l + 2) * n - 2 * l) * m + 2 * (l + 1) * n * n -
                       2 * (l + 1) * n) +
             fm.k_s * (m * (2 * n - 1));
    case EstimatorKind::WPeach:
      return fm.k_c * (4 * l * m * m + (8 * l + 4) * m * n + (4 * l + 4) * n * n + m -
                       (4 * l + 3) * n + l * l * l / 3 + 3 * l * l + 3 * l + 4.0 / 3) +
             fm.k_s * (m * (2 * n - 1));
    default:
      break;
  }
  throw Error(ErrorCode::UnsupportedEstimator,
              "no FLOP model for estimator '" + std::string(to_string(kind)) + "'");
}

double flops_table(EstimatorKind kind, const FlopModel& fm) {
  if (fm.dims.b != fm.dims.n_t) {
    throw Error(ErrorCode::ShapeError, "table FLOP forms need b == n_t");
  }
  const double m = static_cast<double>(fm.dims.m());
  const double l = fm.degree;
  switch (kind) {
    case EstimatorKind::Mmse:
      return fm.k_c * (2 * m * m - m) + fm.k_s * (16.0 / 3 * m * m * m + 1.5 * m * m - 1.5 * m);
    case EstimatorKind::Mvu:
      return fm.k_c * (2 * m * m - m) + fm.k_s * (17.0 / 3 * m * m * m + 0.5 * m * m - 0.5 * m);
    case EstimatorKind::Peach:
      return fm.k_c * ((8 * l + 4) * m * m - (4 * l + 2) * m) + fm.k_s * (2 * m * m - m);
    case EstimatorKind::WPeach:
      return fm.k_c * ((16 * l + 8) * m * m - (4 * l + 2) * m + l * l * l / 3 + 3 * l * l +
                       3 * l + 4.0 / 3) +
             fm.k_s * (2 * m * m - m);
    default:
      break;
  }
  throw Error(ErrorCode::UnsupportedEstimator,
              "no FLOP model for estimator '" + std::string(to_string(kind)) + "'");
}

double crossover_m(EstimatorKind kind, double q, int degree) {
  if (!(q >= 0.0) || degree < 0) {
    throw Error(ErrorCode::InvalidConfig, "crossover needs q >= 0 and L >= 0");
  }
  const double l = degree;
  switch (kind) {
    case EstimatorKind::Peach:
      return q * (1.5 * l + 0.375);
    case EstimatorKind::WPeach:
      return q * (3.0 * l + 9.0 / 8.0);
    default:
      break;
  }
  throw Error(ErrorCode::UnsupportedEstimator, "crossover is defined for PEACH and W-PEACH only");
}

}  // namespace peach
