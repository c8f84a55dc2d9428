#include "peach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace peach {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorCode::EmptyDimension: return "EmptyDimension";
    case ErrorCode::PilotShapeMismatch: return "PilotShapeMismatch";
    case ErrorCode::NotPositiveSemiDefinite: return "NotPositiveSemiDefinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::RankDeficientPilot: return "RankDeficientPilot";
    case ErrorCode::UnsupportedPilot: return "UnsupportedPilot";
    case ErrorCode::DivergentExpansion: return "DivergentExpansion";
    case ErrorCode::IllConditionedWeights: return "IllConditionedWeights";
    case ErrorCode::InvalidRegularization: return "InvalidRegularization";
    case ErrorCode::WindowSizeError: return "WindowSizeError";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::SingularLimit: return "SingularLimit";
    case ErrorCode::ZeroTraceError: return "ZeroTraceError";
    case ErrorCode::UnsupportedEstimator: return "UnsupportedEstimator";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

CMatrix hermitian_part(const CMatrix& x) {
  CMatrix out = 0.5 * (x + x.adjoint());
  return out;
}

double hermitian_defect(const CMatrix& x) {
  const double norm = x.norm();
  if (norm == 0.0) {
    return 0.0;
  }
  return (x - x.adjoint()).norm() / norm;
}

CMatrix diagonal_part(const CMatrix& x) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  out.diagonal() = x.diagonal();
  return out;
}

Spectrum extreme_eigenvalues(const CMatrix& x, EigenStrategy strategy) {
  if (x.rows() == 0 || x.rows() != x.cols()) {
    throw Error(ErrorCode::ShapeError, "extreme_eigenvalues needs a non-empty square matrix");
  }
  if (strategy == EigenStrategy::Gershgorin) {
    Spectrum s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Index i = 0; i < x.rows(); ++i) {
      const double center = x(i, i).real();
      const double radius = x.row(i).cwiseAbs().sum() - std::abs(x(i, i));
      s.min = std::min(s.min, center - radius);
      s.max = std::max(s.max, center + radius);
    }
    s.min = std::max(s.min, 0.0);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(x, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  return {values.minCoeff(), values.maxCoeff()};
}

void require_psd(const CMatrix& x, std::string_view what) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::ShapeError, std::string(what) + " must be square");
  }
  if (x.rows() == 0) {
    return;
  }
  if (hermitian_defect(x) > 1e-10) {
    throw Error(ErrorCode::NotPositiveSemiDefinite, std::string(what) + " is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(x), Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-10 * top) {
    throw Error(ErrorCode::NotPositiveSemiDefinite,
                std::string(what) + " has a negative eigenvalue");
  }
}

CMatrix psd_factor(const CMatrix& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::ShapeError, "covariance must be square");
  }
  const Index dim = cov.rows();
  if (dim == 0 || cov.isZero(0.0)) {
    return CMatrix::Zero(dim, dim);
  }
  if (hermitian_defect(cov) > 1e-10) {
    throw Error(ErrorCode::NotPositiveSemiDefinite, "covariance is not Hermitian");
  }
  const CMatrix herm = hermitian_part(cov);

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const RVector& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  const double lowest = lambda.minCoeff();
  if (lowest < -1e-10 * top) {
    throw Error(ErrorCode::NotPositiveSemiDefinite, "covariance has a negative eigenvalue");
  }
  if (lowest > 1e-12 * top) {
    Eigen::LLT<CMatrix> llt(herm);
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
  }
  const RVector root = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

CMatrix hpd_solve(const CMatrix& x, const CMatrix& rhs) {
  Eigen::LLT<CMatrix> llt(hermitian_part(x));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularCovariance, "matrix is not numerically positive definite");
  }
  CMatrix out = llt.solve(rhs);
  if (!out.allFinite()) {
    throw Error(ErrorCode::SingularCovariance, "solve produced non-finite values");
  }
  return out;
}

GuardedSolution guarded_hermitian_solve(const CMatrix& a, const CVector& b, double max_condition) {
  if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
    throw Error(ErrorCode::ShapeError, "weight system dimensions disagree");
  }
  const CMatrix herm = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  const RVector& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  const double bottom = lambda.cwiseAbs().minCoeff();
  if (!(top > 0.0) || !std::isfinite(top)) {
    throw Error(ErrorCode::IllConditionedWeights, "weight matrix is zero or non-finite");
  }

  GuardedSolution sol;
  sol.condition = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
  CMatrix system = herm;
  if (sol.condition > max_condition) {
    const double delta = 1e-12 * herm.trace().real() / static_cast<double>(herm.rows());
    system.diagonal().array() += delta;
    sol.regularized = true;
  }
  using LComplex = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;
  // LDLT handles the indefinite matrices that sample approximations can produce.
  const Eigen::LDLT<LMatrix> ldlt(system.cast<LComplex>());
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::IllConditionedWeights, "factorization failed");
  }
  const LVector b_ext = b.cast<LComplex>();
  const LVector x_ext = ldlt.solve(b_ext);
  sol.x = x_ext.cast<Complex>();
  if (!sol.x.allFinite()) {
    throw Error(ErrorCode::IllConditionedWeights, "solution is not finite");
  }
  sol.b_dot_x = static_cast<double>(b_ext.dot(x_ext).real());
  return sol;
}

}  // namespace peach
