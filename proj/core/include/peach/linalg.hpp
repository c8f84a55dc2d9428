#pragma once

#include "peach/types.hpp"

namespace peach {

/// Returns (X + X^H) / 2.
CMatrix hermitian_part(const CMatrix& x);

/// ||X - X^H||_F / ||X||_F, or 0 for the zero matrix.
double hermitian_defect(const CMatrix& x);

/// Zeroes every off-diagonal entry.
CMatrix diagonal_part(const CMatrix& x);

struct Spectrum {
  double min = 0.0;
  double max = 0.0;
};

enum class EigenStrategy {
  Exact,       ///< full Hermitian eigendecomposition
  Gershgorin,  ///< disc bounds; cheap, conservative
};

/// Extreme eigenvalues of a Hermitian matrix.
///
/// With `Gershgorin` the result brackets the spectrum: `max` is an upper bound
/// and `min` a lower bound (clamped at zero, since all inputs here are PSD).
Spectrum extreme_eigenvalues(const CMatrix& x, EigenStrategy strategy = EigenStrategy::Exact);

/// Throws NotPositiveSemiDefinite unless x is Hermitian (within 1e-10 relative)
/// with smallest eigenvalue >= -1e-10 * ||x||_2.
void require_psd(const CMatrix& x, std::string_view what);

/// Factor F with F F^H = cov.
///
/// Cholesky first; when that fails or the smallest eigenvalue is within the
/// semidefinite band, falls back to V * sqrt(max(lambda, 0)).
CMatrix psd_factor(const CMatrix& cov);

/// Solves X Y = B for Hermitian positive definite X. Throws SingularCovariance.
CMatrix hpd_solve(const CMatrix& x, const CMatrix& rhs);

struct GuardedSolution {
  CVector x;
  double b_dot_x = 0.0;  ///< Re(b^H x), accumulated before x is rounded to double
  double condition = 1.0;
  bool regularized = false;
};

/// Hermitian solve with a condition-number guard.
///
/// If cond(A) > `max_condition`, solves (A + delta I) x = b with
/// delta = 1e-12 * tr(A) / dim and sets `regularized`. The factorization
/// runs in extended precision: the moment matrices of the weight system
/// routinely reach condition numbers near 1e12. Throws
/// IllConditionedWeights if even the regularized system is unusable.
GuardedSolution guarded_hermitian_solve(const CMatrix& a, const CVector& b,
                                        double max_condition = 1e12);

}  // namespace peach
