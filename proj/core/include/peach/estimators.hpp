#pragma once

#include <functional>
#include <memory>

#include "peach/linalg.hpp"
#include "peach/model.hpp"

namespace peach {

// ---------------------------------------------------------------------------
// Exact baselines

/// h_mean + R P~^H (P~ R P~^H + S)^{-1} d.
CVector mmse_estimate(const StatModel& model, const CVector& y);

/// tr(R - R P~^H (P~ R P~^H + S)^{-1} P~ R); equals tr((R^-1 + P~^H S^-1 P~)^-1)
/// whenever R is invertible, and stays defined when it is not.
double mmse_mse(const StatModel& model);

/// (P~^H S^-1 P~)^-1 P~^H S^-1 (y - n_mean). Throws RankDeficientPilot.
CVector mvu_estimate(const StatModel& model, const CVector& y);

/// tr((P~^H S^-1 P~)^-1).
double mvu_variance(const StatModel& model);

/// Per-coefficient MMSE after zeroing the off-diagonal parts of R and S.
/// Needs the sqrt(P_t) * I pilot; throws UnsupportedPilot otherwise.
CVector diag_estimate(const StatModel& model, const CVector& y);

/// sum_j r_j s_j / (s_j + P_t r_j), i.e. tr((R_diag^-1 + P_t S_diag^-1)^-1) with
/// zero-variance coefficients contributing nothing.
double diag_mse(const StatModel& model);

/// MSE of any affine estimator h^ = offset + gain * y under `model`.
///
/// Used to score estimators built from mismatched statistics against the
/// true ones.
double affine_estimator_mse(const StatModel& model, const CMatrix& gain, const CVector& offset);

/// MSE of h^ = h_mean + gain * d.
double linear_estimator_mse(const StatModel& model, const CMatrix& gain);

// ---------------------------------------------------------------------------
// Scaling rules

/// 2 / (lambda_max + lambda_min): minimizes the spectral radius of I - alpha z.
double alpha_optimal(const CMatrix& z, EigenStrategy strategy = EigenStrategy::Exact);

/// 2 / tr(z). Always inside the convergence region since tr(z) >= lambda_max.
double alpha_trace(const CMatrix& z);

/// Default W-PEACH scaling 1 / lambda_max(z), or 1 / tr(z) with `Gershgorin`
/// and trace-style surrogates for large problems.
double alpha_w_default(const CMatrix& z, EigenStrategy strategy = EigenStrategy::Exact);

/// Throws DivergentExpansion unless 0 < alpha < 2 / lambda_max(z).
void check_expansion(const CMatrix& z, double alpha);

// ---------------------------------------------------------------------------
// Polynomial-expansion estimators

enum class PolyKind { Peach, WPeach, MvuPeach, MvuWPeach };

/// A prepared polynomial estimator: degree, scaling, and per-term weights.
///
/// For the unweighted kinds `weights` is all ones and every term carries
/// `alpha`; weighted kinds multiply term l by weights[l] * alpha^(l+1).
struct PolyEstimator {
  PolyKind kind = PolyKind::Peach;
  int degree = 0;
  double alpha = 1.0;
  CVector weights;
  double epsilon = 0.0;
  bool weights_regularized = false;

  static PolyEstimator peach(int degree, double alpha);
  static PolyEstimator wpeach(double alpha_w, CVector weights);
  static PolyEstimator mvu_peach(int degree, double alpha, double epsilon);
  static PolyEstimator mvu_wpeach(double alpha_w, CVector weights, double epsilon);

  void validate() const;
};

/// PEACH with alpha_optimal(z) (or 2 / tr(z) when `trace_alpha`), checked for
/// convergence.
PolyEstimator make_peach(const StatModel& model, int degree, bool trace_alpha = false);

/// W-PEACH with alpha_w = 1 / lambda_max(z) and MSE-optimal weights from
/// wpeach_optimal_spectral.
PolyEstimator make_wpeach(const StatModel& model, int degree);

/// h_mean + R P~^H sum_{l=0}^{L} alpha (I - alpha z)^l d, by matrix-vector recursion.
CVector peach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y);

/// Closed-form PEACH MSE (dense, analysis side).
double peach_mse(const StatModel& model, int degree, double alpha);

/// The (A, b) system whose solution gives the MSE-optimal W-PEACH weights.
struct WeightSystem {
  CMatrix a_mat;
  CVector b_vec;
  double alpha_w = 1.0;

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(b_vec.size()) - 1; }
};

/// A_ij = alpha^(i+j) tr(F^H z^(i+j-1) F), b_i = alpha^i tr(F^H z^(i-1) F),
/// i, j = 1..L+1. Powers are taken of (alpha z) to keep magnitudes bounded.
WeightSystem weight_system_from_moments(const CMatrix& f, const CMatrix& z, int degree,
                                        double alpha);

/// The moment system with F = P~ R and z = P~ R P~^H + S.
WeightSystem wpeach_weight_system(const StatModel& model, int degree, double alpha_w);

/// w = A^-1 b with the condition-number guard of guarded_hermitian_solve.
GuardedSolution wpeach_weights_optimal(const WeightSystem& ws);

/// h_mean + R P~^H sum_l w_l alpha_w^(l+1) z^l d, Horner recursion in (alpha_w z).
CVector wpeach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y);

/// tr(R) + w^H A w - b^H w - w^H b.
double wpeach_mse_general(const WeightSystem& ws, double trace_r, const CVector& w);
double wpeach_mse_general(const StatModel& model, int degree, double alpha_w, const CVector& w);

/// tr(R) - b^H A^-1 b.
double wpeach_mse_optimal(const WeightSystem& ws, double trace_r);

/// Spectral description of a moment system: eigenvalues lambda_k of z and
/// g_k = ||(U^H F)_k||^2, so that tr(F^H phi(z) F) = sum_k g_k phi(lambda_k).
struct SpectralMeasure {
  RVector lambda;
  RVector g;
  double trace_r = 0.0;
};

SpectralMeasure spectral_measure(const CMatrix& f, const CMatrix& z, double trace_r);
SpectralMeasure spectral_measure(const StatModel& model);

struct OptimalWeights {
  CVector weights;
  double mse = 0.0;
  int effective_degree = 0;  ///< highest nonzero weight index
};

/// MSE-optimal weights from the eigen-decomposition of z.
///
/// The MSE is MMSE + sum_k (t_k - s_k p(y_k))^2 with y_k = alpha_w lambda_k,
/// s_k = sqrt(g_k lambda_k), t_k = sqrt(g_k / lambda_k), so the weights solve a
/// weighted polynomial least-squares problem. Same minimizer as A w = b, but
/// solved by an extended-precision QR that never forms the Hankel matrix.
/// Degrees whose weights would sum past 1e10 in magnitude are left at zero,
/// since the estimator evaluates the monomial form in double precision; see
/// `effective_degree`.
OptimalWeights wpeach_optimal_spectral(const SpectralMeasure& sm, int degree, double alpha_w);

/// tr(R) - 2 Re sum g p(lambda) + sum g lambda |p(lambda)|^2 with
/// p(x) = sum_l w_l alpha^(l+1) x^l. Equals wpeach_mse_general without its
/// cancellation for large weights.
double wpeach_mse_spectral(const SpectralMeasure& sm, const CVector& w, double alpha_w);

/// Weights w_n = (-1)^n sum_{l=n}^{L} C(l, n) that make W-PEACH (alpha_w = alpha)
/// reproduce PEACH.
CVector peach_as_wpeach_weights(int degree);

/// Model with R := I / epsilon and zero channel mean; PEACH on it is MVU-PEACH.
StatModel mvu_substituted_model(const StatModel& model, double epsilon);

/// P~^H sum_l alpha (I - alpha (P~ P~^H + eps S))^l (y - n_mean), or the weighted
/// analogue for MvuWPeach.
CVector mvu_peach_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y);

/// Dense gain G with estimate = h_mean + G d (PEACH, W-PEACH) or G (y - n_mean)
/// (MVU kinds). Analysis side only.
CMatrix poly_gain(const StatModel& model, const PolyEstimator& est);

/// Dispatches on `est.kind`.
CVector poly_estimate(const StatModel& model, const PolyEstimator& est, const CVector& y);

// ---------------------------------------------------------------------------
// Prepared estimators for repeated use within one statistics epoch

using ChannelEstimator = std::function<CVector(const CVector& y)>;

ChannelEstimator make_mmse_estimator(const StatModel& model);
ChannelEstimator make_mvu_estimator(const StatModel& model);
ChannelEstimator make_diag_estimator(const StatModel& model);
ChannelEstimator make_poly_estimator(const StatModel& model, PolyEstimator est);

}  // namespace peach
