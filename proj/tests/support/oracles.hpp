#pragma once

// Test-side reference computations. Everything here uses dense inverses,
// explicit matrix powers and brute-force searches so that it shares no code
// path with the library under test.

#include <cstdint>
#include <random>

#include <peach/analysis.hpp>
#include <peach/model.hpp>
#include <peach/types.hpp>

namespace oracle {

using peach::CMatrix;
using peach::Complex;
using peach::CVector;
using peach::Index;

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Complex cnormal() {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(eng_);
    return {re, n(eng_)};
  }
  CVector cvec(Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }
  CMatrix cmat(Index r, Index c) {
    CMatrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = cnormal();
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

/// G G^H / cols + ridge I, Hermitian positive (semi)definite.
CMatrix random_psd(Rand& rng, Index n, Index cols, double ridge);

/// Random model with the sqrt(P_t) I pilot (b = n_t), random R, random PD S and
/// random means.
peach::StatModel random_model(Rand& rng, const peach::Dims& dims, double pilot_power);

/// Random model with a generic complex pilot (b >= n_t).
peach::StatModel random_model_general_pilot(Rand& rng, const peach::Dims& dims);

/// Explicit-inverse MMSE estimate.
CVector mmse_dense(const peach::StatModel& m, const CVector& y);

/// Explicit-inverse MVU estimate.
CVector mvu_dense(const peach::StatModel& m, const CVector& y);

/// MSE of h^ = offset + G y from the joint second moments of (h, y).
double affine_mse_joint(const peach::StatModel& m, const CMatrix& gain, const CVector& offset);

/// sum_{l=0}^{L} alpha (I - alpha z)^l with explicit powers.
CMatrix neumann_dense(const CMatrix& z, int degree, double alpha);

/// sum_l w_l alpha^(l+1) z^l with explicit powers.
CMatrix weighted_dense(const CMatrix& z, const CVector& w, double alpha);

/// The W-PEACH weight system, one trace per entry with explicit powers of z.
void weight_system_dense(const peach::StatModel& m, int degree, double alpha_w, CMatrix& a,
                         CVector& b);

/// Optimal W-PEACH MSE computed in a Chebyshev basis on [0, lambda_max(z)].
/// tr(R) - b^H A^{-1} b with a full-pivot LU in extended precision.
double weight_mse_closed_form(const CMatrix& a, const CVector& b, double trace_r);

double wpeach_optimal_mse_chebyshev(const peach::StatModel& m, int degree);

/// MSE of h^ = h_mean + G d, G = R P~^H * poly, written out with dense matrices.
double poly_mse_dense(const peach::StatModel& m, const CMatrix& poly);

/// w_n = (-1)^n sum_{l=n}^{L} C(l, n) by Pascal's triangle.
CVector binomial_weights(int degree);

/// FLOP counts typed from the B = N_t table with M = N.
double table_flops(peach::EstimatorKind kind, double m, double l, double k_c, double k_s);

/// kappa on a uniform grid of `points` values in [0, 1] minimizing
/// ||kappa C_d + (1 - kappa) C_sample - C||_F^2.
double kappa_grid(const CMatrix& c_sample, const CMatrix& c_true, int points, double* best_loss);

double frob2(const CMatrix& x);

}  // namespace oracle
