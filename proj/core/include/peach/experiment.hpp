#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peach/estimators.hpp"
#include "peach/model.hpp"

namespace peach {

enum class Scenario { SweepL, SweepSnr, SweepNr, Adaptive, Shrinkage, Flops };

std::string_view to_string(Scenario s);

/// Accepts the CLI spelling ("sweep-l", ...). Throws InvalidConfig.
Scenario parse_scenario(std::string_view name);

struct ExperimentConfig {
  Scenario scenario = Scenario::SweepL;
  Dims dims{20, 4, 4};
  double noise_var = 1.0;
  double gamma_db = 5.0;               ///< fixed SNR unless sweeping it
  std::vector<double> gamma_db_list;   ///< sweep-snr
  int degree = 10;                     ///< fixed L unless sweeping it
  std::vector<int> l_list;             ///< sweep-l, flops
  std::vector<int> nr_list;            ///< sweep-nr, flops
  std::vector<double> betas{0.0, 0.1, 1.0};
  Complex corr_t;                      ///< channel, transmit side
  Complex corr_r;                      ///< channel, receive side
  std::vector<std::pair<Complex, Complex>> interferer_corr;  ///< (transmit, receive)
  int trials = 1000;
  bool monte_carlo = true;
  std::uint64_t seed = 1;
  unsigned threads = 0;                ///< 0: hardware concurrency
  int window = 100;                    ///< adaptive T
  int stream_len = 200;                ///< adaptive updates after warmup
  int report_every = 10;
  std::vector<int> sample_counts;      ///< shrinkage N
  int shrinkage_reps = 20;
  std::vector<double> q_list;          ///< flops
  double t_tot = 5.0;
  double tau_s = 5.0;
  std::string out_path;

  /// Per-scenario defaults at desk scale.
  static ExperimentConfig defaults(Scenario s);

  /// Throws InvalidConfig (or InvalidCorrelation / EmptyDimension).
  void validate() const;
};

struct ResultRow {
  std::string scenario;
  std::string estimator;
  int n_r = 0;
  int n_t = 0;
  int degree = 0;
  double beta = 0.0;
  double gamma_db = 0.0;
  std::optional<double> q;
  double sweep_value = 0.0;
  std::optional<double> nmse_analytic;
  std::optional<double> nmse_montecarlo;
  std::optional<double> std_error;
  std::optional<double> floor;
  std::optional<double> flops;
  std::optional<double> kappa;
};

struct MonteCarloResult {
  double mse = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Averages ||h - h^||^2 over `trials` draws of (h, n) from `model`.
///
/// Trial t draws from RngStream(seed, t), so results do not depend on the
/// thread count. Throws ShapeError when the estimator output has the wrong size.
MonteCarloResult run_monte_carlo(const StatModel& model, const ChannelEstimator& estimator,
                                 int trials, std::uint64_t seed, unsigned threads = 0);

/// Contaminated Kronecker model: R = R_t (x) R_r, Sigma_i = beta Sigma_t,i (x) Sigma_r,i,
/// identity pilot with power gamma * noise_var.
StatModel desk_model(const ExperimentConfig& cfg, const Dims& dims, double gamma_db, double beta);

/// beta * sum_i Sigma_t,i (x) Sigma_r,i.
CMatrix interference_sum(const ExperimentConfig& cfg, const Dims& dims, double beta);

/// Rows are sorted by (estimator order, beta, sweep value) and deterministic
/// under a fixed seed.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace peach
