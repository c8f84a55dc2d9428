#include "peach/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "peach/adaptive.hpp"
#include "peach/analysis.hpp"
#include "peach/linalg.hpp"
#include "peach/rng.hpp"

namespace peach {

namespace {

Complex polar_pi(double magnitude, double phase_over_pi) {
  return std::polar(magnitude, phase_over_pi * std::numbers::pi);
}

// Stream ids outside the Monte Carlo trial range.
constexpr std::uint64_t kAdaptiveStream = 1ULL << 40;
constexpr std::uint64_t kProbeStream = (1ULL << 40) + 1;
constexpr std::uint64_t kShrinkageBase = 1ULL << 41;

std::vector<int> int_range(int first, int last, int step) {
  std::vector<int> out;
  for (int v = first; v <= last; v += step) {
    out.push_back(v);
  }
  return out;
}

ResultRow base_row(const ExperimentConfig& cfg, const Dims& dims, std::string estimator,
                   int degree, double beta, double gamma_db, double sweep_value) {
  ResultRow row;
  row.scenario = std::string(to_string(cfg.scenario));
  row.estimator = std::move(estimator);
  row.n_r = static_cast<int>(dims.n_r);
  row.n_t = static_cast<int>(dims.n_t);
  row.degree = degree;
  row.beta = beta;
  row.gamma_db = gamma_db;
  row.sweep_value = sweep_value;
  return row;
}

void attach_mc(ResultRow& row, const MonteCarloResult& mc, double trace_r) {
  row.nmse_montecarlo = mc.mse / trace_r;
  row.std_error = mc.std_error / trace_r;
}

struct Floors {
  double mmse = 0.0;
  double mvu = 0.0;
  double diagonal = 0.0;
  double peach = 0.0;
  double wpeach = 0.0;
};

Floors floors_for(const ExperimentConfig& cfg, const StatModel& model, double beta, int degree) {
  Floors f;
  if (beta == 0.0 || cfg.interferer_corr.empty()) {
    const NoiseLimitedFloors nl = floor_noise_limited(model.r_cov, degree);
    f.peach = nl.peach;
    f.wpeach = nl.wpeach;
    return f;
  }
  const ContaminatedFloors cf =
      floor_contaminated(model.r_cov, interference_sum(cfg, model.dims, beta), degree);
  f.mmse = cf.mmse;
  f.mvu = cf.mvu;
  f.diagonal = cf.diagonal;
  f.peach = cf.peach;
  f.wpeach = cf.wpeach;
  return f;
}

// Analytic (and optionally Monte Carlo) rows for the five estimators at one point.
void model_point_rows(const ExperimentConfig& cfg, const StatModel& model, int degree,
                      double beta, double gamma_db, double sweep_value,
                      std::vector<ResultRow>& out) {
  const double trace_r = model.r_cov.trace().real();
  const Floors floors = floors_for(cfg, model, beta, degree);

  const PolyEstimator peach_est = make_peach(model, degree);
  const PolyEstimator wpeach_est = make_wpeach(model, degree);
  const SpectralMeasure sm = spectral_measure(model);

  struct Entry {
    const char* name;
    double mse;
    double floor;
    ChannelEstimator estimator;
  };
  std::vector<Entry> entries;
  entries.push_back({"mmse", mmse_mse(model), floors.mmse, make_mmse_estimator(model)});
  entries.push_back({"mvu", mvu_variance(model), floors.mvu, make_mvu_estimator(model)});
  entries.push_back({"diagonal", diag_mse(model), floors.diagonal, make_diag_estimator(model)});
  entries.push_back({"peach", peach_mse(model, degree, peach_est.alpha), floors.peach,
                     make_poly_estimator(model, peach_est)});
  entries.push_back({"wpeach", wpeach_mse_spectral(sm, wpeach_est.weights, wpeach_est.alpha),
                     floors.wpeach, make_poly_estimator(model, wpeach_est)});

  for (const Entry& e : entries) {
    ResultRow row = base_row(cfg, model.dims, e.name, degree, beta, gamma_db, sweep_value);
    row.nmse_analytic = e.mse / trace_r;
    row.floor = e.floor / trace_r;
    if (cfg.monte_carlo) {
      attach_mc(row, run_monte_carlo(model, e.estimator, cfg.trials, cfg.seed, cfg.threads),
                trace_r);
    }
    out.push_back(std::move(row));
  }
}

void run_sweep_l(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  for (double beta : cfg.betas) {
    const StatModel model = desk_model(cfg, cfg.dims, cfg.gamma_db, beta);
    for (int l : cfg.l_list) {
      model_point_rows(cfg, model, l, beta, cfg.gamma_db, l, out);
    }
  }
}

void run_sweep_snr(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  for (double beta : cfg.betas) {
    for (double g : cfg.gamma_db_list) {
      const StatModel model = desk_model(cfg, cfg.dims, g, beta);
      model_point_rows(cfg, model, cfg.degree, beta, g, g, out);
    }
  }
}

void run_sweep_nr(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  for (double beta : cfg.betas) {
    for (int nr : cfg.nr_list) {
      const Dims dims{nr, cfg.dims.n_t, cfg.dims.b};
      const StatModel model = desk_model(cfg, dims, cfg.gamma_db, beta);
      model_point_rows(cfg, model, cfg.degree, beta, cfg.gamma_db, nr, out);
    }
  }
}

void run_adaptive(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  for (double beta : cfg.betas) {
    const StatModel model = desk_model(cfg, cfg.dims, cfg.gamma_db, beta);
    const double trace_r = model.r_cov.trace().real();
    const SpectralMeasure sm = spectral_measure(model);
    const double alpha_w = 1.0 / sm.lambda.maxCoeff();
    const OptimalWeights opt_w = wpeach_optimal_spectral(sm, cfg.degree, alpha_w);
    const CVector& w_opt = opt_w.weights;
    const double mse_opt = opt_w.mse;

    const GaussianSampler channel(model.h_mean, model.r_cov);
    const GaussianSampler noise(model.n_mean, model.s_cov);
    RngStream stream(cfg.seed, kAdaptiveStream);
    RngStream probes(cfg.seed, kProbeStream);
    auto draw = [&] { return observe(model, channel(stream), noise(stream)).y; };

    std::vector<CVector> warmup;
    warmup.reserve(static_cast<std::size_t>(cfg.window));
    for (int i = 0; i < cfg.window; ++i) {
      warmup.push_back(draw());
    }
    AdaptiveState state = adaptive_init(model, cfg.window, cfg.degree, alpha_w, warmup, probes);

    ChannelEstimator optimal =
        make_poly_estimator(model, PolyEstimator::wpeach(alpha_w, w_opt));
    std::optional<MonteCarloResult> optimal_mc;
    if (cfg.monte_carlo) {
      optimal_mc = run_monte_carlo(model, optimal, cfg.trials, cfg.seed, cfg.threads);
    }

    for (int t = 0; t <= cfg.stream_len; ++t) {
      if (t % cfg.report_every == 0 || t == cfg.stream_len) {
        ResultRow opt = base_row(cfg, model.dims, "wpeach", cfg.degree, beta, cfg.gamma_db, t);
        opt.nmse_analytic = mse_opt / trace_r;
        if (optimal_mc) {
          attach_mc(opt, *optimal_mc, trace_r);
        }
        out.push_back(std::move(opt));

        ResultRow row =
            base_row(cfg, model.dims, "wpeach-adaptive", cfg.degree, beta, cfg.gamma_db, t);
        row.nmse_analytic = wpeach_mse_spectral(sm, state.weights(), alpha_w) / trace_r;
        if (cfg.monte_carlo) {
          const ChannelEstimator approx =
              make_poly_estimator(model, PolyEstimator::wpeach(alpha_w, state.weights()));
          attach_mc(row, run_monte_carlo(model, approx, cfg.trials, cfg.seed, cfg.threads),
                    trace_r);
        }
        out.push_back(std::move(row));
      }
      if (t < cfg.stream_len) {
        state.update(draw());
      }
    }
  }
}

struct RunningStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  [[nodiscard]] double mean() const { return count > 0 ? sum / count : 0.0; }
  [[nodiscard]] double std_error() const {
    if (count < 2) {
      return 0.0;
    }
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

// True-statistics MSE of MMSE and W-PEACH built from a covariance estimate.
std::pair<double, double> mismatched_mse(const StatModel& truth, const CMatrix& r_hat,
                                         int degree) {
  StatModel assumed = truth;
  assumed.r_cov = hermitian_part(r_hat);
  const CMatrix z = assumed.z_matrix();
  const CMatrix mmse_gain = hpd_solve(z, assumed.pilot_ext * assumed.r_cov).adjoint();
  const double mmse = linear_estimator_mse(truth, mmse_gain);

  const CMatrix wp_gain = poly_gain(assumed, make_wpeach(assumed, degree));
  return {mmse, linear_estimator_mse(truth, wp_gain)};
}

void run_shrinkage(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  for (double beta : cfg.betas) {
    const StatModel model = desk_model(cfg, cfg.dims, cfg.gamma_db, beta);
    const double trace_r = model.r_cov.trace().real();
    const double mmse_true = mmse_mse(model);
    const double wpeach_true =
        wpeach_optimal_spectral(spectral_measure(model), cfg.degree,
                                alpha_w_default(model.z_matrix()))
            .mse;
    const GaussianSampler channel(CVector::Zero(model.dims.n()), model.r_cov);

    for (int count : cfg.sample_counts) {
      RunningStats mmse_shr, mmse_smp, wp_shr, wp_smp, kappa;
      for (int rep = 0; rep < cfg.shrinkage_reps; ++rep) {
        RngStream rng(cfg.seed, kShrinkageBase + (static_cast<std::uint64_t>(count) << 20) +
                                    static_cast<std::uint64_t>(rep));
        std::vector<CVector> samples;
        samples.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
          samples.push_back(channel(rng));
        }
        const ShrinkageEstimate est = shrinkage_covariance(samples);
        const auto [m_shr, w_shr] = mismatched_mse(model, est.c_hat, cfg.degree);
        const auto [m_smp, w_smp] = mismatched_mse(model, est.c_sample, cfg.degree);
        mmse_shr.add(m_shr / trace_r);
        mmse_smp.add(m_smp / trace_r);
        wp_shr.add(w_shr / trace_r);
        wp_smp.add(w_smp / trace_r);
        kappa.add(est.kappa);
      }

      auto emit = [&](const char* name, std::optional<RunningStats> stats, double exact) {
        ResultRow row = base_row(cfg, model.dims, name, cfg.degree, beta, cfg.gamma_db, count);
        if (stats) {
          row.nmse_analytic = stats->mean();
          row.std_error = stats->std_error();
        } else {
          row.nmse_analytic = exact / trace_r;
        }
        if (std::string_view(name).ends_with("shrinkage")) {
          row.kappa = kappa.mean();
        }
        out.push_back(std::move(row));
      };
      emit("mmse", std::nullopt, mmse_true);
      emit("mmse-shrinkage", mmse_shr, 0.0);
      emit("mmse-sample", mmse_smp, 0.0);
      emit("wpeach", std::nullopt, wpeach_true);
      emit("wpeach-shrinkage", wp_shr, 0.0);
      emit("wpeach-sample", wp_smp, 0.0);
    }
  }
}

void run_flops(const ExperimentConfig& cfg, std::vector<ResultRow>& out) {
  constexpr EstimatorKind kinds[] = {EstimatorKind::Mmse, EstimatorKind::Mvu,
                                     EstimatorKind::Peach, EstimatorKind::WPeach};
  for (double q : cfg.q_list) {
    for (int l : cfg.l_list) {
      for (int nr : cfg.nr_list) {
        const Dims dims{nr, cfg.dims.n_t, cfg.dims.b};
        const FlopModel fm = FlopModel::from_times(dims, l, cfg.tau_s, cfg.tau_s / q, cfg.t_tot);
        for (EstimatorKind kind : kinds) {
          ResultRow row = base_row(cfg, dims, std::string(to_string(kind)), l, 0.0, cfg.gamma_db,
                                   static_cast<double>(dims.m()));
          row.q = q;
          row.flops = flops(kind, fm) / cfg.t_tot;
          out.push_back(std::move(row));
        }
      }
    }
  }
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::SweepL:
      return "sweep-l";
    case Scenario::SweepSnr:
      return "sweep-snr";
    case Scenario::SweepNr:
      return "sweep-nr";
    case Scenario::Adaptive:
      return "adaptive";
    case Scenario::Shrinkage:
      return "shrinkage";
    case Scenario::Flops:
      return "flops";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::SweepL, Scenario::SweepSnr, Scenario::SweepNr, Scenario::Adaptive,
                     Scenario::Shrinkage, Scenario::Flops}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown scenario '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::defaults(Scenario s) {
  ExperimentConfig cfg;
  cfg.scenario = s;
  cfg.corr_t = polar_pi(0.4, -0.9349);
  cfg.corr_r = polar_pi(0.9, -0.9289);
  cfg.interferer_corr = {{polar_pi(0.35, -0.8537), polar_pi(0.9, -0.7464)},
                         {polar_pi(0.4, -0.4583), polar_pi(0.9, -0.2649)}};
  switch (s) {
    case Scenario::SweepL:
      cfg.l_list = int_range(0, 10, 1);
      break;
    case Scenario::SweepSnr:
      for (int g = -10; g <= 30; g += 5) {
        cfg.gamma_db_list.push_back(g);
      }
      cfg.degree = 10;
      break;
    case Scenario::SweepNr:
      cfg.nr_list = {10, 20, 40, 80};
      cfg.degree = 4;
      break;
    case Scenario::Adaptive:
      cfg.dims = Dims{3, 4, 4};
      cfg.degree = 4;
      cfg.betas = {0.0};
      cfg.trials = 2000;
      break;
    case Scenario::Shrinkage:
      cfg.dims = Dims{10, 4, 4};
      cfg.degree = 8;
      cfg.betas = {0.0};
      cfg.sample_counts = {10, 20, 40, 80, 160};
      cfg.monte_carlo = false;
      break;
    case Scenario::Flops:
      cfg.dims = Dims{10, 10, 10};
      cfg.q_list = {50.0, 100.0};
      cfg.l_list = {2, 4};
      cfg.nr_list = int_range(10, 200, 10);
      cfg.betas = {0.0};
      cfg.monte_carlo = false;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  dims.validate();
  if (trials < 1) {
    fail("trials must be >= 1");
  }
  if (!(noise_var > 0.0)) {
    fail("noise_var must be positive");
  }
  if (!std::isfinite(gamma_db)) {
    fail("gamma_db must be finite");
  }
  if (degree < 0) {
    fail("degree must be >= 0");
  }
  if (betas.empty()) {
    fail("betas must be non-empty");
  }
  for (double b : betas) {
    if (!(b >= 0.0)) {
      fail("betas must be >= 0");
    }
  }
  auto check_corr = [](Complex c) {
    if (!(std::abs(c) < 1.0)) {
      throw Error(ErrorCode::InvalidCorrelation, "correlation coefficient magnitude must be < 1");
    }
  };
  check_corr(corr_t);
  check_corr(corr_r);
  for (const auto& [t, r] : interferer_corr) {
    check_corr(t);
    check_corr(r);
  }
  for (int l : l_list) {
    if (l < 0) {
      fail("l_list entries must be >= 0");
    }
  }
  for (int nr : nr_list) {
    if (nr < 1) {
      fail("nr_list entries must be >= 1");
    }
  }
  if (scenario != Scenario::Flops && dims.b != dims.n_t) {
    throw Error(ErrorCode::PilotShapeMismatch, "identity pilot requires b == n_t");
  }

  switch (scenario) {
    case Scenario::SweepL:
      if (l_list.empty()) {
        fail("sweep-l needs a non-empty l_list");
      }
      break;
    case Scenario::SweepSnr:
      if (gamma_db_list.empty()) {
        fail("sweep-snr needs a non-empty gamma_db_list");
      }
      break;
    case Scenario::SweepNr:
      if (nr_list.empty()) {
        fail("sweep-nr needs a non-empty nr_list");
      }
      break;
    case Scenario::Adaptive:
      if (window < 1) {
        fail("window must be >= 1");
      }
      if (stream_len < 0 || report_every < 1) {
        fail("stream_len must be >= 0 and report_every >= 1");
      }
      break;
    case Scenario::Shrinkage:
      if (sample_counts.empty() || shrinkage_reps < 1) {
        fail("shrinkage needs sample_counts and shrinkage_reps >= 1");
      }
      for (int c : sample_counts) {
        if (c < 2) {
          fail("sample_counts entries must be >= 2");
        }
      }
      break;
    case Scenario::Flops:
      if (q_list.empty() || l_list.empty() || nr_list.empty()) {
        fail("flops needs q_list, l_list and nr_list");
      }
      for (double q : q_list) {
        if (!(q > 0.0)) {
          fail("q_list entries must be positive");
        }
      }
      if (!(t_tot > 0.0) || !(tau_s > 0.0)) {
        fail("t_tot and tau_s must be positive");
      }
      break;
  }
}

MonteCarloResult run_monte_carlo(const StatModel& model, const ChannelEstimator& estimator,
                                 int trials, std::uint64_t seed, unsigned threads) {
  if (trials < 1) {
    throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  }
  const GaussianSampler channel(model.h_mean, model.r_cov);
  const GaussianSampler noise(model.n_mean, model.s_cov);
  std::vector<double> errors(static_cast<std::size_t>(trials));

  auto work = [&](int first, int last) {
    for (int t = first; t < last; ++t) {
      RngStream rng(seed, static_cast<std::uint64_t>(t));
      const CVector h = channel(rng);
      const CVector n = noise(rng);
      const CVector y = model.pilot_ext * h + n;
      const CVector h_hat = estimator(y);
      if (h_hat.size() != h.size()) {
        throw Error(ErrorCode::ShapeError, "estimator output length does not match the channel");
      }
      errors[static_cast<std::size_t>(t)] = (h - h_hat).squaredNorm();
    }
  };

  unsigned count = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, static_cast<unsigned>(trials));
  if (count <= 1) {
    work(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(count);
    const int chunk = (trials + static_cast<int>(count) - 1) / static_cast<int>(count);
    for (unsigned i = 0; i < count; ++i) {
      const int first = static_cast<int>(i) * chunk;
      const int last = std::min(trials, first + chunk);
      pool.emplace_back([&, i, first, last] {
        try {
          work(first, last);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) {
      th.join();
    }
    for (const std::exception_ptr& f : failures) {
      if (f) {
        std::rethrow_exception(f);
      }
    }
  }

  double sum = 0.0;
  for (double e : errors) {
    sum += e;
  }
  MonteCarloResult out;
  out.trials = trials;
  out.mse = sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double e : errors) {
      ss += (e - out.mse) * (e - out.mse);
    }
    out.std_error = std::sqrt(ss / (trials - 1) / trials);
  }
  return out;
}

CMatrix interference_sum(const ExperimentConfig& cfg, const Dims& dims, double beta) {
  const Index n = dims.n();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& [t, r] : cfg.interferer_corr) {
    sum += exp_kronecker_covariance(dims.n_t, t, dims.n_r, r);
  }
  return hermitian_part(beta * sum);
}

StatModel desk_model(const ExperimentConfig& cfg, const Dims& dims, double gamma_db, double beta) {
  const Index n = dims.n();
  ContaminationSpec spec;
  spec.noise_var = cfg.noise_var;
  for (const auto& [t, r] : cfg.interferer_corr) {
    spec.interferer_covs.push_back(exp_kronecker_covariance(dims.n_t, t, dims.n_r, r));
    spec.betas.push_back(beta);
  }
  return build_stat_model(dims, CVector::Zero(n),
                          exp_kronecker_covariance(dims.n_t, cfg.corr_t, dims.n_r, cfg.corr_r),
                          CVector::Zero(dims.m()), spec, db_to_linear(gamma_db) * cfg.noise_var);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  switch (cfg.scenario) {
    case Scenario::SweepL:
      run_sweep_l(cfg, rows);
      break;
    case Scenario::SweepSnr:
      run_sweep_snr(cfg, rows);
      break;
    case Scenario::SweepNr:
      run_sweep_nr(cfg, rows);
      break;
    case Scenario::Adaptive:
      run_adaptive(cfg, rows);
      break;
    case Scenario::Shrinkage:
      run_shrinkage(cfg, rows);
      break;
    case Scenario::Flops:
      run_flops(cfg, rows);
      break;
  }
  // Generation order already groups by beta (or q, L) and ascends in the
  // sweep value; a stable sort keeps that explicit.
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.q != b.q) {
      return a.q < b.q;
    }
    if (a.beta != b.beta) {
      return a.beta < b.beta;
    }
    if (a.scenario == "flops" && a.degree != b.degree) {
      return a.degree < b.degree;
    }
    return a.sweep_value < b.sweep_value;
  });
  return rows;
}

}  // namespace peach
