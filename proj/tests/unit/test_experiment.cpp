#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <peach/config.hpp>
#include <peach/estimators.hpp>
#include <peach/experiment.hpp>
#include <peach/report.hpp>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace peach;
using testing_util::code_of;
using testing_util::rel_err;

namespace {

const ResultRow* find_row(const std::vector<ResultRow>& rows, const std::string& est, double beta,
                          double sweep) {
  for (const ResultRow& r : rows) {
    if (r.estimator == est && r.beta == beta && r.sweep_value == sweep) return &r;
  }
  return nullptr;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

// --- Monte Carlo ------------------------------------------------------------

TEST(MonteCarlo, MmseWithinThreeStandardErrors) {
  oracle::Rand r(1);
  const StatModel m = oracle::random_model(r, Dims{6, 2, 2}, 2.0);  // m = 12
  const MonteCarloResult mc = run_monte_carlo(m, make_mmse_estimator(m), 20000, 7);
  EXPECT_EQ(mc.trials, 20000);
  EXPECT_LT(std::abs(mc.mse - mmse_mse(m)), 3.0 * mc.std_error);
}

TEST(MonteCarlo, OtherEstimatorsWithinThreeStandardErrors) {
  oracle::Rand r(2);
  const StatModel m = oracle::random_model(r, Dims{6, 2, 2}, 1.0);
  const PolyEstimator pe = make_peach(m, 3);
  const PolyEstimator we = make_wpeach(m, 4);
  const std::vector<std::pair<ChannelEstimator, double>> cases = {
      {make_mvu_estimator(m), mvu_variance(m)},
      {make_diag_estimator(m), diag_mse(m)},
      {make_poly_estimator(m, pe), peach_mse(m, 3, pe.alpha)},
      {make_poly_estimator(m, we), wpeach_mse_spectral(spectral_measure(m), we.weights, we.alpha)},
  };
  for (const auto& [est, expect] : cases) {
    const MonteCarloResult mc = run_monte_carlo(m, est, 20000, 11);
    EXPECT_LT(std::abs(mc.mse - expect), 3.0 * mc.std_error) << expect;
  }
}

TEST(MonteCarlo, ZeroChannelCovariance) {
  const Dims dims{3, 2, 2};
  const StatModel m = make_stat_model(dims, CVector::Ones(6), CMatrix::Zero(6, 6), CVector::Zero(6),
                                      CMatrix::Identity(6, 6), identity_pilot(dims, 1.0));
  const MonteCarloResult mc = run_monte_carlo(m, make_mmse_estimator(m), 500, 3);
  EXPECT_EQ(mc.mse, 0.0);
  EXPECT_EQ(mc.std_error, 0.0);
}

TEST(MonteCarlo, BinomialWPeachSameAsPeach) {
  oracle::Rand r(3);
  const StatModel m = oracle::random_model(r, Dims{3, 2, 2}, 2.0);
  const PolyEstimator pe = make_peach(m, 5);
  const PolyEstimator we = PolyEstimator::wpeach(pe.alpha, peach_as_wpeach_weights(5));
  const MonteCarloResult a = run_monte_carlo(m, make_poly_estimator(m, pe), 2000, 5);
  const MonteCarloResult b = run_monte_carlo(m, make_poly_estimator(m, we), 2000, 5);
  EXPECT_LT(rel_err(a.mse, b.mse), 1e-12);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResult) {
  oracle::Rand r(4);
  const StatModel m = oracle::random_model(r, Dims{3, 2, 2}, 2.0);
  const ChannelEstimator est = make_mmse_estimator(m);
  const MonteCarloResult one = run_monte_carlo(m, est, 999, 42, 1);
  const MonteCarloResult many = run_monte_carlo(m, est, 999, 42, 7);
  EXPECT_EQ(one.mse, many.mse);
  EXPECT_EQ(one.std_error, many.std_error);
}

TEST(MonteCarlo, ShapeMismatch) {
  oracle::Rand r(5);
  const StatModel m = oracle::random_model(r, Dims{3, 2, 2}, 2.0);
  const ChannelEstimator bad = [](const CVector&) { return CVector::Zero(3).eval(); };
  EXPECT_EQ(code_of([&] { run_monte_carlo(m, bad, 10, 1, 1); }), ErrorCode::ShapeError);
  EXPECT_EQ(code_of([&] { run_monte_carlo(m, bad, 10, 1, 4); }), ErrorCode::ShapeError);
}

// --- Scenarios --------------------------------------------------------------

TEST(SweepL, WPeachCloseToMmseByDegreeFour) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.monte_carlo = false;
  cfg.betas = {1.0};
  const auto rows = run_experiment(cfg);
  const double mmse = find_row(rows, "mmse", 1.0, 4)->nmse_analytic.value();
  const double wp = find_row(rows, "wpeach", 1.0, 4)->nmse_analytic.value();
  EXPECT_LT((wp - mmse) / mmse, 0.02);

  // Smallest degree whose gap to MMSE is below the W-PEACH gap at L = 4.
  const double gap = wp - mmse;
  int peach_l = -1;
  for (int l = 0; l <= 10; ++l) {
    if (find_row(rows, "peach", 1.0, l)->nmse_analytic.value() - mmse <= gap) {
      peach_l = l;
      break;
    }
  }
  EXPECT_TRUE(peach_l == -1 || peach_l > 4) << peach_l;
}

TEST(SweepL, OrderingHoldsAtEveryPoint) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.monte_carlo = false;
  const auto rows = run_experiment(cfg);
  for (double beta : cfg.betas) {
    for (int l : cfg.l_list) {
      const double mm = find_row(rows, "mmse", beta, l)->nmse_analytic.value();
      const double wp = find_row(rows, "wpeach", beta, l)->nmse_analytic.value();
      const double pe = find_row(rows, "peach", beta, l)->nmse_analytic.value();
      const double mv = find_row(rows, "mvu", beta, l)->nmse_analytic.value();
      EXPECT_LE(mm, wp + 1e-12);
      EXPECT_LE(wp, pe + 1e-12);
      EXPECT_LT(mm, mv);
    }
  }
}

TEST(SweepSnr, NoiseLimitedFloors) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepSnr);
  cfg.monte_carlo = false;
  cfg.betas = {0.0};
  const auto rows = run_experiment(cfg);
  EXPECT_LT(find_row(rows, "mmse", 0.0, 30)->nmse_analytic.value(), 0.01);
  EXPECT_LT(find_row(rows, "diagonal", 0.0, 30)->nmse_analytic.value(), 0.01);
  const ResultRow* pe = find_row(rows, "peach", 0.0, 30);
  EXPECT_LT(rel_err(pe->nmse_analytic.value(), pe->floor.value()), 0.05);
}

TEST(SweepSnr, ContaminatedRowsCarryFloors) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepSnr);
  cfg.monte_carlo = false;
  cfg.betas = {0.1};
  cfg.gamma_db_list = {0.0, 30.0};
  for (const ResultRow& r : run_experiment(cfg)) {
    ASSERT_TRUE(r.floor.has_value()) << r.estimator;
    EXPECT_GT(*r.floor, 0.0) << r.estimator;
    // These MSEs fall monotonically with pilot power, so the limit bounds them.
    // PEACH-type MSEs need not be monotone.
    if (r.estimator == "mmse" || r.estimator == "diagonal" || r.estimator == "mvu") {
      EXPECT_GE(*r.nmse_analytic, *r.floor * (1 - 1e-9)) << r.estimator;
    }
  }
}

TEST(SweepNr, InsensitiveToReceiveAntennas) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepNr);
  cfg.monte_carlo = false;
  const auto rows = run_experiment(cfg);
  for (const char* name : {"peach", "wpeach"}) {
    for (double beta : cfg.betas) {
      double lo = INFINITY, hi = 0.0;
      for (int nr : cfg.nr_list) {
        const double v = find_row(rows, name, beta, nr)->nmse_analytic.value();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      EXPECT_LT((hi - lo) / lo, 0.05) << name << " beta=" << beta;
    }
  }
}

TEST(Flops, ScenarioRowsPerSecond) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::Flops);
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), cfg.q_list.size() * cfg.l_list.size() * cfg.nr_list.size() * 4);
  for (const ResultRow& r : rows) {
    ASSERT_TRUE(r.flops && r.q);
    EXPECT_FALSE(r.nmse_analytic.has_value());
    const FlopModel fm = FlopModel::from_times(Dims{r.n_r, r.n_t, cfg.dims.b}, r.degree, cfg.tau_s,
                                               cfg.tau_s / *r.q, cfg.t_tot);
    const EstimatorKind kind = r.estimator == "mmse"    ? EstimatorKind::Mmse
                               : r.estimator == "mvu"   ? EstimatorKind::Mvu
                               : r.estimator == "peach" ? EstimatorKind::Peach
                                                        : EstimatorKind::WPeach;
    EXPECT_LT(rel_err(*r.flops, flops(kind, fm) / cfg.t_tot), 1e-15);
  }
}

TEST(Adaptive, ScenarioTracksOptimalWeights) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::Adaptive);
  cfg.monte_carlo = false;
  const auto rows = run_experiment(cfg);
  const ResultRow* opt = find_row(rows, "wpeach", 0.0, cfg.stream_len);
  const ResultRow* ada = find_row(rows, "wpeach-adaptive", 0.0, cfg.stream_len);
  ASSERT_TRUE(opt && ada);
  EXPECT_GE(*ada->nmse_analytic, *opt->nmse_analytic * (1 - 1e-9));
}

TEST(Shrinkage, ScenarioRows) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::Shrinkage);
  cfg.sample_counts = {20, 160};
  cfg.shrinkage_reps = 5;
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 12u);
  for (const ResultRow& r : rows) {
    EXPECT_EQ(r.kappa.has_value(), r.estimator.ends_with("shrinkage")) << r.estimator;
    if (r.kappa) {
      EXPECT_GE(*r.kappa, 0.0);
      EXPECT_LE(*r.kappa, 1.0);
    }
    if (r.estimator.starts_with("mmse-")) {
      EXPECT_GE(*r.nmse_analytic,
                find_row(rows, "mmse", 0.0, r.sweep_value)->nmse_analytic.value());
    }
  }
}

TEST(RunExperiment, DeterministicUnderSeed) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.l_list = {1, 3};
  cfg.betas = {0.1};
  cfg.trials = 300;
  cfg.dims = Dims{6, 2, 2};
  const std::string a = csv_of(run_experiment(cfg));
  cfg.threads = 3;
  const std::string b = csv_of(run_experiment(cfg));
  EXPECT_EQ(a, b);
  cfg.seed = 2;
  EXPECT_NE(a, csv_of(run_experiment(cfg)));
}

TEST(RunExperiment, RowsSortedBySweepValue) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.monte_carlo = false;
  cfg.l_list = {5, 0, 2};
  cfg.betas = {0.0};
  const auto rows = run_experiment(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_LE(rows[i - 1].sweep_value, rows[i].sweep_value);
}

TEST(RunExperiment, ValidationFailures) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.trials = 0;
  EXPECT_EQ(code_of([&] { run_experiment(cfg); }), ErrorCode::InvalidConfig);
  cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.l_list.clear();
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidConfig);
  cfg = ExperimentConfig::defaults(Scenario::SweepL);
  cfg.corr_r = 1.0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidCorrelation);
  cfg = ExperimentConfig::defaults(Scenario::SweepSnr);
  cfg.dims.b = 5;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::PilotShapeMismatch);
  EXPECT_EQ(code_of([] { parse_scenario("sweep-x"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(parse_scenario("sweep-nr"), Scenario::SweepNr);
}

// --- Config -----------------------------------------------------------------

TEST(Config, GlobalThenSectionOverrides) {
  std::istringstream in(R"(# comment
trials = 50
betas = 0, 0.5
seed = 9

[sweep-l]
l_list = 0:6:2
trials = 70

[sweep-snr]
trials = 80
gamma_db_list = -5:5:5
)");
  const ExperimentConfig l = parse_config(in, Scenario::SweepL, "test.cfg");
  EXPECT_EQ(l.trials, 70);
  EXPECT_EQ(l.seed, 9u);
  EXPECT_EQ(l.l_list, (std::vector<int>{0, 2, 4, 6}));
  EXPECT_EQ(l.betas, (std::vector<double>{0.0, 0.5}));
  in.clear();
  in.seekg(0);
  const ExperimentConfig s = parse_config(in, Scenario::SweepSnr, "test.cfg");
  EXPECT_EQ(s.trials, 80);
  EXPECT_EQ(s.gamma_db_list, (std::vector<double>{-5.0, 0.0, 5.0}));
  EXPECT_EQ(s.l_list, std::vector<int>{});
}

TEST(Config, ComplexAndInterferers) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  apply_setting(cfg, "corr_t", "0.5:-0.25");
  EXPECT_NEAR(std::abs(cfg.corr_t), 0.5, 1e-15);
  EXPECT_NEAR(std::arg(cfg.corr_t), -0.25 * M_PI, 1e-15);
  apply_setting(cfg, "interferers", "0.1:0 0.2:0.5, 0.3:1 0.4:-1");
  ASSERT_EQ(cfg.interferer_corr.size(), 2u);
  EXPECT_NEAR(cfg.interferer_corr[1].second.real(), -0.4, 1e-15);
  apply_setting(cfg, "interferers", "none");
  EXPECT_TRUE(cfg.interferer_corr.empty());
  apply_setting(cfg, "montecarlo", "false");
  EXPECT_FALSE(cfg.monte_carlo);
}

TEST(Config, Errors) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  EXPECT_EQ(code_of([&] { apply_setting(cfg, "bogus", "1"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { apply_setting(cfg, "trials", "ten"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { apply_setting(cfg, "l_list", "1:"); }), ErrorCode::InvalidConfig);
  std::istringstream bad_section("[nowhere]\ntrials = 3\n");
  try {
    parse_config(bad_section, Scenario::SweepL, "x.cfg");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
    EXPECT_NE(std::string(e.what()).find("x.cfg:1"), std::string::npos) << e.what();
  }
  std::istringstream no_eq("trials 3\n");
  EXPECT_EQ(code_of([&] { parse_config(no_eq, Scenario::SweepL, "y"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { load_config("/nonexistent/file.cfg", Scenario::SweepL); }),
            ErrorCode::InvalidConfig);
}

// --- Report -----------------------------------------------------------------

TEST(Report, CsvHeaderAndFormatting) {
  ResultRow r;
  r.scenario = "sweep-l";
  r.estimator = "mmse";
  r.n_r = 20;
  r.n_t = 4;
  r.degree = 3;
  r.beta = 0.1;
  r.gamma_db = 5;
  r.sweep_value = 3;
  r.nmse_analytic = 1.0 / 3.0;
  r.floor = 0.25;
  const auto lines = split_lines(csv_of({r}));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0],
            "scenario,estimator,n_r,n_t,L,beta,gamma_db,q,sweep_value,nmse_analytic,"
            "nmse_montecarlo,std_error,floor,flops,kappa");
  EXPECT_EQ(lines[1], "sweep-l,mmse,20,4,3,0.1,5,,3,0.333333333,,,0.25,,");
  EXPECT_EQ(format_real(1234567890.123), "1.23456789e+09");
}

TEST(Report, JsonNextToCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "peach_report_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::Flops);
  cfg.nr_list = {10};
  cfg.l_list = {2};
  cfg.q_list = {50};
  const auto rows = run_experiment(cfg);
  write_outputs(dir / "sub" / "out.csv", cfg, rows);
  ASSERT_TRUE(std::filesystem::exists(dir / "sub" / "out.csv"));
  std::ifstream js(dir / "sub" / "out.json");
  std::stringstream text;
  text << js.rdbuf();
  EXPECT_NE(text.str().find("\"rows\""), std::string::npos);
  EXPECT_NE(text.str().find("\"flops\""), std::string::npos);
  EXPECT_NE(text.str().find("\"scenario\": \"flops\""), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Report, NoComplexValuesInCsv) {
  ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepNr);
  cfg.monte_carlo = false;
  cfg.nr_list = {10};
  const std::string csv = csv_of(run_experiment(cfg));
  EXPECT_EQ(csv.find('('), std::string::npos);
  // Every field after the estimator name is a plain real or empty.
  const auto lines = split_lines(csv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::istringstream fields(line);
    std::string field;
    int column = 0;
    while (std::getline(fields, field, ',')) {
      if (column++ < 2 || field.empty()) continue;
      std::size_t used = 0;
      std::stod(field, &used);
      EXPECT_EQ(used, field.size()) << field;
    }
  }
}
