// peach-sim: runs one experiment family and writes CSV (+ JSON) results.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "peach/config.hpp"
#include "peach/experiment.hpp"
#include "peach/report.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  bool no_montecarlo = false;
};

void print_summary(std::ostream& os, const peach::ExperimentConfig& cfg,
                   const std::vector<peach::ResultRow>& rows) {
  os << "peach-sim " << peach::to_string(cfg.scenario) << ": " << rows.size() << " rows, seed "
     << cfg.seed;
  if (cfg.monte_carlo) {
    os << ", " << cfg.trials << " Monte Carlo trials per point";
  }
  os << '\n';

  // Smallest analytic normalized MSE (or FLOP count) seen per estimator.
  std::map<std::string, double> best;
  for (const auto& r : rows) {
    const std::optional<double> v = r.flops ? r.flops : r.nmse_analytic;
    if (!v) {
      continue;
    }
    auto [it, fresh] = best.emplace(r.estimator, *v);
    if (!fresh && *v < it->second) {
      it->second = *v;
    }
  }
  const char* label = cfg.scenario == peach::Scenario::Flops ? "min flops/s" : "min nmse";
  for (const auto& [name, v] : best) {
    char line[96];
    std::snprintf(line, sizeof line, "  %-18s %s %.4g\n", name.c_str(), label, v);
    os << line;
  }
}

int run(peach::Scenario scenario, const Flags& flags) {
  peach::ExperimentConfig cfg = flags.config_path.empty()
                                    ? peach::ExperimentConfig::defaults(scenario)
                                    : peach::load_config(flags.config_path, scenario);
  if (flags.seed) {
    cfg.seed = *flags.seed;
  }
  if (flags.trials) {
    cfg.trials = *flags.trials;
  }
  if (flags.no_montecarlo) {
    cfg.monte_carlo = false;
  }
  if (!flags.out.empty()) {
    cfg.out_path = flags.out;
  }

  const std::vector<peach::ResultRow> rows = peach::run_experiment(cfg);
  if (cfg.out_path.empty()) {
    peach::write_csv(std::cout, rows);
    print_summary(std::cerr, cfg, rows);
  } else {
    peach::write_outputs(cfg.out_path, cfg, rows);
    print_summary(std::cout, cfg, rows);
    std::filesystem::path json = cfg.out_path;
    json.replace_extension(".json");
    std::cout << "  wrote " << cfg.out_path << " and " << json.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-expansion channel estimation experiments"};
  app.require_subcommand(1);

  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"sweep-l", "normalized MSE versus polynomial degree L"},
      {"sweep-snr", "normalized MSE versus pilot SNR, with error floors"},
      {"sweep-nr", "normalized MSE versus number of receive antennas"},
      {"adaptive", "sliding-window W-PEACH weights versus optimal weights"},
      {"shrinkage", "estimators built from shrinkage covariance estimates"},
      {"flops", "FLOPs per second versus M for each estimator"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "config file (key = value, [scenario] sections)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master RNG seed");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "CSV output path; JSON goes next to it");
    sub->add_flag("--no-montecarlo", flags.no_montecarlo, "analytic columns only");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    return run(peach::parse_scenario(chosen), flags);
  } catch (const peach::Error& e) {
    std::cerr << "peach-sim: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "peach-sim: error: " << e.what() << '\n';
    return 1;
  }
}
