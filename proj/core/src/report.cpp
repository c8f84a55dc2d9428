#include "peach/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace peach {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "scenario", "estimator",       "n_r",       "n_t",   "L",     "beta",  "gamma_db", "q",
      "sweep_value", "nmse_analytic", "nmse_montecarlo", "std_error", "floor", "flops", "kappa"};
  return cols;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const ResultRow& r : rows) {
    out << r.scenario << ',' << r.estimator << ',' << r.n_r << ',' << r.n_t << ',' << r.degree
        << ',' << format_real(r.beta) << ',' << format_real(r.gamma_db) << ',' << opt(r.q) << ','
        << format_real(r.sweep_value) << ',' << opt(r.nmse_analytic) << ','
        << opt(r.nmse_montecarlo) << ',' << opt(r.std_error) << ',' << opt(r.floor) << ','
        << opt(r.flops) << ',' << opt(r.kappa) << '\n';
  }
}

void write_json(std::ostream& out, const ExperimentConfig& cfg,
                const std::vector<ResultRow>& rows) {
  nlohmann::json interferers = nlohmann::json::array();
  for (const auto& [t, r] : cfg.interferer_corr) {
    interferers.push_back({{"t", complex_json(t)}, {"r", complex_json(r)}});
  }
  nlohmann::json config = {
      {"scenario", std::string(to_string(cfg.scenario))},
      {"n_r", cfg.dims.n_r},
      {"n_t", cfg.dims.n_t},
      {"b", cfg.dims.b},
      {"noise_var", cfg.noise_var},
      {"gamma_db", cfg.gamma_db},
      {"gamma_db_list", cfg.gamma_db_list},
      {"degree", cfg.degree},
      {"l_list", cfg.l_list},
      {"nr_list", cfg.nr_list},
      {"betas", cfg.betas},
      {"corr_t", complex_json(cfg.corr_t)},
      {"corr_r", complex_json(cfg.corr_r)},
      {"interferers", interferers},
      {"trials", cfg.trials},
      {"montecarlo", cfg.monte_carlo},
      {"seed", cfg.seed},
      {"window", cfg.window},
      {"stream_len", cfg.stream_len},
      {"report_every", cfg.report_every},
      {"sample_counts", cfg.sample_counts},
      {"shrinkage_reps", cfg.shrinkage_reps},
      {"q_list", cfg.q_list},
      {"t_tot", cfg.t_tot},
      {"tau_s", cfg.tau_s},
  };

  nlohmann::json items = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    items.push_back({
        {"scenario", r.scenario},
        {"estimator", r.estimator},
        {"n_r", r.n_r},
        {"n_t", r.n_t},
        {"L", r.degree},
        {"beta", r.beta},
        {"gamma_db", r.gamma_db},
        {"q", opt_json(r.q)},
        {"sweep_value", r.sweep_value},
        {"nmse_analytic", opt_json(r.nmse_analytic)},
        {"nmse_montecarlo", opt_json(r.nmse_montecarlo)},
        {"std_error", opt_json(r.std_error)},
        {"floor", opt_json(r.floor)},
        {"flops", opt_json(r.flops)},
        {"kappa", opt_json(r.kappa)},
    });
  }
  const nlohmann::json doc = {{"config", config}, {"columns", csv_columns()}, {"rows", items}};
  out << doc.dump(2) << '\n';
}

void write_outputs(const std::filesystem::path& csv_path, const ExperimentConfig& cfg,
                   const std::vector<ResultRow>& rows) {
  if (csv_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(csv_path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory '" + csv_path.parent_path().string() +
                               "': " + ec.message());
    }
  }
  std::ostringstream csv;
  write_csv(csv, rows);
  write_file(csv_path, csv.str());

  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".json");
  std::ostringstream json;
  write_json(json, cfg, rows);
  write_file(json_path, json.str());
}

}  // namespace peach
