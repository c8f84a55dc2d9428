#include "peach/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <string>

namespace peach {

namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::InvalidConfig,
              "bad value '" + std::string(value) + "' for '" + std::string(key) + "': " +
                  std::string(why));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    bad(key, text, "not a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      bad(key, text, "not finite");
    }
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (std::string_view item : split(text, ',')) {
    if (item.empty()) {
      bad(key, text, "empty list item");
    }
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_number<T>(key, item));
    } else if (parts.size() == 3) {
      const T first = parse_number<T>(key, parts[0]);
      const T last = parse_number<T>(key, parts[1]);
      const T step = parse_number<T>(key, parts[2]);
      if (!(step > T{0}) || last < first) {
        bad(key, item, "range needs first <= last and step > 0");
      }
      const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9)) + 1;
      if (count > 100000) {
        bad(key, item, "range too long");
      }
      for (long i = 0; i < count; ++i) {
        out.push_back(static_cast<T>(first + static_cast<T>(i) * step));
      }
    } else {
      bad(key, item, "expected a number or first:last:step");
    }
  }
  return out;
}

Complex parse_complex(std::string_view key, std::string_view text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() == 1) {
    return {parse_number<double>(key, parts[0]), 0.0};
  }
  if (parts.size() != 2) {
    bad(key, text, "expected magnitude:phase_over_pi");
  }
  return std::polar(parse_number<double>(key, parts[0]),
                    parse_number<double>(key, parts[1]) * std::numbers::pi);
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  bad(key, text, "expected true or false");
}

int positive_int(std::string_view key, std::string_view text) {
  const int v = parse_number<int>(key, text);
  if (v < 0) {
    bad(key, text, "must be nonnegative");
  }
  return v;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_r", [](auto& c, auto k, auto v) { c.dims.n_r = positive_int(k, v); }},
      {"n_t", [](auto& c, auto k, auto v) { c.dims.n_t = positive_int(k, v); }},
      {"b", [](auto& c, auto k, auto v) { c.dims.b = positive_int(k, v); }},
      {"noise_var", [](auto& c, auto k, auto v) { c.noise_var = parse_number<double>(k, v); }},
      {"gamma_db", [](auto& c, auto k, auto v) { c.gamma_db = parse_number<double>(k, v); }},
      {"gamma_db_list",
       [](auto& c, auto k, auto v) { c.gamma_db_list = parse_list<double>(k, v); }},
      {"degree", [](auto& c, auto k, auto v) { c.degree = positive_int(k, v); }},
      {"l_list", [](auto& c, auto k, auto v) { c.l_list = parse_list<int>(k, v); }},
      {"nr_list", [](auto& c, auto k, auto v) { c.nr_list = parse_list<int>(k, v); }},
      {"betas", [](auto& c, auto k, auto v) { c.betas = parse_list<double>(k, v); }},
      {"corr_t", [](auto& c, auto k, auto v) { c.corr_t = parse_complex(k, v); }},
      {"corr_r", [](auto& c, auto k, auto v) { c.corr_r = parse_complex(k, v); }},
      {"interferers",
       [](auto& c, auto k, auto v) {
         c.interferer_corr.clear();
         if (trim(v) == "none") {
           return;
         }
         for (std::string_view pair : split(v, ',')) {
           const auto first_space = pair.find_first_of(" \t");
           if (first_space == std::string_view::npos) {
             bad(k, pair, "expected 't_coeff r_coeff'");
           }
           c.interferer_corr.emplace_back(parse_complex(k, pair.substr(0, first_space)),
                                          parse_complex(k, pair.substr(first_space + 1)));
         }
       }},
      {"trials", [](auto& c, auto k, auto v) { c.trials = parse_number<int>(k, v); }},
      {"montecarlo", [](auto& c, auto k, auto v) { c.monte_carlo = parse_bool(k, v); }},
      {"seed", [](auto& c, auto k, auto v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"threads",
       [](auto& c, auto k, auto v) { c.threads = static_cast<unsigned>(positive_int(k, v)); }},
      {"window", [](auto& c, auto k, auto v) { c.window = parse_number<int>(k, v); }},
      {"stream_len", [](auto& c, auto k, auto v) { c.stream_len = parse_number<int>(k, v); }},
      {"report_every", [](auto& c, auto k, auto v) { c.report_every = parse_number<int>(k, v); }},
      {"sample_counts", [](auto& c, auto k, auto v) { c.sample_counts = parse_list<int>(k, v); }},
      {"shrinkage_reps",
       [](auto& c, auto k, auto v) { c.shrinkage_reps = parse_number<int>(k, v); }},
      {"q_list", [](auto& c, auto k, auto v) { c.q_list = parse_list<double>(k, v); }},
      {"t_tot", [](auto& c, auto k, auto v) { c.t_tot = parse_number<double>(k, v); }},
      {"tau_s", [](auto& c, auto k, auto v) { c.tau_s = parse_number<double>(k, v); }},
      {"out", [](auto& c, auto, auto v) { c.out_path = std::string(trim(v)); }},
  };
  return table;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  const auto it = setters().find(key);
  if (it == setters().end()) {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
  }
  it->second(cfg, key, trim(value));
}

ExperimentConfig parse_config(std::istream& in, Scenario scenario, std::string_view source) {
  ExperimentConfig cfg = ExperimentConfig::defaults(scenario);
  // Section keys are applied after the global ones regardless of file order.
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> global, section;
  std::string current;  // empty: global
  std::string line;
  int line_no = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) {
      continue;
    }
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw Error(ErrorCode::InvalidConfig, where() + "unterminated section header");
      }
      current = std::string(trim(text.substr(1, text.size() - 2)));
      try {
        parse_scenario(current);
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, where() + e.what());
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, where() + "expected key = value");
    }
    const std::string key(trim(text.substr(0, eq)));
    if (!setters().contains(key)) {
      throw Error(ErrorCode::InvalidConfig, where() + "unknown key '" + key + "'");
    }
    Entry entry{key, std::string(trim(text.substr(eq + 1))), line_no};
    if (current.empty()) {
      global.push_back(std::move(entry));
    } else if (current == to_string(scenario)) {
      section.push_back(std::move(entry));
    }
  }

  for (const auto* group : {&global, &section}) {
    for (const Entry& entry : *group) {
      line_no = entry.line;
      try {
        apply_setting(cfg, entry.key, entry.value);
      } catch (const Error& e) {
        throw Error(e.code(), where() + e.what());
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, Scenario scenario) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidConfig, "cannot open config file '" + path.string() + "'");
  }
  return parse_config(in, scenario, path.string());
}

}  // namespace peach
