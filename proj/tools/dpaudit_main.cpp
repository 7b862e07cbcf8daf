// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Experiment runner. One experiment per invocation; parameters come from an
// optional key=value config file plus flag overrides; results go to stdout or
// --out as CSV or JSON. Identical config and seed produce byte-identical
// output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "dpaudit/attack.hpp"
#include "dpaudit/audit.hpp"
#include "dpaudit/datagen.hpp"
#include "dpaudit/histogram.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {
namespace {

// Failures of the output path itself (the dataset reader throws CsvError).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

// ---------------------------------------------------------------------------
// Result table

struct Cell {
  std::variant<std::monostate, int64_t, double, std::string> value;

  static Cell Null() { return {}; }
  static Cell Int(int64_t v) { return {{v}}; }
  static Cell Num(double v) { return {{v}}; }
  static Cell Text(std::string v) { return {{std::move(v)}}; }
};

struct ResultTable {
  std::string experiment;
  uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
      throw std::logic_error("ResultTable: row width mismatch");
    }
    rows.push_back(std::move(row));
  }
};

// 17 significant digits: enough to round-trip any double, so reruns diff
// cleanly and equal values serialize identically.
std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string JsonEscape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string CsvCell(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell.value)) return "";
  if (const auto* i = std::get_if<int64_t>(&cell.value)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell.value)) {
    return FormatDouble(*d);
  }
  return std::get<std::string>(cell.value);
}

std::string JsonCell(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell.value)) return "null";
  if (const auto* i = std::get_if<int64_t>(&cell.value)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell.value)) {
    // JSON has no representation for non-finite numbers.
    if (!std::isfinite(*d)) return "null";
    return FormatDouble(*d);
  }
  return "\"" + JsonEscape(std::get<std::string>(cell.value)) + "\"";
}

std::string RenderCsv(const ResultTable& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += CsvCell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string RenderJson(const ResultTable& table) {
  std::string out = "{\n";
  out += "  \"experiment\": \"" + JsonEscape(table.experiment) + "\",\n";
  out += "  \"seed\": " + std::to_string(table.seed) + ",\n";
  out += "  \"rows\": [";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out += r == 0 ? "\n" : ",\n";
    out += "    {";
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out += ", ";
      out += "\"" + JsonEscape(table.columns[c]) +
             "\": " + JsonCell(table.rows[r][c]);
    }
    out += "}";
  }
  out += table.rows.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Config

struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.contains(key); }

  std::string get_text(const std::string& key, std::string fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? std::move(fallback) : it->second;
  }

  int64_t get_int(const std::string& key, int64_t fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      size_t used = 0;
      const int64_t v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' is not an integer: '" + it->second + "'");
    }
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' is not a number: '" + it->second + "'");
    }
  }
};

std::string Trim(const std::string& s) {
  const size_t first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const size_t last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// key = value lines; '#' starts a comment; later assignments win.
std::map<std::string, std::string> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

std::vector<double> ParseDoubleList(const std::string& text,
                                    const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' has a malformed number: '" + item + "'");
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("config: key '" + key + "' lists no values");
  }
  return out;
}

std::vector<int64_t> ParseIntList(const std::string& text,
                                  const std::string& key) {
  std::vector<int64_t> out;
  for (double v : ParseDoubleList(text, key)) {
    const int64_t i = static_cast<int64_t>(v);
    if (static_cast<double>(i) != v) {
      throw std::invalid_argument("config: key '" + key +
                                  "' must list integers");
    }
    out.push_back(i);
  }
  return out;
}

void RejectUnknownKeys(const Config& cfg,
                       const std::set<std::string>& allowed) {
  static const std::set<std::string> kCommon = {"experiment", "seed", "out",
                                                "format", "n_trials"};
  for (const auto& [key, value] : cfg.values) {
    if (!kCommon.contains(key) && !allowed.contains(key)) {
      throw std::invalid_argument("config: unknown key '" + key +
                                  "' for this experiment");
    }
  }
}

// ---------------------------------------------------------------------------
// Experiments

ResultTable RunViolationCurve(const Config& cfg, uint64_t seed) {
  RejectUnknownKeys(cfg, {"epsilon1", "epsilon2", "t_max", "t_grid"});
  const double epsilon1 = cfg.get_double("epsilon1", 0.5);
  const double epsilon2 = cfg.get_double("epsilon2", 0.5);
  const int64_t n_trials = cfg.get_int("n_trials", 200000);
  std::vector<int64_t> grid;
  if (cfg.has("t_grid")) {
    grid = ParseIntList(cfg.get_text("t_grid", ""), "t_grid");
  } else {
    const int64_t t_max = cfg.get_int("t_max", 64);
    for (int64_t t = 1; t <= t_max; t *= 2) grid.push_back(t);
  }
  const Rng root(seed);

  ResultTable table;
  table.columns = {"t", "log_ratio_quadrature", "log_ratio_mc", "mc_std_error",
                   "claimed_bound"};
  for (int64_t t : grid) {
    if (t < 1 || t > (int64_t{1} << 30)) {
      throw std::invalid_argument("violation_curve: t must be in [1, 2^30]");
    }
    const CounterexampleSpec spec(static_cast<int32_t>(t), epsilon1, epsilon2);
    const AuditResult quad = audit_quadrature(spec);
    Rng row_rng = root.child(static_cast<uint64_t>(t));
    const AuditResult mc = audit_monte_carlo(spec, n_trials, row_rng);
    table.add_row({Cell::Int(t), Cell::Num(quad.log_ratio),
                   Cell::Num(mc.log_ratio), Cell::Num(*mc.std_error),
                   // Privacy level claimed for the instantiation (2 eps1).
                   Cell::Num(2.0 * epsilon1)});
  }
  return table;
}

ResultTable RunHardViolation(const Config& cfg, uint64_t seed) {
  RejectUnknownKeys(cfg, {"eps1_grid"});
  const std::vector<double> eps1_grid =
      ParseDoubleList(cfg.get_text("eps1_grid", "0.25,0.5,1.0"), "eps1_grid");
  const int64_t n_trials = cfg.get_int("n_trials", 100000);
  if (n_trials < 1) {
    throw std::invalid_argument("hard_violation: n_trials must be >= 1");
  }
  const Rng root(seed);

  ResultTable table;
  table.columns = {"epsilon1",     "prob_d",          "prob_dprime",
                   "mc_freq_d",    "mc_freq_dprime",  "n_runs"};
  for (size_t row = 0; row < eps1_grid.size(); ++row) {
    const double epsilon1 = eps1_grid[row];
    const auto [prob_d, prob_dprime] = exact_output_probability_hard(epsilon1);
    const CounterexampleSpec spec(
        1, epsilon1, std::numeric_limits<double>::infinity());
    const std::vector<Answer> target = spec.target_output();
    const Rng row_rng = root.child(static_cast<uint64_t>(row));
    const auto frequency = [&](const Histogram& db, uint64_t stream) {
      const Rng base = row_rng.child(stream);
      const int64_t hits = count_successes(n_trials, [&](int64_t i) {
        Rng trial = base.child(static_cast<uint64_t>(i));
        return gptt(db, spec.queries(), spec.gptt_params(), trial)
                   .answers.answers == target;
      });
      return static_cast<double>(hits) / static_cast<double>(n_trials);
    };
    const double freq_d = frequency(spec.databases().left(), 0);
    const double freq_dprime = frequency(spec.databases().right(), 1);
    table.add_row({Cell::Num(epsilon1), Cell::Num(prob_d),
                   Cell::Num(prob_dprime), Cell::Num(freq_d),
                   Cell::Num(freq_dprime), Cell::Int(n_trials)});
  }
  return table;
}

Histogram LoadDataset(const Config& cfg, Rng& rng, std::string* name) {
  const std::string kind = cfg.get_text("dataset", "zipf");
  if (kind == "zipf") {
    const int64_t domain = cfg.get_int("domain_size", 4096);
    const int64_t total = cfg.get_int("total", 20000);
    const double exponent = cfg.get_double("zipf_exponent", 1.0);
    if (domain < 1 || domain > (int64_t{1} << 26)) {
      throw std::invalid_argument("dataset: domain_size out of range");
    }
    *name = "zipf";
    return zipfian_histogram(static_cast<int32_t>(domain), total, exponent,
                             rng);
  }
  if (kind == "staircase") {
    const int64_t k = cfg.get_int("k", 30);
    const int64_t extra = cfg.get_int("extra_cells", 50);
    *name = "staircase";
    return staircase_histogram(static_cast<int32_t>(k),
                               static_cast<int32_t>(extra));
  }
  if (kind == "csv") {
    if (!cfg.has("dataset_path")) {
      throw std::invalid_argument(
          "dataset = csv requires a dataset_path key");
    }
    auto [db, meta] = read_histogram_csv(cfg.get_text("dataset_path", ""));
    *name = meta.name;
    return std::move(db);
  }
  throw std::invalid_argument("dataset must be zipf, staircase or csv, got '" +
                              kind + "'");
}

ResultTable RunReconstructionTable(const Config& cfg, uint64_t seed) {
  RejectUnknownKeys(cfg, {"dataset", "dataset_path", "domain_size", "total",
                          "zipf_exponent", "k", "extra_cells", "eps_grid",
                          "delta", "split_fraction"});
  const std::vector<double> eps_grid =
      ParseDoubleList(cfg.get_text("eps_grid", "1.0,0.5,0.1"), "eps_grid");
  const int64_t n_trials = cfg.get_int("n_trials", 10);
  const double delta = cfg.get_double("delta", 0.05);
  const double split_fraction = cfg.get_double("split_fraction", 0.5);
  if (n_trials < 1) {
    throw std::invalid_argument(
        "reconstruction_table: n_trials must be >= 1");
  }
  const Rng root(seed);
  Rng data_rng = root.child(0);
  std::string dataset_name;
  const Histogram db = LoadDataset(cfg, data_rng, &dataset_name);

  ResultTable table;
  table.columns = {"dataset", "epsilon", "overall_accuracy",
                   "small_count_accuracy", "n_trials"};
  for (size_t e = 0; e < eps_grid.size(); ++e) {
    const double epsilon = eps_grid[e];
    Rng eps_rng = root.child(1 + e);
    double overall_sum = 0.0;
    double small_sum = 0.0;
    int64_t small_n = 0;
    for (int64_t trial = 0; trial < n_trials; ++trial) {
      const ReconstructionReport report =
          reconstruct(db, epsilon, delta, split_fraction, eps_rng);
      overall_sum += report.overall_accuracy;
      if (report.small_count_accuracy.has_value()) {
        small_sum += *report.small_count_accuracy;
        ++small_n;
      }
    }
    const double overall = overall_sum / static_cast<double>(n_trials);
    table.add_row(
        {Cell::Text(dataset_name), Cell::Num(epsilon), Cell::Num(overall),
         small_n > 0 ? Cell::Num(small_sum / static_cast<double>(small_n))
                     : Cell::Null(),
         Cell::Int(n_trials)});
  }
  return table;
}

ResultTable RunTheoremCheck(const Config& cfg, uint64_t seed) {
  RejectUnknownKeys(cfg, {"k", "extra_cells", "epsilon", "delta"});
  const int64_t k = cfg.get_int("k", 30);
  const int64_t extra = cfg.get_int("extra_cells", 50);
  const double epsilon = cfg.get_double("epsilon", 1.0);
  const double delta = cfg.get_double("delta", 0.05);
  const int64_t n_trials = cfg.get_int("n_trials", 500);
  const Histogram db = staircase_histogram(static_cast<int32_t>(k),
                                           static_cast<int32_t>(extra));
  Rng rng(seed);
  const double rate = reconstruction_theorem_check(
      db, static_cast<int32_t>(k), epsilon, delta, n_trials, rng);

  ResultTable table;
  table.columns = {"k",       "epsilon",      "delta",
                   "n_trials", "success_rate", "guaranteed_rate"};
  table.add_row({Cell::Int(k), Cell::Num(epsilon), Cell::Num(delta),
                 Cell::Int(n_trials), Cell::Num(rate),
                 Cell::Num(1.0 - delta)});
  return table;
}

ResultTable RunMechanismDemo(const Config& cfg, uint64_t seed) {
  RejectUnknownKeys(cfg, {"k", "threshold", "cutoff", "epsilon", "variant"});
  const int64_t k = cfg.get_int("k", 9);
  const double threshold = cfg.get_double("threshold", 4.5);
  const int64_t cutoff = cfg.get_int("cutoff", 3);
  const double epsilon = cfg.get_double("epsilon", 1.0);
  const std::string variant_name = cfg.get_text("variant", "chen");
  const Histogram db = staircase_histogram(static_cast<int32_t>(k), 0);
  std::vector<Query> queries;
  for (int32_t i = 0; i < db.domain_size(); ++i) {
    queries.push_back(Query::Count(i));
  }

  SvtParams svt_params;
  svt_params.threshold = threshold;
  svt_params.cutoff = static_cast<int32_t>(cutoff);
  svt_params.epsilon = epsilon;
  svt_params.validate();
  Rng svt_rng = Rng(seed).child(0);
  const ThresholdVector svt_out = svt(db, queries, svt_params, svt_rng);

  const EpsilonSplit split =
      gptt_instantiation(gptt_variant_from_name(variant_name), epsilon);
  GpttParams gptt_params;
  gptt_params.threshold = threshold;
  gptt_params.epsilon1 = split.epsilon1;
  gptt_params.epsilon2 = split.epsilon2;
  gptt_params.validate();
  Rng gptt_rng = Rng(seed).child(1);
  const GpttTranscript gptt_out = gptt(db, queries, gptt_params, gptt_rng);

  const auto answer_name = [](Answer a) {
    return std::string(a == Answer::kTop ? "top" : "bot");
  };
  ResultTable table;
  table.columns = {"query_index", "true_value", "svt_answer", "gptt_answer"};
  for (size_t i = 0; i < queries.size(); ++i) {
    const Cell svt_cell =
        i < svt_out.answers.size()
            ? Cell::Text(answer_name(svt_out.answers[i]))
            : Cell::Text("unanswered");
    table.add_row({Cell::Int(static_cast<int64_t>(i)),
                   Cell::Num(evaluate(queries[i], db)), svt_cell,
                   Cell::Text(answer_name(gptt_out.answers.answers[i]))});
  }
  return table;
}

// ---------------------------------------------------------------------------

void WriteOutput(const std::string& rendered, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(rendered.data(), 1, rendered.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open output file: " + out_path);
  }
  out.write(rendered.data(), static_cast<std::streamsize>(rendered.size()));
  out.flush();
  if (!out.good()) {
    throw IoError("write failed: " + out_path);
  }
}

int RunCli(int argc, char** argv) {
  CLI::App app{
      "dpaudit: threshold-mechanism experiments (privacy violation curves, "
      "counterexample probabilities, reconstruction attacks)"};
  std::string experiment_flag;
  std::string config_path;
  std::string seed_flag;
  std::string out_flag;
  std::string format_flag;
  app.add_option("--experiment", experiment_flag,
                 "violation_curve | hard_violation | reconstruction_table | "
                 "theorem_check | mechanism_demo");
  app.add_option("--config", config_path, "key = value parameter file");
  app.add_option("--seed", seed_flag, "base rng seed (default 12345)");
  app.add_option("--out", out_flag, "output file (default stdout)");
  app.add_option("--format", format_flag, "csv | json (default csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return 2;
  }

  Config cfg;
  if (!config_path.empty()) cfg.values = LoadConfigFile(config_path);
  // Flags override config-file values.
  if (!experiment_flag.empty()) cfg.values["experiment"] = experiment_flag;
  if (!seed_flag.empty()) cfg.values["seed"] = seed_flag;
  if (!out_flag.empty()) cfg.values["out"] = out_flag;
  if (!format_flag.empty()) cfg.values["format"] = format_flag;

  const std::string experiment = cfg.get_text("experiment", "");
  if (experiment.empty()) {
    throw std::invalid_argument(
        "no experiment selected (use --experiment or an 'experiment' config "
        "key)");
  }
  const int64_t seed_value = cfg.get_int("seed", 12345);
  if (seed_value < 0) {
    throw std::invalid_argument("seed must be non-negative");
  }
  const uint64_t seed = static_cast<uint64_t>(seed_value);
  const std::string format = cfg.get_text("format", "csv");
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json, got '" + format +
                                "'");
  }
  const std::string out_path = cfg.get_text("out", "");

  ResultTable table;
  if (experiment == "violation_curve") {
    table = RunViolationCurve(cfg, seed);
  } else if (experiment == "hard_violation") {
    table = RunHardViolation(cfg, seed);
  } else if (experiment == "reconstruction_table") {
    table = RunReconstructionTable(cfg, seed);
  } else if (experiment == "theorem_check") {
    table = RunTheoremCheck(cfg, seed);
  } else if (experiment == "mechanism_demo") {
    table = RunMechanismDemo(cfg, seed);
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  table.experiment = experiment;
  table.seed = seed;

  WriteOutput(format == "csv" ? RenderCsv(table) : RenderJson(table),
              out_path);
  return 0;
}

}  // namespace
}  // namespace dpaudit

int main(int argc, char** argv) {
  try {
    return dpaudit::RunCli(argc, argv);
  } catch (const dpaudit::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const dpaudit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
