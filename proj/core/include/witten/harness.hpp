#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace witten {

// ---------------------------------------------------------------------------
// Configuration: a flat `key = value` file. Values are numbers, booleans,
// quoted or bare strings, or bracketed numeric lists. `#` starts a comment.

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;

struct ConfigFile {
  std::string source;
  std::map<std::string, ConfigValue> values;
  std::map<std::string, int> lines;
};

ConfigFile parse_config_text(std::istream& in, const std::string& source);
ConfigFile read_config_file(const std::string& path);

inline const std::vector<std::string> kExperimentKinds = {"betti", "morse-verify", "witten-scan",
                                                          "semiclassical", "susy-pairing"};

struct ExperimentConfig {
  std::string kind;
  std::string name;  // output file stem; defaults to kind

  // Geometry and function.
  std::string complex;      // catalog complex name
  std::string off;          // OFF path, overrides `complex`
  int complex_size = 0;     // cycle length, torus grid side, icosphere subdivisions
  std::string stars = "combinatorial";
  std::string function;     // catalog key
  int resolution = 24;      // critical-point seed grid

  // Schedules and grids.
  std::vector<double> t_schedule;
  std::vector<double> lambda_schedule;
  int grid = 0;             // periodic grid points per axis; 0 = use the complex
  int order = 2;            // staggered stencil order
  std::string potential = "double_well";  // harmonic | double_well | witten-torus
  double box = 4.0;         // half-width of the box [-box, box]
  int n_eigs = 3;
  double tolerance = 0.2;

  // SUSY checks.
  int pair_count = 10;
  double match_tol = 1e-6;
  bool low_lying = false;  // low-lying counts on the periodic grid instead of pairing

  // Eigensolver and output.
  int eigs = 24;
  std::string out = "out";
  std::uint64_t seed = 0x5eedULL;
  bool timing = false;
  std::vector<int> expected;
};

/// Builds and validates a config. Errors are ConfigError with "source:line: key" context.
ExperimentConfig make_config(const ConfigFile& file);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Reports.

using ReportValue = std::variant<long long, double, std::string>;

struct ReportRow {
  std::string experiment;
  std::vector<std::pair<std::string, ReportValue>> fields;
  std::string verdict;  // pass | fail | error:<Code>
  double seconds = 0.0;
};

std::string format_double(double value);  // 17 significant digits

/// CSV with a header row; JSON as an array of flat objects. Timing columns
/// appear only when `timing` is set, so reruns are byte-identical.
std::string csv_text(const std::vector<ReportRow>& rows, bool timing = false);
std::string json_text(const std::vector<ReportRow>& rows, bool timing = false);
void emit_csv(const std::vector<ReportRow>& rows, const std::string& path, bool timing = false);
void emit_json(const std::vector<ReportRow>& rows, const std::string& path, bool timing = false);

// ---------------------------------------------------------------------------
// Runner.

struct RunResult {
  std::vector<ReportRow> rows;
  std::string csv_path;
  std::string json_path;
  int exit_code = 0;  // 0 iff every verdict is pass
};

/// Runs one experiment without writing files. Library errors become a single
/// `error:<Code>` row.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);
RunResult run(const ExperimentConfig& config);
/// Independent experiments in parallel; files are written one at a time.
std::vector<RunResult> run_batch(const std::vector<ExperimentConfig>& configs);

}  // namespace witten
