#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "witten/catalog.hpp"
#include "witten/error.hpp"
#include "witten/harness.hpp"

namespace {

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw witten::Error(witten::ErrorCode::ConfigError, "--t-schedule: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witten deformation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string schedule;
  int grid = -1;
  std::string out;
  std::uint64_t seed = 0;
  bool timing = false;

  std::vector<CLI::App*> kinds;
  for (const auto& kind : witten::kExperimentKinds) {
    auto* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    sub->add_option("--config", config_path, "experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--t-schedule", schedule, "comma-separated t (or lambda) schedule");
    sub->add_option("--grid", grid, "grid points per axis");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "eigensolver seed");
    sub->add_flag("--timing", timing, "add a seconds column");
    kinds.push_back(sub);
  }
  auto* catalog_cmd = app.add_subcommand("catalog", "catalog of manifold/function pairs");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list catalog entries");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& e : witten::catalog()) {
      std::cout << e.key << '\t' << e.complex_name << '\t' << e.description << '\n';
    }
    return 0;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    witten::ExperimentConfig config = witten::load_config(config_path);
    if (config.kind.empty()) config.kind = sub->get_name();
    if (config.kind != sub->get_name()) {
      throw witten::Error(witten::ErrorCode::ConfigError,
                          config_path + ": kind: '" + config.kind + "' does not match subcommand '" +
                              sub->get_name() + "'");
    }
    if (!schedule.empty()) {
      const bool lambdas = config.kind == "semiclassical" && config.potential != "witten-torus";
      (lambdas ? config.lambda_schedule : config.t_schedule) = parse_schedule(schedule);
    }
    if (sub->count("--grid")) config.grid = grid;
    if (sub->count("--out")) config.out = out;
    if (sub->count("--seed")) config.seed = seed;
    if (timing) config.timing = true;
    witten::validate_config(config);

    const witten::RunResult result = witten::run(config);
    int failed = 0;
    for (const auto& row : result.rows) failed += row.verdict != "pass";
    std::cout << config.kind << ": " << result.rows.size() << " rows, " << failed << " not passing -> "
              << result.csv_path << ", " << result.json_path << '\n';
    for (const auto& row : result.rows) {
      if (row.verdict.rfind("error:", 0) == 0) {
        std::cerr << row.verdict << ": " << std::get<std::string>(row.fields.front().second) << '\n';
      }
    }
    return result.exit_code;
  } catch (const witten::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
