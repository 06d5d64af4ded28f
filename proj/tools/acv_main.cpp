#include "acv/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated Condat-Vu solver and benchmark driver"};
  app.require_subcommand(1);

  std::string config_path, output, algos, grid;
  long long horizon = -1;
  bool paper_literal = false;

  auto* solve = app.add_subcommand("solve", "Run one algorithm and write its convergence CSV");
  solve->add_option("--config", config_path, "Run configuration file")->required();
  solve->add_option("--output", output, "Output directory (overrides output_path)");

  auto* compare = app.add_subcommand("compare", "Run several algorithms against a shared reference");
  compare->add_option("--config", config_path, "Run configuration file")->required();
  compare->add_option("--algos", algos, "Comma-separated algorithm list")->required();
  compare->add_option("--output", output, "Output directory (overrides output_path)");

  auto* tune = app.add_subcommand("tune-cv", "Grid-search constant Condat-Vu step sizes");
  tune->add_option("--config", config_path, "Run configuration file")->required();
  tune->add_option("--grid", grid, "primal[:jlo..jhi[:ilo..ihi]] or dual[:jlo..jhi]")->required();

  auto* validate = app.add_subcommand("validate", "Check a schedule against its step-size constraints");
  validate->add_option("--config", config_path, "Run configuration file")->required();
  validate->add_option("--horizon", horizon, "Largest iteration index checked (default max_iters)")
      ->check(CLI::NonNegativeNumber);
  validate->add_flag("--paper-literal", paper_literal, "Use the steady-phase step formula as printed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : acv::kExitUsage;
  }

  acv::RunConfig config;
  try {
    config = acv::read_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return acv::kExitUsage;
  }
  if (!output.empty()) config.output_path = output;

  if (solve->parsed()) return acv::cmd_solve(config, std::cout, std::cerr);
  if (compare->parsed()) return acv::cmd_compare(config, split_list(algos), std::cout, std::cerr);
  if (tune->parsed()) return acv::cmd_tune_cv(config, grid, std::cout, std::cerr);
  std::optional<acv::Index> h;
  if (horizon >= 0) h = static_cast<acv::Index>(horizon);
  return acv::cmd_validate(config, h, paper_literal, std::cout, std::cerr);
}
