// geoeig: graph generation, seeded eigenvector experiments and property checks.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geoeig.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_property = 2;

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& out) {
  const auto draw = geoeig::random_geometric_graph_draw(n, seed);
  geoeig::io::write_json(out, geoeig::io::graph_to_json(draw.graph));
  std::cout << "vertices " << draw.graph.size() << "\n"
            << "edges " << draw.graph.edge_count() << "\n"
            << "mean_degree " << geoeig::experiment::format_number(draw.graph.mean_degree()) << "\n"
            << "resamples " << draw.resamples << "\n";
  return exit_ok;
}

int cmd_run(const std::string& config_path, std::size_t trials, const std::string& out) {
  auto cfg = geoeig::experiment::load_config(config_path);
  if (trials > 0) cfg.trials = trials;
  if (!out.empty()) cfg.output = out;
  const auto res = geoeig::experiment::run_experiment(cfg);
  geoeig::io::write_text(cfg.output, geoeig::experiment::curves_csv(res));
  const auto summary = geoeig::experiment::summary_json(res, cfg);
  geoeig::io::write_text(cfg.output + ".summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  for (const auto& a : res.algorithms)
    if (!a.setup.error.empty()) std::cerr << "geoeig: " << a.setup.name << ": " << a.setup.error << "\n";
  return res.all_ok() ? exit_ok : exit_invalid;
}

int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& out) {
  const auto rep = geoeig::checks::run_suite(suite, seed);
  const std::string text = rep.to_json().dump(2) + "\n";
  if (!out.empty()) geoeig::io::write_text(out, text);
  std::cout << text;
  return rep.passed() ? exit_ok : exit_property;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoeig: distributed eigenvector iterations on spatially distributed networks"};
  app.require_subcommand(1);

  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a connected random geometric graph");
  gen->add_option("--n", gen_n, "Number of vertices")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Root seed")->required();
  gen->add_option("--out", gen_out, "Output graph file (JSON)")->required();

  std::string run_config, run_out;
  std::size_t run_trials = 0;
  auto* run = app.add_subcommand("run", "Run a seeded multi-trial experiment and write CSV curves");
  run->add_option("--config", run_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--trials", run_trials, "Override the trial count")->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "Override the CSV output path");

  std::string check_suite, check_out;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "Run a property suite and print a JSON report");
  check->add_option("--suite", check_suite, "theorem1 | theorem2 | alg4 | oracle | equivalence")->required();
  check->add_option("--seed", check_seed, "Root seed");
  check->add_option("--out", check_out, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_seed, gen_out);
    if (*run) return cmd_run(run_config, run_trials, run_out);
    return cmd_check(check_suite, check_seed, check_out);
  } catch (const std::exception& e) {
    std::cerr << "geoeig: " << e.what() << "\n";
    return exit_invalid;
  }
}
