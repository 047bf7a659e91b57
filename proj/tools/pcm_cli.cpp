// Command-line front end: `pcm run ...` and `pcm sweep ...`.

#include "pcm/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

namespace {

void add_common(CLI::App& cmd, pcm::cli::Options& o) {
  cmd.add_option("--scenario", o.scenario, "Scenario JSON file");
  cmd.add_option("--generate", o.generate, "Random instance, e.g. n=140,r=4,seed=7");
  // Parsed by hand so that an empty list reaches the command as a usage error.
  cmd.add_option_function<std::string>(
      "--rho",
      [&o](const std::string& text) {
        o.rho.clear();
        std::stringstream in(text);
        for (std::string item; std::getline(in, item, ',');) {
          if (item.empty()) continue;
          double value = 0;
          try {
            std::size_t used = 0;
            value = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
          } catch (const std::exception&) {
            throw CLI::ValidationError("--rho", "not a number: " + item);
          }
          if (!(value > 0)) throw CLI::ValidationError("--rho", "radii must be positive");
          o.rho.push_back(value);
        }
      },
      "Sensing radius (comma-separated list for sweep)");
  cmd.add_option("--theta", o.theta, "Communication threshold (default 2*rho)");
  cmd.add_option("--m", o.m, "Fuzzifier, integer >= 2");
  cmd.add_option("--epsilon", o.epsilon, "Stop when every agent moves less than this");
  cmd.add_option("--max-iters", o.max_iters, "Iteration cap");
  cmd.add_option("--out-dir", o.out_dir, "Output directory");
  cmd.add_option("--seed", o.seed, "Seed used when --generate has no seed key");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximity-constrained C-means coverage for mobile agents"};
  app.require_subcommand(1);

  pcm::cli::Options run_opts;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  add_common(*run, run_opts);
  run->add_flag("--baseline", run_opts.baseline, "Standard (unconstrained) C-means");
  run->add_flag("--distributed", run_opts.distributed, "Synchronous-round distributed execution");

  pcm::cli::Options sweep_opts;
  sweep_opts.rho.clear();
  CLI::App* sweep = app.add_subcommand("sweep", "Objective curves for several radii plus C-means");
  add_common(*sweep, sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pcm::cli::kUsage;
  }

  if (run->parsed()) return pcm::cli::cmd_run(run_opts, std::cout);
  return pcm::cli::cmd_sweep(sweep_opts, std::cout);
}
