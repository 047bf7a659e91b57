#include "pcm/cli.hpp"

#include "pcm/distsim.hpp"
#include "pcm/report.hpp"
#include "pcm/scenario_io.hpp"
#include "pcm/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcm::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};

Scenario load_scenario(const Options& options, double coverage_rho) {
  if (options.scenario.has_value() == options.generate.has_value())
    throw UsageError("exactly one of --scenario or --generate is required");
  if (options.scenario) return resolve_scenario(load_scenario_file(*options.scenario), coverage_rho);
  return generate_scenario(parse_generate_flag(*options.generate, options.seed), coverage_rho);
}

SolverConfig make_config(const Options& options, double rho) {
  SolverConfig config;
  config.rho = rho;
  config.theta = options.theta.value_or(2 * rho);
  config.m = options.m;
  config.epsilon = options.epsilon;
  config.max_iters = options.max_iters;
  config.seed = options.seed;
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string rho_label(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rho=%g", rho);
  return buf;
}

std::vector<double> objectives_of(const Trace& trace) {
  std::vector<double> values;
  values.reserve(trace.iterations.size());
  for (const IterationRecord& rec : trace.iterations) values.push_back(rec.objective);
  return values;
}

// Maps library errors onto exit codes; everything else propagates.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CertificateFailure& e) {
    log << "certificate failure: " << e.what() << '\n';
    return kCertificateFailure;
  } catch (const ConvergenceFailure& e) {
    log << "projection failure: " << e.what() << '\n';
    return kCertificateFailure;
  } catch (const InsufficientInformation& e) {
    log << "distributed protocol failure: " << e.what() << '\n';
    return kCertificateFailure;
  } catch (const Error& e) {
    log << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace

int cmd_run(const Options& options, std::ostream& log) {
  return guarded(log, [&]() -> int {
    if (options.rho.empty()) throw UsageError("--rho needs a value");
    if (options.baseline && options.distributed) throw UsageError("--baseline and --distributed are exclusive");
    const double rho = options.rho.front();
    const Scenario scenario = load_scenario(options, rho);
    const SolverConfig config = make_config(options, rho);

    const std::vector<Violation> violations = validate_scenario(scenario, options.baseline ? unbounded_radius<double> : rho);
    for (const Violation& v : violations) log << "warning: " << v.describe() << '\n';
    if (!blocking_violations(violations).empty()) throw ValidationError(blocking_violations(violations));

    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir / "scenario.json", scenario_to_json(ScenarioFile{scenario.dimension(), scenario, std::nullopt}));

    Trace trace;
    double drawn_rho = rho;
    if (options.baseline) {
      trace = run_cmeans(scenario, config);
      drawn_rho = unbounded_radius<double>;
    } else if (options.distributed) {
      DistributedResult result = run_distributed(scenario, config);
      std::ofstream messages(options.out_dir / "messages.csv");
      write_message_log_csv(messages, result.log);
      std::size_t total = 0;
      for (std::size_t count : result.messages_per_round) total += count;
      log << "messages: " << total << " over " << result.messages_per_round.size() << " rounds\n";
      trace = std::move(result.trace);
    } else {
      trace = run(scenario, config);
    }

    {
      std::ofstream csv(options.out_dir / "trace.csv");
      write_trace_csv(csv, trace);
    }
    write_file(options.out_dir / "final.svg", render_state_svg(scenario, trace, drawn_rho));
    write_file(options.out_dir / "memberships.svg", render_membership_svg(scenario, trace.final(), 0));

    const IterationRecord& last = trace.final();
    log << (options.baseline ? "c-means" : rho_label(rho)) << ": " << last.iter << " iterations, J = " << last.objective
        << (trace.converged ? ", converged" : ", NOT converged") << '\n';
    return trace.converged ? kSuccess : kNonConvergence;
  });
}

int cmd_sweep(const Options& options, std::ostream& log) {
  return guarded(log, [&]() -> int {
    if (options.rho.empty()) throw UsageError("--rho needs at least one value");
    const double smallest = *std::min_element(options.rho.begin(), options.rho.end());
    const Scenario scenario = load_scenario(options, smallest);

    std::vector<ObjectiveSeries> series;
    bool all_converged = true;
    for (double rho : options.rho) {
      const Trace trace = run(scenario, make_config(options, rho));
      all_converged = all_converged && trace.converged;
      series.push_back({rho_label(rho), objectives_of(trace)});
      log << rho_label(rho) << ": " << trace.final().iter << " iterations, J = " << trace.final().objective << '\n';
    }
    const Trace baseline = run_cmeans(scenario, make_config(options, smallest));
    all_converged = all_converged && baseline.converged;
    series.push_back({"cmeans", objectives_of(baseline)});
    log << "cmeans: " << baseline.final().iter << " iterations, J = " << baseline.final().objective << '\n';

    std::filesystem::create_directories(options.out_dir);
    {
      std::ofstream csv(options.out_dir / "objectives.csv");
      write_objectives_csv(csv, series);
    }
    write_file(options.out_dir / "fig2.svg", render_objectives_svg(series));
    return all_converged ? kSuccess : kNonConvergence;
  });
}

}  // namespace pcm::cli
