#ifndef PCM_CLI_HPP
#define PCM_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pcm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kValidationFailure = 2,
  kNonConvergence = 3,
  kCertificateFailure = 4,
};

struct Options {
  std::optional<std::filesystem::path> scenario;
  std::optional<std::string> generate;  // "n=140,r=4,seed=7"
  std::vector<double> rho{0.35};
  std::optional<double> theta;          // default 2 rho
  int m = 2;
  double epsilon = 1e-6;
  int max_iters = 500;
  bool baseline = false;
  bool distributed = false;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
};

/// Single run (constrained, --distributed or --baseline). Writes
/// trace.csv, final.svg, memberships.svg and scenario.json to out_dir,
/// plus messages.csv for distributed runs.
int cmd_run(const Options& options, std::ostream& log);

/// Same scenario under every rho plus C-means; writes objectives.csv and
/// fig2.svg.
int cmd_sweep(const Options& options, std::ostream& log);

}  // namespace pcm::cli

#endif  // PCM_CLI_HPP
