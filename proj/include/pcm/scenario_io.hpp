#ifndef PCM_SCENARIO_IO_HPP
#define PCM_SCENARIO_IO_HPP

#include "pcm/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace pcm {

/// Random instance recipe: agents uniform in the box, PoIs uniform in the
/// box restricted to points within `coverage_radius` of some agent.
struct GeneratorSpec {
  Index n = 140;
  Index r = 4;
  Index dimension = 2;
  Point<double> lower = Point<double>::Zero(2);
  Point<double> upper = Point<double>::Ones(2);
  std::uint64_t seed = 0;
  std::optional<double> coverage_radius;  // falls back to the run's rho

  bool operator==(const GeneratorSpec& other) const;
};

/// On-disk scenario: either explicit coordinates or a generator block.
struct ScenarioFile {
  Index dimension = 2;
  std::optional<Scenario> explicit_scenario;
  std::optional<GeneratorSpec> generator;

  bool operator==(const ScenarioFile& other) const;
};

ScenarioFile parse_scenario_json(const std::string& text);
std::string scenario_to_json(const ScenarioFile& file);
ScenarioFile load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const std::filesystem::path& path, const ScenarioFile& file);

/// Parses "n=140,r=4,seed=7" (keys n, r, seed, d; any subset).
GeneratorSpec parse_generate_flag(const std::string& flag, std::uint64_t default_seed);

/// Draws scenarios with sub-seeds derived from spec.seed until one passes
/// validate_scenario at `rho`; gives up after 1000 attempts.
Scenario generate_scenario(const GeneratorSpec& spec, double rho);

/// Explicit coordinates as-is, or the generated instance.
Scenario resolve_scenario(const ScenarioFile& file, double rho);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::uint64_t bits);

}  // namespace pcm

#endif  // PCM_SCENARIO_IO_HPP
