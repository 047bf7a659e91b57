#ifndef PCM_SOLVER_HPP
#define PCM_SOLVER_HPP

#include "pcm/membership.hpp"
#include "pcm/refinement.hpp"
#include "pcm/types.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace pcm {

/// A problem instance: fixed PoIs and initial agent positions (rows).
struct Scenario {
  PointSet<double> pois;
  PointSet<double> agents;

  Index dimension() const { return pois.cols(); }
  Index poi_count() const { return pois.rows(); }
  Index agent_count() const { return agents.rows(); }
  bool operator==(const Scenario& other) const;
};

struct SolverConfig {
  double rho = 0.35;
  double theta = 0.7;  // communication threshold, >= 2 rho
  int m = 2;
  double epsilon = 1e-6;
  int max_iters = 500;
  std::uint64_t seed = 0;

  /// Sets theta to its smallest admissible value 2 rho.
  static SolverConfig with_rho(double rho);
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  PointSet<double> agent_positions;
  MembershipMatrix<double> U;
  double objective = 0;          // J(x(k), U(k))
  double refined_objective = 0;  // J(x(k), U(k-1)); NaN for k = 0
  double max_displacement = 0;   // max_j |x_j(k) - x_j(k-1)|
  int refinements = 0;           // refine_position calls that produced x(k)
  int slater_degenerate = 0;     // of which skipped their certificate
};

struct Trace {
  std::vector<IterationRecord> iterations;
  bool converged = false;

  const IterationRecord& final() const { return iterations.back(); }
  bool operator==(const Trace& other) const;
};

enum class ViolationKind { UncoveredPoI, IdleAgent, InsufficientDistinctPoIs, DimensionMismatch, Empty, NonFinite };

struct Violation {
  ViolationKind kind;
  Index index = -1;  // PoI or agent index where applicable

  bool operator==(const Violation&) const = default;
  std::string describe() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  std::vector<Violation> violations;
};

/// J(x, U) = sum_ij u_ij^m |p_i - x_j|^2.
double objective(const PointSet<double>& pois, const PointSet<double>& agents, const MembershipMatrix<double>& U);

/// Checks the standing assumptions on the initial configuration: every PoI
/// sensed, every agent sensing, and more distinct PoIs than agents.
std::vector<Violation> validate_scenario(const Scenario& scenario, double rho);

/// Violations that make the alternating loop ill-posed. The distinct-PoI
/// count is reported by validate_scenario but not enforced here.
std::vector<Violation> blocking_violations(const std::vector<Violation>& violations);

/// Problem constraints (I)-(IV) on a membership matrix. Returns a
/// human-readable list of failures, empty when all hold.
std::vector<std::string> audit_constraints(const MembershipMatrix<double>& U, const DistanceTable<double>& dist,
                                           double rho);

/// Alternating assignment / refinement until every agent moves less than
/// epsilon or max_iters refinements have run.
Trace run(const Scenario& scenario, const SolverConfig& config);

struct FixpointReport {
  bool fixpoint = false;
  double membership_change = 0;  // max |U' - U| after re-running assignment
  double position_change = 0;    // max |x' - x| after re-running refinement
};

FixpointReport diagnose_fixpoint(const Scenario& scenario, const SolverConfig& config, const Trace& trace);

/// Standard fuzzy C-means: the same loop with unbounded sensing radius.
Trace run_cmeans(const Scenario& scenario, const SolverConfig& config);

}  // namespace pcm

#endif  // PCM_SOLVER_HPP
