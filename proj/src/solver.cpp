#include "pcm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace pcm {

namespace {

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same_matrix(const Matrix<double>& a, const Matrix<double>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

bool Scenario::operator==(const Scenario& other) const {
  return same_matrix(pois, other.pois) && same_matrix(agents, other.agents);
}

bool Trace::operator==(const Trace& other) const {
  if (converged != other.converged || iterations.size() != other.iterations.size()) return false;
  for (std::size_t k = 0; k < iterations.size(); ++k) {
    const IterationRecord& a = iterations[k];
    const IterationRecord& b = other.iterations[k];
    if (a.iter != b.iter || !same_matrix(a.agent_positions, b.agent_positions) ||
        !same_matrix(a.U.values, b.U.values) || a.U.m != b.U.m || !same_double(a.objective, b.objective) ||
        !same_double(a.refined_objective, b.refined_objective) ||
        !same_double(a.max_displacement, b.max_displacement) || a.refinements != b.refinements ||
        a.slater_degenerate != b.slater_degenerate)
      return false;
  }
  return true;
}

SolverConfig SolverConfig::with_rho(double rho) {
  SolverConfig config;
  config.rho = rho;
  config.theta = 2 * rho;
  return config;
}

void SolverConfig::validate() const {
  if (!(rho > 0)) throw InvalidArgument("rho must be positive");
  if (!(theta >= 2 * rho)) throw InvalidThreshold("theta must be at least 2 rho");
  check_fuzzifier(m);
  if (!(epsilon > 0)) throw InvalidArgument("epsilon must be positive");
  if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
}

std::string Violation::describe() const {
  switch (kind) {
    case ViolationKind::UncoveredPoI:
      return "UncoveredPoI(" + std::to_string(index) + ")";
    case ViolationKind::IdleAgent:
      return "IdleAgent(" + std::to_string(index) + ")";
    case ViolationKind::InsufficientDistinctPoIs:
      return "InsufficientDistinctPoIs";
    case ViolationKind::DimensionMismatch:
      return "DimensionMismatch";
    case ViolationKind::Empty:
      return "Empty";
    case ViolationKind::NonFinite:
      return "NonFinite";
  }
  return "Unknown";
}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "scenario violates assumptions:";
  for (const Violation& v : violations) out << ' ' << v.describe();
  return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_violations(violations)), violations(std::move(violations)) {}

double objective(const PointSet<double>& pois, const PointSet<double>& agents, const MembershipMatrix<double>& U) {
  if (U.pois() != pois.rows() || U.agents() != agents.rows()) throw DimensionMismatch("objective: shape mismatch");
  double total = 0;
  for (Index i = 0; i < pois.rows(); ++i) {
    for (Index j = 0; j < agents.rows(); ++j) {
      const double u = U(i, j);
      if (u == 0) continue;
      total += ipow(u, U.m) * (pois.row(i) - agents.row(j)).squaredNorm();
    }
  }
  return total;
}

std::vector<Violation> validate_scenario(const Scenario& scenario, double rho) {
  std::vector<Violation> out;
  if (scenario.pois.rows() == 0 || scenario.agents.rows() == 0) {
    out.push_back({ViolationKind::Empty});
    return out;
  }
  if (scenario.pois.cols() != scenario.agents.cols()) {
    out.push_back({ViolationKind::DimensionMismatch});
    return out;
  }
  if (!scenario.pois.allFinite() || !scenario.agents.allFinite()) {
    out.push_back({ViolationKind::NonFinite});
    return out;
  }
  const Index n = scenario.poi_count();
  const Index r = scenario.agent_count();
  const DistanceTable<double> dist = compute_distances(scenario.pois, scenario.agents);
  for (Index i = 0; i < n; ++i) {
    if (!((dist.values().row(i).array() <= rho).any())) out.push_back({ViolationKind::UncoveredPoI, i});
  }
  for (Index j = 0; j < r; ++j) {
    if (!((dist.values().col(j).array() <= rho).any())) out.push_back({ViolationKind::IdleAgent, j});
  }
  std::set<std::vector<double>> distinct;
  for (Index i = 0; i < n; ++i) {
    std::vector<double> key;
    for (Index c = 0; c < scenario.dimension(); ++c) key.push_back(scenario.pois(i, c));
    distinct.insert(std::move(key));
  }
  // Duplicates must still leave more distinct PoIs than agents; a
  // duplicate-free set smaller than the swarm is accepted.
  if (static_cast<Index>(distinct.size()) < std::min(n, r + 1))
    out.push_back({ViolationKind::InsufficientDistinctPoIs});
  return out;
}

std::vector<Violation> blocking_violations(const std::vector<Violation>& violations) {
  std::vector<Violation> out;
  std::copy_if(violations.begin(), violations.end(), std::back_inserter(out),
               [](const Violation& v) { return v.kind != ViolationKind::InsufficientDistinctPoIs; });
  return out;
}

std::vector<std::string> audit_constraints(const MembershipMatrix<double>& U, const DistanceTable<double>& dist,
                                           double rho) {
  std::vector<std::string> failures;
  for (Index i = 0; i < U.pois(); ++i) {
    const double sum = U.values.row(i).sum();
    if (std::abs(sum - 1) > tol::row_sum) failures.push_back("(I) row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
  for (Index j = 0; j < U.agents(); ++j) {
    if (!(U.values.col(j).sum() > 0)) failures.push_back("(II) column " + std::to_string(j) + " is empty");
  }
  for (Index i = 0; i < U.pois(); ++i) {
    for (Index j = 0; j < U.agents(); ++j) {
      const double u = U(i, j);
      if (!(u >= 0 && u <= 1))
        failures.push_back("(III) u(" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(u));
      if (u != 0 && dist(i, j) > rho)
        failures.push_back("(IV) u(" + std::to_string(i) + "," + std::to_string(j) + ") > 0 beyond rho");
    }
  }
  return failures;
}

namespace {

MembershipMatrix<double> assign_at(const Scenario& scenario, const PointSet<double>& agents, double rho, int m,
                                   long iteration) {
  try {
    return assign_memberships(compute_distances(scenario.pois, agents), rho, m);
  } catch (const UncoveredPoI& e) {
    throw UncoveredPoI(e.poi, iteration);
  } catch (const IdleAgent& e) {
    throw IdleAgent(e.agent, iteration);
  }
}

}  // namespace

Trace run(const Scenario& scenario, const SolverConfig& config) {
  config.validate();
  const auto violations = blocking_violations(validate_scenario(scenario, config.rho));
  if (!violations.empty()) throw ValidationError(violations);

  const Index r = scenario.agent_count();
  Trace trace;

  PointSet<double> x = scenario.agents;
  MembershipMatrix<double> U = assign_at(scenario, x, config.rho, config.m, 0);
  {
    IterationRecord first;
    first.iter = 0;
    first.agent_positions = x;
    first.U = U;
    first.objective = objective(scenario.pois, x, U);
    first.refined_objective = std::numeric_limits<double>::quiet_NaN();
    first.max_displacement = 0;
    trace.iterations.push_back(std::move(first));
  }

  for (int k = 1; k <= config.max_iters; ++k) {
    IterationRecord rec;
    rec.iter = k;
    PointSet<double> next(x.rows(), x.cols());
    for (Index j = 0; j < r; ++j) {
      const Point<double> current = x.row(j).transpose();
      RefinementResult<double> refined;
      try {
        refined = refine_position<double>(scenario.pois, U.values.col(j), config.m, config.rho, current);
      } catch (const CertificateFailure& e) {
        throw CertificateFailure(e.what(), j, k);
      }
      next.row(j) = refined.position.transpose();
      ++rec.refinements;
      if (refined.certificate.slater_degenerate) ++rec.slater_degenerate;
      rec.max_displacement = std::max(rec.max_displacement, (refined.position - current).norm());
    }
    rec.refined_objective = objective(scenario.pois, next, U);
    x = std::move(next);
    U = assign_at(scenario, x, config.rho, config.m, k);
    rec.agent_positions = x;
    rec.U = U;
    rec.objective = objective(scenario.pois, x, U);
    const bool settled = rec.max_displacement < config.epsilon;
    trace.iterations.push_back(std::move(rec));
    if (settled) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

FixpointReport diagnose_fixpoint(const Scenario& scenario, const SolverConfig& config, const Trace& trace) {
  if (trace.iterations.empty()) throw InvalidArgument("empty trace");
  const IterationRecord& last = trace.final();
  FixpointReport report;
  const MembershipMatrix<double> reassigned =
      assign_memberships(compute_distances(scenario.pois, last.agent_positions), config.rho, config.m);
  report.membership_change = (reassigned.values - last.U.values).cwiseAbs().maxCoeff();
  for (Index j = 0; j < last.agent_positions.rows(); ++j) {
    const Point<double> current = last.agent_positions.row(j).transpose();
    const auto refined = refine_position<double>(scenario.pois, last.U.values.col(j), config.m, config.rho, current);
    report.position_change = std::max(report.position_change, (refined.position - current).norm());
  }
  report.fixpoint = report.membership_change <= 1e-10 && report.position_change <= 1e-10;
  return report;
}

Trace run_cmeans(const Scenario& scenario, const SolverConfig& config) {
  SolverConfig unbounded = config;
  unbounded.rho = unbounded_radius<double>;
  unbounded.theta = unbounded_radius<double>;
  return run(scenario, unbounded);
}

}  // namespace pcm
