#include "pcm/distsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcm {

bool SensingGraph::has_edge(Index poi, Index agent) const {
  const auto& list = agents_of_poi[static_cast<std::size_t>(poi)];
  return std::binary_search(list.begin(), list.end(), agent);
}

bool CommGraph::has_edge(Index a, Index b) const {
  const auto& list = neighbors[static_cast<std::size_t>(a)];
  return std::binary_search(list.begin(), list.end(), b);
}

std::size_t CommGraph::edge_endpoints() const {
  std::size_t total = 0;
  for (const auto& list : neighbors) total += list.size();
  return total;
}

std::pair<SensingGraph, CommGraph> build_graphs(const PointSet<double>& pois, const PointSet<double>& agents,
                                                double rho, double theta) {
  if (!(theta >= 2 * rho)) throw InvalidThreshold("theta must be at least 2 rho");
  if (pois.cols() != agents.cols()) throw DimensionMismatch("PoIs and agents differ in dimension");
  const Index n = pois.rows();
  const Index r = agents.rows();

  SensingGraph sensing;
  sensing.rho = rho;
  sensing.agents_of_poi.resize(static_cast<std::size_t>(n));
  sensing.pois_of_agent.resize(static_cast<std::size_t>(r));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < r; ++j) {
      if ((pois.row(i) - agents.row(j)).norm() <= rho) {
        sensing.agents_of_poi[static_cast<std::size_t>(i)].push_back(j);
        sensing.pois_of_agent[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }

  CommGraph comm;
  comm.theta = theta;
  comm.neighbors.resize(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) {
      if (a != b && (agents.row(a) - agents.row(b)).norm() <= theta)
        comm.neighbors[static_cast<std::size_t>(a)].push_back(b);
    }
  }

  for (Index i = 0; i < n; ++i) {
    const auto& sensors = sensing.agents_of_poi[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < sensors.size(); ++s)
      for (std::size_t t = s + 1; t < sensors.size(); ++t)
        if (!comm.has_edge(sensors[s], sensors[t]))
          throw Error("agents " + std::to_string(sensors[s]) + " and " + std::to_string(sensors[t]) +
                      " share PoI " + std::to_string(i) + " but cannot communicate");
  }
  return {std::move(sensing), std::move(comm)};
}

namespace {

/// One simulated agent. It only ever reads its own position, the PoI
/// locations it senses, and the messages delivered to it.
class SwarmAgent {
 public:
  SwarmAgent(Index id, Point<double> position) : id_(id), position_(std::move(position)) {}

  Index id() const { return id_; }
  const Point<double>& position() const { return position_; }

  Message sense(const PointSet<double>& pois, double rho, long round) {
    own_.clear();
    for (Index i = 0; i < pois.rows(); ++i) {
      const double dist = (pois.row(i).transpose() - position_).norm();
      if (dist <= rho) own_.emplace_back(i, dist);
    }
    inbox_.clear();
    return Message{id_, round, own_};
  }

  void deliver(const Message& message) { inbox_.push_back(message); }

  /// Membership column for this agent from its own and received distances.
  Vector<double> assign(Index n, Index r, double rho, int m, const SensingGraph& truth, long round) const {
    Vector<double> column = Vector<double>::Zero(n);
    Vector<double> row(r);
    Vector<double> memberships(r);
    for (const auto& [poi, dist] : own_) {
      row.setConstant(std::numeric_limits<double>::infinity());
      row(id_) = dist;
      for (const Message& msg : inbox_) {
        for (const auto& [other_poi, other_dist] : msg.payload) {
          if (other_poi == poi) row(msg.sender) = other_dist;
        }
      }
      for (Index h : truth.agents_of_poi[static_cast<std::size_t>(poi)]) {
        if (!std::isfinite(row(h))) throw InsufficientInformation(id_, poi, h, round);
      }
      assign_row(row, rho, m, memberships);
      column(poi) = memberships(id_);
    }
    return column;
  }

  void move_to(Point<double> target) { position_ = std::move(target); }

 private:
  Index id_;
  Point<double> position_;
  std::vector<std::pair<Index, double>> own_;
  std::vector<Message> inbox_;
};

}  // namespace

DistributedResult run_distributed(const Scenario& scenario, const SolverConfig& config) {
  config.validate();
  const auto violations = blocking_violations(validate_scenario(scenario, config.rho));
  if (!violations.empty()) throw ValidationError(violations);

  const Index n = scenario.poi_count();
  const Index r = scenario.agent_count();
  std::vector<SwarmAgent> swarm;
  swarm.reserve(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) swarm.emplace_back(j, scenario.agents.row(j).transpose());

  DistributedResult result;
  auto positions = [&]() {
    PointSet<double> x(r, scenario.dimension());
    for (Index j = 0; j < r; ++j) x.row(j) = swarm[static_cast<std::size_t>(j)].position().transpose();
    return x;
  };

  // Communication round: broadcast, then every agent builds its column.
  auto exchange_and_assign = [&](long round) {
    const PointSet<double> x = positions();
    const auto [sensing, comm] = build_graphs(scenario.pois, x, config.rho, config.theta);
    for (Index i = 0; i < n; ++i)
      if (sensing.agents_of_poi[static_cast<std::size_t>(i)].empty()) throw UncoveredPoI(i, round);

    std::vector<Message> outgoing;
    outgoing.reserve(static_cast<std::size_t>(r));
    for (SwarmAgent& agent : swarm) outgoing.push_back(agent.sense(scenario.pois, config.rho, round));
    std::size_t sent = 0;
    for (const Message& msg : outgoing) {
      for (Index receiver : comm.neighbors[static_cast<std::size_t>(msg.sender)]) {
        swarm[static_cast<std::size_t>(receiver)].deliver(msg);
        result.log.push_back({round, msg.sender, receiver, msg.payload.size()});
        ++sent;
      }
    }
    result.messages_per_round.push_back(sent);
    result.comm_degree_sum_per_round.push_back(comm.edge_endpoints());

    MembershipMatrix<double> U{Matrix<double>::Zero(n, r), config.m};
    for (const SwarmAgent& agent : swarm) U.values.col(agent.id()) = agent.assign(n, r, config.rho, config.m, sensing, round);
    for (Index j = 0; j < r; ++j)
      if (!(U.values.col(j).sum() > 0)) throw IdleAgent(j, round);
    return U;
  };

  Trace& trace = result.trace;
  MembershipMatrix<double> U = exchange_and_assign(0);
  {
    IterationRecord first;
    first.iter = 0;
    first.agent_positions = positions();
    first.U = U;
    first.objective = objective(scenario.pois, first.agent_positions, U);
    first.refined_objective = std::numeric_limits<double>::quiet_NaN();
    trace.iterations.push_back(std::move(first));
  }

  for (int k = 1; k <= config.max_iters; ++k) {
    IterationRecord rec;
    rec.iter = k;
    for (SwarmAgent& agent : swarm) {
      const Point<double> current = agent.position();
      RefinementResult<double> refined;
      try {
        refined = refine_position<double>(scenario.pois, U.values.col(agent.id()), config.m, config.rho, current);
      } catch (const CertificateFailure& e) {
        throw CertificateFailure(e.what(), agent.id(), k);
      }
      ++rec.refinements;
      if (refined.certificate.slater_degenerate) ++rec.slater_degenerate;
      rec.max_displacement = std::max(rec.max_displacement, (refined.position - current).norm());
      agent.move_to(std::move(refined.position));
    }
    const PointSet<double> x = positions();
    rec.refined_objective = objective(scenario.pois, x, U);
    U = exchange_and_assign(k);
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
  return result;
}

void write_message_log_csv(std::ostream& out, const std::vector<MessageLogEntry>& log) {
  out << "round,sender,receiver,payload_size\n";
  for (const MessageLogEntry& e : log) out << e.round << ',' << e.sender << ',' << e.receiver << ',' << e.payload_size << '\n';
}

}  // namespace pcm
