#ifndef PCM_DISTSIM_HPP
#define PCM_DISTSIM_HPP

#include "pcm/solver.hpp"

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

namespace pcm {

/// Bipartite PoI-agent adjacency: edge (i, j) iff delta_ij <= rho.
struct SensingGraph {
  double rho = 0;
  std::vector<std::vector<Index>> agents_of_poi;
  std::vector<std::vector<Index>> pois_of_agent;

  bool has_edge(Index poi, Index agent) const;
};

/// Agent-agent adjacency: edge (j, h), j != h, iff |x_j - x_h| <= theta.
struct CommGraph {
  double theta = 0;
  std::vector<std::vector<Index>> neighbors;

  bool has_edge(Index a, Index b) const;
  std::size_t degree(Index agent) const { return neighbors[static_cast<std::size_t>(agent)].size(); }
  std::size_t edge_endpoints() const;  // sum of degrees
};

struct Message {
  Index sender = 0;
  long round = 0;
  std::vector<std::pair<Index, double>> payload;  // (PoI id, distance) for sensed PoIs
};

struct MessageLogEntry {
  long round = 0;
  Index sender = 0;
  Index receiver = 0;
  std::size_t payload_size = 0;
};

/// Builds both graphs from current positions. Throws InvalidThreshold when
/// theta < 2 rho and Error if two agents sharing a PoI end up disconnected.
std::pair<SensingGraph, CommGraph> build_graphs(const PointSet<double>& pois, const PointSet<double>& agents,
                                                double rho, double theta);

struct DistributedResult {
  Trace trace;
  std::vector<std::size_t> messages_per_round;
  std::vector<std::size_t> comm_degree_sum_per_round;
  std::vector<MessageLogEntry> log;
};

/// Synchronous-round execution of the algorithm: each round the agents
/// broadcast their sensed distances to communication neighbours, compute
/// their own membership column from what they received, and refine locally.
/// The global stop test runs in the harness, not in the network.
DistributedResult run_distributed(const Scenario& scenario, const SolverConfig& config);

void write_message_log_csv(std::ostream& out, const std::vector<MessageLogEntry>& log);

}  // namespace pcm

#endif  // PCM_DISTSIM_HPP
