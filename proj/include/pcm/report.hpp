#ifndef PCM_REPORT_HPP
#define PCM_REPORT_HPP

#include "pcm/solver.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace pcm {

/// Columns: iter, agent_id, x, y[, z], objective, max_displacement.
void write_trace_csv(std::ostream& out, const Trace& trace);

struct ObjectiveSeries {
  std::string label;
  std::vector<double> values;  // one per iteration
};

/// Wide table: iter, then one column per series; blank once a series ended.
void write_objectives_csv(std::ostream& out, const std::vector<ObjectiveSeries>& series);

/// PoIs as circles colored by their strongest agent, initial agents as
/// white triangles, final agents as blue triangles, sensing radii dashed.
/// `reference` (optional) adds red triangles, e.g. C-means final positions.
std::string render_state_svg(const Scenario& scenario, const Trace& trace, double rho,
                             const PointSet<double>* reference = nullptr);

/// Associations of one agent: PoI color runs blue (0) to red (1); exact
/// zeros are drawn as black crosses.
std::string render_membership_svg(const Scenario& scenario, const IterationRecord& state, Index agent);

/// Objective versus iteration, one polyline per series.
std::string render_objectives_svg(const std::vector<ObjectiveSeries>& series);

}  // namespace pcm

#endif  // PCM_REPORT_HPP
