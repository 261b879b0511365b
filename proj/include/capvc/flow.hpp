#pragma once

#include "capvc/instance.hpp"
#include "capvc/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace capvc {

// Why coverage failed: a set of edges whose pooled demand exceeds the pooled
// budget of every vertex they touch, or a zero-demand edge with no vertex
// holding a copy.
struct CoverageFailure {
  std::vector<EdgeId> edges;      // demand side of the cut
  std::vector<VertexId> vertices; // budget side reachable from those edges
  Rat deficiency;                 // unmet demand
  std::optional<EdgeId> uncovered_zero_demand_edge;

  std::string describe() const;
};

struct CoverageResult {
  bool feasible = false;
  // Present when feasible: h with sum over each edge == 1 and per-vertex
  // load within budget. Zero entries are omitted.
  std::map<std::pair<EdgeId, VertexId>, Rat> assignment;
  std::optional<CoverageFailure> failure;
};

// Can every edge's demand be split among its members when vertex v offers
// budget c_v * copies[v]? Zero-demand edges additionally need some member
// with copies >= 1. Decided by max-flow on the edge-vertex network after
// clearing denominators; the assignment is read off the flow.
CoverageResult check_coverage(const Instance& inst, const std::vector<long>& copies);

// check_coverage with every multiplicity maxed out (copies = m).
CoverageResult check_feasibility(const Instance& inst);

// For instances whose demands and capacities are integers: an assignment
// supported by x_star in which every routed amount d_e * h_{e,v} is an
// integer (integral max-flow). Requires 0 <= x_star_v <= m_v; throws
// PreconditionError on non-integral data or out-of-range x_star.
CoverageResult extract_integral_assignment(const Instance& inst,
                                           const std::map<VertexId, long>& x_star);

} // namespace capvc
