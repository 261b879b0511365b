#pragma once

#include "capvc/instance.hpp"
#include "capvc/lp.hpp"
#include "capvc/rounding.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace capvc {

struct Violation {
  // "edge-sum" (each edge assigned exactly once), "capacity", "bounds"
  // (0 <= x <= m, integral), "support" (0 <= h <= x, keys valid),
  // "objective" or "lp-root" (claimed field does not match recomputation).
  std::string rule;
  EdgeId edge = 0;     // 0 when not edge-specific
  VertexId vertex = 0; // 0 when not vertex-specific
  Rat residual;        // amount by which the constraint is missed
  std::string detail;
};

struct VerifyReport {
  bool constraints_ok = false;
  std::vector<Violation> violations;
  long objective = 0;       // recomputed sum of x
  Rat lp_root;              // recomputed optimum of the root LP
  Rat ratio;                // objective / lp_root (see below for 0 edge cases)
  bool ratio_ok = false;    // ratio <= f; always true for f == 1 (exact path)
  int f = 1;
  bool pass = false;        // constraints_ok && ratio_ok
};

// Hostile-input referee: everything is recomputed from the instance and the
// claimed solution, including the root LP optimum (the solution's own
// lp_root_objective field is cross-checked against it). When the root
// optimum is 0, ratio is 1 if the solution is also 0 and the check fails
// otherwise.
VerifyReport verify_solution(const Instance& inst, const Solution& sol);

// Members v of e with h_{e,v} > 0 at the point. Throws PreconditionError
// when e has no h entries at all (inactive or unknown edge).
std::vector<VertexId> active_subedge(const FractionalPoint& p, EdgeId e);

// Witness that an extreme point's small fractional vertices can each be
// charged to a private edge: gamma maps every small vertex v to an active
// subedge through v that avoids the medium set, and distinct subedges only
// overlap inside the small set. Built from the tight constraints at the
// point via the pivot-assignment argument.
struct SeparationCertificate {
  std::vector<VertexId> small_set;  // 0 < x_v < 1/f
  std::vector<VertexId> medium_set; // 1 < x_v < m_v

  // Tight constraints touching the certificate variables, by shape.
  std::vector<EdgeId> edge_rows;
  std::vector<VertexId> capacity_rows;
  std::vector<std::pair<EdgeId, VertexId>> support_rows;

  // Variable sets: all x over small+medium vertices, h over active edges
  // meeting the small set; h_star drops the h's consumed by support pivots.
  std::vector<VarRef> x_vars;
  std::vector<VarRef> h_vars;
  std::vector<VarRef> h_star;

  // Injective assignment of each surviving variable to a reduced tight row
  // (EdgeRow or CapacityRow) whose entry on that variable is nonzero.
  std::map<VarRef, ConstraintRef> sigma;
  // Redirection: small x assigned to their own capacity row are rerouted to
  // one of their surviving h variables before reading an edge off sigma.
  std::map<VarRef, VarRef> pi;

  std::map<VertexId, std::vector<VertexId>> gamma;
  // cell(v) = (gamma(v) minus the small set) plus v itself; pairwise disjoint.
  std::map<VertexId, std::vector<VertexId>> cells;
};

// Preconditions (each failure names its hypothesis in a PreconditionError):
// the point is feasible for LP(psi); the two sets are disjoint; every member
// sits strictly between its bounds (l_v < x_v < m_v); no edge whose active
// subedge meets the small set has 0 < h_{e,v} = x_v at a vertex outside it;
// no medium vertex has 0 < h_{e,v} = x_v at all. Throws RankDeficiencyError
// when the point is not an extreme point (tight-constraint rank below
// variable count, equivalently the reduced matrix loses column rank).
SeparationCertificate compute_separation_certificate(const FractionalPoint& p,
                                                     const ParamTuple& psi,
                                                     const std::vector<VertexId>& small_set,
                                                     const std::vector<VertexId>& medium_set);

struct DecompositionReport {
  bool pass = false;
  std::vector<std::string> failures;
};

// The rounding bound, cell by cell: cells are pairwise disjoint, within each
// cell sum(ceil(x)) <= f * sum(x), and every positive vertex outside all
// cells satisfies ceil(x_v) <= f * x_v on its own.
DecompositionReport check_rounding_decomposition(const FractionalPoint& p,
                                                 const SeparationCertificate& cert, int f);

} // namespace capvc
