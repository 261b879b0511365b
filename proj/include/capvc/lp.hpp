#pragma once

#include "capvc/instance.hpp"
#include "capvc/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace capvc {

// x_v (edge = 0) or h_{e,v}.
struct VarRef {
  bool is_x = true;
  EdgeId edge = 0;
  VertexId vertex = 0;

  static VarRef x(VertexId v) { return {true, 0, v}; }
  static VarRef h(EdgeId e, VertexId v) { return {false, e, v}; }

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

struct ConstraintRef {
  enum Kind {
    EdgeRow,    // sum of h over the edge == 1
    CapacityRow,// demand routed through v <= c'_v * x_v
    SupportRow, // h_{e,v} <= x_v
    XAtLower,   // x_v == l_v       (bound, only used in tight sets)
    XAtUpper,   // x_v == m_v
    HAtZero,    // h_{e,v} == 0
  };
  Kind kind = EdgeRow;
  EdgeId edge = 0;
  VertexId vertex = 0;

  friend auto operator<=>(const ConstraintRef&, const ConstraintRef&) = default;
};

struct LpModel {
  struct Var {
    VarRef ref;
    Rat lower;
    std::optional<Rat> upper; // nullopt = unbounded above
    Rat cost;
  };
  struct Row {
    ConstraintRef id; // EdgeRow, CapacityRow or SupportRow
    bool equality = false;
    Rat rhs;
    std::vector<std::pair<int, Rat>> coeffs; // (var index, coefficient), sparse
  };

  const ParamTuple* psi = nullptr;
  std::vector<Var> vars;
  std::vector<Row> rows;

  int var_index(const VarRef& ref) const; // -1 when absent
};

// Variables: x_v for every vertex (ascending id), then h_{e,v} for every
// active edge and member vertex (ascending (edge, vertex)). Rows: one
// equality per active edge, one capacity inequality per vertex, one support
// inequality per (active edge, member). Bounds: l_v <= x_v <= m_v, h >= 0.
LpModel build_lp(const ParamTuple& psi);

struct DualCertificate {
  std::vector<Rat> row_duals;     // one per model row; <= 0 on inequality rows
  std::vector<Rat> reduced_costs; // one per model variable
  Rat dual_objective;             // equals the primal objective exactly
};

struct FractionalPoint {
  std::map<VertexId, Rat> x;
  std::map<std::pair<EdgeId, VertexId>, Rat> h;
  Rat objective;
  std::vector<ConstraintRef> tight; // sorted; includes tight bounds
  DualCertificate dual;
};

// Two-phase primal simplex on the bounded-variable form, exact rationals,
// Bland's rule. Returns an optimal basic point together with its tight
// constraint set and a dual optimality certificate. Throws LpInfeasibleError
// when the region is empty.
FractionalPoint solve_basic_optimal(const LpModel& model);

// Exact recheck of rows and bounds at the point.
bool point_satisfies(const FractionalPoint& p, const LpModel& model);

// Recomputes the tight set from the model; ignores p.tight.
std::vector<ConstraintRef> tight_constraints(const FractionalPoint& p, const LpModel& model);

// Strong duality + complementary slackness + dual feasibility, all exact.
bool check_dual_certificate(const FractionalPoint& p, const LpModel& model);

struct RankReport {
  long rank = 0;
  long variable_count = 0;
  bool pass = false; // rank == variable_count
};

// A feasible point is an extreme point of the region iff the gradients of
// its tight constraints span all variables. Throws PreconditionError when
// the point is infeasible.
RankReport verify_extremality(const FractionalPoint& p, const LpModel& model);

// Plain-text dump of the model (objective, rows, bounds) with exact
// rationals, for inspection.
std::string render_lp(const LpModel& model);

} // namespace capvc
