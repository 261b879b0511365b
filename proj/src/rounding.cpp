#include "capvc/rounding.hpp"

#include "capvc/errors.hpp"
#include "capvc/flow.hpp"
#include "capvc/verify.hpp"

#include <algorithm>
#include <string>

namespace capvc {

std::vector<VertexId> compute_small_set(const FractionalPoint& p, int f) {
  Rat inv_f(1, f);
  std::vector<VertexId> out;
  for (const auto& [v, xv] : p.x)
    if (xv > 0 && xv < inv_f) out.push_back(v);
  return out;
}

std::map<EdgeId, std::vector<VertexId>> compute_support_sets(
    const FractionalPoint& p, const ParamTuple& psi, const std::vector<VertexId>& small_set) {
  std::map<EdgeId, std::vector<VertexId>> sets;
  for (EdgeId e : psi.active_edges) {
    std::vector<VertexId> support;
    for (VertexId v : psi.inst->edge(e).vertices) {
      if (std::binary_search(small_set.begin(), small_set.end(), v)) continue;
      const Rat& h = p.h.at({e, v});
      if (h > 0 && h == p.x.at(v)) support.push_back(v);
    }
    if (!support.empty()) sets[e] = std::move(support);
  }
  return sets;
}

std::pair<ParamTuple, std::vector<FoldAction>> fold_step(const ParamTuple& psi,
                                                         const IterationRecord& record) {
  if (record.support_sets.empty())
    throw PreconditionError("no edge has a nonempty support set");

  ParamTuple next = psi;
  std::vector<FoldAction> folds;
  for (const auto& [e, support] : record.support_sets) {
    if (!next.edge_active(e)) throw InternalInvariantError("folding an inactive edge");
    const Rat& demand = psi.inst->edge(e).demand;
    FoldAction action;
    action.edge = e;
    action.into = support.front();
    action.support = support;
    for (VertexId v : support) {
      Rat& residual = next.residual_caps[v - 1];
      if (demand > residual)
        throw InternalInvariantError("fold would overdraw residual capacity at vertex " +
                                     std::to_string(v));
      residual -= demand;
      next.lower_bounds[v - 1] = record.point.x.at(v);
    }
    next.active_edges.erase(
        std::find(next.active_edges.begin(), next.active_edges.end(), e));
    folds.push_back(std::move(action));
  }

  // Lower bounds may only grow, and never past the point they were read from.
  for (const Vertex& v : psi.inst->vertices()) {
    const Rat& before = psi.lower_bound(v.id);
    const Rat& after = next.lower_bound(v.id);
    if (after < before || after > record.point.x.at(v.id))
      throw InternalInvariantError("lower bound left the [previous, x] corridor at vertex " +
                                   std::to_string(v.id));
  }
  validate_tuple(next);
  return {next, folds};
}

namespace {

// The surviving part of this iteration's point must stay feasible for the
// next tuple's LP; this is what keeps the optimum from rising.
void check_refinement(const FractionalPoint& p, const ParamTuple& next) {
  LpModel model = build_lp(next);
  FractionalPoint restricted;
  restricted.x = p.x;
  for (EdgeId e : next.active_edges)
    for (VertexId v : next.inst->edge(e).vertices) restricted.h[{e, v}] = p.h.at({e, v});
  if (!point_satisfies(restricted, model))
    throw InternalInvariantError("surviving assignment infeasible for the refined tuple");
}

std::pair<Solution, Trace> finish(const Instance& inst, Trace&& trace) {
  const IterationRecord& last = trace.iterations.back();
  int f = inst.max_edge_size();

  Solution sol;
  sol.objective = 0;
  for (const auto& [v, xv] : last.point.x) {
    Int up = rat_ceil(xv);
    sol.x[v] = up.get_si();
    sol.objective += sol.x[v];
  }
  for (EdgeId e : last.psi.active_edges)
    for (VertexId v : inst.edge(e).vertices) {
      const Rat& h = last.point.h.at({e, v});
      if (h != 0) sol.h[{e, v}] = h;
    }
  for (const auto& [key, one] : trace.folded_assignment) sol.h[key] = one;

  sol.lp_root_objective = trace.iterations.front().point.objective;
  if (sol.lp_root_objective == 0) {
    if (sol.objective != 0)
      throw InternalInvariantError("zero root objective with a nonzero rounded solution");
    sol.ratio = 1;
  } else {
    sol.ratio = Rat(sol.objective) / sol.lp_root_objective;
    sol.ratio.canonicalize();
  }
  if (f >= 2 && Rat(sol.objective) > f * sol.lp_root_objective)
    throw InternalInvariantError("rounded objective exceeds f times the root optimum");

  VerifyReport report = verify_solution(inst, sol);
  if (!report.pass) {
    std::string detail = report.violations.empty() ? "ratio" : report.violations.front().detail;
    throw InternalInvariantError("solution failed verification: " + detail);
  }
  return {std::move(sol), std::move(trace)};
}

// Size-1 edges force their h to 1, so the root LP already decides every
// vertex independently and rounding it up is optimal per vertex. No folding
// happens on this path.
std::pair<Solution, Trace> run_single_member(const Instance& inst, ParamTuple psi, Trace trace) {
  LpModel model = build_lp(psi);
  FractionalPoint p = solve_basic_optimal(model);
  if (!verify_extremality(p, model).pass)
    throw InternalInvariantError("solver returned a non-extreme point");

  IterationRecord rec;
  rec.index = 1;
  rec.psi = std::move(psi);
  rec.point = std::move(p);
  rec.small_set = compute_small_set(rec.point, 1);
  rec.support_sets = compute_support_sets(rec.point, rec.psi, rec.small_set);
  trace.iterations.push_back(std::move(rec));
  return finish(inst, std::move(trace));
}

} // namespace

std::pair<Solution, Trace> run(const Instance& inst) {
  CoverageResult feasibility = check_feasibility(inst);
  if (!feasibility.feasible) throw InfeasibleInstanceError(feasibility.failure->describe());

  int f = inst.max_edge_size();
  Trace trace;
  ParamTuple psi = initial_tuple(inst);
  if (f == 1) return run_single_member(inst, std::move(psi), std::move(trace));

  int max_records = inst.edge_count() + 1;
  std::optional<Rat> prev_objective;
  for (int iter = 1;; ++iter) {
    if (iter > max_records)
      throw InternalInvariantError("folding loop ran past the edge count");
    LpModel model = build_lp(psi);
    FractionalPoint p = solve_basic_optimal(model);
    if (!verify_extremality(p, model).pass)
      throw InternalInvariantError("solver returned a non-extreme point");
    if (prev_objective && p.objective > *prev_objective)
      throw InternalInvariantError("objective rose across a refinement");
    prev_objective = p.objective;

    IterationRecord rec;
    rec.index = iter;
    rec.psi = psi;
    rec.point = std::move(p);
    rec.small_set = compute_small_set(rec.point, f);
    rec.support_sets = compute_support_sets(rec.point, psi, rec.small_set);
    if (rec.support_sets.empty()) {
      trace.iterations.push_back(std::move(rec));
      break;
    }

    auto [next, folds] = fold_step(psi, rec);
    check_refinement(rec.point, next);
    rec.folds = std::move(folds);
    for (const FoldAction& a : rec.folds) trace.folded_assignment[{a.edge, a.into}] = 1;
    trace.iterations.push_back(std::move(rec));
    psi = std::move(next);
  }

  return finish(inst, std::move(trace));
}

} // namespace capvc
