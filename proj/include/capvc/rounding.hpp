#pragma once

#include "capvc/instance.hpp"
#include "capvc/lp.hpp"

#include <map>
#include <utility>
#include <vector>

namespace capvc {

// Vertices with 0 < x_v < 1/f: too small to pay for themselves when
// rounded up, so edges are never folded into them.
std::vector<VertexId> compute_small_set(const FractionalPoint& p, int f);

// T(e) = members v of e outside the small set with 0 < h_{e,v} = x_v.
// Edges with empty support are omitted.
std::map<EdgeId, std::vector<VertexId>> compute_support_sets(
    const FractionalPoint& p, const ParamTuple& psi, const std::vector<VertexId>& small_set);

struct FoldAction {
  EdgeId edge = 0;
  VertexId into = 0;              // chosen receiver, smallest id in support
  std::vector<VertexId> support;  // T(e)
};

struct IterationRecord {
  int index = 0;       // 1-based
  ParamTuple psi;      // tuple this iteration's LP was built from
  FractionalPoint point;
  std::vector<VertexId> small_set;
  std::map<EdgeId, std::vector<VertexId>> support_sets;
  std::vector<FoldAction> folds; // empty on the final iteration
};

struct Trace {
  std::vector<IterationRecord> iterations;
  // h' entries fixed at fold time; value is always 1.
  std::map<std::pair<EdgeId, VertexId>, Rat> folded_assignment;
};

// One folding pass: every edge with nonempty support is assigned to its
// smallest supporting vertex; every supporting vertex of that edge gets the
// edge's demand carved out of its residual capacity and its lower bound
// pinned to its current x. Returns the refined tuple and the actions taken.
// Throws PreconditionError when no edge has support, InternalInvariantError
// if a carve-out would drive a residual capacity negative.
std::pair<ParamTuple, std::vector<FoldAction>> fold_step(const ParamTuple& psi,
                                                         const IterationRecord& record);

struct Solution {
  std::map<VertexId, long> x;
  std::map<std::pair<EdgeId, VertexId>, Rat> h; // zero entries omitted
  long objective = 0;      // sum of x
  Rat lp_root_objective;   // optimum of the first LP
  Rat ratio;               // objective / lp_root_objective, 1 when both are 0
};

// The full pipeline: feasibility check, iterated LP + fold until no edge has
// support, then round the final x up and stitch the final h together with
// the folded assignments. Throws InfeasibleInstanceError (with the coverage
// failure's description) when even maximal multiplicities cannot cover.
// Every documented loop invariant is checked along the way and raises
// InternalInvariantError when broken.
std::pair<Solution, Trace> run(const Instance& inst);

} // namespace capvc
