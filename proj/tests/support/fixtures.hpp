#pragma once

// Shared fixtures plus small reference implementations, written independently
// from the library so the tests have something to disagree with.

#include "capvc/exact_linalg.hpp"
#include "capvc/instance.hpp"
#include "capvc/lp.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace fixtures {

// Two unit vertices sharing one unit edge; the solver picks vertex 1.
inline const char* kTwoVertexText = "p vchc 2 1\nv 1 1 1\nv 2 1 1\ne 1 1 2\n";

// Triangle with pairwise edges of demand 2 and capacity 2 everywhere; the
// only cover uses all three vertices and the relaxation already costs 3.
inline const char* kTriangleText =
    "p vchc 3 3\nv 1 2 1\nv 2 2 1\nv 3 2 1\ne 2 1 2\ne 2 1 3\ne 2 2 3\n";

// Single vertex with a singleton edge; the h <= x row pins x to 1.
inline const char* kSingletonText = "p vchc 1 1\nv 1 1 1\ne 1 1\n";

// One edge too heavy for either endpoint alone (demand 4, capacities 3):
// the optimum splits it and leaves one endpoint at x = 1/3.
inline const char* kSplitEdgeText = "p vchc 2 1\nv 1 3 1\nv 2 3 1\ne 4 1 2\n";

// Same shape, three endpoints of capacity 4 under demand 5; ends at
// x = (1, 1/4, 0).
inline const char* kSplitEdge3Text =
    "p vchc 3 1\nv 1 4 1\nv 2 4 1\nv 3 4 1\ne 5 1 2 3\n";

// Demand 5 against capacity 2 with multiplicity 3: the optimum parks
// x = 5/2 on one vertex, strictly between 1 and its multiplicity.
inline const char* kOverloadText = "p vchc 2 1\nv 1 2 3\nv 2 2 3\ne 5 1 2\n";

// Disjoint union of the split edge and the overload edge: the final point
// has both a small fractional vertex and a vertex above 1.
inline const char* kSplitOverloadText =
    "p vchc 4 2\nv 1 3 1\nv 2 3 1\nv 3 2 3\nv 4 2 3\ne 4 1 2\ne 5 3 4\n";

inline capvc::Instance make(const char* text) { return capvc::parse_instance(text); }

// Gaussian elimination rank with plain rational pivoting, no fraction-free
// tricks; cross-checks the library's elimination.
inline long rank_by_gauss(capvc::RatMatrix m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  long rank = 0;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t pivot = row;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[row]);
    for (size_t i = row + 1; i < rows; ++i) {
      if (m[i][col] == 0) continue;
      capvc::Rat factor = m[i][col] / m[row][col];
      for (size_t j = col; j < cols; ++j) m[i][j] -= factor * m[row][j];
    }
    ++row;
    ++rank;
  }
  return rank;
}

// Solves a square system by elimination; nullopt when singular.
inline std::optional<std::vector<capvc::Rat>> solve_square(capvc::RatMatrix a,
                                                           std::vector<capvc::Rat> b) {
  size_t n = a.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      capvc::Rat factor = a[i][col] / a[col][col];
      for (size_t j = col; j < n; ++j) a[i][j] -= factor * a[col][j];
      b[i] -= factor * b[col];
    }
  }
  std::vector<capvc::Rat> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline capvc::FractionalPoint point_from_values(const capvc::LpModel& model,
                                                const std::vector<capvc::Rat>& values) {
  capvc::FractionalPoint p;
  p.objective = 0;
  for (size_t i = 0; i < model.vars.size(); ++i) {
    const capvc::VarRef& ref = model.vars[i].ref;
    if (ref.is_x)
      p.x[ref.vertex] = values[i];
    else
      p.h[{ref.edge, ref.vertex}] = values[i];
    p.objective += model.vars[i].cost * values[i];
  }
  return p;
}

// Minimum objective over all candidate basic points: every size-n subset of
// the constraint set (rows and bounds) is forced to equality and solved
// exactly; feasible unique solutions compete on cost. Exponential, so only
// for models with a handful of variables.
inline std::optional<capvc::Rat> lp_minimum_by_enumeration(const capvc::LpModel& model) {
  using capvc::Rat;
  size_t n = model.vars.size();
  struct Line {
    std::vector<Rat> grad;
    Rat rhs;
  };
  std::vector<Line> lines;
  for (const auto& row : model.rows) {
    Line line{std::vector<Rat>(n, Rat(0)), row.rhs};
    for (const auto& [j, a] : row.coeffs) line.grad[j] = a;
    lines.push_back(std::move(line));
  }
  for (size_t j = 0; j < n; ++j) {
    Line low{std::vector<Rat>(n, Rat(0)), model.vars[j].lower};
    low.grad[j] = 1;
    lines.push_back(std::move(low));
    if (model.vars[j].upper) {
      Line up{std::vector<Rat>(n, Rat(0)), *model.vars[j].upper};
      up.grad[j] = 1;
      lines.push_back(std::move(up));
    }
  }

  std::optional<Rat> best;
  std::vector<size_t> pick(n);
  auto consider = [&]() {
    capvc::RatMatrix a;
    std::vector<Rat> b;
    for (size_t idx : pick) {
      a.push_back(lines[idx].grad);
      b.push_back(lines[idx].rhs);
    }
    auto values = solve_square(std::move(a), std::move(b));
    if (!values) return;
    capvc::FractionalPoint p = point_from_values(model, *values);
    if (!point_satisfies(p, model)) return;
    if (!best || p.objective < *best) best = p.objective;
  };
  auto recurse = [&](auto&& self, size_t depth, size_t from) -> void {
    if (depth == n) {
      consider();
      return;
    }
    for (size_t idx = from; idx + (n - depth - 1) < lines.size(); ++idx) {
      pick[depth] = idx;
      self(self, depth + 1, idx + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

// Coverage feasibility from first principles: zero-demand edges need a
// member with a copy, and every subset of positive-demand edges must fit in
// the pooled budget of the vertices it touches.
inline bool coverable_by_subsets(const capvc::Instance& inst, const std::vector<long>& copies) {
  using capvc::Rat;
  std::vector<capvc::EdgeId> positive;
  for (const capvc::Edge& e : inst.edges()) {
    if (e.demand == 0) {
      bool held = false;
      for (capvc::VertexId v : e.vertices) held = held || copies[v - 1] >= 1;
      if (!held) return false;
    } else {
      positive.push_back(e.id);
    }
  }
  size_t m = positive.size();
  for (size_t mask = 1; mask < (size_t{1} << m); ++mask) {
    Rat demand(0);
    std::vector<bool> touched(inst.vertex_count() + 1, false);
    for (size_t i = 0; i < m; ++i) {
      if (!(mask & (size_t{1} << i))) continue;
      const capvc::Edge& e = inst.edge(positive[i]);
      demand += e.demand;
      for (capvc::VertexId v : e.vertices) touched[v] = true;
    }
    Rat budget(0);
    for (const capvc::Vertex& v : inst.vertices())
      if (touched[v.id]) budget += v.capacity * copies[v.id - 1];
    if (demand > budget) return false;
  }
  return true;
}

} // namespace fixtures
