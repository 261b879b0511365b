#include "capvc/verify.hpp"

#include "capvc/errors.hpp"
#include "capvc/exact_linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace capvc {

namespace {

bool member(const std::vector<VertexId>& sorted, VertexId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<VertexId> normalized(std::vector<VertexId> ids, const Instance& inst,
                                 const char* which) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw PreconditionError(std::string("duplicate vertex in the ") + which + " set");
  for (VertexId v : ids)
    if (v < 1 || v > inst.vertex_count())
      throw PreconditionError(std::string("unknown vertex in the ") + which + " set");
  return ids;
}

} // namespace

VerifyReport verify_solution(const Instance& inst, const Solution& sol) {
  VerifyReport report;
  report.f = inst.max_edge_size();
  auto flag = [&](const std::string& rule, EdgeId e, VertexId v, Rat residual,
                  std::string detail) {
    report.violations.push_back({rule, e, v, std::move(residual), std::move(detail)});
  };

  for (const Vertex& v : inst.vertices()) {
    auto it = sol.x.find(v.id);
    if (it == sol.x.end()) {
      flag("bounds", 0, v.id, Rat(0), "missing x for vertex " + std::to_string(v.id));
      continue;
    }
    if (it->second < 0)
      flag("bounds", 0, v.id, Rat(-it->second),
           "x negative at vertex " + std::to_string(v.id));
    else if (it->second > v.multiplicity)
      flag("bounds", 0, v.id, Rat(it->second - v.multiplicity),
           "x exceeds multiplicity at vertex " + std::to_string(v.id));
  }
  for (const auto& [v, xv] : sol.x)
    if (v < 1 || v > inst.vertex_count())
      flag("bounds", 0, v, Rat(xv), "x given for unknown vertex " + std::to_string(v));

  auto x_of = [&](VertexId v) -> long {
    auto it = sol.x.find(v);
    return it == sol.x.end() ? 0 : it->second;
  };

  for (const auto& [key, h] : sol.h) {
    auto [e, v] = key;
    if (e < 1 || e > inst.edge_count()) {
      flag("support", e, v, h, "h given for unknown edge " + std::to_string(e));
      continue;
    }
    const auto& members = inst.edge(e).vertices;
    if (!std::binary_search(members.begin(), members.end(), v)) {
      flag("support", e, v, h,
           "h given for vertex " + std::to_string(v) + " outside edge " + std::to_string(e));
      continue;
    }
    if (h < 0) flag("support", e, v, -h, "h negative");
    else if (h > x_of(v))
      flag("support", e, v, h - x_of(v),
           "h exceeds x at edge " + std::to_string(e) + ", vertex " + std::to_string(v));
  }

  for (const Edge& e : inst.edges()) {
    Rat sum(0);
    for (VertexId v : e.vertices) {
      auto it = sol.h.find({e.id, v});
      if (it != sol.h.end()) sum += it->second;
    }
    if (sum != 1)
      flag("edge-sum", e.id, 0, sum - 1,
           "assignments of edge " + std::to_string(e.id) + " sum to " + rat_string(sum));
  }

  for (const Vertex& v : inst.vertices()) {
    Rat load(0);
    for (EdgeId e : inst.incident_edges(v.id)) {
      auto it = sol.h.find({e, v.id});
      if (it != sol.h.end()) load += inst.edge(e).demand * it->second;
    }
    Rat budget = v.capacity * x_of(v.id);
    if (load > budget)
      flag("capacity", 0, v.id, load - budget,
           "load " + rat_string(load) + " exceeds budget " + rat_string(budget) + " at vertex " +
               std::to_string(v.id));
  }

  long total = 0;
  for (const Vertex& v : inst.vertices()) total += x_of(v.id);
  report.objective = total;
  if (sol.objective != total)
    flag("objective", 0, 0, Rat(sol.objective - total),
         "claimed objective " + std::to_string(sol.objective) + " differs from recomputed " +
             std::to_string(total));

  bool root_solved = false;
  try {
    ParamTuple root = initial_tuple(inst);
    LpModel model = build_lp(root);
    FractionalPoint rp = solve_basic_optimal(model);
    report.lp_root = rp.objective;
    root_solved = true;
  } catch (const LpInfeasibleError&) {
    report.lp_root = 0;
    flag("lp-root", 0, 0, Rat(0), "the fractional relaxation is infeasible");
  }
  if (root_solved && sol.lp_root_objective != report.lp_root)
    flag("lp-root", 0, 0, sol.lp_root_objective - report.lp_root,
         "claimed root objective " + rat_string(sol.lp_root_objective) +
             " differs from recomputed " + rat_string(report.lp_root));

  report.constraints_ok = report.violations.empty();
  if (report.lp_root == 0) {
    report.ratio = total == 0 ? Rat(1) : Rat(total);
    report.ratio_ok = total == 0;
  } else {
    report.ratio = Rat(total) / report.lp_root;
    report.ratio.canonicalize();
    report.ratio_ok = report.f == 1 || report.ratio <= report.f;
  }
  report.pass = report.constraints_ok && report.ratio_ok;
  return report;
}

std::vector<VertexId> active_subedge(const FractionalPoint& p, EdgeId e) {
  bool known = false;
  std::vector<VertexId> out;
  for (auto it = p.h.lower_bound({e, 0}); it != p.h.end() && it->first.first == e; ++it) {
    known = true;
    if (it->second > 0) out.push_back(it->first.second);
  }
  if (!known)
    throw PreconditionError("edge " + std::to_string(e) +
                            " has no assignment variables at this point (folded or unknown)");
  return out;
}

SeparationCertificate compute_separation_certificate(const FractionalPoint& p,
                                                     const ParamTuple& psi,
                                                     const std::vector<VertexId>& small_set,
                                                     const std::vector<VertexId>& medium_set) {
  const Instance& inst = *psi.inst;
  LpModel model = build_lp(psi);
  if (!point_satisfies(p, model))
    throw PreconditionError("hypothesis failed: the point is feasible for the tuple's LP");

  SeparationCertificate cert;
  cert.small_set = normalized(small_set, inst, "small");
  cert.medium_set = normalized(medium_set, inst, "medium");

  {
    std::vector<VertexId> both;
    std::set_intersection(cert.small_set.begin(), cert.small_set.end(), cert.medium_set.begin(),
                          cert.medium_set.end(), std::back_inserter(both));
    if (!both.empty())
      throw PreconditionError("hypothesis failed: the small and medium sets are disjoint (vertex " +
                              std::to_string(both.front()) + " is in both)");
  }
  for (const auto& ids : {cert.small_set, cert.medium_set})
    for (VertexId v : ids) {
      const Rat& x = p.x.at(v);
      if (x <= psi.lower_bound(v) || x >= inst.vertex(v).multiplicity)
        throw PreconditionError(
            "hypothesis failed: members sit strictly between their bounds (vertex " +
            std::to_string(v) + " does not)");
    }

  std::map<EdgeId, std::vector<VertexId>> actv;
  for (EdgeId e : psi.active_edges) actv[e] = active_subedge(p, e);

  for (EdgeId e : psi.active_edges) {
    bool meets_small = false;
    for (VertexId v : actv[e])
      if (member(cert.small_set, v)) meets_small = true;
    for (VertexId v : actv[e]) {
      bool saturated = p.h.at({e, v}) == p.x.at(v);
      if (!saturated) continue;
      if (meets_small && !member(cert.small_set, v))
        throw PreconditionError("hypothesis failed: the small set is not supporting (edge " +
                                std::to_string(e) + " supports vertex " + std::to_string(v) + ")");
      if (member(cert.medium_set, v))
        throw PreconditionError("hypothesis failed: the medium set is not supported (edge " +
                                std::to_string(e) + " supports vertex " + std::to_string(v) + ")");
    }
  }

  RankReport rank = verify_extremality(p, model);
  if (!rank.pass) {
    std::ostringstream msg;
    msg << "tight constraints span rank " << rank.rank << " over " << rank.variable_count
        << " variables; the point is not an extreme point";
    throw RankDeficiencyError(msg.str());
  }

  // Variable sets: x over both vertex sets, h over edges actively meeting
  // the small set.
  std::vector<VertexId> xs;
  std::merge(cert.small_set.begin(), cert.small_set.end(), cert.medium_set.begin(),
             cert.medium_set.end(), std::back_inserter(xs));
  for (VertexId v : xs) cert.x_vars.push_back(VarRef::x(v));
  std::vector<EdgeId> edges_meeting_small;
  for (EdgeId e : psi.active_edges) {
    bool meets = false;
    for (VertexId v : actv[e])
      if (member(cert.small_set, v)) meets = true;
    if (!meets) continue;
    edges_meeting_small.push_back(e);
    for (VertexId v : actv[e]) cert.h_vars.push_back(VarRef::h(e, v));
  }

  // Tight rows of the model, by shape.
  std::set<VertexId> tight_capacity;
  std::set<std::pair<EdgeId, VertexId>> tight_support;
  for (const ConstraintRef& c : tight_constraints(p, model)) {
    if (c.kind == ConstraintRef::CapacityRow) tight_capacity.insert(c.vertex);
    if (c.kind == ConstraintRef::SupportRow) tight_support.insert({c.edge, c.vertex});
  }

  auto in_h = [&](EdgeId e, VertexId v) {
    return std::binary_search(edges_meeting_small.begin(), edges_meeting_small.end(), e) &&
           std::binary_search(actv[e].begin(), actv[e].end(), v);
  };

  cert.edge_rows = edges_meeting_small;
  std::set<std::pair<EdgeId, VertexId>> pivots;
  for (const auto& ev : tight_support) {
    auto [e, v] = ev;
    if (in_h(e, v)) {
      if (!member(cert.small_set, v))
        throw InternalInvariantError("saturated certificate variable outside the small set");
      pivots.insert(ev);
      cert.support_rows.push_back(ev);
    } else if (member(cert.small_set, v) || member(cert.medium_set, v)) {
      // h = x > 0 puts v on the edge's active subedge, so the variable had
      // to be in H; reaching here means the classification leaked.
      if (p.x.at(v) > 0) throw InternalInvariantError("unclassifiable tight supporting row");
    }
  }

  for (const Vertex& vert : inst.vertices()) {
    VertexId v = vert.id;
    if (!tight_capacity.count(v)) continue;
    bool touches = false;
    if (psi.residual_cap(v) != 0 && (member(cert.small_set, v) || member(cert.medium_set, v)))
      touches = true;
    for (EdgeId e : inst.incident_edges(v)) {
      if (touches) break;
      if (psi.edge_active(e) && inst.edge(e).demand != 0 && in_h(e, v)) touches = true;
    }
    if (touches) cert.capacity_rows.push_back(v);
  }

  for (const VarRef& h : cert.h_vars)
    if (!pivots.count({h.edge, h.vertex})) cert.h_star.push_back(h);

  // Full matrix over columns (H, X), rows (edge rows, capacity rows, pivot
  // support rows); then eliminate the pivot variables and cut down to the
  // reduced matrix over (H*, X).
  std::map<VarRef, size_t> col_of;
  std::vector<VarRef> cols;
  for (const VarRef& h : cert.h_vars) {
    col_of[h] = cols.size();
    cols.push_back(h);
  }
  for (const VarRef& x : cert.x_vars) {
    col_of[x] = cols.size();
    cols.push_back(x);
  }

  RatMatrix full;
  for (EdgeId e : cert.edge_rows) {
    std::vector<Rat> row(cols.size(), Rat(0));
    for (VertexId v : actv[e]) row[col_of.at(VarRef::h(e, v))] = 1;
    full.push_back(std::move(row));
  }
  for (VertexId v : cert.capacity_rows) {
    std::vector<Rat> row(cols.size(), Rat(0));
    for (EdgeId e : inst.incident_edges(v)) {
      if (!psi.edge_active(e) || inst.edge(e).demand == 0 || !in_h(e, v)) continue;
      row[col_of.at(VarRef::h(e, v))] = inst.edge(e).demand;
    }
    if (psi.residual_cap(v) != 0) {
      auto it = col_of.find(VarRef::x(v));
      if (it != col_of.end()) row[it->second] = -psi.residual_cap(v);
    }
    full.push_back(std::move(row));
  }
  size_t reduced_rows = full.size();
  for (const auto& [e, v] : pivots) {
    std::vector<Rat> row(cols.size(), Rat(0));
    row[col_of.at(VarRef::h(e, v))] = 1;
    row[col_of.at(VarRef::x(v))] = -1;
    full.push_back(std::move(row));
  }
  for (size_t k = 0; k < pivots.size(); ++k) {
    const auto& prow = full[reduced_rows + k];
    size_t pcol = 0;
    while (prow[pcol] == 0) ++pcol;
    for (size_t i = 0; i < full.size(); ++i) {
      if (i == reduced_rows + k || full[i][pcol] == 0) continue;
      Rat factor = full[i][pcol];
      for (size_t j = 0; j < cols.size(); ++j)
        if (prow[j] != 0) full[i][j] -= factor * prow[j];
    }
  }

  std::vector<VarRef> tilde_cols = cert.h_star;
  for (const VarRef& x : cert.x_vars) tilde_cols.push_back(x);
  RatMatrix tilde(reduced_rows, std::vector<Rat>(tilde_cols.size()));
  for (size_t i = 0; i < reduced_rows; ++i)
    for (size_t j = 0; j < tilde_cols.size(); ++j) tilde[i][j] = full[i][col_of.at(tilde_cols[j])];

  if (static_cast<size_t>(matrix_rank(tilde)) < tilde_cols.size())
    throw RankDeficiencyError(
        "the reduced certificate matrix loses column rank; the point is not an extreme point "
        "relative to the given sets");

  std::vector<long> match = match_columns_to_rows(tilde);
  auto row_ref = [&](long i) -> ConstraintRef {
    if (static_cast<size_t>(i) < cert.edge_rows.size())
      return {ConstraintRef::EdgeRow, cert.edge_rows[i], 0};
    return {ConstraintRef::CapacityRow, 0,
            cert.capacity_rows[i - static_cast<long>(cert.edge_rows.size())]};
  };
  for (size_t j = 0; j < tilde_cols.size(); ++j) {
    if (match[j] < 0)
      throw InternalInvariantError("no distinct pivot assignment exists despite full column rank");
    if (tilde[match[j]][j] == 0)
      throw InternalInvariantError("pivot assignment landed on a zero entry");
    cert.sigma[tilde_cols[j]] = row_ref(match[j]);
  }
  {
    std::set<ConstraintRef> rows_taken;
    for (const auto& [var, row] : cert.sigma)
      if (!rows_taken.insert(row).second)
        throw InternalInvariantError("pivot assignment is not injective");
  }

  for (const VarRef& xr : cert.x_vars) {
    VertexId v = xr.vertex;
    const ConstraintRef& target = cert.sigma.at(xr);
    bool redirect = member(cert.small_set, v) && target.kind == ConstraintRef::CapacityRow &&
                    target.vertex == v;
    if (!redirect) {
      cert.pi[xr] = xr;
      continue;
    }
    VarRef chosen = xr;
    bool found = false;
    for (const VarRef& h : cert.h_star)
      if (h.vertex == v && (!found || h.edge < chosen.edge)) {
        chosen = h;
        found = true;
      }
    if (!found)
      throw InternalInvariantError("no surviving h variable to redirect vertex " +
                                   std::to_string(v) + " through");
    cert.pi[xr] = chosen;
  }

  for (VertexId v : cert.small_set) {
    const ConstraintRef& target = cert.sigma.at(cert.pi.at(VarRef::x(v)));
    if (target.kind != ConstraintRef::EdgeRow)
      throw InternalInvariantError("redirected variable of vertex " + std::to_string(v) +
                                   " is not assigned to an edge constraint");
    cert.gamma[v] = actv.at(target.edge);
  }

  // The certified properties, rechecked from the outputs themselves.
  for (VertexId v : cert.small_set) {
    const auto& g = cert.gamma.at(v);
    if (!std::binary_search(g.begin(), g.end(), v))
      throw InternalInvariantError("mapped subedge misses its own vertex " + std::to_string(v));
    for (VertexId u : g)
      if (member(cert.medium_set, u))
        throw InternalInvariantError("mapped subedge of vertex " + std::to_string(v) +
                                     " touches the medium set");
  }
  for (auto it = cert.gamma.begin(); it != cert.gamma.end(); ++it)
    for (auto jt = std::next(it); jt != cert.gamma.end(); ++jt) {
      std::vector<VertexId> common;
      std::set_intersection(it->second.begin(), it->second.end(), jt->second.begin(),
                            jt->second.end(), std::back_inserter(common));
      for (VertexId w : common)
        if (!member(cert.small_set, w))
          throw InternalInvariantError("subedges of " + std::to_string(it->first) + " and " +
                                       std::to_string(jt->first) +
                                       " intersect outside the small set");
    }

  for (VertexId v : cert.small_set) {
    std::vector<VertexId> cell;
    for (VertexId u : cert.gamma.at(v))
      if (!member(cert.small_set, u)) cell.push_back(u);
    cell.push_back(v);
    std::sort(cell.begin(), cell.end());
    cert.cells[v] = std::move(cell);
  }
  return cert;
}

DecompositionReport check_rounding_decomposition(const FractionalPoint& p,
                                                 const SeparationCertificate& cert, int f) {
  DecompositionReport report;
  std::map<VertexId, VertexId> owner;
  for (const auto& [v, cell] : cert.cells)
    for (VertexId u : cell) {
      auto [it, fresh] = owner.emplace(u, v);
      if (!fresh)
        report.failures.push_back("vertex " + std::to_string(u) + " lies in the cells of both " +
                                  std::to_string(it->second) + " and " + std::to_string(v));
    }

  for (const auto& [v, cell] : cert.cells) {
    Rat mass(0);
    Int rounded(0);
    for (VertexId u : cell) {
      mass += p.x.at(u);
      rounded += rat_ceil(p.x.at(u));
    }
    if (Rat(rounded) > f * mass)
      report.failures.push_back("cell of vertex " + std::to_string(v) + " rounds to " +
                                rounded.get_str() + " exceeding " + std::to_string(f) +
                                " times its mass " + rat_string(mass));
  }

  for (const auto& [u, xu] : p.x) {
    if (xu <= 0 || owner.count(u)) continue;
    if (Rat(rat_ceil(xu)) > f * xu)
      report.failures.push_back("vertex " + std::to_string(u) +
                                " outside every cell rounds past " + std::to_string(f) +
                                " times its value");
  }

  report.pass = report.failures.empty();
  return report;
}

} // namespace capvc
