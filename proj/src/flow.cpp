#include "capvc/flow.hpp"

#include "capvc/errors.hpp"

#include <deque>
#include <sstream>

namespace capvc {

namespace {

struct FlowNet {
  struct Arc {
    int to;
    Int cap;
  };
  std::vector<Arc> arcs; // arc 2k+1 is the reverse of arc 2k
  std::vector<std::vector<int>> adj;

  explicit FlowNet(int nodes) : adj(nodes) {}

  void add_arc(int from, int to, Int cap) {
    adj[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, std::move(cap)});
    adj[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, Int(0)});
  }

  Int residual(int arc) const { return arcs[arc].cap; }

  Int max_flow(int s, int t) {
    Int total(0);
    std::vector<int> parent_arc(adj.size());
    for (;;) {
      std::fill(parent_arc.begin(), parent_arc.end(), -1);
      std::deque<int> queue{s};
      parent_arc[s] = -2;
      while (!queue.empty() && parent_arc[t] == -1) {
        int u = queue.front();
        queue.pop_front();
        for (int a : adj[u]) {
          if (arcs[a].cap == 0 || parent_arc[arcs[a].to] != -1) continue;
          parent_arc[arcs[a].to] = a;
          queue.push_back(arcs[a].to);
        }
      }
      if (parent_arc[t] == -1) return total;
      Int push(-1);
      for (int v = t; v != s;) {
        int a = parent_arc[v];
        if (push < 0 || arcs[a].cap < push) push = arcs[a].cap;
        v = arcs[a ^ 1].to;
      }
      for (int v = t; v != s;) {
        int a = parent_arc[v];
        arcs[a].cap -= push;
        arcs[a ^ 1].cap += push;
        v = arcs[a ^ 1].to;
      }
      total += push;
    }
  }

  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int a : adj[u]) {
        if (arcs[a].cap == 0 || seen[arcs[a].to]) continue;
        seen[arcs[a].to] = true;
        queue.push_back(arcs[a].to);
      }
    }
    return seen;
  }
};

} // namespace

std::string CoverageFailure::describe() const {
  std::ostringstream out;
  if (uncovered_zero_demand_edge) {
    out << "edge " << *uncovered_zero_demand_edge
        << " has zero demand but no member vertex holds a copy";
    return out.str();
  }
  out << "edges {";
  for (size_t i = 0; i < edges.size(); ++i) out << (i ? ", " : "") << edges[i];
  out << "} pool more demand than their vertices {";
  for (size_t i = 0; i < vertices.size(); ++i) out << (i ? ", " : "") << vertices[i];
  out << "} can absorb; short by " << rat_string(deficiency);
  return out.str();
}

CoverageResult check_coverage(const Instance& inst, const std::vector<long>& copies) {
  if (static_cast<int>(copies.size()) != inst.vertex_count())
    throw PreconditionError("copies vector size does not match the instance");
  for (long c : copies)
    if (c < 0) throw PreconditionError("negative copy count");

  CoverageResult result;

  // Zero-demand edges carry no flow; they just need a live vertex.
  for (const Edge& e : inst.edges()) {
    if (e.demand != 0) continue;
    VertexId holder = 0;
    for (VertexId v : e.vertices)
      if (copies[v - 1] >= 1) {
        holder = v;
        break;
      }
    if (holder == 0) {
      CoverageFailure failure;
      failure.edges = {e.id};
      failure.vertices = e.vertices;
      failure.deficiency = 1;
      failure.uncovered_zero_demand_edge = e.id;
      result.failure = std::move(failure);
      return result;
    }
    result.assignment[{e.id, holder}] = 1;
  }

  std::vector<EdgeId> flow_edges;
  Rat total_demand(0);
  for (const Edge& e : inst.edges())
    if (e.demand != 0) {
      flow_edges.push_back(e.id);
      total_demand += e.demand;
    }
  std::vector<Rat> budget(inst.vertex_count());
  for (const Vertex& v : inst.vertices()) budget[v.id - 1] = v.capacity * copies[v.id - 1];

  Int scale(1);
  for (EdgeId e : flow_edges)
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), inst.edge(e).demand.get_den().get_mpz_t());
  for (const Rat& b : budget)
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b.get_den().get_mpz_t());
  auto scaled = [&](const Rat& r) {
    Rat s = r * scale;
    s.canonicalize();
    return s.get_num();
  };

  // Nodes: source, one per positive-demand edge, one per vertex, sink.
  int n_edges = static_cast<int>(flow_edges.size());
  int n = inst.vertex_count();
  int source = 0, sink = 1 + n_edges + n;
  FlowNet net(sink + 1);
  auto edge_node = [&](int k) { return 1 + k; };
  auto vertex_node = [&](VertexId v) { return 1 + n_edges + (v - 1); };

  // Middle arcs get effectively infinite capacity so every min cut consists
  // of source and sink arcs only; the residual-reachable side then reads off
  // as an exact deficiency witness.
  Int inf = scaled(total_demand) + 1;
  for (int k = 0; k < n_edges; ++k) {
    const Edge& e = inst.edge(flow_edges[k]);
    net.add_arc(source, edge_node(k), scaled(e.demand));
    for (VertexId v : e.vertices) net.add_arc(edge_node(k), vertex_node(v), inf);
  }
  for (const Vertex& v : inst.vertices())
    if (budget[v.id - 1] != 0) net.add_arc(vertex_node(v.id), sink, scaled(budget[v.id - 1]));

  Int want = scaled(total_demand);
  Int got = net.max_flow(source, sink);

  if (got != want) {
    auto seen = net.reachable(source);
    CoverageFailure failure;
    Rat pooled_demand(0), pooled_budget(0);
    for (int k = 0; k < n_edges; ++k)
      if (seen[edge_node(k)]) {
        failure.edges.push_back(flow_edges[k]);
        pooled_demand += inst.edge(flow_edges[k]).demand;
      }
    for (const Vertex& v : inst.vertices())
      if (seen[vertex_node(v.id)]) {
        failure.vertices.push_back(v.id);
        pooled_budget += budget[v.id - 1];
      }
    failure.deficiency = pooled_demand - pooled_budget;
    if (failure.deficiency <= 0)
      throw InternalInvariantError("flow cut witness does not certify the deficiency");
    result.failure = std::move(failure);
    result.assignment.clear();
    return result;
  }

  // Read h off the flow: the forward arc e->v lost exactly the routed
  // amount to its reverse arc.
  for (int k = 0; k < n_edges; ++k) {
    const Edge& e = inst.edge(flow_edges[k]);
    Int d_scaled = scaled(e.demand);
    for (int a : net.adj[edge_node(k)]) {
      if (a % 2 != 0) continue; // forward arcs only
      int to = net.arcs[a].to;
      if (to == source) continue;
      Int routed = net.arcs[a ^ 1].cap; // reverse cap == flow pushed
      if (routed == 0) continue;
      VertexId v = static_cast<VertexId>(to - (1 + n_edges) + 1);
      Rat h(routed, d_scaled);
      h.canonicalize();
      result.assignment[{e.id, v}] = h;
    }
  }

  result.feasible = true;
  return result;
}

CoverageResult check_feasibility(const Instance& inst) {
  std::vector<long> copies(inst.vertex_count());
  for (const Vertex& v : inst.vertices()) copies[v.id - 1] = v.multiplicity;
  return check_coverage(inst, copies);
}

CoverageResult extract_integral_assignment(const Instance& inst,
                                           const std::map<VertexId, long>& x_star) {
  for (const Vertex& v : inst.vertices())
    if (!rat_is_integral(v.capacity))
      throw PreconditionError("capacities must be integers, vertex " + std::to_string(v.id) +
                              " has " + rat_string(v.capacity));
  for (const Edge& e : inst.edges())
    if (!rat_is_integral(e.demand))
      throw PreconditionError("demands must be integers, edge " + std::to_string(e.id) + " has " +
                              rat_string(e.demand));

  std::vector<long> copies(inst.vertex_count());
  for (const Vertex& v : inst.vertices()) {
    auto it = x_star.find(v.id);
    if (it == x_star.end())
      throw PreconditionError("solution is missing x for vertex " + std::to_string(v.id));
    if (it->second < 0 || it->second > v.multiplicity)
      throw PreconditionError("x outside [0, m] at vertex " + std::to_string(v.id));
    copies[v.id - 1] = it->second;
  }

  CoverageResult result = check_coverage(inst, copies);
  if (result.feasible) {
    // Integer data and unit denominator scaling make every routed amount
    // integral; double-check rather than assume.
    for (const auto& [key, h] : result.assignment)
      if (!rat_is_integral(h * inst.edge(key.first).demand) && inst.edge(key.first).demand != 0)
        throw InternalInvariantError("non-integral routed amount in integral extraction");
  }
  return result;
}

} // namespace capvc
