#pragma once

#include "capvc/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace capvc {

using VertexId = int; // 1..n
using EdgeId = int;   // 1..m, position in the edge list

struct Vertex {
  VertexId id = 0;
  Rat capacity;           // >= 0
  long multiplicity = 0;  // >= 0

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  EdgeId id = 0;
  Rat demand;                     // >= 0
  std::vector<VertexId> vertices; // sorted, distinct, nonempty

  bool operator==(const Edge&) const = default;
};

// A demand-covering problem: pick x_v <= m_v copies of each vertex so the
// demand of every edge can be split among its members within capacity
// c_v * x_v, minimizing the number of copies.
class Instance {
public:
  // Validates and normalizes (sorts each edge's vertex list). Throws
  // std::invalid_argument on structural violations.
  static Instance create(std::vector<Vertex> vertices, std::vector<Edge> edges);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // Largest edge size; 1 for edge-free instances.
  int max_edge_size() const { return f_; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Vertex& vertex(VertexId id) const { return vertices_[id - 1]; }
  const Edge& edge(EdgeId id) const { return edges_[id - 1]; }

  const std::vector<EdgeId>& incident_edges(VertexId id) const { return incidence_[id - 1]; }

  bool operator==(const Instance& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

private:
  Instance() = default;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
  int f_ = 1;
};

// Text format:
//   p vchc <n> <m>
//   v <id> <capacity> <multiplicity>   (one per vertex, ids 1..n)
//   e <demand> <id> [<id> ...]         (one per edge, in order)
// '#' starts a comment, blank lines are skipped, rationals are "p" or "p/q".
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string render_instance(const Instance& inst);

// State threaded through the iterative rounding loop: which edges are still
// being assigned, per-vertex lower bounds on x, and per-vertex capacity left
// after folded edges reserved theirs.
struct ParamTuple {
  const Instance* inst = nullptr;
  std::vector<EdgeId> active_edges;   // sorted ascending
  std::vector<Rat> lower_bounds;      // by vertex, index id-1
  std::vector<Rat> residual_caps;     // by vertex, index id-1

  bool edge_active(EdgeId e) const;
  const Rat& lower_bound(VertexId v) const { return lower_bounds[v - 1]; }
  const Rat& residual_cap(VertexId v) const { return residual_caps[v - 1]; }
};

// All edges active, lower bounds 0, residual capacities c_v.
ParamTuple initial_tuple(const Instance& inst);

// Throws InternalInvariantError when a tuple violates its declared
// invariants (sorted active list, 0 <= l <= m with positive l in [1/f, 1],
// 0 <= c' <= c).
void validate_tuple(const ParamTuple& psi);

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n_vertices = 1;
  int n_edges = 0;
  int max_edge_size = 1;
  long max_demand = 5;
  long max_capacity = 5;
  long max_multiplicity = 3;
  // When true, multiplicities are raised until the instance is coverable.
  bool repair_to_feasible = true;
};

// Deterministic: same config, same instance, on any platform.
Instance generate_instance(const GeneratorConfig& cfg);

} // namespace capvc
