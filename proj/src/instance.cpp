#include "capvc/instance.hpp"

#include "capvc/errors.hpp"
#include "capvc/flow.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace capvc {

Instance Instance::create(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  Instance inst;
  int n = static_cast<int>(vertices.size());
  std::vector<bool> seen(n + 1, false);
  for (const Vertex& v : vertices) {
    if (v.id < 1 || v.id > n) throw std::invalid_argument("vertex id out of range");
    if (seen[v.id]) throw std::invalid_argument("duplicate vertex id");
    seen[v.id] = true;
    if (v.capacity < 0) throw std::invalid_argument("negative capacity");
    if (v.multiplicity < 0) throw std::invalid_argument("negative multiplicity");
  }
  std::sort(vertices.begin(), vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });

  int next_edge_id = 1;
  for (Edge& e : edges) {
    if (e.id != next_edge_id++) throw std::invalid_argument("edge ids must be 1..m in order");
    if (e.demand < 0) throw std::invalid_argument("negative demand");
    if (e.vertices.empty()) throw std::invalid_argument("empty edge");
    std::sort(e.vertices.begin(), e.vertices.end());
    if (std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end())
      throw std::invalid_argument("duplicate vertex in edge");
    for (VertexId v : e.vertices)
      if (v < 1 || v > n) throw std::invalid_argument("unknown vertex id in edge");
  }

  inst.vertices_ = std::move(vertices);
  inst.edges_ = std::move(edges);
  inst.incidence_.assign(n, {});
  inst.f_ = 1;
  for (const Edge& e : inst.edges_) {
    inst.f_ = std::max(inst.f_, static_cast<int>(e.vertices.size()));
    for (VertexId v : e.vertices) inst.incidence_[v - 1].push_back(e.id);
  }
  return inst;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long parse_nonneg_long(const std::string& tok, int line, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
        return std::isdigit(c);
      }))
    throw ParseError(line, std::string(what) + " must be a nonnegative integer, got '" + tok + "'");
  try {
    return std::stol(tok);
  } catch (const std::out_of_range&) {
    throw ParseError(line, std::string(what) + " out of range: '" + tok + "'");
  }
}

Rat parse_nonneg_rational(const std::string& tok, int line, const char* what) {
  auto r = parse_rational(tok);
  if (!r) throw ParseError(line, std::string(what) + " is not a rational: '" + tok + "'");
  if (*r < 0) throw ParseError(line, std::string(what) + " must be nonnegative, got '" + tok + "'");
  return *r;
}

} // namespace

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_header = false;
  int n = 0, m = 0;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;

    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "vchc")
        throw ParseError(lineno, "expected header 'p vchc <n> <m>'");
      n = static_cast<int>(parse_nonneg_long(toks[2], lineno, "vertex count"));
      m = static_cast<int>(parse_nonneg_long(toks[3], lineno, "edge count"));
      have_header = true;
      continue;
    }

    if (toks[0] == "v") {
      if (toks.size() != 4) throw ParseError(lineno, "expected 'v <id> <capacity> <multiplicity>'");
      Vertex v;
      v.id = static_cast<VertexId>(parse_nonneg_long(toks[1], lineno, "vertex id"));
      if (v.id < 1 || v.id > n) throw ParseError(lineno, "vertex id out of range 1.." + std::to_string(n));
      v.capacity = parse_nonneg_rational(toks[2], lineno, "capacity");
      v.multiplicity = parse_nonneg_long(toks[3], lineno, "multiplicity");
      vertices.push_back(std::move(v));
    } else if (toks[0] == "e") {
      if (toks.size() < 3) throw ParseError(lineno, "expected 'e <demand> <id> [<id> ...]'");
      Edge e;
      e.id = static_cast<EdgeId>(edges.size()) + 1;
      e.demand = parse_nonneg_rational(toks[1], lineno, "demand");
      for (size_t i = 2; i < toks.size(); ++i) {
        auto id = static_cast<VertexId>(parse_nonneg_long(toks[i], lineno, "vertex id"));
        if (id < 1 || id > n) throw ParseError(lineno, "vertex id out of range 1.." + std::to_string(n));
        if (std::find(e.vertices.begin(), e.vertices.end(), id) != e.vertices.end())
          throw ParseError(lineno, "duplicate vertex " + std::to_string(id) + " in edge");
        e.vertices.push_back(id);
      }
      edges.push_back(std::move(e));
    } else {
      throw ParseError(lineno, "unknown record '" + toks[0] + "'");
    }
  }

  if (!have_header) throw ParseError(0, "missing header");
  if (static_cast<int>(vertices.size()) != n)
    throw ParseError(0, "header declares " + std::to_string(n) + " vertices, found " +
                            std::to_string(vertices.size()));
  std::vector<bool> seen(n + 1, false);
  for (const Vertex& v : vertices) {
    if (seen[v.id]) throw ParseError(0, "duplicate vertex record for id " + std::to_string(v.id));
    seen[v.id] = true;
  }
  if (static_cast<int>(edges.size()) != m)
    throw ParseError(0, "header declares " + std::to_string(m) + " edges, found " +
                            std::to_string(edges.size()));

  try {
    return Instance::create(std::move(vertices), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string render_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p vchc " << inst.vertex_count() << ' ' << inst.edge_count() << '\n';
  for (const Vertex& v : inst.vertices())
    out << "v " << v.id << ' ' << rat_string(v.capacity) << ' ' << v.multiplicity << '\n';
  for (const Edge& e : inst.edges()) {
    out << "e " << rat_string(e.demand);
    for (VertexId v : e.vertices) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

bool ParamTuple::edge_active(EdgeId e) const {
  return std::binary_search(active_edges.begin(), active_edges.end(), e);
}

ParamTuple initial_tuple(const Instance& inst) {
  ParamTuple psi;
  psi.inst = &inst;
  psi.active_edges.resize(inst.edge_count());
  for (int i = 0; i < inst.edge_count(); ++i) psi.active_edges[i] = i + 1;
  psi.lower_bounds.assign(inst.vertex_count(), Rat(0));
  psi.residual_caps.reserve(inst.vertex_count());
  for (const Vertex& v : inst.vertices()) psi.residual_caps.push_back(v.capacity);
  return psi;
}

void validate_tuple(const ParamTuple& psi) {
  if (!psi.inst) throw InternalInvariantError("tuple has no instance");
  const Instance& inst = *psi.inst;
  if (!std::is_sorted(psi.active_edges.begin(), psi.active_edges.end()) ||
      std::adjacent_find(psi.active_edges.begin(), psi.active_edges.end()) !=
          psi.active_edges.end())
    throw InternalInvariantError("active edge list not sorted and distinct");
  for (EdgeId e : psi.active_edges)
    if (e < 1 || e > inst.edge_count()) throw InternalInvariantError("active edge id out of range");
  if (static_cast<int>(psi.lower_bounds.size()) != inst.vertex_count() ||
      static_cast<int>(psi.residual_caps.size()) != inst.vertex_count())
    throw InternalInvariantError("tuple vector sizes do not match instance");

  Rat inv_f(1, inst.max_edge_size());
  for (const Vertex& v : inst.vertices()) {
    const Rat& l = psi.lower_bound(v.id);
    const Rat& c = psi.residual_cap(v.id);
    if (l < 0 || l > v.multiplicity)
      throw InternalInvariantError("lower bound outside [0, m] at vertex " + std::to_string(v.id));
    if (l > 0 && (l < inv_f || l > 1))
      throw InternalInvariantError("positive lower bound outside [1/f, 1] at vertex " +
                                   std::to_string(v.id));
    if (c < 0 || c > v.capacity)
      throw InternalInvariantError("residual capacity outside [0, c] at vertex " +
                                   std::to_string(v.id));
  }
}

namespace {

// Uniform draw from [0, n) free of the library-specific distribution
// implementations, so the same seed yields the same instance everywhere.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

} // namespace

Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n_vertices < 1) throw std::invalid_argument("need at least one vertex");
  if (cfg.n_edges < 0 || cfg.max_edge_size < 1 || cfg.max_demand < 0 || cfg.max_capacity < 0 ||
      cfg.max_multiplicity < 0)
    throw std::invalid_argument("negative generator bound");

  std::mt19937_64 rng(cfg.seed);
  int n = cfg.n_vertices;

  std::vector<Edge> edges;
  edges.reserve(cfg.n_edges);
  std::vector<VertexId> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i + 1;
  int max_size = std::min(cfg.max_edge_size, n);
  for (int j = 0; j < cfg.n_edges; ++j) {
    Edge e;
    e.id = j + 1;
    e.demand = Rat(static_cast<long>(draw_below(rng, cfg.max_demand + 1)));
    int size = 1 + static_cast<int>(draw_below(rng, max_size));
    for (int k = 0; k < size; ++k) {
      auto idx = k + static_cast<int>(draw_below(rng, n - k));
      std::swap(pool[k], pool[idx]);
      e.vertices.push_back(pool[k]);
    }
    edges.push_back(std::move(e));
  }

  std::vector<Vertex> vertices(n);
  auto redraw_vertices = [&] {
    for (int i = 0; i < n; ++i) {
      vertices[i].id = i + 1;
      vertices[i].capacity = Rat(static_cast<long>(draw_below(rng, cfg.max_capacity + 1)));
      vertices[i].multiplicity = static_cast<long>(draw_below(rng, cfg.max_multiplicity + 1));
    }
  };
  auto capacities_ok = [&] {
    for (const Edge& e : edges) {
      if (e.demand == 0) continue;
      bool covered = false;
      for (VertexId v : e.vertices)
        if (vertices[v - 1].capacity > 0) covered = true;
      if (!covered) return false;
    }
    return true;
  };
  redraw_vertices();
  for (int attempt = 0; !capacities_ok(); ++attempt) {
    if (attempt >= 64) {
      // Bounds make a uniform redraw hopeless; give the first member of each
      // starved edge one unit of capacity and move on.
      for (const Edge& e : edges) {
        if (e.demand == 0) continue;
        bool covered = false;
        for (VertexId v : e.vertices)
          if (vertices[v - 1].capacity > 0) covered = true;
        if (!covered) vertices[e.vertices.front() - 1].capacity = std::max(1L, cfg.max_capacity);
      }
      break;
    }
    redraw_vertices();
  }

  Instance inst = Instance::create(std::move(vertices), std::move(edges));
  if (cfg.repair_to_feasible) {
    while (!check_feasibility(inst).feasible) {
      std::vector<Vertex> raised = inst.vertices();
      for (Vertex& v : raised) ++v.multiplicity;
      inst = Instance::create(std::move(raised), inst.edges());
    }
  }
  return inst;
}

} // namespace capvc
