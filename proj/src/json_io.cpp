#include "capvc/json_io.hpp"

#include "capvc/errors.hpp"

#include <fstream>
#include <sstream>

namespace capvc {

namespace {

Json rat_json(const Rat& r) { return rat_string(r); }

Json h_map_json(const std::map<std::pair<EdgeId, VertexId>, Rat>& h) {
  Json arr = Json::array();
  for (const auto& [key, value] : h) arr.push_back({key.first, key.second, rat_json(value)});
  return arr;
}

Json var_json(const VarRef& v) {
  Json j = Json::object();
  if (v.is_x) {
    j["kind"] = "x";
    j["vertex"] = v.vertex;
  } else {
    j["kind"] = "h";
    j["edge"] = v.edge;
    j["vertex"] = v.vertex;
  }
  return j;
}

Json constraint_json(const ConstraintRef& c) {
  Json j = Json::object();
  switch (c.kind) {
    case ConstraintRef::EdgeRow:
      j["kind"] = "edge";
      j["edge"] = c.edge;
      break;
    case ConstraintRef::CapacityRow:
      j["kind"] = "capacity";
      j["vertex"] = c.vertex;
      break;
    case ConstraintRef::SupportRow:
      j["kind"] = "support";
      j["edge"] = c.edge;
      j["vertex"] = c.vertex;
      break;
    case ConstraintRef::XAtLower:
      j["kind"] = "x-at-lower";
      j["vertex"] = c.vertex;
      break;
    case ConstraintRef::XAtUpper:
      j["kind"] = "x-at-upper";
      j["vertex"] = c.vertex;
      break;
    case ConstraintRef::HAtZero:
      j["kind"] = "h-at-zero";
      j["edge"] = c.edge;
      j["vertex"] = c.vertex;
      break;
  }
  return j;
}

Rat parse_rat_field(const Json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(0, what + " must be a rational string");
  auto r = parse_rational(j.get<std::string>());
  if (!r) throw ParseError(0, what + " is not a valid rational: " + j.get<std::string>());
  return *r;
}

} // namespace

Json solution_to_json(const Solution& sol) {
  Json j = Json::object();
  Json xs = Json::object();
  for (const auto& [v, xv] : sol.x) xs[std::to_string(v)] = xv;
  j["x"] = std::move(xs);
  j["h"] = h_map_json(sol.h);
  j["objective"] = sol.objective;
  j["lp_root_objective"] = rat_json(sol.lp_root_objective);
  j["ratio"] = rat_json(sol.ratio);
  return j;
}

Solution solution_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError(0, "solution must be a JSON object");
  for (const char* key : {"x", "h", "objective", "lp_root_objective", "ratio"})
    if (!j.contains(key)) throw ParseError(0, std::string("solution lacks \"") + key + "\"");
  Solution sol;
  if (!j["x"].is_object()) throw ParseError(0, "\"x\" must be an object");
  for (const auto& [key, value] : j["x"].items()) {
    VertexId v;
    try {
      size_t used = 0;
      v = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError(0, "\"x\" key is not a vertex id: " + key);
    }
    if (!value.is_number_integer()) throw ParseError(0, "x value for " + key + " must be an integer");
    sol.x[v] = value.get<long>();
  }
  if (!j["h"].is_array()) throw ParseError(0, "\"h\" must be an array");
  for (const Json& entry : j["h"]) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer())
      throw ParseError(0, "each \"h\" entry must be [edge, vertex, value]");
    auto key = std::make_pair(entry[0].get<EdgeId>(), entry[1].get<VertexId>());
    if (sol.h.count(key)) throw ParseError(0, "duplicate \"h\" entry");
    sol.h[key] = parse_rat_field(entry[2], "h value");
  }
  if (!j["objective"].is_number_integer()) throw ParseError(0, "\"objective\" must be an integer");
  sol.objective = j["objective"].get<long>();
  sol.lp_root_objective = parse_rat_field(j["lp_root_objective"], "\"lp_root_objective\"");
  sol.ratio = parse_rat_field(j["ratio"], "\"ratio\"");
  return sol;
}

Json point_to_json(const FractionalPoint& p) {
  Json j = Json::object();
  Json xs = Json::object();
  for (const auto& [v, xv] : p.x) xs[std::to_string(v)] = rat_json(xv);
  j["x"] = std::move(xs);
  j["h"] = h_map_json(p.h);
  j["objective"] = rat_json(p.objective);
  return j;
}

Json tuple_to_json(const ParamTuple& psi) {
  Json j = Json::object();
  j["active_edges"] = psi.active_edges;
  Json lows = Json::object();
  Json caps = Json::object();
  for (const Vertex& v : psi.inst->vertices()) {
    lows[std::to_string(v.id)] = rat_json(psi.lower_bound(v.id));
    caps[std::to_string(v.id)] = rat_json(psi.residual_cap(v.id));
  }
  j["lower_bounds"] = std::move(lows);
  j["residual_capacities"] = std::move(caps);
  return j;
}

Json trace_to_json(const Trace& trace) {
  Json j = Json::object();
  Json iters = Json::array();
  for (const IterationRecord& rec : trace.iterations) {
    Json it = Json::object();
    it["index"] = rec.index;
    it["tuple"] = tuple_to_json(rec.psi);
    it["point"] = point_to_json(rec.point);
    it["small_set"] = rec.small_set;
    Json supports = Json::object();
    for (const auto& [e, t] : rec.support_sets) supports[std::to_string(e)] = t;
    it["support_sets"] = std::move(supports);
    Json folds = Json::array();
    for (const FoldAction& fold : rec.folds) {
      Json fj = Json::object();
      fj["edge"] = fold.edge;
      fj["into"] = fold.into;
      fj["support"] = fold.support;
      folds.push_back(std::move(fj));
    }
    it["folds"] = std::move(folds);
    iters.push_back(std::move(it));
  }
  j["iterations"] = std::move(iters);
  j["folded_assignment"] = h_map_json(trace.folded_assignment);
  return j;
}

Json certificate_to_json(const SeparationCertificate& cert) {
  Json j = Json::object();
  j["small_set"] = cert.small_set;
  j["medium_set"] = cert.medium_set;
  j["edge_rows"] = cert.edge_rows;
  j["capacity_rows"] = cert.capacity_rows;
  Json supports = Json::array();
  for (const auto& [e, v] : cert.support_rows) supports.push_back({e, v});
  j["support_rows"] = std::move(supports);
  Json xv = Json::array();
  for (const VarRef& x : cert.x_vars) xv.push_back(var_json(x));
  j["x_vars"] = std::move(xv);
  Json hv = Json::array();
  for (const VarRef& h : cert.h_vars) hv.push_back(var_json(h));
  j["h_vars"] = std::move(hv);
  Json hs = Json::array();
  for (const VarRef& h : cert.h_star) hs.push_back(var_json(h));
  j["h_star"] = std::move(hs);
  Json sigma = Json::array();
  for (const auto& [var, row] : cert.sigma) sigma.push_back({var_json(var), constraint_json(row)});
  j["assignment"] = std::move(sigma);
  Json pi = Json::array();
  for (const auto& [var, target] : cert.pi) pi.push_back({var_json(var), var_json(target)});
  j["redirection"] = std::move(pi);
  Json gamma = Json::object();
  for (const auto& [v, subedge] : cert.gamma) gamma[std::to_string(v)] = subedge;
  j["mapped_subedges"] = std::move(gamma);
  Json cells = Json::object();
  for (const auto& [v, cell] : cert.cells) cells[std::to_string(v)] = cell;
  j["cells"] = std::move(cells);
  return j;
}

Json verify_report_to_json(const VerifyReport& report) {
  Json j = Json::object();
  j["pass"] = report.pass;
  j["constraints_ok"] = report.constraints_ok;
  j["ratio_ok"] = report.ratio_ok;
  j["f"] = report.f;
  j["objective"] = report.objective;
  j["lp_root_objective"] = rat_json(report.lp_root);
  j["ratio"] = rat_json(report.ratio);
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    Json vj = Json::object();
    vj["rule"] = v.rule;
    if (v.edge != 0) vj["edge"] = v.edge;
    if (v.vertex != 0) vj["vertex"] = v.vertex;
    vj["residual"] = rat_json(v.residual);
    vj["detail"] = v.detail;
    violations.push_back(std::move(vj));
  }
  j["violations"] = std::move(violations);
  return j;
}

Json oracle_result_to_json(const OracleResult& result) {
  Json j = Json::object();
  j["feasible"] = result.feasible;
  if (result.feasible) {
    j["optimum"] = result.optimum;
    Json xs = Json::object();
    for (const auto& [v, xv] : result.x) xs[std::to_string(v)] = xv;
    j["x"] = std::move(xs);
    j["h"] = h_map_json(result.h);
  }
  return j;
}

Json run_report_to_json(const RunReport& report) {
  Json j = Json::object();
  j["instance"] = report.instance_path;
  j["f"] = report.f;
  j["feasible"] = report.feasible;
  Json iters = Json::array();
  for (const auto& line : report.iterations) {
    Json it = Json::object();
    it["index"] = line.index;
    it["objective"] = rat_json(line.objective);
    it["small_set_size"] = line.small_set_size;
    it["edges_folded"] = line.edges_folded;
    iters.push_back(std::move(it));
  }
  j["iterations"] = std::move(iters);
  if (report.feasible) {
    j["final_objective"] = report.final_objective;
    j["lp_root_objective"] = rat_json(report.lp_root_objective);
    j["ratio"] = rat_json(report.ratio);
  }
  if (report.oracle) j["oracle"] = oracle_result_to_json(*report.oracle);
  j["wall_clock_ms"] = report.wall_clock_ms;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace capvc
