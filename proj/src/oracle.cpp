#include "capvc/oracle.hpp"

#include "capvc/errors.hpp"
#include "capvc/flow.hpp"

#include <string>

namespace capvc {

namespace {

// Candidates that cannot cover even in the aggregate are rejected without
// building a flow network.
bool cheap_reject(const Instance& inst, const std::vector<long>& x, const Rat& total_demand) {
  Rat pooled(0);
  for (const Vertex& v : inst.vertices()) pooled += v.capacity * x[v.id - 1];
  if (pooled < total_demand) return true;
  for (const Edge& e : inst.edges()) {
    if (e.vertices.size() != 1) continue;
    VertexId v = e.vertices.front();
    if (e.demand == 0 ? x[v - 1] < 1 : e.demand > inst.vertex(v).capacity * x[v - 1]) return true;
  }
  return false;
}

} // namespace

OracleResult brute_force_optimum(const Instance& inst, unsigned long long space_limit,
                                 std::optional<long> budget_cap) {
  unsigned long long space = 1;
  bool exceeded = false;
  for (const Vertex& v : inst.vertices()) {
    unsigned long long factor = static_cast<unsigned long long>(v.multiplicity) + 1;
    if (space > space_limit / factor) {
      exceeded = true;
      break;
    }
    space *= factor;
  }
  if (exceeded && !budget_cap)
    throw SearchSpaceError("search space exceeds " + std::to_string(space_limit) +
                           " candidates; set a budget cap or raise the limit");

  OracleResult result;
  if (!check_feasibility(inst).feasible) return result;

  int n = inst.vertex_count();
  Rat total_demand(0);
  for (const Edge& e : inst.edges()) total_demand += e.demand;

  std::vector<long> suffix_m(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) suffix_m[i] = suffix_m[i + 1] + inst.vertices()[i].multiplicity;

  std::vector<long> x(n, 0);
  // Lexicographically first covering vector with the given total, if any.
  auto search = [&](auto&& self, int i, long remaining) -> bool {
    if (i == n) {
      if (remaining != 0) return false;
      if (cheap_reject(inst, x, total_demand)) return false;
      CoverageResult cov = check_coverage(inst, x);
      if (!cov.feasible) return false;
      result.h = std::move(cov.assignment);
      return true;
    }
    long lo = std::max(0L, remaining - suffix_m[i + 1]);
    long hi = std::min(inst.vertices()[i].multiplicity, remaining);
    for (long val = lo; val <= hi; ++val) {
      x[i] = val;
      if (self(self, i + 1, remaining - val)) return true;
    }
    x[i] = 0;
    return false;
  };

  long max_budget = suffix_m[0];
  long cap = budget_cap ? std::min(*budget_cap, max_budget) : max_budget;
  for (long budget = 0; budget <= cap; ++budget) {
    if (search(search, 0, budget)) {
      result.feasible = true;
      result.optimum = budget;
      for (const Vertex& v : inst.vertices()) result.x[v.id] = x[v.id - 1];
      return result;
    }
  }
  throw SearchSpaceError("budget cap " + std::to_string(cap) +
                         " reached without finding a covering vector");
}

} // namespace capvc
