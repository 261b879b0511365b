#pragma once

#include "capvc/instance.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace capvc {

struct OracleResult {
  bool feasible = false;
  long optimum = 0;                // total copies, valid when feasible
  std::map<VertexId, long> x;      // lexicographically smallest optimal vector
  std::map<std::pair<EdgeId, VertexId>, Rat> h;
};

// Exhaustive search: try total budgets B = 0, 1, 2, ... and enumerate all
// multiplicity vectors with that total; the first covering vector found is
// optimal. Guarded: throws SearchSpaceError when the product of (m_v + 1)
// exceeds space_limit, unless budget_cap bounds the budgets to try instead.
OracleResult brute_force_optimum(const Instance& inst,
                                 unsigned long long space_limit = 10'000'000ULL,
                                 std::optional<long> budget_cap = std::nullopt);

} // namespace capvc
