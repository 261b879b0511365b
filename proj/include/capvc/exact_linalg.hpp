#pragma once

#include "capvc/rational.hpp"

#include <vector>

namespace capvc {

using RatMatrix = std::vector<std::vector<Rat>>;

// Rank over the rationals, computed by fraction-free (Bareiss) elimination
// on the denominator-cleared integer matrix. Row/column pivot choice is
// deterministic (first nonzero in index order).
long matrix_rank(const RatMatrix& m);

// Column-perfect matching of columns to rows on the nonzero pattern:
// result[j] = matched row for column j, or -1. Columns are processed in
// index order with augmenting paths, so the result is deterministic.
// Every column is matched whenever the matrix has full column rank.
std::vector<long> match_columns_to_rows(const RatMatrix& m);

} // namespace capvc
