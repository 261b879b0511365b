#include "capvc/exact_linalg.hpp"

#include "capvc/errors.hpp"

namespace capvc {

long matrix_rank(const RatMatrix& m) {
  size_t rows = m.size();
  if (rows == 0) return 0;
  size_t cols = m[0].size();
  for (const auto& row : m)
    if (row.size() != cols) throw InternalInvariantError("ragged matrix");

  // Clear denominators row by row; rank is unchanged.
  std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
  for (size_t i = 0; i < rows; ++i) {
    Int lcm(1);
    for (size_t j = 0; j < cols; ++j) {
      Rat c = m[i][j];
      c.canonicalize();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    for (size_t j = 0; j < cols; ++j) {
      Rat c = m[i][j] * lcm;
      c.canonicalize();
      if (c.get_den() != 1) throw InternalInvariantError("denominator clearing failed");
      a[i][j] = c.get_num();
    }
  }

  // Bareiss: after each step entries are minors of the original matrix, so
  // the division by the previous pivot is exact.
  long rank = 0;
  Int prev(1);
  for (size_t col = 0; col < cols && static_cast<size_t>(rank) < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    for (size_t i = rank + 1; i < rows; ++i) {
      for (size_t j = col + 1; j < cols; ++j) {
        Int num = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        if (r != 0) throw InternalInvariantError("inexact division in elimination");
        a[i][j] = q;
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::vector<long> match_columns_to_rows(const RatMatrix& m) {
  size_t rows = m.size();
  size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<long> col_to_row(cols, -1);
  std::vector<long> row_to_col(rows, -1);

  std::vector<char> visited(rows);
  auto augment = [&](auto&& self, size_t col) -> bool {
    for (size_t i = 0; i < rows; ++i) {
      if (visited[i] || m[i][col] == 0) continue;
      visited[i] = 1;
      if (row_to_col[i] < 0 || self(self, static_cast<size_t>(row_to_col[i]))) {
        row_to_col[i] = static_cast<long>(col);
        col_to_row[col] = static_cast<long>(i);
        return true;
      }
    }
    return false;
  };

  for (size_t col = 0; col < cols; ++col) {
    std::fill(visited.begin(), visited.end(), 0);
    augment(augment, col);
  }
  return col_to_row;
}

} // namespace capvc
