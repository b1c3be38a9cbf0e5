#include "mmw/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmw {

LpResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  for (double bi : b)
    if (bi < 0.0) throw std::invalid_argument("simplex_max requires b >= 0");

  const int cols = n + m;  // structural + slack
  // tableau rows 0..m-1: constraints; row m: objective (reduced costs, max form).
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) T[r][j] = A[r][j];
    T[r][n + r] = 1.0;
    T[r][cols] = b[r];
    basis[r] = n + r;
  }
  for (int j = 0; j < n; ++j) T[m][j] = c[j];

  const double eps = 1e-11;
  const long bland_after = 4L * (m + n) + 1000;
  long iter = 0;
  while (true) {
    // entering column
    int pivot_col = -1;
    if (iter < bland_after) {
      double best = eps;
      for (int j = 0; j < cols; ++j)
        if (T[m][j] > best) {
          best = T[m][j];
          pivot_col = j;
        }
    } else {  // Bland
      for (int j = 0; j < cols; ++j)
        if (T[m][j] > eps) {
          pivot_col = j;
          break;
        }
    }
    if (pivot_col < 0) break;  // optimal

    // ratio test
    int pivot_row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (T[r][pivot_col] <= eps) continue;
      double ratio = T[r][cols] / T[r][pivot_col];
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && (pivot_row < 0 || basis[r] < basis[pivot_row]))) {
        best_ratio = ratio;
        pivot_row = r;
      }
    }
    if (pivot_row < 0) throw std::runtime_error("simplex_max: unbounded LP");

    // pivot
    double piv = T[pivot_row][pivot_col];
    for (int j = 0; j <= cols; ++j) T[pivot_row][j] /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == pivot_row) continue;
      double factor = T[r][pivot_col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= cols; ++j) T[r][j] -= factor * T[pivot_row][j];
      T[r][pivot_col] = 0.0;
    }
    basis[pivot_row] = pivot_col;
    if (++iter > 100000L + 50L * static_cast<long>(m + n) * (m + n))
      throw std::runtime_error("simplex_max: iteration limit exceeded");
  }

  LpResult res;
  res.optimal = true;
  res.objective = -T[m][cols] == 0.0 ? 0.0 : -T[m][cols];
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = T[r][cols];
  res.dual.assign(m, 0.0);
  for (int r = 0; r < m; ++r) res.dual[r] = -T[m][n + r];
  return res;
}

}  // namespace mmw
