#ifndef MMW_SIMPLEX_HPP
#define MMW_SIMPLEX_HPP

#include <vector>

namespace mmw {

struct LpResult {
  bool optimal = false;
  double objective = 0.0;
  std::vector<double> x;     // primal solution
  std::vector<double> dual;  // shadow prices, one per constraint
};

/// Dense tableau simplex for  max c^T x  s.t.  A x <= b, x >= 0  with
/// b >= 0 (slack basis start).  Dantzig pricing with a Bland fallback.
LpResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c);

}  // namespace mmw

#endif  // MMW_SIMPLEX_HPP
