#ifndef MMW_MOLLIFY_HPP
#define MMW_MOLLIFY_HPP

#include <string>
#include <vector>

#include "mmw/core.hpp"
#include "mmw/weights.hpp"

namespace mmw {

/// Greedy maximal t/5-separated net: centers pairwise further than 2t/5
/// apart, closed t-balls covering the space.
struct Net {
  double t = 0.0;
  std::vector<int> centers;
  int max_overlap = 0;  // max_x |{i : x in 2B_i}|, measured
};

Net separated_net(const Space& space, double t);

/// Row-sparse partition of unity: phi[i] lists (point, value) over the
/// support of the i-th cutoff (the closed ball 2B_i).
using PhiMatrix = std::vector<std::vector<std::pair<int, double>>>;

PhiMatrix partition(const Space& space, const Net& net);

struct MollifiedWeight {
  double t = 0.0;
  Net net;
  std::vector<double> a;  // a_i = integral of phi_i dnu / integral of phi_i dmu
  Weight omega_t;
  PhiMatrix phi;
  // Achieved constant in the two-sided bound of omega_t(y) against
  // nu(B(x,t))/mu(B(x,t)) over pairs with d(x,y) <= 2t; +inf when one side
  // vanishes and the other does not.
  double comparability = 1.0;
};

MollifiedWeight mollify(const Space& space, const Weight& weight, double t);

struct TestSet {
  std::string name;
  std::vector<int> points;  // metric-interior point set of an open region
};

struct WeakConvRow {
  double t = 0.0;
  std::string set_name;
  double nu_t = 0.0;
  double nu = 0.0;
  double rel_error = 0.0;
  double nu_inner = 0.0;  // nu(U_{4t})
  bool lower_bound_ok = true;
};

std::vector<WeakConvRow> weak_convergence_probe(const Space& space, const Weight& weight,
                                                const std::vector<double>& t_list,
                                                const std::vector<TestSet>& test_sets);

struct RhiProbeRow {
  double t = 0.0;
  double constant = 1.0;
  BallRef witness;
};

struct RhiProbeResult {
  std::vector<RhiProbeRow> rows;
  double max_over_min = 1.0;
  bool uniform = true;  // spread over t at most factor 4
};

/// Reverse Hoelder ratio at exponent structure Q for the mollified weight,
/// per scale t; empty ball_sample means all candidate balls.
RhiProbeResult uniform_rhi_probe(const Space& space, const Weight& weight,
                                 const std::vector<double>& t_list,
                                 const std::vector<BallRef>& ball_sample = {});

struct GehringPoint {
  double eps = 0.0;
  double constant = 1.0;
  BallRef witness;
};

struct GehringResult {
  double base_constant = 1.0;
  BallRef base_witness;
  double eps_star = 0.0;     // largest grid eps with constant <= 10 x base
  double star_constant = 1.0;
  std::vector<GehringPoint> curve;
};

GehringResult gehring_probe(const Space& space, const MollifiedWeight& mollified,
                            const std::vector<double>& eps_grid);

/// Geometric t grid (ratio 2) from diam/4 down to twice the minimal spacing.
std::vector<double> default_t_grid(const Space& space);

}  // namespace mmw

#endif  // MMW_MOLLIFY_HPP
