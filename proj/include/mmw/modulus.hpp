#ifndef MMW_MODULUS_HPP
#define MMW_MODULUS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mmw/core.hpp"

namespace mmw {

/// All skeleton paths joining `source` to `sink`.
struct CurveFamily {
  std::vector<int> source;
  std::vector<int> sink;
};

/// Discrete line integral of a vertex density along a skeleton path:
/// sum over edges of (rho_u + rho_v)/2 * length(u,v).
double curve_length(const Space& space, const std::vector<double>& rho,
                    const std::vector<int>& path);

struct ModulusResult {
  double p = 1.0;
  double value = 0.0;             // sum rho_v^p mu_v for the returned rho
  std::vector<double> rho;
  std::vector<std::vector<int>> active_paths;  // generated constraints
  double certificate = 0.0;       // min rho-length over all source-sink paths
  double lower_bound = 0.0;       // restricted master bound <= true modulus
  double upper_bound = 0.0;       // mass of rho/certificate^p >= true modulus
  int iterations = 0;
};

struct SolverStall : std::runtime_error {
  SolverStall(const std::string& msg, double lower_, double upper_)
      : std::runtime_error(msg), lower(lower_), upper(upper_) {}
  double lower = 0.0;
  double upper = 0.0;
};

/// p-modulus by constraint generation: restricted master over a growing
/// path set, shortest-path separation oracle, until the minimal path
/// length reaches 1 - tol.  p = 1 masters are exact LPs; p > 1 masters are
/// solved by dual coordinate ascent on the path multipliers.
ModulusResult p_modulus(const Space& space, const CurveFamily& family, double p,
                        double tol = 1e-6);

struct BallTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BallModulusResult {
  double modulus = 0.0;
  double ball_mass = 0.0;
  double ratio = 0.0;  // mod_1 * r / mu(B(x0,r))
  ModulusResult detail;
};

/// Ratio form of the modulus lower bound for the family joining B(x0,r)
/// and the complement of B(x0,2r).
BallModulusResult ball_modulus_check(const Space& space, int x0, double r);

/// All simple source-to-sink paths (for the exhaustive LP oracle in tests);
/// throws if more than max_paths exist.
std::vector<std::vector<int>> enumerate_simple_paths(const Space& space,
                                                     const CurveFamily& family,
                                                     std::size_t max_paths);

}  // namespace mmw

#endif  // MMW_MODULUS_HPP
