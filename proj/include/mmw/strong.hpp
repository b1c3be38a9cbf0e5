#ifndef MMW_STRONG_HPP
#define MMW_STRONG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mmw/core.hpp"

namespace mmw {

struct PairWitness {
  int i = -1;
  int j = -1;
};

/// delta_nu(x,y) = [nu(B(x,d(x,y))) + nu(B(y,d(x,y)))]^(1/Q) with open
/// balls, so the two-point value counts neither endpoint's far mass.
std::vector<double> quasi_distance(const Space& space, const Weight& weight);

struct Metrization {
  int n = 0;
  std::vector<double> delta_nu;  // n x n
  std::vector<double> delta;     // chain metric, n x n
  double distortion = 1.0;       // max delta_nu / delta over pairs
  bool unbounded = false;        // some delta = 0 with delta_nu > 0
  PairWitness witness;
  bool restricted = false;       // chains confined to B(x, 2 d(x,y))

  double dn(int i, int j) const { return delta_nu[static_cast<std::size_t>(i) * n + j]; }
  double d(int i, int j) const { return delta[static_cast<std::size_t>(i) * n + j]; }
};

/// Chain infimum of delta_nu: all-pairs shortest paths on the complete
/// graph, iterated to an exact min-plus fixpoint.  With `restricted`,
/// chains for the pair (x,y) may only visit the closed ball B(x, 2 d(x,y))
/// (symmetrized over the two endpoints); the unrestricted chain metric is a
/// genuine metric, the restricted variant an upper bound on it.
Metrization chain_metrization(const std::vector<double>& delta_nu, const Space& space,
                              bool restricted = false);

struct NonDoublingError : std::runtime_error {
  NonDoublingError(const std::string& msg, Extremum witness_)
      : std::runtime_error(msg), witness(witness_) {}
  Extremum witness;
};

struct ComparisonResult {
  double constant = 1.0;  // smallest C with delta_nu <= C nu(B(x,d))^(1/Q)
  PairWitness witness;
};

/// Two-sided comparison of delta_nu with the one-ball quantity
/// nu(B(x,d(x,y)))^(1/Q); requires nu doubling.
ComparisonResult comparison_check(const Space& space, const Weight& weight);

struct ScaleResult {
  int n = 0;
  double distortion = 1.0;
  bool unbounded = false;
  PairWitness witness;
  std::vector<std::pair<double, double>> cond2;  // (p, c) per scale
};

struct StabilityReport {
  std::vector<ScaleResult> scales;
  std::string verdict;  // STABLE | UNSTABLE | NOT-STRONG
};

/// Cross-refinement stability of the distortion constant; finiteness that
/// is stable under refinement is the operational strong-A_infinity verdict
/// on finite spaces.
StabilityReport sa_verdict(const std::vector<const Space*>& spaces,
                           const std::vector<const Weight*>& weights,
                           const std::vector<double>& p_grid);

}  // namespace mmw

#endif  // MMW_STRONG_HPP
