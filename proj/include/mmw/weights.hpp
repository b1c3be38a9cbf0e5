#ifndef MMW_WEIGHTS_HPP
#define MMW_WEIGHTS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mmw/core.hpp"

namespace mmw {

/// A_p machinery rejects weights that vanish on a set of positive measure
/// (every point has positive mass, so any zero value disqualifies).
struct NotInApError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BallRef {
  int center = -1;
  double radius = 0.0;
};

struct SweepPoint {
  double lambda = 0.0;  // threshold closing this tie group
  double u = 0.0;       // mu(E)/mu(B)
  double v = 0.0;       // nu(E)/nu(B), 0/0 -> 0
};

/// Distribution curve of omega over one ball: breakpoints of
/// E_lambda = {omega > lambda} with lambda descending (superlevel) or of
/// {omega <= lambda} with lambda ascending (sublevel), ties grouped.
struct SweepCurve {
  BallRef ball;
  std::vector<SweepPoint> breakpoints;
};

SweepCurve superlevel_sweep(const Space& space, const Weight& weight, const Ball& b);
SweepCurve sublevel_sweep(const Space& space, const Weight& weight, const Ball& b);

struct CurveWitness {
  BallRef ball;
  double lambda = 0.0;
  double u = 0.0;
  double v = 0.0;
  // For per-point prefixes (condition (1)): how many points of the lambda
  // tie group are included, in ascending id order.  -1 means the whole group.
  int tie_count = -1;
};

struct CurvePoint {
  double x = 0.0;  // grid parameter (p or epsilon)
  double y = 0.0;  // constant at that parameter
  bool unbounded = false;
  CurveWitness witness;
};

struct ApResult {
  double value = 0.0;
  BallRef witness;
};

/// sup over balls of (avg_B omega)(avg_B omega^{1-q})^{p-1}, q = p/(p-1).
/// Throws NotInApError if omega vanishes anywhere.
ApResult ap_constant(const Space& space, const Weight& weight, double p);

/// sup over balls of avg(omega) / min(omega); UNBOUNDED when some ball has
/// min 0 with positive average.
Extremum a1_constant(const Space& space, const Weight& weight);

/// Condition (2): c(p) = max over balls and superlevel breakpoints of
/// v / u^(1/p).
std::vector<CurvePoint> cond2_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& p_grid);

/// Condition (1): delta(eps) = 1 - max{v : omega-descending point prefix
/// with u <= eps}, over balls with nu(B) > 0.
std::vector<CurvePoint> cond1_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& eps_grid);

/// Condition (4): c(p) = min over balls and sublevel breakpoints of v / u^p.
std::vector<CurvePoint> cond4_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& p_grid);

/// Condition (3): sup over balls with nu(B) > 0 of the reverse Hoelder
/// ratio at exponent 1 + eps; nu-null balls contribute 1.
CurvePoint rhi_constant(const Space& space, const Weight& weight, double eps);

/// Defining quantities of a single ball; these replay the ap/rhi witnesses.
double ball_ap_product(const Space& space, const Weight& weight, double p, const BallRef& ref);
double ball_rhi_ratio(const Space& space, const Weight& weight, double eps, const BallRef& ref);

/// Replays a sweep witness: recomputes (u, v) for the recorded ball and
/// threshold.  Used to certify that reported constants reproduce.
SweepPoint replay_witness(const Space& space, const Weight& weight, const CurveWitness& w,
                          bool sublevel);

struct ConditionVerdict {
  bool holds = false;
  std::string certificate;  // the constants that certify the verdict
};

struct ClassReport {
  Extremum a1;
  bool ap_defined = false;
  std::string ap_error;
  std::vector<std::pair<double, double>> ap_curve;  // (p, c) when defined
  std::vector<CurvePoint> cond1;
  std::vector<CurvePoint> cond2;
  std::vector<CurvePoint> cond4;
  std::vector<CurvePoint> rhi;
  Extremum nu_doubling;
  ConditionVerdict verdict[5];  // conditions (1)..(5)
  std::vector<double> p_grid;
  std::vector<double> eps_grid;
};

extern const std::vector<double> kDefaultPGrid;    // {1, 1.25, 1.5, 2, 3, 4, 8}
extern const std::vector<double> kDefaultEpsGrid;  // {0.05, 0.1, 0.2, 0.4}

ClassReport classify_weight(const Space& space, const Weight& weight,
                            const std::vector<double>& p_grid = kDefaultPGrid,
                            const std::vector<double>& eps_grid = kDefaultEpsGrid);

struct ImplicationCheck {
  std::string name;
  bool premise = false;
  bool ok = true;      // vacuous or verified
  std::string detail;  // quantitative bound vs computed value, or witness
};

struct ImplicationMatrix {
  std::vector<ImplicationCheck> checks;
  int violations = 0;
};

/// Consistency of the computed constants with the implication diagram
/// (1) <= (2) <=> (3) <= (4) <=> (5), checked quantitatively where the
/// proofs give explicit constant transport.
ImplicationMatrix implication_matrix(const Space& space, const Weight& weight,
                                     const ClassReport& report);

/// Quantitative transport of constants between conditions (2) and (3).
/// Both are rigorous inequalities on finite spaces.
double rhi_bound_from_cond2(double c2, double p, double eps);  // requires eps < 1/(p-1)
double cond2_exponent_from_rhi(double eps);                    // p' = (1+eps)/eps

}  // namespace mmw

#endif  // MMW_WEIGHTS_HPP
