#ifndef MMW_CORE_HPP
#define MMW_CORE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmw {

/// Absolute tolerance for metric and skeleton validation.
inline constexpr double kMetricTol = 1e-9;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

/// A finite metric measure space (X, d, mu) with homogeneous dimension Q.
///
/// The distance matrix is stored dense row-major.  Coordinates are optional
/// and only used by builders (Euclidean metrics, model maps).  The skeleton
/// is an optional edge list backing the modulus solver; when present, its
/// all-pairs shortest-path metric must reproduce `dist` entrywise.
class Space {
 public:
  Space() = default;
  Space(int n, std::vector<double> dist, std::vector<double> mu, double Q);

  int size() const { return n_; }
  double Q() const { return Q_; }
  double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
  double mass(int i) const { return mu_[i]; }
  const std::vector<double>& masses() const { return mu_; }
  const std::vector<double>& dist_matrix() const { return dist_; }

  bool has_skeleton() const { return !skeleton_.empty(); }
  const std::vector<Edge>& skeleton() const { return skeleton_; }
  void set_skeleton(std::vector<Edge> edges);

  bool has_coords() const { return coord_dim_ > 0; }
  int coord_dim() const { return coord_dim_; }
  double coord(int i, int k) const { return coords_[static_cast<std::size_t>(i) * coord_dim_ + k]; }
  const std::vector<double>& coords() const { return coords_; }
  void set_coords(std::vector<double> coords, int dim);

  double diameter() const;
  double min_positive_distance() const;

  /// Checks all Space invariants; throws ValidationError naming the first
  /// violated one.  Called by builders and by the file loader.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<double> dist_;
  std::vector<double> mu_;
  double Q_ = 1.0;
  std::vector<Edge> skeleton_;
  std::vector<double> coords_;
  int coord_dim_ = 0;
};

/// Per-point density omega; nu(A) = sum_{i in A} omega_i mu_i.
using Weight = std::vector<double>;

enum class BallConvention { Closed, Open };

struct Ball {
  int center = 0;
  double radius = 0.0;
  BallConvention convention = BallConvention::Closed;
  std::vector<int> members;  // ascending point ids
};

Ball ball(const Space& space, int center, double radius,
          BallConvention convention = BallConvention::Closed);

/// Discrete integral of the (optionally weighted) measure over a point set.
double measure_of(const Space& space, const Weight* weight,
                  const std::vector<int>& points);

/// A nonnegative quantity that the counterexamples can push to infinity.
/// UNBOUNDED is a value, not an error: the two-segment example space is
/// built to produce it.
struct Extremum {
  double value = 0.0;
  bool unbounded = false;
  int witness_center = -1;
  double witness_radius = 0.0;

  static Extremum finite(double v, int c = -1, double r = 0.0) {
    return {v, false, c, r};
  }
  static Extremum infinite(int c, double r) { return {0.0, true, c, r}; }
};

/// sup over centers x and radii r of measure(B(x,2r)) / measure(B(x,r)).
/// With a weight, both measures are nu-measures.
Extremum doubling_constant(const Space& space, const Weight* weight = nullptr);

struct RegularityFit {
  double c_A = 1.0;     // smallest constant for (1/c_A) r^Q <= mu(B(x,r)) <= c_A r^Q
  double Q_fit = 0.0;   // least-squares slope of log mu(B) vs log r (diagnostic)
};

RegularityFit regularity_fit(const Space& space);

/// Sorted distinct positive distances from `center`; the radii at which
/// closed balls grow.
std::vector<double> candidate_radii(const Space& space, int center);

}  // namespace mmw

#endif  // MMW_CORE_HPP
