#ifndef MMW_CORPUS_HPP
#define MMW_CORPUS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "mmw/core.hpp"

namespace mmw {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform grid on [-extent, extent]^dim with cell mass h^dim and Q = dim.
/// dim == 1 carries the Euclidean line metric; dim == 2 carries the
/// 4-neighbor graph metric so that the nearest-neighbor skeleton reproduces
/// dist exactly.
Space grid_space(int dim, int n_per_axis, double extent);

/// Two parallel unit segments at mutual distance 2, one-dimensional cell
/// masses (total 1 per segment), weight 0 on segment one and 1 on segment
/// two.  Points 0..n-1 are segment one (x1 = 1), n..2n-1 segment two.
std::pair<Space, Weight> segment_pair_space(int n_per_segment);

/// Unit circle plus the line [-2, 2] through its center, planar Euclidean
/// metric, one-dimensional cell masses.  r -> mu(B(0,r)) jumps by the
/// circle mass at r = 1.  Point 0 is the origin.
Space sphere_plane_space(int n);

int sphere_plane_origin();

/// omega_i = max(dist(basepoint, i), d_min)^alpha with d_min the distance
/// from basepoint to its nearest other point.
Weight power_weight(const Space& space, double alpha, int basepoint);

/// Radial stretch x -> |x|^(beta-1) x between coordinate spaces.
struct RadialStretchMap {
  double beta = 1.0;
  const Space* target = nullptr;
};

/// Discrete Jacobian: ratio of image-ball to source-ball measure at the
/// smallest positive radius, images snapped to nearest target point.
Weight jacobian_weight(const Space& space, const RadialStretchMap& map);

/// Image of the whole space under the map, snapped; used to cross-check
/// the mass identity of the Jacobian.
double snapped_image_mass(const Space& space, const RadialStretchMap& map);

/// Deterministic log-uniform weights in [1/dynamic_range, dynamic_range].
Weight random_weight(const Space& space, std::uint64_t seed, double dynamic_range);

struct LoadedSpace {
  Space space;
  bool has_weight = false;
  Weight weight;
};

LoadedSpace load_space(const std::string& path);
void save_space(const std::string& path, const Space& space, const Weight* weight = nullptr);

std::string space_to_string(const Space& space, const Weight* weight = nullptr);
LoadedSpace space_from_string(const std::string& text);

}  // namespace mmw

#endif  // MMW_CORPUS_HPP
