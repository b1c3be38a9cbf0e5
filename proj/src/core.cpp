#include "mmw/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace mmw {
namespace {

std::string point_pair(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// Dijkstra over the skeleton from one source; used only by validate().
std::vector<double> skeleton_distances(int n, const std::vector<Edge>& edges, int source) {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  std::vector<double> d(n, std::numeric_limits<double>::infinity());
  d[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [dist, u] = pq.top();
    pq.pop();
    if (dist > d[u]) continue;
    for (auto [v, len] : adj[u]) {
      double cand = dist + len;
      if (cand < d[v]) {
        d[v] = cand;
        pq.push({cand, v});
      }
    }
  }
  return d;
}

}  // namespace

Space::Space(int n, std::vector<double> dist, std::vector<double> mu, double Q)
    : n_(n), dist_(std::move(dist)), mu_(std::move(mu)), Q_(Q) {}

void Space::set_skeleton(std::vector<Edge> edges) { skeleton_ = std::move(edges); }

void Space::set_coords(std::vector<double> coords, int dim) {
  coords_ = std::move(coords);
  coord_dim_ = dim;
}

double Space::diameter() const {
  double d = 0.0;
  for (double v : dist_) d = std::max(d, v);
  return d;
}

double Space::min_positive_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (double v : dist_)
    if (v > 0.0) d = std::min(d, v);
  return d;
}

void Space::validate() const {
  if (n_ <= 0) throw ValidationError("space has no points");
  if (dist_.size() != static_cast<std::size_t>(n_) * n_)
    throw ValidationError("distance matrix size does not match point count");
  if (mu_.size() != static_cast<std::size_t>(n_))
    throw ValidationError("measure vector size does not match point count");
  if (!(Q_ > 0.0)) throw ValidationError("homogeneous dimension Q must be positive");
  for (int i = 0; i < n_; ++i) {
    if (dist(i, i) != 0.0)
      throw ValidationError("dist(i,i) != 0 at point " + std::to_string(i));
    if (!(mu_[i] > 0.0))
      throw ValidationError("mass must be positive at point " + std::to_string(i));
    for (int j = 0; j < i; ++j) {
      if (dist(i, j) != dist(j, i))
        throw ValidationError("distance matrix not symmetric at " + point_pair(i, j));
      if (!(dist(i, j) > 0.0))
        throw ValidationError("dist must be positive for distinct points " + point_pair(i, j));
    }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (dist(i, j) > dist(i, k) + dist(k, j) + kMetricTol)
          throw ValidationError("triangle inequality fails at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ", " + std::to_string(k) + ")");
  if (has_skeleton()) {
    for (const Edge& e : skeleton_) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_ || e.u == e.v)
        throw ValidationError("skeleton edge references invalid points " + point_pair(e.u, e.v));
      if (!(e.length > 0.0))
        throw ValidationError("skeleton edge length must be positive at " + point_pair(e.u, e.v));
    }
    for (int i = 0; i < n_; ++i) {
      std::vector<double> sp = skeleton_distances(n_, skeleton_, i);
      for (int j = 0; j < n_; ++j)
        if (std::abs(sp[j] - dist(i, j)) > kMetricTol)
          throw ValidationError("skeleton shortest path disagrees with dist at " + point_pair(i, j));
    }
  }
  if (has_coords() && coords_.size() != static_cast<std::size_t>(n_) * coord_dim_)
    throw ValidationError("coordinate array size does not match point count");
}

Ball ball(const Space& space, int center, double radius, BallConvention convention) {
  if (center < 0 || center >= space.size())
    throw std::out_of_range("ball: invalid point id " + std::to_string(center));
  if (radius < 0.0) throw std::invalid_argument("ball: negative radius");
  Ball b;
  b.center = center;
  b.radius = radius;
  b.convention = convention;
  for (int j = 0; j < space.size(); ++j) {
    double d = space.dist(center, j);
    bool in = convention == BallConvention::Closed ? d <= radius : d < radius;
    if (in) b.members.push_back(j);
  }
  return b;
}

double measure_of(const Space& space, const Weight* weight, const std::vector<int>& points) {
  double total = 0.0;
  for (int i : points) total += weight ? (*weight)[i] * space.mass(i) : space.mass(i);
  return total;
}

Extremum doubling_constant(const Space& space, const Weight* weight) {
  const int n = space.size();
  Extremum best = Extremum::finite(1.0);
  std::vector<std::pair<double, int>> order(n);
  for (int x = 0; x < n; ++x) {
    for (int j = 0; j < n; ++j) order[j] = {space.dist(x, j), j};
    std::sort(order.begin(), order.end());
    // Prefix sums of the (weighted) measure along increasing distance.
    std::vector<double> prefix(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      int j = order[k].second;
      prefix[k + 1] = prefix[k] + (weight ? (*weight)[j] * space.mass(j) : space.mass(j));
    }
    // Closed-ball measure at radius r: include all points with dist <= r.
    auto ball_measure = [&](double r) {
      int lo = 0, hi = n;  // count of points with dist <= r
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (order[mid].first <= r) lo = mid + 1; else hi = mid;
      }
      return prefix[lo];
    };
    // The ratio r -> m(B(x,2r))/m(B(x,r)) only changes at r = d_k and r = d_k/2.
    std::vector<double> radii;
    for (int k = 0; k < n; ++k)
      if (order[k].first > 0.0) {
        radii.push_back(order[k].first);
        radii.push_back(order[k].first / 2.0);
      }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) {
      double num = ball_measure(2.0 * r);
      double den = ball_measure(r);
      if (den == 0.0) {
        if (num > 0.0) return Extremum::infinite(x, r);
        continue;  // 0/0: empty nu-ball doubling into an empty nu-ball
      }
      double ratio = num / den;
      if (ratio > best.value) best = Extremum::finite(ratio, x, r);
    }
  }
  return best;
}

RegularityFit regularity_fit(const Space& space) {
  if (space.size() < 2) throw std::invalid_argument("regularity_fit requires n >= 2");
  RegularityFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  // Radii beyond diam/2 saturate (the ball swallows the whole space and
  // mu(B) stops growing); they would drag the fitted slope toward 0, so the
  // scaling sample stops there.  c_A still scans everything.
  const double r_cap = space.diameter() / 2.0;
  for (int x = 0; x < space.size(); ++x) {
    for (double r : candidate_radii(space, x)) {
      double m = measure_of(space, nullptr, ball(space, x, r).members);
      double rq = std::pow(r, space.Q());
      fit.c_A = std::max(fit.c_A, std::max(m / rq, rq / m));
      if (r <= r_cap) {
        double lx = std::log(r), ly = std::log(m);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++count;
      }
    }
  }
  double denom = count * sxx - sx * sx;
  fit.Q_fit = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  return fit;
}

std::vector<double> candidate_radii(const Space& space, int center) {
  if (center < 0 || center >= space.size())
    throw std::out_of_range("candidate_radii: invalid point id " + std::to_string(center));
  std::vector<double> radii;
  for (int j = 0; j < space.size(); ++j)
    if (space.dist(center, j) > 0.0) radii.push_back(space.dist(center, j));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

}  // namespace mmw
