#include "mmw/strong.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmw/format.hpp"
#include "mmw/weights.hpp"

namespace mmw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open-ball nu-mass lookup per center: sorted distances with prefix sums.
struct NuScan {
  std::vector<double> dist;    // sorted
  std::vector<double> prefix;  // prefix[k] = nu-mass of the k nearest points

  double open_ball_mass(double r) const {
    // points with dist < r
    auto it = std::lower_bound(dist.begin(), dist.end(), r);
    return prefix[static_cast<std::size_t>(it - dist.begin())];
  }
};

NuScan scan_nu(const Space& s, const Weight& w, int x) {
  const int n = s.size();
  std::vector<std::pair<double, int>> order(n);
  for (int j = 0; j < n; ++j) order[j] = {s.dist(x, j), j};
  std::sort(order.begin(), order.end());
  NuScan scan;
  scan.dist.resize(n);
  scan.prefix.assign(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    scan.dist[k] = order[k].first;
    scan.prefix[k + 1] = scan.prefix[k] + w[order[k].second] * s.mass(order[k].second);
  }
  return scan;
}

}  // namespace

std::vector<double> quasi_distance(const Space& space, const Weight& weight) {
  const int n = space.size();
  std::vector<NuScan> scans;
  scans.reserve(n);
  for (int x = 0; x < n; ++x) scans.push_back(scan_nu(space, weight, x));
  std::vector<double> dn(static_cast<std::size_t>(n) * n, 0.0);
  const double inv_q = 1.0 / space.Q();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double r = space.dist(i, j);
      double value =
          std::pow(scans[i].open_ball_mass(r) + scans[j].open_ball_mass(r), inv_q);
      dn[static_cast<std::size_t>(i) * n + j] = value;
      dn[static_cast<std::size_t>(j) * n + i] = value;
    }
  return dn;
}

namespace {

// Min-plus fixpoint of the complete graph with edge weights w; exact
// triangle inequality holds on exit.
void min_plus_closure(std::vector<double>& d, int n) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < n; ++k) {
      const double* dk = d.data() + static_cast<std::size_t>(k) * n;
      for (int i = 0; i < n; ++i) {
        double dik = d[static_cast<std::size_t>(i) * n + k];
        if (dik == kInf) continue;
        double* di = d.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
          double cand = dik + dk[j];
          if (cand < di[j]) {
            di[j] = cand;
            changed = true;
          }
        }
      }
    }
  }
}

// Dijkstra on the complete graph restricted to `allowed`, from x to y.
double restricted_chain(const std::vector<double>& dn, int n, const std::vector<int>& allowed,
                        int x, int y) {
  const int k = static_cast<int>(allowed.size());
  std::vector<double> dist(k, kInf);
  std::vector<char> done(k, 0);
  int xi = -1, yi = -1;
  for (int a = 0; a < k; ++a) {
    if (allowed[a] == x) xi = a;
    if (allowed[a] == y) yi = a;
  }
  dist[xi] = 0.0;
  for (int iter = 0; iter < k; ++iter) {
    int best = -1;
    double best_d = kInf;
    for (int a = 0; a < k; ++a)
      if (!done[a] && dist[a] < best_d) {
        best_d = dist[a];
        best = a;
      }
    if (best < 0) break;
    done[best] = 1;
    if (best == yi) break;
    for (int a = 0; a < k; ++a) {
      if (done[a]) continue;
      double cand = best_d + dn[static_cast<std::size_t>(allowed[best]) * n + allowed[a]];
      if (cand < dist[a]) dist[a] = cand;
    }
  }
  return dist[yi];
}

}  // namespace

Metrization chain_metrization(const std::vector<double>& delta_nu, const Space& space,
                              bool restricted) {
  const int n = space.size();
  Metrization m;
  m.n = n;
  m.delta_nu = delta_nu;
  m.restricted = restricted;
  if (!restricted) {
    m.delta = delta_nu;
    min_plus_closure(m.delta, n);
  } else {
    m.delta.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double r = 2.0 * space.dist(i, j);
        // Chains around either endpoint; keep the cheaper side.
        double via_i = restricted_chain(delta_nu, n, ball(space, i, r).members, i, j);
        double via_j = restricted_chain(delta_nu, n, ball(space, j, r).members, j, i);
        double value = std::min(via_i, via_j);
        m.delta[static_cast<std::size_t>(i) * n + j] = value;
        m.delta[static_cast<std::size_t>(j) * n + i] = value;
      }
  }
  // Distortion with deterministic first-lexicographic witness.
  for (int i = 0; i < n && !m.unbounded; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double dn = m.dn(i, j), d = m.d(i, j);
      if (dn == 0.0) {
        // delta_nu vanishes on a distinct pair: no genuine distance function
        // can be squeezed under it, so comparability fails outright.
        m.unbounded = true;
        m.witness = {i, j};
        break;
      }
      if (d == 0.0) {
        m.unbounded = true;
        m.witness = {i, j};
        break;
      }
      double ratio = dn / d;
      if (ratio > m.distortion) {
        m.distortion = ratio;
        m.witness = {i, j};
      }
    }
  return m;
}

ComparisonResult comparison_check(const Space& space, const Weight& weight) {
  Extremum doubling = doubling_constant(space, &weight);
  if (doubling.unbounded)
    throw NonDoublingError(
        "comparison_check requires a doubling nu; unbounded at center " +
            std::to_string(doubling.witness_center) + ", radius " +
            fmt_double(doubling.witness_radius, 15),
        doubling);
  const int n = space.size();
  std::vector<NuScan> scans;
  scans.reserve(n);
  for (int x = 0; x < n; ++x) scans.push_back(scan_nu(space, weight, x));
  const double inv_q = 1.0 / space.Q();
  ComparisonResult out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double r = space.dist(i, j);
      double one_ball = scans[i].open_ball_mass(r);
      if (one_ball <= 0.0) continue;
      double dn = std::pow(one_ball + scans[j].open_ball_mass(r), inv_q);
      double lhs = std::pow(one_ball, inv_q);
      if (lhs > dn)
        throw std::logic_error("comparison_check: left inequality violated");
      double ratio = dn / lhs;
      if (ratio > out.constant) {
        out.constant = ratio;
        out.witness = {i, j};
      }
    }
  return out;
}

StabilityReport sa_verdict(const std::vector<const Space*>& spaces,
                           const std::vector<const Weight*>& weights,
                           const std::vector<double>& p_grid) {
  if (spaces.size() < 2 || spaces.size() != weights.size())
    throw std::invalid_argument("sa_verdict requires at least 2 matching scales");
  StabilityReport report;
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    const Space& space = *spaces[s];
    const Weight& weight = *weights[s];
    Metrization m = chain_metrization(quasi_distance(space, weight), space, false);
    ScaleResult r;
    r.n = space.size();
    r.distortion = m.distortion;
    r.unbounded = m.unbounded;
    r.witness = m.witness;
    for (const auto& pt : cond2_curve(space, weight, p_grid)) r.cond2.push_back({pt.x, pt.y});
    report.scales.push_back(std::move(r));
  }
  bool any_unbounded = false;
  bool stable = true;
  for (std::size_t s = 0; s < report.scales.size(); ++s) {
    if (report.scales[s].unbounded) any_unbounded = true;
    if (s > 0 && !report.scales[s].unbounded && !report.scales[s - 1].unbounded) {
      double ratio = report.scales[s].distortion / report.scales[s - 1].distortion;
      if (ratio > 2.0 || ratio < 0.5) stable = false;
    }
  }
  report.verdict = any_unbounded ? "NOT-STRONG" : (stable ? "STABLE" : "UNSTABLE");
  return report;
}

}  // namespace mmw
