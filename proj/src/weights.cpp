#include "mmw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mmw/format.hpp"

namespace mmw {

const std::vector<double> kDefaultPGrid = {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0};
const std::vector<double> kDefaultEpsGrid = {0.05, 0.1, 0.2, 0.4};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Points sorted by distance from one center, with the prefix lengths at
// which closed balls change.  The radius-0 ball {center} is included.
struct DistScan {
  std::vector<int> ids;
  std::vector<double> dist;
  std::vector<int> group_end;  // prefix sizes, one per distinct radius
};

DistScan scan_center(const Space& s, int x) {
  const int n = s.size();
  DistScan scan;
  std::vector<std::pair<double, int>> order(n);
  for (int j = 0; j < n; ++j) order[j] = {s.dist(x, j), j};
  std::sort(order.begin(), order.end());
  scan.ids.resize(n);
  scan.dist.resize(n);
  for (int k = 0; k < n; ++k) {
    scan.dist[k] = order[k].first;
    scan.ids[k] = order[k].second;
  }
  for (int k = 0; k < n; ++k)
    if (k + 1 == n || scan.dist[k + 1] != scan.dist[k]) scan.group_end.push_back(k + 1);
  return scan;
}

// Point ids sorted by weight (descending or ascending), ties by id.
std::vector<int> omega_order(const Weight& w, bool descending) {
  std::vector<int> ids(w.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return descending ? w[a] > w[b] : w[a] < w[b];
  });
  return ids;
}

}  // namespace

SweepCurve sweep_impl(const Space& space, const Weight& weight, const Ball& b, bool sublevel) {
  SweepCurve curve;
  curve.ball = {b.center, b.radius};
  std::vector<int> members = b.members;
  std::stable_sort(members.begin(), members.end(), [&](int a, int c) {
    return sublevel ? weight[a] < weight[c] : weight[a] > weight[c];
  });
  double muB = 0.0, nuB = 0.0;
  for (int i : members) {
    muB += space.mass(i);
    nuB += weight[i] * space.mass(i);
  }
  double mE = 0.0, nE = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    int i = members[k];
    mE += space.mass(i);
    nE += weight[i] * space.mass(i);
    bool boundary = k + 1 == members.size() || weight[members[k + 1]] != weight[i];
    if (boundary)
      curve.breakpoints.push_back(
          {weight[i], mE / muB, nuB > 0.0 ? nE / nuB : 0.0});
  }
  return curve;
}

SweepCurve superlevel_sweep(const Space& space, const Weight& weight, const Ball& b) {
  return sweep_impl(space, weight, b, false);
}

SweepCurve sublevel_sweep(const Space& space, const Weight& weight, const Ball& b) {
  return sweep_impl(space, weight, b, true);
}

ApResult ap_constant(const Space& space, const Weight& weight, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("ap_constant requires p > 1");
  for (std::size_t i = 0; i < weight.size(); ++i)
    if (!(weight[i] > 0.0))
      throw NotInApError("not in any A_p: omega vanishes on a set of positive measure (point " +
                         std::to_string(i) + ")");
  const double q = p / (p - 1.0);
  ApResult best;
  for (int x = 0; x < space.size(); ++x) {
    DistScan scan = scan_center(space, x);
    double sm = 0.0, sw = 0.0, sq = 0.0;
    int k = 0;
    for (int m : scan.group_end) {
      for (; k < m; ++k) {
        int i = scan.ids[k];
        sm += space.mass(i);
        sw += weight[i] * space.mass(i);
        sq += std::pow(weight[i], 1.0 - q) * space.mass(i);
      }
      double value = (sw / sm) * std::pow(sq / sm, p - 1.0);
      if (value > best.value) best = {value, {x, scan.dist[m - 1]}};
    }
  }
  return best;
}

Extremum a1_constant(const Space& space, const Weight& weight) {
  Extremum best = Extremum::finite(0.0);
  for (int x = 0; x < space.size(); ++x) {
    DistScan scan = scan_center(space, x);
    double sm = 0.0, sw = 0.0, wmin = kInf;
    int k = 0;
    for (int m : scan.group_end) {
      for (; k < m; ++k) {
        int i = scan.ids[k];
        sm += space.mass(i);
        sw += weight[i] * space.mass(i);
        wmin = std::min(wmin, weight[i]);
      }
      double avg = sw / sm;
      if (wmin == 0.0) {
        if (avg > 0.0) return Extremum::infinite(x, scan.dist[m - 1]);
        continue;  // omega == 0 on the whole ball
      }
      double value = avg / wmin;
      if (value > best.value) best = Extremum::finite(value, x, scan.dist[m - 1]);
    }
  }
  if (best.value == 0.0) best.value = 1.0;  // omega identically zero
  return best;
}

namespace {

// Shared ball-by-ball sweep driver for conditions (1), (2) and (4).
// visit(center, radius, muB, nuB) is called per ball, then feed(i, last_in_group)
// for every member in omega order, then close().
template <typename PerBall>
void for_each_ball_in_omega_order(const Space& space, const Weight& weight, bool descending,
                                  PerBall&& per_ball) {
  const int n = space.size();
  std::vector<int> worder = omega_order(weight, descending);
  std::vector<char> in_ball(n);
  for (int x = 0; x < n; ++x) {
    DistScan scan = scan_center(space, x);
    std::fill(in_ball.begin(), in_ball.end(), 0);
    double muB = 0.0, nuB = 0.0;
    int k = 0;
    for (int m : scan.group_end) {
      for (; k < m; ++k) {
        int i = scan.ids[k];
        in_ball[i] = 1;
        muB += space.mass(i);
        nuB += weight[i] * space.mass(i);
      }
      auto&& sink = per_ball(x, scan.dist[m - 1], muB, nuB);
      // Members in omega order; flag tie-group boundaries.
      int prev = -1;
      for (int i : worder) {
        if (!in_ball[i]) continue;
        if (prev >= 0) sink(prev, weight[prev] != weight[i]);
        prev = i;
      }
      if (prev >= 0) sink(prev, true);
    }
  }
}

}  // namespace

std::vector<CurvePoint> cond2_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& p_grid) {
  std::vector<CurvePoint> out(p_grid.size());
  for (std::size_t g = 0; g < p_grid.size(); ++g) {
    if (!(p_grid[g] >= 1.0)) throw std::invalid_argument("cond2_curve requires p >= 1");
    out[g].x = p_grid[g];
  }
  for_each_ball_in_omega_order(
      space, weight, /*descending=*/true,
      [&](int center, double radius, double muB, double nuB) {
        return [&, center, radius, muB, nuB, mE = 0.0, nE = 0.0](int i, bool boundary) mutable {
          mE += space.mass(i);
          nE += weight[i] * space.mass(i);
          if (!boundary) return;
          double u = mE / muB;
          double v = nuB > 0.0 ? nE / nuB : 0.0;
          for (std::size_t g = 0; g < out.size(); ++g) {
            double score = v / std::pow(u, 1.0 / out[g].x);
            if (score > out[g].y) {
              out[g].y = score;
              out[g].witness = {{center, radius}, weight[i], u, v};
            }
          }
        };
      });
  return out;
}

std::vector<CurvePoint> cond4_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& p_grid) {
  std::vector<CurvePoint> out(p_grid.size());
  for (std::size_t g = 0; g < p_grid.size(); ++g) {
    if (!(p_grid[g] >= 1.0)) throw std::invalid_argument("cond4_curve requires p >= 1");
    out[g].x = p_grid[g];
    out[g].y = kInf;
  }
  for_each_ball_in_omega_order(
      space, weight, /*descending=*/false,
      [&](int center, double radius, double muB, double nuB) {
        return [&, center, radius, muB, nuB, mE = 0.0, nE = 0.0](int i, bool boundary) mutable {
          mE += space.mass(i);
          nE += weight[i] * space.mass(i);
          if (!boundary) return;
          double u = mE / muB;
          double v = nuB > 0.0 ? nE / nuB : 0.0;
          for (std::size_t g = 0; g < out.size(); ++g) {
            double score = v / std::pow(u, out[g].x);
            if (score < out[g].y) {
              out[g].y = score;
              out[g].witness = {{center, radius}, weight[i], u, v};
            }
          }
        };
      });
  for (auto& pt : out)
    if (pt.y == kInf) pt.y = 0.0;
  return out;
}

std::vector<CurvePoint> cond1_curve(const Space& space, const Weight& weight,
                                    const std::vector<double>& eps_grid) {
  std::vector<CurvePoint> out(eps_grid.size());
  std::vector<double> max_v(eps_grid.size(), 0.0);
  for (std::size_t g = 0; g < eps_grid.size(); ++g) {
    if (!(eps_grid[g] > 0.0 && eps_grid[g] < 1.0))
      throw std::invalid_argument("cond1_curve requires eps in (0,1)");
    out[g].x = eps_grid[g];
  }
  // Extremal subsets for a hard mu-budget cut into tie groups, so the sweep
  // here is per point, not per group.
  for_each_ball_in_omega_order(
      space, weight, /*descending=*/true,
      [&](int center, double radius, double muB, double nuB) {
        return [&, center, radius, muB, nuB, mE = 0.0, nE = 0.0, ties = 0,
                last_w = kInf](int i, bool /*boundary*/) mutable {
          if (nuB <= 0.0) return;
          mE += space.mass(i);
          nE += weight[i] * space.mass(i);
          ties = weight[i] == last_w ? ties + 1 : 1;
          last_w = weight[i];
          double u = mE / muB;
          double v = nE / nuB;
          for (std::size_t g = 0; g < out.size(); ++g)
            if (u <= out[g].x && v > max_v[g]) {
              max_v[g] = v;
              out[g].witness = {{center, radius}, weight[i], u, v, ties};
            }
        };
      });
  for (std::size_t g = 0; g < out.size(); ++g)
    out[g].y = std::clamp(1.0 - max_v[g], 0.0, 1.0);
  return out;
}

double ball_ap_product(const Space& space, const Weight& weight, double p, const BallRef& ref) {
  const double q = p / (p - 1.0);
  DistScan scan = scan_center(space, ref.center);
  double sm = 0.0, sw = 0.0, sq = 0.0;
  for (int k = 0; k < space.size() && scan.dist[k] <= ref.radius; ++k) {
    int i = scan.ids[k];
    sm += space.mass(i);
    sw += weight[i] * space.mass(i);
    sq += std::pow(weight[i], 1.0 - q) * space.mass(i);
  }
  return (sw / sm) * std::pow(sq / sm, p - 1.0);
}

double ball_rhi_ratio(const Space& space, const Weight& weight, double eps, const BallRef& ref) {
  DistScan scan = scan_center(space, ref.center);
  double sm = 0.0, sw = 0.0, se = 0.0;
  for (int k = 0; k < space.size() && scan.dist[k] <= ref.radius; ++k) {
    int i = scan.ids[k];
    sm += space.mass(i);
    sw += weight[i] * space.mass(i);
    se += std::pow(weight[i], 1.0 + eps) * space.mass(i);
  }
  if (sw == 0.0) return 1.0;
  return std::pow(se / sm, 1.0 / (1.0 + eps)) / (sw / sm);
}

CurvePoint rhi_constant(const Space& space, const Weight& weight, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rhi_constant requires eps > 0");
  CurvePoint best;
  best.x = eps;
  best.y = 1.0;  // nu-null balls contribute 1 by convention
  for (int x = 0; x < space.size(); ++x) {
    DistScan scan = scan_center(space, x);
    double sm = 0.0, sw = 0.0, se = 0.0;
    int k = 0;
    for (int m : scan.group_end) {
      for (; k < m; ++k) {
        int i = scan.ids[k];
        sm += space.mass(i);
        sw += weight[i] * space.mass(i);
        se += std::pow(weight[i], 1.0 + eps) * space.mass(i);
      }
      if (sw == 0.0) continue;
      double value = std::pow(se / sm, 1.0 / (1.0 + eps)) / (sw / sm);
      if (value > best.y) {
        best.y = value;
        best.witness = {{x, scan.dist[m - 1]}, 0.0, 0.0, 0.0};
      }
    }
  }
  return best;
}

SweepPoint replay_witness(const Space& space, const Weight& weight, const CurveWitness& w,
                          bool sublevel) {
  Ball b = ball(space, w.ball.center, w.ball.radius);
  std::vector<int> members = b.members;
  std::stable_sort(members.begin(), members.end(), [&](int a, int c) {
    return sublevel ? weight[a] < weight[c] : weight[a] > weight[c];
  });
  double muB = 0.0, nuB = 0.0;
  for (int i : members) {
    muB += space.mass(i);
    nuB += weight[i] * space.mass(i);
  }
  double mE = 0.0, nE = 0.0;
  int ties_taken = 0;
  for (int i : members) {
    bool strict = sublevel ? weight[i] < w.lambda : weight[i] > w.lambda;
    bool tie = weight[i] == w.lambda;
    if (!strict && !tie) break;
    if (tie) {
      if (w.tie_count >= 0 && ties_taken >= w.tie_count) break;
      ++ties_taken;
    }
    mE += space.mass(i);
    nE += weight[i] * space.mass(i);
  }
  return {w.lambda, mE / muB, nuB > 0.0 ? nE / nuB : 0.0};
}

ClassReport classify_weight(const Space& space, const Weight& weight,
                            const std::vector<double>& p_grid,
                            const std::vector<double>& eps_grid) {
  ClassReport r;
  r.p_grid = p_grid;
  r.eps_grid = eps_grid;
  r.a1 = a1_constant(space, weight);
  try {
    for (double p : p_grid)
      if (p > 1.0) r.ap_curve.push_back({p, ap_constant(space, weight, p).value});
    r.ap_defined = true;
  } catch (const NotInApError& e) {
    r.ap_defined = false;
    r.ap_error = e.what();
    r.ap_curve.clear();
  }
  r.cond1 = cond1_curve(space, weight, eps_grid);
  r.cond2 = cond2_curve(space, weight, p_grid);
  r.cond4 = cond4_curve(space, weight, p_grid);
  for (double eps : eps_grid) r.rhi.push_back(rhi_constant(space, weight, eps));
  r.nu_doubling = doubling_constant(space, &weight);

  auto best_of = [](const std::vector<CurvePoint>& c, bool minimize) {
    const CurvePoint* best = nullptr;
    for (const auto& pt : c)
      if (!pt.unbounded && (!best || (minimize ? pt.y < best->y : pt.y > best->y))) best = &pt;
    return best;
  };
  // (1): delta(eps) > 0 for some grid eps.
  {
    const CurvePoint* best = nullptr;
    for (const auto& pt : r.cond1)
      if (pt.y > 0.0 && (!best || pt.y > best->y)) best = &pt;
    r.verdict[0].holds = best != nullptr;
    if (best)
      r.verdict[0].certificate =
          "delta(" + fmt_double(best->x, 15) + ") = " + fmt_double(best->y, 15);
  }
  // (2): finite c(p) for some grid p.
  if (const CurvePoint* best = best_of(r.cond2, true); best && std::isfinite(best->y)) {
    r.verdict[1].holds = true;
    r.verdict[1].certificate =
        "c(" + fmt_double(best->x, 15) + ") = " + fmt_double(best->y, 15);
  }
  // (3): finite reverse Hoelder constant for some grid eps.
  if (const CurvePoint* best = best_of(r.rhi, true); best && std::isfinite(best->y)) {
    r.verdict[2].holds = true;
    r.verdict[2].certificate =
        "C(" + fmt_double(best->x, 15) + ") = " + fmt_double(best->y, 15);
  }
  // (4): c(p) > 0 for some grid p.
  {
    const CurvePoint* best = nullptr;
    for (const auto& pt : r.cond4)
      if (pt.y > 0.0 && (!best || pt.y > best->y)) best = &pt;
    r.verdict[3].holds = best != nullptr;
    if (best)
      r.verdict[3].certificate =
          "c(" + fmt_double(best->x, 15) + ") = " + fmt_double(best->y, 15);
  }
  // (5): omega in A_p for some grid p.
  if (r.ap_defined && !r.ap_curve.empty()) {
    r.verdict[4].holds = true;
    const auto& last = r.ap_curve.back();
    r.verdict[4].certificate =
        "c_omega(" + fmt_double(last.first, 15) + ") = " + fmt_double(last.second, 15);
  } else {
    r.verdict[4].certificate = r.ap_error;
  }
  return r;
}

double rhi_bound_from_cond2(double c2, double p, double eps) {
  if (p <= 1.0) return c2;  // omega <= c2 * avg omega a.e. on the ball
  double q = p / (p - 1.0);
  if (eps >= q - 1.0) return kInf;
  return c2 * std::pow(1.0 + (1.0 + eps) / (q - 1.0 - eps), 1.0 / (1.0 + eps));
}

double cond2_exponent_from_rhi(double eps) { return (1.0 + eps) / eps; }

ImplicationMatrix implication_matrix(const Space& space, const Weight& weight,
                                     const ClassReport& report) {
  ImplicationMatrix m;
  const double rel_tol = 1e-9;
  auto add = [&](ImplicationCheck c) {
    if (!c.ok) ++m.violations;
    m.checks.push_back(std::move(c));
  };

  bool cond2_finite = false;
  for (const auto& pt : report.cond2)
    if (!pt.unbounded && std::isfinite(pt.y)) cond2_finite = true;
  bool cond4_positive = false;
  for (const auto& pt : report.cond4)
    if (pt.y > 0.0) cond4_positive = true;

  // (2) => (1), boolean.
  {
    ImplicationCheck c;
    c.name = "(2) => (1)";
    c.premise = cond2_finite;
    bool delta_positive = false;
    for (const auto& pt : report.cond1)
      if (pt.y > 0.0) delta_positive = true;
    c.ok = !c.premise || delta_positive;
    c.detail = delta_positive ? "delta(eps) > 0 for some grid eps" : "all delta(eps) = 0";
    add(std::move(c));
  }
  // (2) => (1), quantitative: 1 - delta(eps) <= min_p c(p) eps^(1/p).
  {
    ImplicationCheck c;
    c.name = "(2) => (1) quantitative";
    c.premise = cond2_finite;
    c.ok = true;
    if (c.premise) {
      for (const auto& d : report.cond1) {
        double bound = kInf;
        for (const auto& pt : report.cond2)
          if (std::isfinite(pt.y)) bound = std::min(bound, pt.y * std::pow(d.x, 1.0 / pt.x));
        double lhs = 1.0 - d.y;
        if (lhs > bound * (1.0 + rel_tol)) {
          c.ok = false;
          c.detail = "1 - delta(" + fmt_double(d.x, 15) + ") = " + fmt_double(lhs, 15) +
                     " exceeds bound " + fmt_double(bound, 15);
          break;
        }
      }
      if (c.ok) c.detail = "1 - delta(eps) <= c(p) eps^(1/p) on the whole grid";
    }
    add(std::move(c));
  }
  // (2) => (3), quantitative transport of constants.
  {
    ImplicationCheck c;
    c.name = "(2) => (3) quantitative";
    c.premise = cond2_finite;
    c.ok = true;
    if (c.premise) {
      for (const auto& rh : report.rhi) {
        double bound = kInf;
        for (const auto& pt : report.cond2)
          if (std::isfinite(pt.y)) bound = std::min(bound, rhi_bound_from_cond2(pt.y, pt.x, rh.x));
        if (!std::isfinite(bound)) continue;  // grid exponents inapplicable at this eps
        if (rh.y > bound * (1.0 + rel_tol)) {
          c.ok = false;
          c.detail = "rhi(" + fmt_double(rh.x, 15) + ") = " + fmt_double(rh.y, 15) +
                     " exceeds derived bound " + fmt_double(bound, 15);
          break;
        }
      }
      if (c.ok) c.detail = "computed rhi constants below the cond2-derived bounds";
    }
    add(std::move(c));
  }
  // (3) => (2), quantitative: cond2 at p' = (1+eps)/eps is bounded by C(eps).
  {
    ImplicationCheck c;
    c.name = "(3) => (2) quantitative";
    c.premise = true;
    c.ok = true;
    for (const auto& rh : report.rhi) {
      if (!std::isfinite(rh.y)) continue;
      double pprime = cond2_exponent_from_rhi(rh.x);
      auto c2 = cond2_curve(space, weight, {pprime});
      if (c2[0].y > rh.y * (1.0 + rel_tol)) {
        c.ok = false;
        c.detail = "c(" + fmt_double(pprime, 15) + ") = " + fmt_double(c2[0].y, 15) +
                   " exceeds rhi constant " + fmt_double(rh.y, 15);
        break;
      }
    }
    if (c.ok) c.detail = "cond2 at (1+eps)/eps bounded by each rhi constant";
    add(std::move(c));
  }
  // (4) => (2) with the roles of mu and nu swapped.
  {
    ImplicationCheck c;
    c.name = "(4) => (2) on swapped measures";
    c.premise = cond4_positive;
    c.ok = true;
    if (c.premise) {
      std::vector<double> swapped_mu(space.size());
      Weight swapped_w(space.size());
      for (int i = 0; i < space.size(); ++i) {
        swapped_mu[i] = weight[i] * space.mass(i);
        swapped_w[i] = 1.0 / weight[i];
      }
      Space swapped(space.size(), space.dist_matrix(), std::move(swapped_mu), space.Q());
      for (const auto& pt : report.cond4) {
        if (!(pt.y > 0.0)) continue;
        auto c2 = cond2_curve(swapped, swapped_w, {pt.x});
        double bound = std::pow(pt.y, -1.0 / pt.x);
        if (c2[0].y > bound * (1.0 + rel_tol)) {
          c.ok = false;
          c.detail = "swapped c(" + fmt_double(pt.x, 15) + ") = " + fmt_double(c2[0].y, 15) +
                     " exceeds c4^(-1/p) = " + fmt_double(bound, 15);
          break;
        }
      }
      if (c.ok) c.detail = "swapped cond2 bounded by c4(p)^(-1/p)";
    }
    add(std::move(c));
  }
  // (2) & (4) => (5).
  {
    ImplicationCheck c;
    c.name = "(2) & (4) => (5)";
    c.premise = cond2_finite && cond4_positive;
    c.ok = !c.premise || (report.ap_defined && !report.ap_curve.empty());
    c.detail = report.ap_defined ? "A_p constant finite on the grid" : report.ap_error;
    add(std::move(c));
  }
  return m;
}

}  // namespace mmw
