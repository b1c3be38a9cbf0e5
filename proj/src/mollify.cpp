#include "mmw/mollify.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace mmw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Net separated_net(const Space& space, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("separated_net requires t > 0");
  Net net;
  net.t = t;
  const double sep = 2.0 * t / 5.0;
  for (int i = 0; i < space.size(); ++i) {
    bool ok = true;
    for (int c : net.centers)
      if (space.dist(i, c) <= sep) {
        ok = false;
        break;
      }
    if (ok) net.centers.push_back(i);
  }
  for (int x = 0; x < space.size(); ++x) {
    int count = 0;
    for (int c : net.centers)
      if (space.dist(x, c) <= 2.0 * t) ++count;
    net.max_overlap = std::max(net.max_overlap, count);
  }
  return net;
}

PhiMatrix partition(const Space& space, const Net& net) {
  const double t = net.t;
  PhiMatrix raw(net.centers.size());
  std::vector<double> total(space.size(), 0.0);
  for (std::size_t i = 0; i < net.centers.size(); ++i) {
    int c = net.centers[i];
    for (int x = 0; x < space.size(); ++x) {
      double d = space.dist(x, c);
      if (d > 2.0 * t) continue;
      // dist(x, B_i) stands in as max(0, d(x, x_i) - t).
      double value = d <= t ? 1.0 : 1.0 - (d - t) / t;
      raw[i].push_back({x, value});
      total[x] += value;
    }
  }
  // The net covers X, so total >= 1 everywhere.
  for (int x = 0; x < space.size(); ++x)
    assert(total[x] >= 1.0);
  for (auto& row : raw)
    for (auto& [x, value] : row) value /= total[x];
  return raw;
}

MollifiedWeight mollify(const Space& space, const Weight& weight, double t) {
  MollifiedWeight m;
  m.t = t;
  m.net = separated_net(space, t);
  m.phi = partition(space, m.net);
  m.a.resize(m.net.centers.size());
  m.omega_t.assign(space.size(), 0.0);
  for (std::size_t i = 0; i < m.phi.size(); ++i) {
    double int_mu = 0.0, int_nu = 0.0;
    for (const auto& [x, value] : m.phi[i]) {
      int_mu += value * space.mass(x);
      int_nu += value * weight[x] * space.mass(x);
    }
    assert(int_mu > 0.0);  // guaranteed by the net invariants
    m.a[i] = int_nu / int_mu;
    for (const auto& [x, value] : m.phi[i]) m.omega_t[x] += m.a[i] * value;
  }
  // Achieved constant of the two-sided bound against nu(B(x,t))/mu(B(x,t)).
  for (int x = 0; x < space.size(); ++x) {
    Ball b = ball(space, x, t);
    double nuB = measure_of(space, &weight, b.members);
    double muB = measure_of(space, nullptr, b.members);
    double ref = nuB / muB;
    for (int y = 0; y < space.size(); ++y) {
      if (space.dist(x, y) > 2.0 * t) continue;
      double val = m.omega_t[y];
      if (ref == 0.0 && val == 0.0) continue;
      if (ref == 0.0 || val == 0.0) {
        m.comparability = kInf;
        continue;
      }
      m.comparability = std::max({m.comparability, val / ref, ref / val});
    }
  }
  return m;
}

std::vector<WeakConvRow> weak_convergence_probe(const Space& space, const Weight& weight,
                                                const std::vector<double>& t_list,
                                                const std::vector<TestSet>& test_sets) {
  constexpr double kFloor = 1e-12;
  std::vector<WeakConvRow> rows;
  for (double t : t_list) {
    MollifiedWeight m = mollify(space, weight, t);
    for (const TestSet& set : test_sets) {
      std::vector<char> in_set(space.size(), 0);
      for (int x : set.points) in_set[x] = 1;
      WeakConvRow row;
      row.t = t;
      row.set_name = set.name;
      for (int x : set.points) {
        row.nu_t += m.omega_t[x] * space.mass(x);
        row.nu += weight[x] * space.mass(x);
      }
      row.rel_error = std::abs(row.nu_t - row.nu) / std::max(row.nu, kFloor);
      // U_{4t} = {x in U : dist(x, complement) > 4t}
      for (int x : set.points) {
        double d_comp = kInf;
        for (int y = 0; y < space.size(); ++y)
          if (!in_set[y]) d_comp = std::min(d_comp, space.dist(x, y));
        if (d_comp > 4.0 * t) row.nu_inner += weight[x] * space.mass(x);
      }
      row.lower_bound_ok = row.nu_t >= row.nu_inner - 1e-12;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

// sup over the ball sample of (avg f^q)^(1/q) / avg f with f = omega_t^(1/Q);
// 0/0 contributes 1.
RhiProbeRow mollified_rhi(const Space& space, const Weight& omega_t, double t, double q,
                          const std::vector<BallRef>& sample) {
  RhiProbeRow row;
  row.t = t;
  const double inv_q_dim = 1.0 / space.Q();
  auto eval = [&](const BallRef& ref) {
    Ball b = ball(space, ref.center, ref.radius);
    double sm = 0.0, sf = 0.0, sfq = 0.0;
    for (int x : b.members) {
      double f = std::pow(omega_t[x], inv_q_dim);
      sm += space.mass(x);
      sf += f * space.mass(x);
      sfq += std::pow(f, q) * space.mass(x);
    }
    if (sf == 0.0) return;  // f vanishes on the ball: both sides zero
    double value = std::pow(sfq / sm, 1.0 / q) / (sf / sm);
    if (value > row.constant || (value == row.constant && row.witness.center < 0)) {
      row.constant = value;
      row.witness = ref;
    }
  };
  if (!sample.empty()) {
    for (const BallRef& ref : sample) eval(ref);
  } else {
    for (int x = 0; x < space.size(); ++x)
      for (double r : candidate_radii(space, x)) eval({x, r});
  }
  return row;
}

}  // namespace

RhiProbeResult uniform_rhi_probe(const Space& space, const Weight& weight,
                                 const std::vector<double>& t_list,
                                 const std::vector<BallRef>& ball_sample) {
  RhiProbeResult result;
  double lo = kInf, hi = 0.0;
  for (double t : t_list) {
    MollifiedWeight m = mollify(space, weight, t);
    RhiProbeRow row = mollified_rhi(space, m.omega_t, t, space.Q(), ball_sample);
    lo = std::min(lo, row.constant);
    hi = std::max(hi, row.constant);
    result.rows.push_back(std::move(row));
  }
  result.max_over_min = lo > 0.0 ? hi / lo : kInf;
  result.uniform = result.max_over_min <= 4.0;
  return result;
}

GehringResult gehring_probe(const Space& space, const MollifiedWeight& mollified,
                            const std::vector<double>& eps_grid) {
  GehringResult result;
  RhiProbeRow base =
      mollified_rhi(space, mollified.omega_t, mollified.t, space.Q(), {});
  result.base_constant = base.constant;
  result.base_witness = base.witness;
  for (double eps : eps_grid) {
    RhiProbeRow row =
        mollified_rhi(space, mollified.omega_t, mollified.t, space.Q() + eps, {});
    result.curve.push_back({eps, row.constant, row.witness});
    if (row.constant <= 10.0 * result.base_constant && eps > result.eps_star) {
      result.eps_star = eps;
      result.star_constant = row.constant;
    }
  }
  return result;
}

std::vector<double> default_t_grid(const Space& space) {
  std::vector<double> grid;
  double floor = 2.0 * space.min_positive_distance();
  for (double t = space.diameter() / 4.0; t >= floor; t /= 2.0) grid.push_back(t);
  if (grid.empty()) grid.push_back(space.diameter() / 4.0);
  return grid;
}

}  // namespace mmw
