#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmw/core.hpp"
#include "mmw/corpus.hpp"
#include "mmw/mollify.hpp"

using namespace mmw;

namespace {

std::vector<int> all_points(const Space& s) {
  std::vector<int> v(s.size());
  for (int i = 0; i < s.size(); ++i) v[i] = i;
  return v;
}

Weight abs_plus(const Space& s, double floor) {
  Weight w(s.size());
  for (int i = 0; i < s.size(); ++i) w[i] = std::abs(s.coord(i, 0)) + floor;
  return w;
}

}  // namespace

TEST_CASE("separated nets: degenerate scales and invariants") {
  Space grid = grid_space(1, 101, 1.0);

  Net huge = separated_net(grid, grid.diameter() * 5.0);
  CHECK(huge.centers == std::vector<int>{0});

  Net tiny = separated_net(grid, grid.min_positive_distance() / 10.0);
  CHECK(static_cast<int>(tiny.centers.size()) == grid.size());

  Net mid = separated_net(grid, 0.1);
  CHECK(mid.centers.size() >= 3);
  CHECK(mid.centers.size() <= 51);
  // pairwise separation > 2t/5
  for (std::size_t a = 0; a < mid.centers.size(); ++a)
    for (std::size_t b = a + 1; b < mid.centers.size(); ++b)
      CHECK(grid.dist(mid.centers[a], mid.centers[b]) > 2.0 * 0.1 / 5.0);
  // coverage by closed t-balls
  for (int x = 0; x < grid.size(); ++x) {
    double nearest = 1e18;
    for (int c : mid.centers) nearest = std::min(nearest, grid.dist(x, c));
    CHECK(nearest <= 0.1);
  }
  CHECK(mid.max_overlap >= 1);
}

TEST_CASE("partition of unity: normalization and support") {
  Space grid = grid_space(1, 101, 1.0);

  Net single = separated_net(grid, grid.diameter() * 5.0);
  PhiMatrix phi1 = partition(grid, single);
  REQUIRE(phi1.size() == 1);
  for (const auto& [x, value] : phi1[0]) CHECK(value == 1.0);

  Net net = separated_net(grid, 0.1);
  PhiMatrix phi = partition(grid, net);
  std::vector<double> total(grid.size(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (const auto& [x, value] : phi[i]) {
      total[x] += value;
      CHECK(value >= 0.0);
      CHECK(grid.dist(x, net.centers[i]) <= 2.0 * 0.1);  // support in 2B_i
    }
  for (double s : total) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mollifying a constant weight is exact") {
  Space grid = grid_space(1, 51, 1.0);
  Weight flat(grid.size(), 1.0);
  MollifiedWeight m = mollify(grid, flat, 0.1);
  for (double a : m.a) CHECK(a == 1.0);
  for (double v : m.omega_t) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mollified two-segment weight stays zero on the dead segment") {
  auto [seg, w] = segment_pair_space(32);
  MollifiedWeight m = mollify(seg, w, 0.1);
  for (int i = 0; i < 32; ++i) CHECK(m.omega_t[i] == 0.0);
  for (int i = 32; i < 64; ++i) CHECK(m.omega_t[i] > 0.0);
  // within one segment the mollified weight is comparable at range 2t
  for (int i = 32; i < 64; ++i)
    for (int j = 32; j < 64; ++j)
      if (seg.dist(i, j) <= 0.2)
        CHECK(m.omega_t[i] / m.omega_t[j] <= 4.0);
}

TEST_CASE("total mass is preserved at every scale") {
  Space grid = grid_space(1, 201, 1.0);
  Weight w = abs_plus(grid, 0.1);
  std::vector<int> all = all_points(grid);
  double nu = measure_of(grid, &w, all);
  for (double t : {0.5, 0.1, 0.02}) {
    MollifiedWeight m = mollify(grid, w, t);
    double nu_t = measure_of(grid, &m.omega_t, all);
    CHECK(nu_t == doctest::Approx(nu).epsilon(1e-12));
  }
}

TEST_CASE("coefficients obey the measured-doubling sandwich") {
  Space grid = grid_space(1, 201, 1.0);
  Weight w = abs_plus(grid, 0.1);
  double dmu = doubling_constant(grid).value;
  double dnu = doubling_constant(grid, &w).value;
  for (double t : {0.08, 0.02}) {
    MollifiedWeight m = mollify(grid, w, t);
    // phi_i <= chi(2B_i) and phi_i >= (1/overlap) chi(B_i) give
    // C = overlap * max(doubling constants) for the two-sided bound.
    double C = m.net.max_overlap * std::max(dmu, dnu);
    for (std::size_t i = 0; i < m.a.size(); ++i) {
      Ball b = ball(grid, m.net.centers[i], t);
      double ratio = measure_of(grid, &w, b.members) / measure_of(grid, nullptr, b.members);
      CHECK(m.a[i] <= C * ratio * (1 + 1e-12));
      CHECK(m.a[i] >= ratio / C * (1 - 1e-12));
    }
  }
}

TEST_CASE("weak convergence on an open interval") {
  Space grid = grid_space(1, 201, 1.0);
  Weight w = abs_plus(grid, 0.1);
  TestSet U{"mid", {}};
  for (int i = 0; i < grid.size(); ++i)
    if (std::abs(grid.coord(i, 0)) < 0.5) U.points.push_back(i);
  TestSet X{"all", all_points(grid)};

  auto rows = weak_convergence_probe(grid, w, {0.08, 0.04, 0.02}, {U, X});
  double prev = 1e18;
  for (const auto& row : rows) {
    CHECK(row.lower_bound_ok);
    if (row.set_name == "all") {
      CHECK(row.rel_error <= 1e-12);  // partition preserves total mass
    } else {
      CHECK(row.rel_error <= prev * 1.10);  // nonincreasing, one soft inversion
      prev = row.rel_error;
    }
  }
  // last mid-interval error under the convergence budget
  for (const auto& row : rows)
    if (row.set_name == "mid" && row.t == 0.02) CHECK(row.rel_error <= 0.15);
}

TEST_CASE("reverse Hoelder ratios across scales") {
  Space grid = grid_space(1, 101, 1.0);
  Weight flat(grid.size(), 1.0);
  RhiProbeResult flat_probe = uniform_rhi_probe(grid, flat, {0.1, 0.05});
  for (const auto& row : flat_probe.rows) CHECK(row.constant == doctest::Approx(1.0));
  CHECK(flat_probe.uniform);

  Weight absx = power_weight(grid, 1.0, 50);
  RhiProbeResult probe = uniform_rhi_probe(grid, absx, {0.1, 0.05, 0.025});
  CHECK(probe.max_over_min <= 4.0);
  CHECK(probe.uniform);

  // single-point balls average a single value: ratio exactly 1
  RhiProbeResult single = uniform_rhi_probe(grid, absx, {0.1}, {{50, 0.0}});
  CHECK(single.rows[0].constant == 1.0);
}

TEST_CASE("exponent improvement probe") {
  Space grid = grid_space(1, 101, 1.0);
  Weight flat(grid.size(), 1.0);
  MollifiedWeight mf = mollify(grid, flat, 0.05);
  GehringResult gf = gehring_probe(grid, mf, kDefaultEpsGrid);
  CHECK(gf.base_constant == doctest::Approx(1.0));
  CHECK(gf.eps_star == 0.4);  // every grid eps qualifies at constant 1
  for (const auto& pt : gf.curve) CHECK(pt.constant == doctest::Approx(1.0).epsilon(1e-12));

  Weight absx = power_weight(grid, 1.0, 50);
  MollifiedWeight ma = mollify(grid, absx, 0.05);
  GehringResult ga = gehring_probe(grid, ma, kDefaultEpsGrid);
  CHECK(ga.eps_star >= 0.05);
  CHECK(ga.star_constant <= 10.0 * ga.base_constant);

  // witness replay: recompute the ratio on the reported ball
  const GehringPoint& top = ga.curve.back();
  Ball b = ball(grid, top.witness.center, top.witness.radius);
  double q = grid.Q() + top.eps;
  double sm = 0.0, sf = 0.0, sfq = 0.0;
  for (int x : b.members) {
    double f = std::pow(ma.omega_t[x], 1.0 / grid.Q());
    sm += grid.mass(x);
    sf += f * grid.mass(x);
    sfq += std::pow(f, q) * grid.mass(x);
  }
  double replay = std::pow(sfq / sm, 1.0 / q) / (sf / sm);
  CHECK(replay == doctest::Approx(top.constant).epsilon(1e-12));
}

TEST_CASE("default scale grid is geometric and bounded") {
  Space grid = grid_space(1, 101, 1.0);
  auto ts = default_t_grid(grid);
  REQUIRE(ts.size() >= 3);
  CHECK(ts.front() == grid.diameter() / 4.0);
  for (std::size_t k = 1; k < ts.size(); ++k) CHECK(ts[k] == ts[k - 1] / 2.0);
  CHECK(ts.back() >= 2.0 * grid.min_positive_distance());
}
