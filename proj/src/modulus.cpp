#include "mmw/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "mmw/format.hpp"
#include "mmw/simplex.hpp"

namespace mmw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kOracleBatch = 16;

struct Graph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::map<std::pair<int, int>, double> edge_len;

  double length(int u, int v) const {
    auto it = edge_len.find({std::min(u, v), std::max(u, v)});
    return it == edge_len.end() ? -1.0 : it->second;
  }
};

Graph build_graph(const Space& space) {
  if (!space.has_skeleton())
    throw std::invalid_argument("modulus requires a space with a skeleton");
  Graph g;
  g.n = space.size();
  g.adj.resize(g.n);
  for (const Edge& e : space.skeleton()) {
    auto key = std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
    auto it = g.edge_len.find(key);
    if (it == g.edge_len.end())
      g.edge_len[key] = e.length;
    else
      it->second = std::min(it->second, e.length);
  }
  for (const auto& [key, len] : g.edge_len) {
    g.adj[key.first].push_back({key.second, len});
    g.adj[key.second].push_back({key.first, len});
  }
  return g;
}

// Path constraint coefficients: length(rho, path) = sum_v coeff_v rho_v.
std::vector<std::pair<int, double>> path_coeffs(const Graph& g, const std::vector<int>& path) {
  std::map<int, double> acc;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    double len = g.length(path[k], path[k + 1]);
    acc[path[k]] += len / 2.0;
    acc[path[k + 1]] += len / 2.0;
  }
  return {acc.begin(), acc.end()};
}

struct OracleResult {
  double best_cost = kInf;                   // certificate: global min path cost
  std::vector<std::vector<int>> violating;   // up to kOracleBatch cheapest paths
};

// Multi-source Dijkstra under trapezoid vertex-density edge costs.
OracleResult separation_oracle(const Graph& g, const std::vector<double>& rho,
                               const std::vector<char>& in_source,
                               const std::vector<char>& in_sink, double threshold) {
  std::vector<double> dist(g.n, kInf);
  std::vector<int> parent(g.n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int v = 0; v < g.n; ++v)
    if (in_source[v]) {
      dist[v] = 0.0;
      pq.push({0.0, v});
    }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (in_sink[u]) continue;  // constraints end at the first sink vertex
    for (auto [v, len] : g.adj[u]) {
      double cand = d + (rho[u] + rho[v]) / 2.0 * len;
      if (cand < dist[v]) {
        dist[v] = cand;
        parent[v] = u;
        pq.push({cand, v});
      }
    }
  }
  OracleResult out;
  std::vector<std::pair<double, int>> sinks;
  for (int v = 0; v < g.n; ++v)
    if (in_sink[v] && dist[v] < kInf) {
      out.best_cost = std::min(out.best_cost, dist[v]);
      if (dist[v] < threshold) sinks.push_back({dist[v], v});
    }
  std::sort(sinks.begin(), sinks.end());
  std::set<std::vector<int>> seen;
  for (const auto& [cost, v] : sinks) {
    if (static_cast<int>(out.violating.size()) >= kOracleBatch) break;
    std::vector<int> path;
    for (int u = v; u >= 0; u = parent[u]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    if (seen.insert(path).second) out.violating.push_back(std::move(path));
  }
  return out;
}

struct MasterResult {
  std::vector<double> rho;
  double lower_bound = 0.0;  // valid lower bound on the restricted master
};

MasterResult solve_master_lp(const Graph& g, const Space& space,
                             const std::vector<std::vector<std::pair<int, double>>>& coeffs) {
  // Variables of the dual LP are the paths; constraints the vertices they touch.
  std::vector<int> vertices;
  for (const auto& path : coeffs)
    for (const auto& [v, w] : path) vertices.push_back(v);
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::vector<int> index(g.n, -1);
  for (std::size_t r = 0; r < vertices.size(); ++r) index[vertices[r]] = static_cast<int>(r);

  const int m = static_cast<int>(vertices.size());
  const int k = static_cast<int>(coeffs.size());
  std::vector<std::vector<double>> A(m, std::vector<double>(k, 0.0));
  std::vector<double> b(m), c(k, 1.0);
  for (int r = 0; r < m; ++r) b[r] = space.mass(vertices[r]);
  for (int j = 0; j < k; ++j)
    for (const auto& [v, w] : coeffs[j]) A[index[v]][j] = w;

  LpResult lp = simplex_max(A, b, c);
  MasterResult out;
  out.rho.assign(g.n, 0.0);
  for (int r = 0; r < m; ++r) out.rho[vertices[r]] = std::max(0.0, lp.dual[r]);
  out.lower_bound = lp.objective;
  return out;
}

MasterResult solve_master_smooth(const Graph& g, const Space& space,
                                 const std::vector<std::vector<std::pair<int, double>>>& coeffs,
                                 double p, std::vector<double>& lambda) {
  // Dual coordinate ascent on the path multipliers:
  //   rho_v = (s_v / (p mu_v))^(1/(p-1)),  s_v = sum_gamma lambda_gamma w_{gamma,v}.
  const double exponent = 1.0 / (p - 1.0);
  lambda.resize(coeffs.size(), 0.0);
  std::vector<double> s(g.n, 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (const auto& [v, w] : coeffs[j]) s[v] += lambda[j] * w;

  auto rho_of = [&](int v, double sv) {
    return std::pow(sv / (p * space.mass(v)), exponent);
  };
  auto path_len = [&](const std::vector<std::pair<int, double>>& path, double add_lambda) {
    double len = 0.0;
    for (const auto& [v, w] : path) len += w * rho_of(v, s[v] + add_lambda * w);
    return len;
  };

  const int max_sweeps = 4000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const auto& path = coeffs[j];
      // Remove this multiplier, then re-fit it so the constraint is tight
      // (or slack at lambda = 0).
      for (const auto& [v, w] : path) s[v] -= lambda[j] * w;
      double next = 0.0;
      if (path_len(path, 0.0) < 1.0) {
        double hi = std::max(lambda[j], 1e-9);
        while (path_len(path, hi) < 1.0) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
          double mid = 0.5 * (lo + hi);
          if (path_len(path, mid) < 1.0) lo = mid; else hi = mid;
          if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
        }
        next = 0.5 * (lo + hi);
      }
      worst = std::max(worst, std::abs(next - lambda[j]) / std::max(1.0, lambda[j]));
      lambda[j] = next;
      for (const auto& [v, w] : path) s[v] += lambda[j] * w;
    }
    if (worst < 1e-11) break;
  }

  MasterResult out;
  out.rho.assign(g.n, 0.0);
  double mass = 0.0;
  for (int v = 0; v < g.n; ++v)
    if (s[v] > 0.0) {
      out.rho[v] = rho_of(v, s[v]);
      mass += space.mass(v) * std::pow(out.rho[v], p);
    }
  double lam_sum = 0.0;
  for (double l : lambda) lam_sum += l;
  out.lower_bound = std::max(0.0, lam_sum - (p - 1.0) * mass);
  return out;
}

}  // namespace

double curve_length(const Space& space, const std::vector<double>& rho,
                    const std::vector<int>& path) {
  Graph g = build_graph(space);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    double len = g.length(path[k], path[k + 1]);
    if (len < 0.0)
      throw std::invalid_argument("curve_length: points " + std::to_string(path[k]) + " and " +
                                  std::to_string(path[k + 1]) + " are not skeleton-adjacent");
    total += (rho[path[k]] + rho[path[k + 1]]) / 2.0 * len;
  }
  return total;
}

ModulusResult p_modulus(const Space& space, const CurveFamily& family, double p, double tol) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_modulus requires p >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("p_modulus requires tol > 0");
  Graph g = build_graph(space);
  std::vector<char> in_source(g.n, 0), in_sink(g.n, 0);
  for (int v : family.source) {
    if (v < 0 || v >= g.n) throw std::out_of_range("p_modulus: invalid source point");
    in_source[v] = 1;
  }
  for (int v : family.sink) {
    if (v < 0 || v >= g.n) throw std::out_of_range("p_modulus: invalid sink point");
    if (in_source[v]) throw std::invalid_argument("p_modulus: source and sink must be disjoint");
    in_sink[v] = 1;
  }

  ModulusResult result;
  result.p = p;
  result.rho.assign(g.n, 0.0);

  const int cap = 10 * g.n * g.n;
  std::set<std::vector<int>> known;
  std::vector<std::vector<std::pair<int, double>>> coeffs;
  std::vector<double> lambda;  // warm start for p > 1
  MasterResult master;
  master.rho.assign(g.n, 0.0);

  while (true) {
    OracleResult oracle =
        separation_oracle(g, master.rho, in_source, in_sink, 1.0 - tol);
    result.certificate = oracle.best_cost;
    if (oracle.best_cost == kInf) {
      // Sink unreachable: empty rectifiable family, modulus 0.
      result.value = 0.0;
      result.lower_bound = result.upper_bound = 0.0;
      return result;
    }
    if (oracle.best_cost >= 1.0 - tol) break;
    bool added = false;
    for (auto& path : oracle.violating)
      if (known.insert(path).second) {
        coeffs.push_back(path_coeffs(g, path));
        result.active_paths.push_back(std::move(path));
        added = true;
      }
    if (!added)
      throw SolverStall("p_modulus: separation returned no new path at certificate " +
                            fmt_double(oracle.best_cost, 15),
                        result.lower_bound, result.upper_bound);
    master = p == 1.0 ? solve_master_lp(g, space, coeffs)
                      : solve_master_smooth(g, space, coeffs, p, lambda);
    result.iterations += 1;
    if (result.iterations > cap) {
      double mass = 0.0;
      for (int v = 0; v < g.n; ++v) mass += space.mass(v) * std::pow(master.rho[v], p);
      throw SolverStall("p_modulus: iteration cap exceeded", master.lower_bound,
                        mass / std::pow(oracle.best_cost, p));
    }
  }

  result.rho = master.rho;
  double mass = 0.0;
  for (int v = 0; v < g.n; ++v)
    if (result.rho[v] != 0.0) mass += space.mass(v) * std::pow(result.rho[v], p);
  result.value = mass;
  result.lower_bound = result.iterations == 0 ? 0.0 : master.lower_bound;
  result.upper_bound =
      result.certificate > 0.0 ? mass / std::pow(result.certificate, p) : mass;
  return result;
}

BallModulusResult ball_modulus_check(const Space& space, int x0, double r) {
  CurveFamily family;
  family.source = ball(space, x0, r).members;
  std::vector<char> in_source(space.size(), 0);
  for (int v : family.source) in_source[v] = 1;
  Ball big = ball(space, x0, 2.0 * r);
  std::vector<char> in_big(space.size(), 0);
  for (int v : big.members) in_big[v] = 1;
  for (int v = 0; v < space.size(); ++v)
    if (!in_big[v]) family.sink.push_back(v);
  if (family.sink.empty())
    throw BallTooLargeError("ball too large: B(" + std::to_string(x0) + ", " +
                            fmt_double(2.0 * r, 15) + ") covers the whole space");
  BallModulusResult out;
  out.detail = p_modulus(space, family, 1.0);
  out.modulus = out.detail.value;
  out.ball_mass = measure_of(space, nullptr, family.source);
  out.ratio = out.modulus * r / out.ball_mass;
  return out;
}

namespace {

void dfs_paths(const Graph& g, const std::vector<char>& in_source,
               const std::vector<char>& in_sink, std::vector<int>& path,
               std::vector<char>& visited, std::vector<std::vector<int>>& out,
               std::size_t max_paths) {
  int u = path.back();
  if (in_sink[u]) {
    if (out.size() >= max_paths)
      throw std::runtime_error("enumerate_simple_paths: more than " +
                               std::to_string(max_paths) + " paths");
    out.push_back(path);
    return;
  }
  for (auto [v, len] : g.adj[u]) {
    (void)len;
    if (visited[v]) continue;
    if (in_source[v]) continue;  // a later source start dominates this prefix
    visited[v] = 1;
    path.push_back(v);
    dfs_paths(g, in_source, in_sink, path, visited, out, max_paths);
    path.pop_back();
    visited[v] = 0;
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_simple_paths(const Space& space,
                                                     const CurveFamily& family,
                                                     std::size_t max_paths) {
  Graph g = build_graph(space);
  std::vector<char> in_source(g.n, 0), in_sink(g.n, 0);
  for (int v : family.source) in_source[v] = 1;
  for (int v : family.sink) in_sink[v] = 1;
  std::vector<std::vector<int>> out;
  std::vector<char> visited(g.n, 0);
  for (int s : family.source) {
    std::vector<int> path = {s};
    std::fill(visited.begin(), visited.end(), 0);
    visited[s] = 1;
    dfs_paths(g, in_source, in_sink, path, visited, out, max_paths);
  }
  return out;
}

}  // namespace mmw
