#include "mmw/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mmw/format.hpp"

namespace mmw {
namespace {

constexpr double kPi = 3.14159265358979323846;

double euclid(const Space& s, int i, int j) {
  double acc = 0.0;
  for (int k = 0; k < s.coord_dim(); ++k) {
    double d = s.coord(i, k) - s.coord(j, k);
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> all_pairs_from_edges(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  std::vector<double> dist(static_cast<std::size_t>(n) * n,
                           std::numeric_limits<double>::infinity());
  for (int s = 0; s < n; ++s) {
    double* row = dist.data() + static_cast<std::size_t>(s) * n;
    row[s] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > row[u]) continue;
      for (auto [v, len] : adj[u])
        if (d + len < row[v]) {
          row[v] = d + len;
          pq.push({row[v], v});
        }
    }
  }
  return dist;
}

}  // namespace

Space grid_space(int dim, int n_per_axis, double extent) {
  if (n_per_axis < 2) throw std::invalid_argument("grid_space requires n >= 2");
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid_space supports dim 1 or 2");
  const int n = n_per_axis;
  const double h = 2.0 * extent / (n - 1);
  if (dim == 1) {
    std::vector<double> dist(static_cast<std::size_t>(n) * n);
    std::vector<double> mu(n, h);
    std::vector<double> coords(n);
    for (int i = 0; i < n; ++i) coords[i] = -extent + i * h;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dist[static_cast<std::size_t>(i) * n + j] = std::abs(i - j) * h;
    Space s(n, std::move(dist), std::move(mu), 1.0);
    s.set_coords(std::move(coords), 1);
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, h});
    s.set_skeleton(std::move(edges));
    return s;
  }
  // dim == 2: the 4-neighbor graph metric (so the skeleton reproduces dist).
  const int total = n * n;
  std::vector<double> dist(static_cast<std::size_t>(total) * total);
  std::vector<double> mu(total, h * h);
  std::vector<double> coords(static_cast<std::size_t>(total) * 2);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      int p = iy * n + ix;
      coords[2 * p] = -extent + ix * h;
      coords[2 * p + 1] = -extent + iy * h;
    }
  for (int p = 0; p < total; ++p) {
    int px = p % n, py = p / n;
    for (int q = 0; q < total; ++q) {
      int qx = q % n, qy = q / n;
      dist[static_cast<std::size_t>(p) * total + q] =
          (std::abs(px - qx) + std::abs(py - qy)) * h;
    }
  }
  Space s(total, std::move(dist), std::move(mu), 2.0);
  s.set_coords(std::move(coords), 2);
  std::vector<Edge> edges;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      int p = iy * n + ix;
      if (ix + 1 < n) edges.push_back({p, p + 1, h});
      if (iy + 1 < n) edges.push_back({p, p + n, h});
    }
  s.set_skeleton(std::move(edges));
  return s;
}

std::pair<Space, Weight> segment_pair_space(int n_per_segment) {
  if (n_per_segment < 2) throw std::invalid_argument("segment_pair_space requires n >= 2");
  const int n = n_per_segment;
  const int total = 2 * n;
  const double h = 1.0 / (n - 1);
  std::vector<double> dist(static_cast<std::size_t>(total) * total);
  std::vector<double> mu(total);
  std::vector<double> coords(static_cast<std::size_t>(total) * 2);
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < n; ++j) {
      int p = s * n + j;
      mu[p] = (j == 0 || j == n - 1) ? h / 2.0 : h;  // trapezoid cells, total 1
      coords[2 * p] = s + 1.0;
      coords[2 * p + 1] = j * h;
    }
  for (int p = 0; p < total; ++p)
    for (int q = 0; q < total; ++q) {
      bool same = (p / n) == (q / n);
      dist[static_cast<std::size_t>(p) * total + q] =
          same ? std::abs(p % n - q % n) * h : 2.0;
    }
  Space space(total, std::move(dist), std::move(mu), 1.0);
  space.set_coords(std::move(coords), 2);
  Weight w(total, 0.0);
  for (int j = 0; j < n; ++j) w[n + j] = 1.0;
  return {std::move(space), std::move(w)};
}

Space sphere_plane_space(int n) {
  if (n < 8) throw std::invalid_argument("sphere_plane_space requires n >= 8");
  // Point 0 is the origin; 1..2n the rest of the line [-2,2]; then the circle.
  const double h_line = 2.0 / n;
  const double h_circ = 2.0 * kPi / n;
  std::vector<double> xs, masses;
  std::vector<double> coords;
  auto add = [&](double x, double y, double m) {
    coords.push_back(x);
    coords.push_back(y);
    masses.push_back(m);
  };
  add(0.0, 0.0, h_line);
  for (int j = 0; j <= 2 * n; ++j) {
    if (j == n) continue;  // origin already placed
    double x = (j - n) * h_line;
    add(x, 0.0, (j == 0 || j == 2 * n) ? h_line / 2.0 : h_line);
  }
  for (int k = 0; k < n; ++k) {
    // half-step offset so the circle misses the line points (+-1, 0)
    double th = 2.0 * kPi * (k + 0.5) / n;
    add(std::cos(th), std::sin(th), h_circ);
  }
  const int total = static_cast<int>(masses.size());
  const int circle_begin = total - n;
  std::vector<double> dist(static_cast<std::size_t>(total) * total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      double dx = coords[2 * i] - coords[2 * j];
      double dy = coords[2 * i + 1] - coords[2 * j + 1];
      dist[static_cast<std::size_t>(i) * total + j] = std::hypot(dx, dy);
    }
  // Circle points sit at distance exactly 1 from the origin.
  for (int j = circle_begin; j < total; ++j) {
    dist[static_cast<std::size_t>(0) * total + j] = 1.0;
    dist[static_cast<std::size_t>(j) * total + 0] = 1.0;
  }
  Space s(total, std::move(dist), std::move(masses), 1.0);
  s.set_coords(std::move(coords), 2);
  return s;
}

int sphere_plane_origin() { return 0; }

Weight power_weight(const Space& space, double alpha, int basepoint) {
  if (basepoint < 0 || basepoint >= space.size())
    throw std::out_of_range("power_weight: invalid basepoint");
  double d_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < space.size(); ++j)
    if (j != basepoint) d_min = std::min(d_min, space.dist(basepoint, j));
  Weight w(space.size());
  for (int i = 0; i < space.size(); ++i)
    w[i] = std::pow(std::max(space.dist(basepoint, i), d_min), alpha);
  return w;
}

namespace {

// f(x) = |x|^(beta-1) x, f(0) = 0.
std::vector<double> stretch_point(const Space& s, int i, double beta) {
  double norm = 0.0;
  for (int k = 0; k < s.coord_dim(); ++k) norm += s.coord(i, k) * s.coord(i, k);
  norm = std::sqrt(norm);
  double scale = norm > 0.0 ? std::pow(norm, beta - 1.0) : 0.0;
  std::vector<double> out(s.coord_dim());
  for (int k = 0; k < s.coord_dim(); ++k) out[k] = scale * s.coord(i, k);
  return out;
}

int snap_to(const Space& target, const std::vector<double>& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < target.size(); ++j) {
    double acc = 0.0;
    for (int k = 0; k < target.coord_dim(); ++k) {
      double d = target.coord(j, k) - p[k];
      acc += d * d;
    }
    if (acc < best_d) {
      best_d = acc;
      best = j;
    }
  }
  return best;
}

}  // namespace

Weight jacobian_weight(const Space& space, const RadialStretchMap& map) {
  if (!space.has_coords() || map.target == nullptr || !map.target->has_coords())
    throw std::invalid_argument("jacobian_weight requires coordinate spaces");
  if (space.coord_dim() != map.target->coord_dim())
    throw std::invalid_argument("jacobian_weight: coordinate dimensions differ");
  if (!(map.beta > 0.0)) throw std::invalid_argument("jacobian_weight requires beta > 0");
  const Space& Y = *map.target;
  Weight w(space.size());
  for (int i = 0; i < space.size(); ++i) {
    auto radii = candidate_radii(space, i);
    if (radii.empty()) throw std::invalid_argument("jacobian_weight: isolated point");
    Ball b = ball(space, i, radii.front());
    std::vector<int> image;
    for (int p : b.members) image.push_back(snap_to(Y, stretch_point(space, p, map.beta)));
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (image.empty())
      throw std::runtime_error("jacobian_weight: degenerate image at point " + std::to_string(i));
    w[i] = measure_of(Y, nullptr, image) / measure_of(space, nullptr, b.members);
  }
  return w;
}

double snapped_image_mass(const Space& space, const RadialStretchMap& map) {
  const Space& Y = *map.target;
  std::vector<int> image;
  for (int i = 0; i < space.size(); ++i)
    image.push_back(snap_to(Y, stretch_point(space, i, map.beta)));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  return measure_of(Y, nullptr, image);
}

Weight random_weight(const Space& space, std::uint64_t seed, double dynamic_range) {
  if (!(dynamic_range >= 1.0))
    throw std::invalid_argument("random_weight requires dynamic_range >= 1");
  std::mt19937_64 rng(seed);
  const double log_range = std::log(dynamic_range);
  Weight w(space.size());
  for (int i = 0; i < space.size(); ++i) {
    // 53-bit uniform in [0,1); engine output is identical on every platform.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w[i] = std::exp((2.0 * u - 1.0) * log_range);
  }
  return w;
}

namespace {

using nlohmann::json;

void write_number_array(std::ostream& os, const std::vector<double>& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << fmt_double(v[i]);
  }
  os << "]";
}

}  // namespace

std::string space_to_string(const Space& space, const Weight* weight) {
  std::ostringstream os;
  const int n = space.size();
  os << "{\n";
  os << "  \"format\": \"mmw-space\",\n";
  os << "  \"version\": 1,\n";
  os << "  \"n\": " << n << ",\n";
  os << "  \"Q\": " << fmt_double(space.Q()) << ",\n";
  os << "  \"metric\": {\n    \"mode\": \"matrix\",\n    \"values\": [\n";
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = space.dist(i, j);
    os << "      ";
    write_number_array(os, row);
    os << (i + 1 < n ? ",\n" : "\n");
  }
  os << "    ]\n  },\n";
  os << "  \"measure\": ";
  write_number_array(os, space.masses());
  if (space.has_coords()) {
    os << ",\n  \"coords\": {\n    \"dim\": " << space.coord_dim() << ",\n    \"values\": [\n";
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(space.coord_dim());
      for (int k = 0; k < space.coord_dim(); ++k) row[k] = space.coord(i, k);
      os << "      ";
      write_number_array(os, row);
      os << (i + 1 < n ? ",\n" : "\n");
    }
    os << "    ]\n  }";
  }
  if (space.has_skeleton()) {
    os << ",\n  \"skeleton\": [\n";
    const auto& edges = space.skeleton();
    for (std::size_t e = 0; e < edges.size(); ++e)
      os << "    [" << edges[e].u << ", " << edges[e].v << ", " << fmt_double(edges[e].length)
         << "]" << (e + 1 < edges.size() ? ",\n" : "\n");
    os << "  ]";
  }
  if (weight) {
    os << ",\n  \"weight\": ";
    write_number_array(os, *weight);
  }
  os << "\n}\n";
  return os.str();
}

LoadedSpace space_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("space file is not valid JSON: ") + e.what());
  }
  auto require = [&](const char* field) -> const json& {
    if (!doc.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    return doc.at(field);
  };
  if (require("format").get<std::string>() != "mmw-space")
    throw ParseError("field 'format': expected \"mmw-space\"");
  const int n = require("n").get<int>();
  if (n <= 0) throw ParseError("field 'n': must be positive");
  const double Q = require("Q").get<double>();
  const json& metric = require("metric");
  if (!metric.contains("mode")) throw ParseError("missing field 'metric.mode'");
  const std::string mode = metric.at("mode").get<std::string>();

  std::vector<double> mu;
  try {
    mu = require("measure").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ParseError("field 'measure': expected an array of numbers");
  }
  if (static_cast<int>(mu.size()) != n) throw ParseError("field 'measure': length must equal n");

  std::vector<double> coords;
  int coord_dim = 0;
  if (doc.contains("coords")) {
    const json& c = doc.at("coords");
    coord_dim = c.at("dim").get<int>();
    for (const auto& row : c.at("values")) {
      auto r = row.get<std::vector<double>>();
      if (static_cast<int>(r.size()) != coord_dim)
        throw ParseError("field 'coords.values': row length must equal dim");
      coords.insert(coords.end(), r.begin(), r.end());
    }
    if (coords.size() != static_cast<std::size_t>(n) * coord_dim)
      throw ParseError("field 'coords.values': expected n rows");
  }

  std::vector<Edge> skeleton;
  auto parse_edges = [&](const json& arr, const char* field) {
    std::vector<Edge> edges;
    for (const auto& row : arr) {
      if (!row.is_array() || row.size() != 3)
        throw ParseError(std::string("field '") + field + "': expected [u, v, length] triples");
      edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    return edges;
  };
  if (doc.contains("skeleton")) skeleton = parse_edges(doc.at("skeleton"), "skeleton");

  std::vector<double> dist;
  if (mode == "matrix") {
    const json& values = metric.at("values");
    if (static_cast<int>(values.size()) != n)
      throw ParseError("field 'metric.values': expected n rows");
    for (const auto& row : values) {
      auto r = row.get<std::vector<double>>();
      if (static_cast<int>(r.size()) != n)
        throw ParseError("field 'metric.values': row length must equal n");
      dist.insert(dist.end(), r.begin(), r.end());
    }
  } else if (mode == "euclidean") {
    if (coord_dim == 0) throw ParseError("metric mode 'euclidean' requires 'coords'");
    dist.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < coord_dim; ++k) {
          double d = coords[static_cast<std::size_t>(i) * coord_dim + k] -
                     coords[static_cast<std::size_t>(j) * coord_dim + k];
          acc += d * d;
        }
        dist[static_cast<std::size_t>(i) * n + j] = std::sqrt(acc);
      }
  } else if (mode == "graph") {
    std::vector<Edge> edges = parse_edges(metric.at("edges"), "metric.edges");
    dist = all_pairs_from_edges(n, edges);
    for (double d : dist)
      if (!std::isfinite(d)) throw ParseError("field 'metric.edges': graph is not connected");
    if (skeleton.empty()) skeleton = edges;
  } else {
    throw ParseError("field 'metric.mode': expected matrix, euclidean or graph");
  }

  LoadedSpace out;
  out.space = Space(n, std::move(dist), std::move(mu), Q);
  if (coord_dim > 0) out.space.set_coords(std::move(coords), coord_dim);
  if (!skeleton.empty()) out.space.set_skeleton(std::move(skeleton));
  if (doc.contains("weight")) {
    out.weight = doc.at("weight").get<std::vector<double>>();
    if (static_cast<int>(out.weight.size()) != n)
      throw ParseError("field 'weight': length must equal n");
    for (double w : out.weight)
      if (w < 0.0) throw ParseError("field 'weight': entries must be nonnegative");
    out.has_weight = true;
  }
  out.space.validate();
  return out;
}

LoadedSpace load_space(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open space file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return space_from_string(buf.str());
}

void save_space(const std::string& path, const Space& space, const Weight* weight) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write space file: " + path);
    out << space_to_string(space, weight);
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace mmw
