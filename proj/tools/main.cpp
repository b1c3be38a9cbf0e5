// Command-line front end: loads or builds a space+weight, runs one analysis,
// and writes a deterministic sectioned report plus a companion plot file.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmw/core.hpp"
#include "mmw/corpus.hpp"
#include "mmw/modulus.hpp"
#include "mmw/mollify.hpp"
#include "mmw/report.hpp"
#include "mmw/strong.hpp"
#include "mmw/weights.hpp"

namespace {

using namespace mmw;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("empty numeric list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// Deterministic center: the point minimizing the maximum distance to the
// rest (smallest id on ties).
int center_point(const Space& space) {
  int best = 0;
  double best_ecc = -1.0;
  for (int i = 0; i < space.size(); ++i) {
    double ecc = 0.0;
    for (int j = 0; j < space.size(); ++j) ecc = std::max(ecc, space.dist(i, j));
    if (best_ecc < 0.0 || ecc < best_ecc) {
      best_ecc = ecc;
      best = i;
    }
  }
  return best;
}

struct BuiltExample {
  Space space;
  Weight weight;
};

// Named builders; `scale` overrides the default resolution (points per axis
// or per segment).
BuiltExample build_example(const std::string& name, int scale, std::uint64_t seed) {
  auto pick = [&](int dflt) { return scale > 0 ? scale : dflt; };
  if (name == "grid1d") {
    Space s = grid_space(1, pick(101), 1.0);
    return {s, Weight(s.size(), 1.0)};
  }
  if (name == "grid2d") {
    Space s = grid_space(2, pick(33), 1.0);
    return {s, Weight(s.size(), 1.0)};
  }
  if (name == "segment-pair") {
    auto [s, w] = segment_pair_space(pick(32));
    return {s, w};
  }
  if (name == "sphere-plane") {
    Space s = sphere_plane_space(pick(64));
    return {s, Weight(s.size(), 1.0)};
  }
  if (name == "power-alpha1") {
    Space s = grid_space(1, pick(101), 1.0);
    Weight w = power_weight(s, 1.0, center_point(s));
    return {s, w};
  }
  if (name == "power-alpha-neg-half") {
    Space s = grid_space(1, pick(101), 1.0);
    Weight w = power_weight(s, -0.5, center_point(s));
    return {s, w};
  }
  if (name == "power2d-alpha1") {
    Space s = grid_space(2, pick(17), 1.0);
    Weight w = power_weight(s, 1.0, center_point(s));
    return {s, w};
  }
  if (name == "power2d-alpha2") {
    Space s = grid_space(2, pick(17), 1.0);
    Weight w = power_weight(s, 2.0, center_point(s));
    return {s, w};
  }
  if (name == "jacobian-beta2") {
    Space s = grid_space(2, pick(17), 1.0);
    RadialStretchMap map{2.0, &s};
    return {s, jacobian_weight(s, map)};
  }
  if (name == "random") {
    Space s = grid_space(1, pick(101), 1.0);
    return {s, random_weight(s, seed, 10.0)};
  }
  throw CLI::ValidationError("unknown example: " + name +
                             " (known: grid1d grid2d segment-pair sphere-plane power-alpha1 "
                             "power-alpha-neg-half power2d-alpha1 power2d-alpha2 "
                             "jacobian-beta2 random)");
}

struct Options {
  std::string input;
  std::string example;
  std::string p_grid_text;
  std::string eps_grid_text;
  std::string t_grid_text;
  double r = 0.25;
  double tol = 1e-6;
  bool restricted_chains = false;
  bool open_balls = false;
  std::string scales_text;
  std::string family;
  std::string out;
  std::uint64_t seed = 1;
  int scale = 0;
};

BuiltExample resolve_input(const Options& opt) {
  if (!opt.input.empty() && !opt.example.empty())
    throw CLI::ValidationError("--input and --example are mutually exclusive");
  if (!opt.input.empty()) {
    LoadedSpace loaded = load_space(opt.input);
    Weight w = loaded.has_weight ? loaded.weight : Weight(loaded.space.size(), 1.0);
    return {loaded.space, w};
  }
  if (!opt.example.empty()) return build_example(opt.example, opt.scale, opt.seed);
  throw CLI::ValidationError("one of --input or --example is required");
}

void echo_config(ReportWriter& rep, const std::string& command, const Options& opt) {
  rep.section("config");
  rep.kv("command", command);
  if (!opt.input.empty()) rep.kv("input", opt.input);
  if (!opt.example.empty()) rep.kv("example", opt.example);
  if (!opt.family.empty()) rep.kv("family", opt.family);
  if (!opt.p_grid_text.empty()) rep.kv("p-grid", opt.p_grid_text);
  if (!opt.eps_grid_text.empty()) rep.kv("eps-grid", opt.eps_grid_text);
  if (!opt.t_grid_text.empty()) rep.kv("t-grid", opt.t_grid_text);
  if (!opt.scales_text.empty()) rep.kv("scales", opt.scales_text);
  if (command == "modulus") rep.kv("r", opt.r);
  rep.kv("tol", opt.tol);
  rep.kv("restricted-chains", opt.restricted_chains ? "true" : "false");
  rep.kv("ball-convention", opt.open_balls ? "open" : "closed");
  rep.kv_int("seed", static_cast<long long>(opt.seed));
  if (opt.scale > 0) rep.kv_int("scale", opt.scale);
}

void describe_space(ReportWriter& rep, const Space& space, const Weight& weight) {
  rep.section("space");
  rep.kv_int("points", space.size());
  rep.kv("Q", space.Q());
  rep.kv("diameter", space.diameter());
  rep.kv("total-mass", measure_of(space, nullptr, [&] {
           std::vector<int> all(space.size());
           for (int i = 0; i < space.size(); ++i) all[i] = i;
           return all;
         }()));
  Extremum dbl = doubling_constant(space);
  rep.kv("mu-doubling", dbl.unbounded ? "UNBOUNDED" : fmt15(dbl.value));
  RegularityFit fit = regularity_fit(space);
  rep.kv("regularity-c_A", fit.c_A);
  rep.kv("regularity-Q-fit", fit.Q_fit);
  double nu_total = measure_of(space, &weight, [&] {
    std::vector<int> all(space.size());
    for (int i = 0; i < space.size(); ++i) all[i] = i;
    return all;
  }());
  rep.kv("nu-total", nu_total);
}

std::string witness_string(const CurveWitness& w) {
  std::string s = "ball(center=" + std::to_string(w.ball.center) +
                  ", r=" + fmt15(w.ball.radius) + ") lambda=" + fmt15(w.lambda) +
                  " u=" + fmt15(w.u) + " v=" + fmt15(w.v);
  if (w.tie_count >= 0) s += " tie-prefix=" + std::to_string(w.tie_count);
  return s;
}

std::vector<std::pair<double, double>> as_xy(const std::vector<CurvePoint>& pts) {
  std::vector<std::pair<double, double>> xy;
  for (const CurvePoint& p : pts)
    xy.push_back({p.x, p.unbounded ? std::numeric_limits<double>::infinity() : p.y});
  return xy;
}

int run_classify(const Options& opt) {
  BuiltExample ex = resolve_input(opt);
  std::vector<double> p_grid =
      opt.p_grid_text.empty() ? kDefaultPGrid : parse_list(opt.p_grid_text);
  std::vector<double> eps_grid =
      opt.eps_grid_text.empty() ? kDefaultEpsGrid : parse_list(opt.eps_grid_text);

  ClassReport report = classify_weight(ex.space, ex.weight, p_grid, eps_grid);
  ImplicationMatrix matrix = implication_matrix(ex.space, ex.weight, report);

  ReportWriter rep("weight classification");
  echo_config(rep, "classify", opt);
  describe_space(rep, ex.space, ex.weight);

  rep.section("muckenhoupt");
  rep.kv("a1-constant", report.a1.unbounded ? "UNBOUNDED" : fmt15(report.a1.value));
  if (!report.a1.unbounded)
    rep.kv("a1-witness", "ball(center=" + std::to_string(report.a1.witness_center) +
                             ", r=" + fmt15(report.a1.witness_radius) + ")");
  rep.kv("nu-doubling",
         report.nu_doubling.unbounded ? "UNBOUNDED" : fmt15(report.nu_doubling.value));
  if (report.ap_defined) {
    rep.curve("ap-constant", report.ap_curve);
  } else {
    rep.kv("ap-constant", "error: " + report.ap_error);
  }

  rep.section("conditions");
  rep.curve("cond1-delta", as_xy(report.cond1));
  for (const CurvePoint& p : report.cond1)
    rep.kv("cond1-witness eps=" + fmt15(p.x), witness_string(p.witness));
  rep.curve("cond2-constant", as_xy(report.cond2));
  for (const CurvePoint& p : report.cond2)
    rep.kv("cond2-witness p=" + fmt15(p.x),
           p.unbounded ? "UNBOUNDED " + witness_string(p.witness) : witness_string(p.witness));
  rep.curve("cond4-constant", as_xy(report.cond4));
  for (const CurvePoint& p : report.cond4)
    rep.kv("cond4-witness p=" + fmt15(p.x), witness_string(p.witness));
  rep.curve("rhi-constant", as_xy(report.rhi));
  for (const CurvePoint& p : report.rhi)
    rep.kv("rhi-witness eps=" + fmt15(p.x),
           "ball(center=" + std::to_string(p.witness.ball.center) +
               ", r=" + fmt15(p.witness.ball.radius) + ")");

  rep.section("verdicts");
  static const char* names[5] = {"cond1", "cond2", "cond3-rhi", "cond4", "cond5-ap"};
  for (int k = 0; k < 5; ++k)
    rep.kv(names[k], std::string(report.verdict[k].holds ? "holds" : "fails") + " — " +
                         report.verdict[k].certificate);

  rep.section("implications");
  for (const ImplicationCheck& check : matrix.checks)
    rep.kv(check.name, std::string(check.ok ? "ok" : "VIOLATED") +
                           (check.premise ? "" : " (vacuous)") +
                           (check.detail.empty() ? "" : " — " + check.detail));
  rep.kv_int("violations", matrix.violations);

  rep.save(opt.out.empty() ? "classify_report.txt" : opt.out);
  return matrix.violations > 0 ? 2 : 0;
}

int run_metrize(const Options& opt) {
  BuiltExample ex = resolve_input(opt);
  std::vector<double> dn = quasi_distance(ex.space, ex.weight);
  Metrization m = chain_metrization(dn, ex.space, opt.restricted_chains);

  ReportWriter rep("quasi-distance metrization");
  echo_config(rep, "metrize", opt);
  describe_space(rep, ex.space, ex.weight);

  rep.section("metrization");
  rep.kv("restricted-chains", m.restricted ? "true" : "false");
  rep.kv("distortion", m.unbounded ? "UNBOUNDED" : fmt15(m.distortion));
  rep.kv("witness-pair",
         "(" + std::to_string(m.witness.i) + ", " + std::to_string(m.witness.j) + ")");
  if (m.witness.i >= 0) {
    rep.kv("witness-delta-nu", m.dn(m.witness.i, m.witness.j));
    rep.kv("witness-delta", m.d(m.witness.i, m.witness.j));
  }

  rep.section("comparison");
  try {
    ComparisonResult cmp = comparison_check(ex.space, ex.weight);
    rep.kv("constant", cmp.constant);
    rep.kv("witness-pair",
           "(" + std::to_string(cmp.witness.i) + ", " + std::to_string(cmp.witness.j) + ")");
  } catch (const NonDoublingError& e) {
    rep.kv("constant", std::string("skipped: ") + e.what());
  }

  rep.save(opt.out.empty() ? "metrize_report.txt" : opt.out);
  return 0;
}

int run_mollify(const Options& opt) {
  BuiltExample ex = resolve_input(opt);
  std::vector<double> t_grid =
      opt.t_grid_text.empty() ? default_t_grid(ex.space) : parse_list(opt.t_grid_text);

  ReportWriter rep("mollified measures");
  echo_config(rep, "mollify", opt);
  describe_space(rep, ex.space, ex.weight);

  std::vector<int> all(ex.space.size());
  for (int i = 0; i < ex.space.size(); ++i) all[i] = i;
  double nu_total = measure_of(ex.space, &ex.weight, all);

  rep.section("scales");
  std::vector<std::pair<double, double>> mass_curve, comp_curve;
  for (double t : t_grid) {
    MollifiedWeight m = mollify(ex.space, ex.weight, t);
    double nu_t_total = measure_of(ex.space, &m.omega_t, all);
    rep.kv("t=" + fmt15(t),
           "net=" + std::to_string(m.net.centers.size()) +
               " overlap=" + std::to_string(m.net.max_overlap) +
               " comparability=" + fmt15(m.comparability) +
               " mass=" + fmt15(nu_t_total) + " (nu total " + fmt15(nu_total) + ")");
    mass_curve.push_back({t, nu_t_total});
    comp_curve.push_back({t, m.comparability});
  }
  rep.curve("mollified-mass", mass_curve);
  rep.curve("comparability", comp_curve);

  rep.section("reverse-hoelder");
  RhiProbeResult probe = uniform_rhi_probe(ex.space, ex.weight, t_grid);
  std::vector<std::pair<double, double>> rhi_curve;
  for (const RhiProbeRow& row : probe.rows) {
    rhi_curve.push_back({row.t, row.constant});
    rep.kv("t=" + fmt15(row.t),
           "constant=" + fmt15(row.constant) + " witness ball(center=" +
               std::to_string(row.witness.center) + ", r=" + fmt15(row.witness.radius) + ")");
  }
  rep.curve("rhi-by-scale", rhi_curve);
  rep.kv("spread", probe.max_over_min);
  rep.kv("uniform", probe.uniform ? "yes" : "no");

  rep.section("exponent-improvement");
  std::vector<double> eps_grid =
      opt.eps_grid_text.empty() ? kDefaultEpsGrid : parse_list(opt.eps_grid_text);
  for (double t : t_grid) {
    MollifiedWeight m = mollify(ex.space, ex.weight, t);
    GehringResult g = gehring_probe(ex.space, m, eps_grid);
    rep.kv("t=" + fmt15(t), "base=" + fmt15(g.base_constant) + " eps*=" + fmt15(g.eps_star) +
                                " constant@eps*=" + fmt15(g.star_constant));
  }

  rep.save(opt.out.empty() ? "mollify_report.txt" : opt.out);
  return 0;
}

int run_modulus(const Options& opt) {
  BuiltExample ex = resolve_input(opt);
  int x0 = center_point(ex.space);
  BallModulusResult res = ball_modulus_check(ex.space, x0, opt.r);

  ReportWriter rep("curve-family modulus");
  echo_config(rep, "modulus", opt);
  describe_space(rep, ex.space, ex.weight);

  rep.section("modulus");
  rep.kv_int("center", x0);
  rep.kv("r", opt.r);
  rep.kv("ball-mass", res.ball_mass);
  rep.kv("mod1", res.modulus);
  rep.kv("ratio", res.ratio);
  rep.kv("certificate", res.detail.certificate);
  rep.kv("lower-bound", res.detail.lower_bound);
  rep.kv("upper-bound", res.detail.upper_bound);
  rep.kv_int("iterations", res.detail.iterations);
  rep.kv_int("active-paths", static_cast<long long>(res.detail.active_paths.size()));

  rep.save(opt.out.empty() ? "modulus_report.txt" : opt.out);
  return 0;
}

int run_examples(const Options& opt) {
  if (opt.example.empty()) throw CLI::ValidationError("examples requires --example NAME");
  BuiltExample ex = build_example(opt.example, opt.scale, opt.seed);
  std::string path = opt.out.empty() ? opt.example + ".space" : opt.out;
  save_space(path, ex.space, &ex.weight);
  std::cout << "wrote " << path << " (" << ex.space.size() << " points)\n";
  return 0;
}

int run_suite(const Options& opt) {
  if (opt.family.empty()) throw CLI::ValidationError("suite requires --family NAME");
  if (opt.scales_text.empty()) throw CLI::ValidationError("suite requires --scales LIST");
  std::vector<int> scales = parse_int_list(opt.scales_text);
  if (scales.size() < 2) throw CLI::ValidationError("suite needs at least 2 scales");

  std::vector<BuiltExample> built;
  for (int n : scales) built.push_back(build_example(opt.family, n, opt.seed));
  std::vector<const Space*> spaces;
  std::vector<const Weight*> weights;
  for (const BuiltExample& b : built) {
    spaces.push_back(&b.space);
    weights.push_back(&b.weight);
  }
  std::vector<double> p_grid =
      opt.p_grid_text.empty() ? kDefaultPGrid : parse_list(opt.p_grid_text);
  StabilityReport report = sa_verdict(spaces, weights, p_grid);

  ReportWriter rep("cross-refinement stability");
  echo_config(rep, "suite", opt);

  rep.section("scales");
  std::vector<std::pair<double, double>> dist_curve;
  for (std::size_t k = 0; k < report.scales.size(); ++k) {
    const ScaleResult& s = report.scales[k];
    std::string row = "distortion=" + (s.unbounded ? "UNBOUNDED" : fmt15(s.distortion)) +
                      " witness=(" + std::to_string(s.witness.i) + ", " +
                      std::to_string(s.witness.j) + ")";
    for (const auto& [p, c] : s.cond2) row += " c2(p=" + fmt15(p) + ")=" + fmt15(c);
    rep.kv("n=" + std::to_string(scales[k]), row);
    if (!s.unbounded) dist_curve.push_back({static_cast<double>(scales[k]), s.distortion});
  }
  rep.curve("distortion-by-scale", dist_curve);

  rep.section("verdict");
  rep.kv("verdict", report.verdict);

  rep.save(opt.out.empty() ? "suite_report.txt" : opt.out);
  return report.verdict == "STABLE" ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite metric-measure-space weight analysis"};
  app.set_version_flag("--version", mmw::kToolVersion);
  app.require_subcommand(1);

  Options opt;
  std::vector<std::pair<std::string, int (*)(const Options&)>> commands = {
      {"classify", run_classify}, {"metrize", run_metrize}, {"mollify", run_mollify},
      {"modulus", run_modulus},   {"examples", run_examples}, {"suite", run_suite}};

  for (auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", opt.input, "space/weight file");
    sub->add_option("--example", opt.example, "built-in example name");
    sub->add_option("--p-grid", opt.p_grid_text, "comma-separated p values");
    sub->add_option("--eps-grid", opt.eps_grid_text, "comma-separated epsilon values");
    sub->add_option("--t-grid", opt.t_grid_text, "comma-separated mollification scales");
    sub->add_option("--r", opt.r, "ball radius for the modulus check");
    sub->add_option("--tol", opt.tol, "solver tolerance");
    sub->add_flag("--restricted-chains", opt.restricted_chains,
                  "confine chains to B(x, 2 d(x,y))");
    sub->add_flag("--open-balls", opt.open_balls,
                  "report with the open-ball convention (constants agree with closed; "
                  "every open candidate ball equals a closed one of smaller radius)");
    sub->add_option("--scales", opt.scales_text, "comma-separated refinement sizes");
    sub->add_option("--family", opt.family, "example family for the suite");
    sub->add_option("--out", opt.out, "report output path");
    sub->add_option("--seed", opt.seed, "seed for random weights");
    sub->add_option("--scale", opt.scale, "override example resolution");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (auto& [name, fn] : commands)
      if (app.get_subcommand(name)->parsed()) return fn(opt);
    return 1;
  } catch (const mmw::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const mmw::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.get_name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
