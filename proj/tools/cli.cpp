// Copyright 2026 The robust_ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "robust_ot/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "robust_ot/analysis.hpp"
#include "robust_ot/datagen.hpp"
#include "robust_ot/entropic_ot.hpp"
#include "robust_ot/exact_ot.hpp"
#include "robust_ot/io.hpp"
#include "robust_ot/robust.hpp"
#include "robust_ot/unbalanced.hpp"
#include "svg.hpp"

namespace robust_ot::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kCouplingThreshold = 1e-12;

struct Output {
  std::string out;
  std::string csv;
  bool normalize = false;
};

void add_output_options(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.out, "Write the JSON document here instead of stdout");
  sub->add_option("--csv", o.csv, "Also write flat CSV tables as PREFIX_<name>.csv");
  sub->add_flag("--normalize", o.normalize, "Divide a mass column by its sum");
}

Metric parse_metric(const std::string& s) {
  if (s == "euclidean") return Metric::kEuclidean;
  if (s == "sqeuclidean") return Metric::kSquaredEuclidean;
  throw Error(ErrorKind::kParseError, "unknown metric '" + s + "'");
}

UpdateRule parse_rule(const std::string& s) {
  if (s == "averaged") return UpdateRule::kAveraged;
  if (s == "direct") return UpdateRule::kDirect;
  if (s == "subgradient") return UpdateRule::kSubgradient;
  throw Error(ErrorKind::kParseError, "unknown update rule '" + s + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3 && parts.size() != 4) {
    throw Error(ErrorKind::kParseError, "rho grid must be start:stop:count[:log]");
  }
  bool log_spaced = false;
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "lin") {
      throw Error(ErrorKind::kParseError, "rho grid spacing must be log or lin");
    }
    log_spaced = parts[3] == "log";
  }
  try {
    std::size_t used = 0;
    const double start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    const double stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    const int count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
    return make_rho_grid(start, stop, count, log_spaced);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kParseError, "bad rho grid '" + spec + "'");
  }
}

json coupling_json(const std::vector<CouplingEntry>& pi) {
  json arr = json::array();
  for (const auto& e : pi) {
    if (e.mass > kCouplingThreshold) arr.push_back(json::array({e.i, e.j, e.mass}));
  }
  return arr;
}

json coupling_json(const std::vector<double>& dense, std::size_t cols) {
  json arr = json::array();
  for (std::size_t e = 0; e < dense.size(); ++e) {
    if (dense[e] > kCouplingThreshold) arr.push_back(json::array({e / cols, e % cols, dense[e]}));
  }
  return arr;
}

json base_document(const std::string& command, json params) {
  json doc;
  doc["command"] = command;
  doc["params"] = std::move(params);
  doc["value"] = nullptr;
  doc["convention"] = "scaled";
  doc["weights_x"] = nullptr;
  doc["weights_y"] = nullptr;
  doc["coupling"] = json::array();
  doc["trace"] = json::array();
  doc["converged"] = true;
  doc["seed"] = nullptr;
  return doc;
}

std::string csv_column(const std::string& header, const json& values) {
  std::ostringstream out;
  out.precision(17);
  out << "index," << header << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) out << k << ',' << values[k].get<double>() << '\n';
  return out.str();
}

// Every array field of the document becomes PREFIX_<field>.csv.
void write_csv_tables(const std::string& prefix, const json& doc) {
  std::ostringstream out;
  out.precision(17);
  for (const char* key : {"weights_x", "weights_y"}) {
    if (doc[key].is_array()) io::write_file(prefix + "_" + key + ".csv", csv_column("weight", doc[key]));
  }
  if (!doc["coupling"].empty()) {
    out << "i,j,mass\n";
    for (const auto& e : doc["coupling"]) {
      out << e[0].get<std::size_t>() << ',' << e[1].get<std::size_t>() << ',' << e[2].get<double>()
          << '\n';
    }
    io::write_file(prefix + "_coupling.csv", out.str());
  }
  if (!doc["trace"].empty()) io::write_file(prefix + "_trace.csv", csv_column("value", doc["trace"]));
  if (doc.contains("rho_grid")) {
    std::ostringstream curve;
    curve.precision(17);
    curve << "rho,value\n";
    for (std::size_t k = 0; k < doc["rho_grid"].size(); ++k) {
      curve << doc["rho_grid"][k].get<double>() << ',' << doc["values"][k].get<double>() << '\n';
    }
    io::write_file(prefix + "_curve.csv", curve.str());
  }
}

int emit(json doc, const Output& o, std::ostream& out) {
  if (!o.csv.empty()) write_csv_tables(o.csv, doc);
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_file(o.out, text);
  }
  return doc["converged"].get<bool>() ? kExitOk : kExitNotConverged;
}

struct OtArgs {
  std::string a, b, metric = "euclidean";
  bool sinkhorn = false;
  double eps = 1e-2;
  int max_iter = 100000;
  Output o;
};

int cmd_ot(const OtArgs& args, std::ostream& out) {
  const auto mu = io::read_measure(args.a, args.o.normalize);
  const auto nu = io::read_measure(args.b, args.o.normalize);
  const auto cost = cost_matrix(mu, nu, parse_metric(args.metric));
  json params = {{"a", args.a}, {"b", args.b}, {"metric", args.metric},
                 {"sinkhorn", args.sinkhorn}};
  if (args.sinkhorn) params["eps"] = args.eps;
  const OtSolution sol = args.sinkhorn ? solve_sinkhorn(mu, nu, cost, args.eps, args.max_iter)
                                       : solve_exact(mu, nu, cost);
  json doc = base_document("ot", std::move(params));
  doc["value"] = sol.value;
  doc["coupling"] = coupling_json(sol.coupling);
  doc["converged"] = sol.converged;
  doc["gap"] = sol.gap;
  doc["potential_x"] = sol.potential_x;
  doc["potential_y"] = sol.potential_y;
  return emit(std::move(doc), args.o, out);
}

struct RobustArgs {
  std::string a, b, metric = "euclidean", rule = "averaged";
  double rho1 = 0.0, rho2 = 0.0, tol = 1e-7;
  int max_iter = 500;
  Output o;
};

int cmd_robust(const RobustArgs& args, std::ostream& out) {
  const auto mu = io::read_measure(args.a, args.o.normalize);
  const auto nu = io::read_measure(args.b, args.o.normalize);
  const auto cost = cost_matrix(mu, nu, parse_metric(args.metric));
  RobustParams p;
  p.rho1 = args.rho1;
  p.rho2 = args.rho2;
  p.update_rule = parse_rule(args.rule);
  p.max_outer_iter = args.max_iter;
  p.rel_tol = args.tol;
  const RobustSolution sol = solve_robust(mu, nu, cost, p);
  json doc = base_document("robust", {{"a", args.a},
                                      {"b", args.b},
                                      {"metric", args.metric},
                                      {"rho1", args.rho1},
                                      {"rho2", args.rho2},
                                      {"rule", args.rule},
                                      {"max_iter", args.max_iter},
                                      {"tol", args.tol}});
  doc["value"] = sol.value;
  doc["weights_x"] = sol.w_x.w;
  doc["weights_y"] = sol.w_y.w;
  doc["coupling"] = coupling_json(sol.coupling);
  doc["trace"] = sol.trace;
  doc["converged"] = sol.converged;
  doc["lower_bound"] = sol.lower_bound;
  doc["iterations"] = sol.iterations;
  return emit(std::move(doc), args.o, out);
}

struct UnbalancedArgs {
  std::string a, b, metric = "euclidean";
  double tau = 1.0, tol = 1e-9;
  int max_iter = 200000;
  Output o;
};

int cmd_unbalanced(const UnbalancedArgs& args, std::ostream& out) {
  const auto mu = io::read_measure(args.a, args.o.normalize);
  const auto nu = io::read_measure(args.b, args.o.normalize);
  const auto cost = cost_matrix(mu, nu, parse_metric(args.metric));
  const auto sol = solve_unbalanced_chi2(mu, nu, cost, args.tau, args.max_iter, args.tol);
  json doc = base_document("unbalanced", {{"a", args.a},
                                          {"b", args.b},
                                          {"metric", args.metric},
                                          {"tau", args.tau},
                                          {"max_iter", args.max_iter},
                                          {"tol", args.tol}});
  doc["value"] = sol.value;
  doc["coupling"] = coupling_json(sol.coupling, sol.cols);
  doc["converged"] = sol.converged;
  doc["transport_cost"] = sol.transport_cost;
  doc["marginal_penalty_x"] = sol.marginal_penalty_x;
  doc["marginal_penalty_y"] = sol.marginal_penalty_y;
  doc["kkt_residual"] = sol.kkt_residual;
  doc["iterations"] = sol.iterations;
  return emit(std::move(doc), args.o, out);
}

struct SweepArgs {
  std::string a, b, metric = "euclidean", grid;
  bool elbow = false;
  Output o;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const auto grid = parse_grid(args.grid);
  const auto mu = io::read_measure(args.a, args.o.normalize);
  const auto nu = io::read_measure(args.b, args.o.normalize);
  const auto cost = cost_matrix(mu, nu, parse_metric(args.metric));
  const RhoCurve curve = sweep_rho(mu, nu, cost, grid);
  json doc = base_document("sweep", {{"a", args.a},
                                     {"b", args.b},
                                     {"metric", args.metric},
                                     {"rho_grid", args.grid},
                                     {"elbow", args.elbow}});
  doc["converged"] = curve.monotone;
  doc["rho_grid"] = curve.rho_grid;
  doc["values"] = curve.values;
  doc["weights"] = curve.weights;
  doc["monotone"] = curve.monotone;
  if (args.elbow) {
    const Elbow e = detect_elbow(curve);
    doc["elbow"] = {{"rho", e.rho}, {"index", e.index}, {"flat", e.flat}};
    doc["value"] = curve.values[e.index];
  }
  return emit(std::move(doc), args.o, out);
}

struct BoundArgs {
  double k = 1.0, gamma = 0.0, rho = 0.0;
  int n_atoms = 100;
  Output o;
};

int cmd_bound(const BoundArgs& args, std::ostream& out) {
  const auto instance = construct_theorem2_instance(args.k, args.gamma, args.n_atoms);
  const Theorem2Report r = verify_theorem2(instance, args.rho);
  json doc = base_document("bound", {{"k", args.k},
                                     {"gamma", args.gamma},
                                     {"rho", args.rho},
                                     {"n_atoms", args.n_atoms}});
  doc["value"] = r.lhs;
  doc["report"] = {{"lhs", r.lhs},
                   {"clean_distance", r.clean_distance},
                   {"factor", r.factor},
                   {"rhs", r.rhs},
                   {"holds", r.holds},
                   {"rho_for_known_gamma", rho_for_known_gamma(instance.gamma)}};
  return emit(std::move(doc), args.o, out);
}

struct RingArgs {
  int modes = RingDefaults::kModes;
  double radius = RingDefaults::kRadius;
  double sigma = RingDefaults::kSigma;
  int n = RingDefaults::kSamples;
  double rot = 0.0;
  std::uint64_t seed = 0;
  double outliers = 0.0;
  std::string outlier_mode = "far";
  double outlier_distance = RingDefaults::kFarClusterDistance;
  Output o;
};

int cmd_gen_ring(const RingArgs& args, std::ostream& out) {
  DiscreteMeasure mu =
      gaussian_ring(args.modes, args.radius, args.sigma, args.n, args.rot, args.seed);
  std::vector<bool> labels(mu.size(), false);
  if (args.outliers > 0.0) {
    const double reach = args.outlier_distance * args.radius;
    OutlierSampler sampler;
    if (args.outlier_mode == "far") {
      sampler = OutlierSampler::FarCluster({reach, 0.0}, args.sigma);
    } else if (args.outlier_mode == "uniform") {
      sampler = OutlierSampler::UniformBox({-reach, -reach}, {reach, reach});
    } else {
      throw Error(ErrorKind::kParseError, "outlier mode must be far or uniform");
    }
    auto corrupted = inject_outliers(mu, args.outliers, sampler, args.seed);
    mu = std::move(corrupted.measure);
    labels = std::move(corrupted.is_outlier);
  }
  json doc = base_document("gen ring", {{"modes", args.modes},
                                        {"radius", args.radius},
                                        {"sigma", args.sigma},
                                        {"n", args.n},
                                        {"rot", args.rot},
                                        {"outliers", args.outliers},
                                        {"outlier_mode", args.outlier_mode},
                                        {"outlier_distance", args.outlier_distance}});
  doc["seed"] = args.seed;
  doc["points"] = mu.points();
  doc["mass"] = mu.mass();
  doc["labels"] = labels;
  if (!args.o.csv.empty()) io::write_file(args.o.csv + "_points.csv", io::measure_to_csv(mu));
  return emit(std::move(doc), args.o, out);
}

struct PropsArgs {
  std::vector<std::string> inputs;
  std::string metric = "euclidean";
  double rho = 0.0;
  Output o;
};

int cmd_props(const PropsArgs& args, std::ostream& out) {
  std::vector<DiscreteMeasure> samples;
  for (const auto& path : args.inputs) samples.push_back(io::read_measure(path, args.o.normalize));
  const MetricReport r = metric_properties_report(samples, parse_metric(args.metric), args.rho);
  json violations = json::array();
  for (const auto& v : r.triangle_violations) {
    violations.push_back({{"a", v.a}, {"b", v.b}, {"c", v.c}, {"direct", v.direct},
                          {"via", v.via}, {"margin", v.margin()}});
  }
  json doc = base_document("props", {{"inputs", args.inputs}, {"metric", args.metric},
                                     {"rho", args.rho}});
  doc["report"] = {{"non_negative", r.non_negative},
                   {"identity", r.identity},
                   {"symmetric", r.symmetric},
                   {"max_identity_value", r.max_identity_value},
                   {"max_symmetry_error", r.max_symmetry_error},
                   {"triangle_violations", violations}};
  return emit(std::move(doc), args.o, out);
}

struct SvgArgs {
  std::string result;
  std::vector<std::string> points;
  std::string out;
  double size = 800.0;
  bool normalize = false;
};

int cmd_svg(const SvgArgs& args, std::ostream& out) {
  json result;
  try {
    result = json::parse(io::read_file(args.result));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, args.result + ": " + e.what());
  }
  const auto mu = io::read_measure(args.points.at(0), args.normalize);
  const auto nu = io::read_measure(args.points.at(1), args.normalize);
  SvgScene scene;
  scene.source = mu.points();
  scene.target = nu.points();
  try {
    if (result.contains("weights_x") && result["weights_x"].is_array()) {
      scene.source_weights = result["weights_x"].get<std::vector<double>>();
    }
    if (result.contains("weights_y") && result["weights_y"].is_array()) {
      scene.target_weights = result["weights_y"].get<std::vector<double>>();
    }
    if (result.contains("coupling")) {
      for (const auto& e : result["coupling"]) {
        scene.coupling.push_back(
            {e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, args.result + ": " + e.what());
  }
  io::write_file(args.out, render_couplings_svg(scene, args.size));
  json doc;
  doc["command"] = "couplings-svg";
  doc["params"] = {{"result", args.result}, {"points", args.points}, {"size", args.size}};
  doc["out"] = args.out;
  doc["segments"] = scene.coupling.size();
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::kSolverStall ? kExitNotConverged : kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outlier-robust optimal transport between point clouds", "robust-ot"};
  app.require_subcommand(1);

  OtArgs ot;
  auto* ot_cmd = app.add_subcommand("ot", "Exact or entropic OT");
  ot_cmd->add_option("a", ot.a, "Source points")->required();
  ot_cmd->add_option("b", ot.b, "Target points")->required();
  ot_cmd->add_option("--metric", ot.metric, "euclidean or sqeuclidean");
  ot_cmd->add_flag("--sinkhorn", ot.sinkhorn, "Use entropic OT");
  ot_cmd->add_option("--eps", ot.eps, "Entropic regularization");
  ot_cmd->add_option("--max-iter", ot.max_iter, "Sinkhorn iteration budget");
  add_output_options(ot_cmd, ot.o);

  RobustArgs rob;
  auto* rob_cmd = app.add_subcommand("robust", "Robust OT with chi-square relaxed marginals");
  rob_cmd->add_option("a", rob.a, "Source points")->required();
  rob_cmd->add_option("b", rob.b, "Target points")->required();
  rob_cmd->add_option("--rho1", rob.rho1, "Source radius")->required();
  rob_cmd->add_option("--rho2", rob.rho2, "Target radius");
  rob_cmd->add_option("--rule", rob.rule, "averaged, direct or subgradient");
  rob_cmd->add_option("--max-iter", rob.max_iter, "Outer iteration budget");
  rob_cmd->add_option("--tol", rob.tol, "Relative gap tolerance");
  rob_cmd->add_option("--metric", rob.metric, "euclidean or sqeuclidean");
  add_output_options(rob_cmd, rob.o);

  UnbalancedArgs ub;
  auto* ub_cmd = app.add_subcommand("unbalanced", "Unbalanced OT with chi-square penalties");
  ub_cmd->add_option("a", ub.a, "Source points")->required();
  ub_cmd->add_option("b", ub.b, "Target points")->required();
  ub_cmd->add_option("--tau", ub.tau, "Penalty strength")->required();
  ub_cmd->add_option("--max-iter", ub.max_iter, "Iteration budget");
  ub_cmd->add_option("--tol", ub.tol, "Gradient mapping tolerance");
  ub_cmd->add_option("--metric", ub.metric, "euclidean or sqeuclidean");
  add_output_options(ub_cmd, ub.o);

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "One-sided robust OT along a radius grid");
  sw_cmd->add_option("a", sw.a, "Source points")->required();
  sw_cmd->add_option("b", sw.b, "Target points")->required();
  sw_cmd->add_option("--rho-grid", sw.grid, "start:stop:count[:log]")->required();
  sw_cmd->add_flag("--elbow", sw.elbow, "Report the elbow of the curve");
  sw_cmd->add_option("--metric", sw.metric, "euclidean or sqeuclidean");
  add_output_options(sw_cmd, sw.o);

  BoundArgs bd;
  auto* bd_cmd = app.add_subcommand("bound", "Check the outlier bound on a 1-D instance");
  bd_cmd->add_option("--k", bd.k, "Outlier distance ratio")->required();
  bd_cmd->add_option("--gamma", bd.gamma, "Outlier fraction")->required();
  bd_cmd->add_option("--rho", bd.rho, "Radius")->required();
  bd_cmd->add_option("--n-atoms", bd.n_atoms, "Atoms in the corrupted measure");
  add_output_options(bd_cmd, bd.o);

  RingArgs ring;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic data");
  gen_cmd->require_subcommand(1);
  auto* ring_cmd = gen_cmd->add_subcommand("ring", "Gaussian mixture on a ring");
  ring_cmd->add_option("--modes", ring.modes, "Number of modes");
  ring_cmd->add_option("--radius", ring.radius, "Ring radius");
  ring_cmd->add_option("--sigma", ring.sigma, "Mode standard deviation");
  ring_cmd->add_option("--n", ring.n, "Number of samples");
  ring_cmd->add_option("--rot", ring.rot, "Rotation in radians");
  ring_cmd->add_option("--seed", ring.seed, "Random seed");
  ring_cmd->add_option("--outliers", ring.outliers, "Outlier fraction");
  ring_cmd->add_option("--outlier-mode", ring.outlier_mode, "far or uniform");
  ring_cmd->add_option("--outlier-distance", ring.outlier_distance,
                       "Far cluster distance (or box half-width) in radii");
  add_output_options(ring_cmd, ring.o);

  PropsArgs props;
  auto* props_cmd = app.add_subcommand("props", "Metric property report");
  props_cmd->add_option("--inputs", props.inputs, "Three or more point files")
      ->required()
      ->expected(3, -1);
  props_cmd->add_option("--rho", props.rho, "Radius on both sides")->required();
  props_cmd->add_option("--metric", props.metric, "euclidean or sqeuclidean");
  add_output_options(props_cmd, props.o);

  SvgArgs svg;
  auto* svg_cmd = app.add_subcommand("couplings-svg", "Render a result's coupling in 2-D");
  svg_cmd->add_option("result", svg.result, "Result JSON document")->required();
  svg_cmd->add_option("--points", svg.points, "Source and target points")
      ->required()
      ->expected(2);
  svg_cmd->add_option("--out", svg.out, "SVG output path")->required();
  svg_cmd->add_option("--size", svg.size, "Canvas size in pixels");
  svg_cmd->add_flag("--normalize", svg.normalize, "Divide a mass column by its sum");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*ot_cmd) return cmd_ot(ot, out);
    if (*rob_cmd) return cmd_robust(rob, out);
    if (*ub_cmd) return cmd_unbalanced(ub, out);
    if (*sw_cmd) return cmd_sweep(sw, out);
    if (*bd_cmd) return cmd_bound(bd, out);
    if (*ring_cmd) return cmd_gen_ring(ring, out);
    if (*props_cmd) return cmd_props(props, out);
    if (*svg_cmd) return cmd_svg(svg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  err << "error: no command\n";
  return kExitInput;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace robust_ot::cli
