#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vislab/errors.hpp"
#include "vislab/lab.hpp"

namespace {

std::string joined_names() {
  std::string s;
  for (const auto& n : vislab::experiment_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

int usage(std::ostream& os, int code) {
  os << "usage: vislab <experiment> [flags]\n"
     << "experiments: " << joined_names() << "\n"
     << "run 'vislab <experiment> --help' for flags\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vislab;
  if (argc < 2) return usage(std::cerr, kExitValidation);
  const std::string first = argv[1];
  if (first == "--help" || first == "-h") return usage(std::cout, kExitOk);
  if (first == "--version") {
    std::cout << "vislab " << version() << "\n";
    return kExitOk;
  }
  const auto experiment = parse_experiment(first);
  if (!experiment) {
    std::cerr << "unknown experiment '" << first << "'; valid: " << joined_names() << "\n";
    return kExitValidation;
  }

  CLI::App app{"vislab " + first};
  app.name("vislab " + first);
  std::string ifs, n_text, out, config_path, diffeo;
  double delta = 0, c = 0, alpha = 0, C = 0, s = 0, K = 0, theta = 0, line_y = 0;
  int angles = 0, k = 0, L = 0;
  std::uint64_t seed = 0, samples = 0, node_budget = 0;
  std::vector<std::string> vantages;
  std::vector<double> lambdas;

  auto* o_ifs = app.add_option("--ifs", ifs, "preset name or IFS JSON file");
  auto* o_n = app.add_option("--n", n_text, "depth n or range a..b");
  auto* o_delta = app.add_option("--delta", delta, "discretisation scale (default: stage-n side)");
  auto* o_angles = app.add_option("--angles", angles, "angle count");
  auto* o_vantage = app.add_option("--vantage", vantages, "vantage point x,y (repeatable)");
  auto* o_lambda = app.add_option("--lambda", lambdas, "line-scan threshold (repeatable)");
  auto* o_c = app.add_option("--c", c, "line-neighbourhood factor");
  auto* o_k = app.add_option("--k", k, "arc count for interval selection");
  auto* o_seed = app.add_option("--seed", seed, "RNG seed");
  auto* o_out = app.add_option("--out", out, "CSV output path (JSON sidecar alongside)");
  app.add_option("--config", config_path, "JSON config file; flags override it");
  auto* o_alpha = app.add_option("--alpha", alpha, "certify-set dimension");
  auto* o_C = app.add_option("--C", C, "certify-set constant");
  auto* o_s = app.add_option("--s", s, "energy exponent");
  auto* o_K = app.add_option("--K", K, "stacking threshold");
  auto* o_theta = app.add_option("--theta", theta, "stacking direction");
  auto* o_L = app.add_option("--L", L, "word length for bad-angles and generic-census");
  auto* o_samples = app.add_option("--samples", samples, "Monte-Carlo samples");
  auto* o_diffeo = app.add_option("--diffeo", diffeo, "certify-set: map applied first (polar, projectiveT)");
  auto* o_line_y = app.add_option("--line-y", line_y, "line-scan: height of the horizontal line");
  auto* o_budget = app.add_option("--node-budget", node_budget, "generation node cap");

  app.allow_windows_style_options(false);
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  ExperimentConfig cfg;
  cfg.experiment = *experiment;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidInput("cannot read config " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      apply_json_config(cfg, buf.str());
      if (cfg.experiment != *experiment)
        throw InvalidInput("config names experiment '" + experiment_name(cfg.experiment) +
                           "' but the command is '" + first + "'");
    }
    if (*o_ifs) cfg.ifs = ifs;
    if (*o_n && !parse_depth_range(n_text, cfg.n_lo, cfg.n_hi))
      throw InvalidInput("--n expects an integer or a..b, got '" + n_text + "'");
    if (*o_delta) cfg.delta = delta;
    if (*o_angles) cfg.angles = angles;
    if (*o_vantage) {
      cfg.vantages.clear();
      for (const auto& v : vantages) {
        Point2 p;
        if (!parse_point(v, p)) throw InvalidInput("--vantage expects x,y, got '" + v + "'");
        cfg.vantages.push_back(p);
      }
    }
    if (*o_lambda) cfg.lambdas = lambdas;
    if (*o_c) cfg.c = c;
    if (*o_k) cfg.k = k;
    if (*o_seed) cfg.seed = seed;
    if (*o_out) cfg.out = out;
    if (*o_alpha) cfg.alpha = alpha;
    if (*o_C) cfg.C = C;
    if (*o_s) cfg.s = s;
    if (*o_K) cfg.K = K;
    if (*o_theta) cfg.theta = theta;
    if (*o_L) cfg.L = L;
    if (*o_samples) cfg.samples = samples;
    if (*o_diffeo) cfg.diffeo = diffeo;
    if (*o_line_y) cfg.line_y = line_y;
    if (*o_budget) cfg.node_budget = node_budget;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  const RunResult r = run(cfg);
  if (r.exit_code == kExitOk) {
    std::cout << r.message << "\n";
  } else {
    std::cerr << "error (exit " << r.exit_code << "):\n" << r.message;
    if (!r.message.empty() && r.message.back() != '\n') std::cerr << "\n";
  }
  return r.exit_code;
}
