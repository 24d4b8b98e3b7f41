#include "vislab/lab.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "vislab/errors.hpp"
#include "vislab/ifs.hpp"
#include "vislab/point_cloud.hpp"
#include "vislab/projections.hpp"
#include "vislab/set_analysis.hpp"
#include "vislab/transforms.hpp"
#include "vislab/visibility.hpp"

#ifndef VISLAB_VERSION
#define VISLAB_VERSION "0.0.0"
#endif

namespace vislab {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 11> kNames{{
    {Experiment::favard_scaling, "favard-scaling"},
    {Experiment::visibility_point, "visibility-point"},
    {Experiment::vis_delta_sweep, "vis-delta-sweep"},
    {Experiment::line_scan, "line-scan"},
    {Experiment::certify_set, "certify-set"},
    {Experiment::energy, "energy"},
    {Experiment::box_dim_sweep, "box-dim-sweep"},
    {Experiment::stacking, "stacking"},
    {Experiment::bad_angles, "bad-angles"},
    {Experiment::generic_census, "generic-census"},
    {Experiment::bridge, "bridge"},
}};

bool single_depth(Experiment e) {
  return e == Experiment::vis_delta_sweep || e == Experiment::line_scan ||
         e == Experiment::certify_set || e == Experiment::box_dim_sweep ||
         e == Experiment::bridge;
}

bool builds_generation(Experiment e) {
  return e != Experiment::generic_census && e != Experiment::bad_angles;
}

std::string show_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string cell_text(const Cell& c) {
  if (auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (auto* d = std::get_if<double>(&c)) return show_number(*d);
  if (auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

void write_csv(const Table& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
  if (!out) throw InvalidInput("failed writing " + path);
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string sidecar_path(const std::string& csv) {
  std::filesystem::path p(csv);
  if (p.extension() == ".csv") p.replace_extension(".json");
  else p += ".json";
  return p.string();
}

std::string lines_path(const std::string& csv) {
  std::filesystem::path p(csv);
  if (p.extension() == ".csv") p.replace_extension();
  p += ".lines.csv";
  return p.string();
}

double hull_radius(const Square& hull) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i) r = std::max(r, norm(hull.vertex(i)));
  return r;
}

// Smallest family radius that keeps the set and every vantage inside.
double family_radius(const Square& hull, std::span<const Point2> extra) {
  double r = hull_radius(hull);
  for (auto p : extra) r = std::max(r, norm(p));
  return r + 1.0;
}

double stage_side(const IFSystem& sys, int n) {
  return sys.hull.side * std::pow(sys.min_ratio(), n);
}

struct Outcome {
  Table table;
  json extra = json::object();
  std::vector<std::pair<std::string, Table>> side_tables;  // suffix path, table
};

Outcome run_favard(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"n", "theta_count", "favard"};
  const AngleGrid grid(*c.angles);
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto g = generate_generation(sys, n, c.node_budget);
    o.table.add({std::int64_t{n}, std::int64_t{grid.count}, favard_length(g, grid)});
  }
  return o;
}

Outcome run_visibility_point(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"n", "vantage_x", "vantage_y", "vis"};
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto g = generate_generation(sys, n, c.node_budget);
    for (auto a : c.vantages) o.table.add({std::int64_t{n}, a.x, a.y, visibility(g.nodes, a)});
  }
  return o;
}

Outcome run_vis_delta_sweep(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"vantage_x", "vantage_y", "vis", "vis_delta"};
  const auto g = generate_generation(sys, c.n_lo, c.node_budget);
  PointCloud A = centers_of(g);
  A.delta = *c.delta;
  const LineFamily fam(*c.delta, family_radius(sys.hull, c.vantages));
  const IncidenceTable table(fam, A, c.c);
  for (auto a : c.vantages) {
    o.table.add({a.x, a.y, visibility(g.nodes, a), std::int64_t{table.vis_delta(a)}});
  }
  Table lines;
  lines.header = {"delta", "c", "line_index_k1", "line_index_k2", "f_delta"};
  for (int k1 = 0; k1 < fam.k1_count(); ++k1)
    for (int k2 = -fam.k2_max(); k2 <= fam.k2_max(); ++k2) {
      const int f = table.f(k1, k2);
      if (f > 0) lines.add({fam.delta(), c.c, std::int64_t{k1}, std::int64_t{k2}, std::int64_t{f}});
    }
  o.extra["lines_total"] = fam.size();
  o.extra["lines_nonempty"] = lines.rows.size();
  o.side_tables.emplace_back("lines", std::move(lines));
  return o;
}

Outcome run_line_scan(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"lambda", "sublevel_length"};
  const auto g = generate_generation(sys, c.n_lo, c.node_budget);
  PointCloud A = centers_of(g);
  A.delta = *c.delta;
  const double y = *c.line_y;
  const LineFamily fam(*c.delta, family_radius(sys.hull, std::array{Point2{0.0, y}}));
  const IncidenceTable table(fam, A, c.c);
  const Line l0(0.0, y);
  const Segment seg = chord(l0, fam.d());
  const auto profile = vis_profile(seg, table, *c.delta / 2);
  json scans = json::array();
  for (double lambda : c.lambdas) {
    const auto r = scan_from_profile(profile, seg.length(), *c.delta, lambda);
    o.table.add({lambda, r.sublevel_length});
    scans.push_back({{"lambda", lambda},
                     {"sublevel_length", r.sublevel_length},
                     {"segment_length", r.segment_length},
                     {"samples", r.samples},
                     {"low_samples", r.low_samples}});
  }
  o.extra["scans"] = std::move(scans);
  return o;
}

Outcome run_certify(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"condition", "pass", "required_C"};
  const auto g = generate_generation(sys, c.n_lo, c.node_budget);
  PointCloud A = centers_of(g);
  A.delta = *c.delta;
  if (!c.diffeo.empty()) A = apply_diffeo(DiffeoPreset::by_name(c.diffeo), A);
  const SetCertificate cert = c.alpha == 1.0 ? check_unrectifiable_one_set(A, c.C, c.seed)
                                             : check_discrete_alpha_set(A, c.alpha, c.C, c.seed);
  auto row = [&](const char* name, const ConditionResult& r) {
    o.table.add({std::string(name), r.pass, r.required_C});
  };
  row("separation", cert.separation);
  row("cardinality", cert.cardinality);
  row("ball", cert.ball);
  row("line", cert.line);
  if (cert.rectangle) row("rectangle", *cert.rectangle);
  o.extra["certificate"] = json::parse(cert.to_json());
  o.extra["passes"] = cert.passes();
  return o;
}

Outcome run_energy(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"n", "s", "energy"};
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto g = generate_generation(sys, n, c.node_budget);
    o.table.add({std::int64_t{n}, c.s, riesz_energy(centers_of(g), c.s)});
  }
  return o;
}

Outcome run_box_dim(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"theta", "dimension"};
  const int n = c.n_lo;
  const auto g = generate_generation(sys, n, c.node_budget);
  std::vector<double> scales;
  for (int k = 1; k <= n; ++k) scales.push_back(sys.hull.side * std::pow(sys.min_ratio(), k));
  const int count = *c.angles;
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    const double theta = k * kPi / count;
    const double dim = box_dimension_estimate(project_generation(g.nodes, theta), scales);
    lowest = std::min(lowest, dim);
    o.table.add({theta, dim});
  }
  o.extra["min_dimension"] = lowest;
  o.extra["scales"] = scales;
  return o;
}

Outcome run_stacking(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"n", "theta", "K", "stacked_fraction", "support"};
  for (int n = c.n_lo; n <= c.n_hi; ++n) {
    const auto g = generate_generation(sys, n, c.node_budget);
    const auto r = stacked_census(g, c.theta, c.K);
    o.table.add({std::int64_t{n}, c.theta, c.K, r.stacked_fraction, r.support_measure});
  }
  return o;
}

Outcome run_bad_angles(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"L", "K", "favard", "bad_measure", "bad_count"};
  const auto r = bad_angle_measure(sys, c.L, AngleGrid(*c.angles));
  o.table.add({std::int64_t{c.L}, r.K, r.favard, r.measure_estimate,
               static_cast<std::int64_t>(r.bad_thetas.size())});
  o.extra["bad_thetas"] = r.bad_thetas;
  return o;
}

Outcome run_generic(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"N", "L", "nongeneric_fraction"};
  for (int N = c.n_lo; N <= c.n_hi; ++N)
    o.table.add({std::int64_t{N}, std::int64_t{c.L}, subword_census(sys, N, c.L, c.samples, c.seed)});
  return o;
}

Outcome run_bridge(const ExperimentConfig& c, const IFSystem& sys) {
  Outcome o;
  o.table.header = {"x", "vis_delta", "projected_length", "ratio_delta"};
  const auto g = generate_generation(sys, c.n_lo, c.node_budget);
  PointCloud A = centers_of(g);
  A.delta = *c.delta;
  const Square box{{1.0, 1.0}, 19.0};
  Point2 shift{0.0, 0.0};
  if (!box.contains(sys.hull, 0.0)) shift = Point2{1.0, 1.0} - sys.hull.corner;
  A = translated(A, shift);
  const Square moved{sys.hull.corner + shift, sys.hull.side};
  std::vector<Point2> xs;
  for (auto v : c.vantages) xs.push_back({v.x, 0.0});
  const LineFamily fam(*c.delta, family_radius(moved, xs));
  for (auto p : xs) {
    const auto s = radial_vs_projection_bridge(A, p.x, fam, c.c);
    o.table.add({s.x, std::int64_t{s.vis_delta}, s.projected_length, s.ratio_delta});
  }
  o.extra["shift"] = {shift.x, shift.y};
  return o;
}

json point_list(const std::vector<Point2>& pts) {
  json a = json::array();
  for (auto p : pts) a.push_back({p.x, p.y});
  return a;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [e, n] : kNames) v.emplace_back(n);
    return v;
  }();
  return names;
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kNames)
    if (name == n) return e;
  return std::nullopt;
}

std::string experiment_name(Experiment e) {
  for (const auto& [x, n] : kNames)
    if (x == e) return n;
  return "?";
}

std::string version() { return VISLAB_VERSION; }

bool parse_depth_range(std::string_view text, int& lo, int& hi) {
  auto num = [](std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    if (!num(text, lo)) return false;
    hi = lo;
    return true;
  }
  return num(text.substr(0, dots), lo) && num(text.substr(dots + 2), hi);
}

bool parse_point(std::string_view text, Point2& p) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return false;
  auto num = [](std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  return num(text.substr(0, comma), p.x) && num(text.substr(comma + 1), p.y) && p.finite();
}

ExperimentConfig effective_config(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  const bool box = c.experiment == Experiment::box_dim_sweep;
  if (!c.angles) c.angles = box ? 360 : 4096;
  if (c.lambdas.empty())
    for (int k = 1; k <= 6; ++k) c.lambdas.push_back(std::ldexp(1.0, -k));
  if (c.out.empty()) c.out = experiment_name(c.experiment) + ".csv";
  IFSystem sys;
  bool have_sys = true;
  try {
    sys = resolve_ifs(c.ifs);
  } catch (const std::exception&) {
    have_sys = false;
  }
  if (!c.delta && have_sys && c.n_lo >= 0 && c.n_lo < 64) c.delta = stage_side(sys, c.n_lo);
  if (!c.line_y && have_sys) c.line_y = sys.hull.corner.y - 0.5;
  if (c.vantages.empty()) {
    if (c.experiment == Experiment::bridge) {
      for (int i = 0; i < 10; ++i) c.vantages.push_back({-9.5 + i, 0.0});
    } else if (have_sys) {
      c.vantages.push_back(sys.hull.corner - Point2{sys.hull.side, sys.hull.side});
    } else {
      c.vantages.push_back({-1.0, -1.0});
    }
  }
  return c;
}

std::vector<Violation> validate(const ExperimentConfig& cfg) {
  std::vector<Violation> v;
  auto bad = [&](std::string field, std::string constraint, bool resource = false) {
    v.push_back({std::move(field), std::move(constraint), resource});
  };
  IFSystem sys;
  bool have_sys = false;
  try {
    sys = resolve_ifs(cfg.ifs);
    have_sys = true;
  } catch (const std::exception& e) {
    bad("ifs", e.what());
  }
  if (cfg.n_lo < 0 || cfg.n_hi < cfg.n_lo) bad("n", "depth range must satisfy 0 <= lo <= hi");
  if (single_depth(cfg.experiment) && cfg.n_lo != cfg.n_hi)
    bad("n", experiment_name(cfg.experiment) + " takes a single depth");
  if (cfg.experiment == Experiment::box_dim_sweep && cfg.n_lo < 3)
    bad("n", "box-dim-sweep needs n >= 3 (three scales)");
  if (cfg.experiment == Experiment::generic_census && cfg.n_lo < cfg.L)
    bad("n", "word length N must be at least L");
  if (have_sys && builds_generation(cfg.experiment) && cfg.n_hi >= cfg.n_lo && cfg.n_lo >= 0) {
    try {
      (void)generation_size(sys, cfg.n_hi, cfg.node_budget);
    } catch (const ResourceError& e) {
      bad("n", std::string("depth exceeds node budget: ") + e.what(), true);
    }
  }
  if (have_sys && cfg.experiment == Experiment::bad_angles && cfg.L >= 0) {
    try {
      (void)generation_size(sys, cfg.L, cfg.node_budget);
    } catch (const ResourceError& e) {
      bad("L", std::string("depth exceeds node budget: ") + e.what(), true);
    }
  }
  if (cfg.delta && !(*cfg.delta > 0.0 && std::isfinite(*cfg.delta))) bad("delta", "delta must be > 0");
  if (cfg.angles && (*cfg.angles < 1 || *cfg.angles > (1 << 20)))
    bad("angles", "angle count must lie in [1, 2^20]");
  for (double l : cfg.lambdas)
    if (!(l > 0.0 && l <= 1.0)) bad("lambda", "lambda outside (0,1]: " + show_number(l));
  for (auto p : cfg.vantages)
    if (!p.finite()) bad("vantage", "vantage must be finite");
  if (cfg.experiment == Experiment::bridge)
    for (auto p : cfg.vantages)
      if (!(p.x >= -10.0 && p.x <= 0.0)) bad("vantage", "bridge vantage x must lie in [-10, 0]");
  if (!(cfg.c > 0.0)) bad("c", "c must be > 0");
  if (cfg.k <= 10 || cfg.k % 2 != 0) bad("k", "k must be even and > 10");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 2.0)) bad("alpha", "alpha must lie in (0, 2]");
  if (!(cfg.C > 0.0)) bad("C", "C must be > 0");
  if (!(cfg.s > 0.0)) bad("s", "s must be > 0");
  if (!(cfg.K > 0.0)) bad("K", "K must be > 0");
  if (!std::isfinite(cfg.theta)) bad("theta", "theta must be finite");
  if (cfg.L < 1) bad("L", "L must be >= 1");
  if (cfg.samples < 1 || cfg.samples > 100'000'000) bad("samples", "samples must lie in [1, 1e8]");
  if (cfg.line_y && !std::isfinite(*cfg.line_y)) bad("line_y", "line_y must be finite");
  if (!cfg.diffeo.empty()) {
    if (cfg.diffeo != "polar" && cfg.diffeo != "projectiveT" && cfg.diffeo != "identity")
      bad("diffeo", "diffeo must be one of polar, projectiveT, identity");
  }
  if (cfg.node_budget < 1) bad("node_budget", "node budget must be >= 1");
  return v;
}

void apply_json_config(ExperimentConfig& cfg, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      const json& val = it.value();
      if (key == "experiment") {
        auto e = parse_experiment(val.get<std::string>());
        if (!e) throw InvalidInput("unknown experiment '" + val.get<std::string>() + "'");
        cfg.experiment = *e;
      } else if (key == "ifs") {
        cfg.ifs = val.get<std::string>();
      } else if (key == "n") {
        if (val.is_number_integer()) {
          cfg.n_lo = cfg.n_hi = val.get<int>();
        } else if (!parse_depth_range(val.get<std::string>(), cfg.n_lo, cfg.n_hi)) {
          throw InvalidInput("config n must be an integer or \"a..b\"");
        }
      } else if (key == "delta") {
        if (val.is_null()) cfg.delta.reset();
        else cfg.delta = val.get<double>();
      } else if (key == "angles") {
        if (val.is_null()) cfg.angles.reset();
        else cfg.angles = val.get<int>();
      } else if (key == "vantages") {
        cfg.vantages.clear();
        for (const auto& p : val) cfg.vantages.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      } else if (key == "lambdas") {
        cfg.lambdas = val.get<std::vector<double>>();
      } else if (key == "c") {
        cfg.c = val.get<double>();
      } else if (key == "k") {
        cfg.k = val.get<int>();
      } else if (key == "seed") {
        cfg.seed = val.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = val.get<std::string>();
      } else if (key == "alpha") {
        cfg.alpha = val.get<double>();
      } else if (key == "C") {
        cfg.C = val.get<double>();
      } else if (key == "s") {
        cfg.s = val.get<double>();
      } else if (key == "K") {
        cfg.K = val.get<double>();
      } else if (key == "theta") {
        cfg.theta = val.get<double>();
      } else if (key == "L") {
        cfg.L = val.get<int>();
      } else if (key == "samples") {
        cfg.samples = val.get<std::uint64_t>();
      } else if (key == "line_y") {
        if (val.is_null()) cfg.line_y.reset();
        else cfg.line_y = val.get<double>();
      } else if (key == "diffeo") {
        cfg.diffeo = val.get<std::string>();
      } else if (key == "node_budget") {
        cfg.node_budget = val.get<std::uint64_t>();
      } else {
        throw InvalidInput("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config value has the wrong type: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["ifs"] = cfg.ifs;
  j["n"] = cfg.n_lo == cfg.n_hi ? std::to_string(cfg.n_lo)
                                : std::to_string(cfg.n_lo) + ".." + std::to_string(cfg.n_hi);
  j["delta"] = cfg.delta ? json(*cfg.delta) : json(nullptr);
  j["angles"] = cfg.angles ? json(*cfg.angles) : json(nullptr);
  j["vantages"] = point_list(cfg.vantages);
  j["lambdas"] = cfg.lambdas;
  j["c"] = cfg.c;
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  j["alpha"] = cfg.alpha;
  j["C"] = cfg.C;
  j["s"] = cfg.s;
  j["K"] = cfg.K;
  j["theta"] = cfg.theta;
  j["L"] = cfg.L;
  j["samples"] = cfg.samples;
  j["line_y"] = cfg.line_y ? json(*cfg.line_y) : json(nullptr);
  j["diffeo"] = cfg.diffeo;
  j["node_budget"] = cfg.node_budget;
  return j.dump(2);
}

RunResult run(const ExperimentConfig& input) {
  RunResult res;
  res.violations = validate(input);
  if (!res.violations.empty()) {
    const bool all_resource = std::all_of(res.violations.begin(), res.violations.end(),
                                          [](const Violation& v) { return v.resource; });
    res.exit_code = all_resource ? kExitResource : kExitValidation;
    std::ostringstream msg;
    for (const auto& v : res.violations) msg << v.field << ": " << v.constraint << "\n";
    res.message = msg.str();
    return res;
  }
  const ExperimentConfig cfg = effective_config(input);
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    const IFSystem sys = resolve_ifs(cfg.ifs);
    switch (cfg.experiment) {
      case Experiment::favard_scaling: o = run_favard(cfg, sys); break;
      case Experiment::visibility_point: o = run_visibility_point(cfg, sys); break;
      case Experiment::vis_delta_sweep: o = run_vis_delta_sweep(cfg, sys); break;
      case Experiment::line_scan: o = run_line_scan(cfg, sys); break;
      case Experiment::certify_set: o = run_certify(cfg, sys); break;
      case Experiment::energy: o = run_energy(cfg, sys); break;
      case Experiment::box_dim_sweep: o = run_box_dim(cfg, sys); break;
      case Experiment::stacking: o = run_stacking(cfg, sys); break;
      case Experiment::bad_angles: o = run_bad_angles(cfg, sys); break;
      case Experiment::generic_census: o = run_generic(cfg, sys); break;
      case Experiment::bridge: o = run_bridge(cfg, sys); break;
    }
  } catch (const ResourceError& e) {
    res.exit_code = kExitResource;
    res.message = e.what();
    return res;
  } catch (const InvalidInput& e) {
    res.exit_code = kExitValidation;
    res.message = e.what();
    return res;
  } catch (const std::exception& e) {
    res.exit_code = kExitFailure;
    res.message = e.what();
    return res;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    res.csv_path = cfg.out;
    res.json_path = sidecar_path(cfg.out);
    write_csv(o.table, res.csv_path);
    json summary;
    summary["experiment"] = experiment_name(cfg.experiment);
    summary["config"] = json::parse(config_to_json(cfg));
    summary["version"] = version();
    summary["wall_time_s"] = wall;
    json results = o.extra;
    results["header"] = o.table.header;
    results["rows"] = table_json(o.table);
    for (auto& [suffix, t] : o.side_tables) {
      const std::string path = lines_path(cfg.out);
      write_csv(t, path);
      results[suffix + "_csv"] = path;
    }
    summary["results"] = std::move(results);
    std::ofstream js(res.json_path, std::ios::binary);
    if (!js) throw InvalidInput("cannot write " + res.json_path);
    js << summary.dump(2) << "\n";
  } catch (const std::exception& e) {
    res.exit_code = kExitFailure;
    res.message = e.what();
    return res;
  }
  res.message = "wrote " + res.csv_path + " and " + res.json_path;
  return res;
}

}  // namespace vislab
