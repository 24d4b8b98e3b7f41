#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vislab/geometry.hpp"

namespace vislab {

enum class Experiment {
  favard_scaling,
  visibility_point,
  vis_delta_sweep,
  line_scan,
  certify_set,
  energy,
  box_dim_sweep,
  stacking,
  bad_angles,
  generic_census,
  bridge,
};

const std::vector<std::string>& experiment_names();
std::optional<Experiment> parse_experiment(std::string_view name);
std::string experiment_name(Experiment e);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;

struct ExperimentConfig {
  Experiment experiment = Experiment::favard_scaling;
  std::string ifs = "fourcorner";
  int n_lo = 4;
  int n_hi = 4;
  std::optional<double> delta;      // defaults to the stage-n side
  std::optional<int> angles;        // 4096, or 360 for box-dim-sweep
  std::vector<Point2> vantages;
  std::vector<double> lambdas;
  double c = 4.0;
  int k = 12;
  std::uint64_t seed = 1;
  std::string out;                  // defaults to <experiment>.csv
  double alpha = 1.0;
  double C = 256.0;
  double s = 1.0;
  double K = 3.0;
  double theta = 0.0;
  int L = 1;
  std::uint64_t samples = 100'000;
  std::optional<double> line_y;     // line-scan: horizontal line below the hull
  std::string diffeo;               // certify-set: optional preset applied first
  std::uint64_t node_budget = 1u << 20;
};

struct Violation {
  std::string field;
  std::string constraint;
  bool resource = false;
};

std::vector<Violation> validate(const ExperimentConfig& cfg);

// Every default materialised (vantages, lambdas, angles, out, line_y).
ExperimentConfig effective_config(const ExperimentConfig& cfg);

// Overlays the keys present in a JSON config document. Throws InvalidInput.
void apply_json_config(ExperimentConfig& cfg, const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

// "a..b" or "a".
bool parse_depth_range(std::string_view text, int& lo, int& hi);
// "x,y"
bool parse_point(std::string_view text, Point2& p);

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::string csv_path;
  std::string json_path;
  std::vector<Violation> violations;
};

RunResult run(const ExperimentConfig& cfg);

std::string version();

}  // namespace vislab
