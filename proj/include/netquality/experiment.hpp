#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "netquality/matching.hpp"

namespace nq {

enum class ExperimentKind { Q4Any, Q4ExactlyN, Q4Alpha, Q5 };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& s);

/// Matching experiment configuration, read from JSON:
///   {"kind": "q4_any" | "q4_exactly_n" | "q4_alpha" | "q5",
///    "n": 1, "alpha": 0.0, "delta_control": [-0.1, 0.1], "delta_treatment": 0.3,
///    "horizons": [1, ..., 12], "seed": 1, "bootstrap": 1000,
///    "sb_threshold": 0.25, "control_ratio": 2.0, "max_restarts": 5}
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Q4Any;
  int n = 1;
  double alpha = 0.0;
  Q5Thresholds delta{};
  std::vector<int> horizons{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::uint64_t seed = 1;
  std::size_t bootstrap = 1000;
  double sb_threshold = 0.25;
  /// Minimum |control seed| / |treatment|; the treatment group is randomly
  /// subsampled when the control pool is too small.
  double control_ratio = 2.0;
  /// Each restart doubles the required control ratio.
  int max_restarts = 5;
  double confidence = 0.95;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct GroupOutcome {
  double value = 0.0;
  Interval ci{};
  std::size_t used = 0;
  std::size_t excluded = 0;
};

struct InactivityRow {
  int horizon = 0;
  double p_treatment = 0.0;
  double p_control = 0.0;
  std::optional<double> ratio;  // nullopt when p_control is 0
  std::optional<Interval> ci;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t candidates = 0;
  std::size_t skipped_no_covariates = 0;
  std::size_t treatment_pool = 0;
  std::size_t control_pool = 0;
  std::size_t treatment_size = 0;  // after subsampling
  std::size_t control_size = 0;    // after balancing
  int restarts = 0;
  MatchedGroups balance;
  std::vector<UserWeekInstance> treatment;
  std::vector<UserWeekInstance> control;

  // Q4 kinds
  std::optional<GroupOutcome> delta_b_treatment;
  std::optional<GroupOutcome> delta_b_control;
  std::optional<double> delta_b_difference;
  std::optional<Interval> delta_b_difference_ci;

  // Q5
  std::vector<InactivityRow> inactivity;
};

/// Builds the groups for the configured experiment, balances them (restarting
/// with a larger control ratio on failure) and evaluates the outcomes.
/// Outcomes are only computed when balancing converged.
ExperimentResult run_experiment(const TemporalGraph& g, const ExperimentConfig& cfg, int threads = 1);

nlohmann::json to_json(const ExperimentResult& r);

}  // namespace nq
