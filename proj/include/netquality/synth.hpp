#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"
#include "netquality/temporal_graph.hpp"

namespace nq {

/// Parameters of the synthetic event-stream generator.
///
/// Each user i draws a latent z_i ~ N(0,1) that sets both the planned
/// out-degree (power-law quantile of Phi(z_i)) and the attractiveness
/// exp(popularity_spread * z_i) used to pick follow targets. Latent beauty is
/// mu_i = beauty_mean + beauty_sd * (r z_i + sqrt(1 - r^2) e_i), with r chosen
/// so the rank correlation between out-degree and mu is degree_beauty_rho.
/// Photo beauty is mu_i plus N(0, photo_noise_sd), clipped to [0,1].
///
/// Planted effects:
///  - assortativity: per-user probability U^((1-a)/a) that a link goes to a
///    user of similar beauty rank instead of an attractiveness-weighted pick.
///  - influence_strength f: photos in week w+1 shift by
///    f * max(0, mean mu of week-w targets - mu_i).
///  - churn_imbalance_strength c: weekly hazard of permanently stopping
///    uploads is base_churn * (1 + c * max(0, delta_i)), with delta_i the
///    relative excess of the followees' mean mu over mu_i. Churned users keep
///    following.
///  - superstar_fraction: users with beauty at least beauty_mean + 2 sd whose
///    attractiveness and favorite rate are multiplied by superstar_boost.
struct SynthConfig {
  std::size_t n_users = 1000;
  int n_weeks = 52;
  double photos_per_week = 2.0;  // mean uploads in an active week, at least 1
  double activity_prob = 0.8;
  double beauty_mean = 0.3;
  double beauty_sd = 0.08;
  double beauty_tail = 0.0;  // weight of an exponential right tail on mu, in sd units
  double photo_noise_sd = 0.05;
  double degree_exponent = 2.5;
  std::size_t min_out_degree = 10;
  std::size_t max_out_degree = 200;
  int join_spread = 8;  // join weeks are uniform over 0..min(join_spread, n_weeks - 1)
  double initial_link_fraction = 0.4;
  double degree_beauty_rho = 0.25;
  double popularity_spread = 1.0;
  double assortativity = 0.0;
  double assortative_window = 0.02;  // half-width of the beauty-rank window, as a user fraction
  double influence_strength = 0.0;
  double churn_imbalance_strength = 0.0;
  double base_churn = 0.005;
  double superstar_fraction = 0.0;
  double superstar_boost = 20.0;
  double favorites_per_photo = 0.5;
  double groups_per_user = 3.0;
  std::uint64_t seed = 1;
};

/// Throws InputError listing every violated field.
void validate(const SynthConfig& cfg);

SynthConfig parse_synth_config(const nlohmann::json& j);
SynthConfig load_synth_config(const std::filesystem::path& path);
nlohmann::json to_json(const SynthConfig& cfg);

/// Latent per-user quantities behind a generated dataset, by user position
/// (user id = position + 1).
struct SynthTruth {
  std::vector<double> mu;
  std::vector<double> attractiveness;
  std::vector<bool> superstar;
  std::vector<WeekIndex> join_week;
  std::vector<std::optional<WeekIndex>> churn_week;
};

/// Deterministic in the config (including its seed).
EventStreams generate(const SynthConfig& cfg, SynthTruth* truth = nullptr);

}  // namespace nq
