#include "netquality/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "netquality/random.hpp"

namespace nq {

void validate(const SynthConfig& c) {
  std::vector<std::string> bad;
  auto require = [&](bool ok, const char* field, const char* rule) {
    if (!ok) bad.push_back(std::string(field) + " " + rule);
  };
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  require(c.n_users >= 2, "n_users", "must be >= 2");
  require(c.n_weeks >= 1, "n_weeks", "must be >= 1");
  require(c.photos_per_week >= 1.0, "photos_per_week", "must be >= 1");
  require(probability(c.activity_prob), "activity_prob", "must be in [0,1]");
  require(c.beauty_mean > 0.0 && c.beauty_mean < 1.0, "beauty_mean", "must be in (0,1)");
  require(c.beauty_sd >= 0.0, "beauty_sd", "must be >= 0");
  require(c.beauty_tail >= 0.0, "beauty_tail", "must be >= 0");
  require(c.photo_noise_sd >= 0.0, "photo_noise_sd", "must be >= 0");
  require(c.degree_exponent > 1.0, "degree_exponent", "must be > 1");
  require(c.min_out_degree >= 1, "min_out_degree", "must be >= 1");
  require(c.max_out_degree >= c.min_out_degree, "max_out_degree", "must be >= min_out_degree");
  require(c.max_out_degree < c.n_users, "max_out_degree", "must be < n_users");
  require(c.join_spread >= 0, "join_spread", "must be >= 0");
  require(probability(c.initial_link_fraction), "initial_link_fraction", "must be in [0,1]");
  require(c.degree_beauty_rho >= -1.0 && c.degree_beauty_rho <= 1.0, "degree_beauty_rho", "must be in [-1,1]");
  require(c.popularity_spread >= 0.0, "popularity_spread", "must be >= 0");
  require(probability(c.assortativity), "assortativity", "must be in [0,1]");
  require(c.assortative_window > 0.0 && c.assortative_window <= 1.0, "assortative_window", "must be in (0,1]");
  require(c.influence_strength >= 0.0, "influence_strength", "must be >= 0");
  require(c.churn_imbalance_strength >= 0.0, "churn_imbalance_strength", "must be >= 0");
  require(probability(c.base_churn), "base_churn", "must be in [0,1]");
  require(probability(c.superstar_fraction), "superstar_fraction", "must be in [0,1]");
  require(c.superstar_boost >= 1.0, "superstar_boost", "must be >= 1");
  require(c.favorites_per_photo >= 0.0, "favorites_per_photo", "must be >= 0");
  require(c.groups_per_user >= 0.0, "groups_per_user", "must be >= 0");
  if (bad.empty()) return;
  std::string msg = "invalid synth config:";
  for (const auto& b : bad) msg += " " + b + ";";
  msg.pop_back();
  throw InputError(msg);
}

SynthConfig parse_synth_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("synth config must be a JSON object");
  SynthConfig c;
  static const std::vector<std::string> known = {
      "n_users", "n_weeks", "photos_per_week", "activity_prob", "beauty_mean", "beauty_sd", "beauty_tail",
      "photo_noise_sd", "degree_exponent", "min_out_degree", "max_out_degree", "join_spread",
      "initial_link_fraction", "degree_beauty_rho", "popularity_spread", "assortativity", "assortative_window",
      "influence_strength", "churn_imbalance_strength", "base_churn", "superstar_fraction", "superstar_boost",
      "favorites_per_photo", "groups_per_user", "seed"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError("unknown synth config field '" + key + "'");
  try {
    c.n_users = j.value("n_users", c.n_users);
    c.n_weeks = j.value("n_weeks", c.n_weeks);
    c.photos_per_week = j.value("photos_per_week", c.photos_per_week);
    c.activity_prob = j.value("activity_prob", c.activity_prob);
    c.beauty_mean = j.value("beauty_mean", c.beauty_mean);
    c.beauty_sd = j.value("beauty_sd", c.beauty_sd);
    c.beauty_tail = j.value("beauty_tail", c.beauty_tail);
    c.photo_noise_sd = j.value("photo_noise_sd", c.photo_noise_sd);
    c.degree_exponent = j.value("degree_exponent", c.degree_exponent);
    c.min_out_degree = j.value("min_out_degree", c.min_out_degree);
    c.max_out_degree = j.value("max_out_degree", c.max_out_degree);
    c.join_spread = j.value("join_spread", c.join_spread);
    c.initial_link_fraction = j.value("initial_link_fraction", c.initial_link_fraction);
    c.degree_beauty_rho = j.value("degree_beauty_rho", c.degree_beauty_rho);
    c.popularity_spread = j.value("popularity_spread", c.popularity_spread);
    c.assortativity = j.value("assortativity", c.assortativity);
    c.assortative_window = j.value("assortative_window", c.assortative_window);
    c.influence_strength = j.value("influence_strength", c.influence_strength);
    c.churn_imbalance_strength = j.value("churn_imbalance_strength", c.churn_imbalance_strength);
    c.base_churn = j.value("base_churn", c.base_churn);
    c.superstar_fraction = j.value("superstar_fraction", c.superstar_fraction);
    c.superstar_boost = j.value("superstar_boost", c.superstar_boost);
    c.favorites_per_photo = j.value("favorites_per_photo", c.favorites_per_photo);
    c.groups_per_user = j.value("groups_per_user", c.groups_per_user);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("synth config: ") + e.what());
  }
  validate(c);
  return c;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open synth config", path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what(), path.string());
  }
  return parse_synth_config(j);
}

nlohmann::json to_json(const SynthConfig& c) {
  return {{"n_users", c.n_users},
          {"n_weeks", c.n_weeks},
          {"photos_per_week", c.photos_per_week},
          {"activity_prob", c.activity_prob},
          {"beauty_mean", c.beauty_mean},
          {"beauty_sd", c.beauty_sd},
          {"beauty_tail", c.beauty_tail},
          {"photo_noise_sd", c.photo_noise_sd},
          {"degree_exponent", c.degree_exponent},
          {"min_out_degree", c.min_out_degree},
          {"max_out_degree", c.max_out_degree},
          {"join_spread", c.join_spread},
          {"initial_link_fraction", c.initial_link_fraction},
          {"degree_beauty_rho", c.degree_beauty_rho},
          {"popularity_spread", c.popularity_spread},
          {"assortativity", c.assortativity},
          {"assortative_window", c.assortative_window},
          {"influence_strength", c.influence_strength},
          {"churn_imbalance_strength", c.churn_imbalance_strength},
          {"base_churn", c.base_churn},
          {"superstar_fraction", c.superstar_fraction},
          {"superstar_boost", c.superstar_boost},
          {"favorites_per_photo", c.favorites_per_photo},
          {"groups_per_user", c.groups_per_user},
          {"seed", c.seed}};
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxTargetDraws = 64;
constexpr int kPhotoIdBits = 24;

enum Stream : std::uint64_t { kLinks = 0, kPhotos, kChurn, kFavorites, kGroups, kStreams };

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

Timestamp random_time_in_week(WeekIndex w, std::mt19937_64& rng) {
  return week_start(w) + std::uniform_int_distribution<Timestamp>(0, kSecondsPerWeek - 1)(rng);
}

struct Population {
  std::vector<double> mu;
  std::vector<double> attract;
  std::vector<bool> superstar;
  std::vector<WeekIndex> join;
  std::vector<std::size_t> degree;
  std::vector<double> assortative_p;
  std::vector<std::size_t> by_rank;  // users ordered by mu
  std::vector<std::size_t> rank;
  double mean_attract = 1.0;
};

Population draw_population(const SynthConfig& c) {
  const std::size_t n = c.n_users;
  Population p;
  p.mu.resize(n);
  p.attract.resize(n);
  p.superstar.assign(n, false);
  p.join.resize(n);
  p.degree.resize(n);
  p.assortative_p.resize(n);

  std::mt19937_64 rng(derive_seed(c.seed, ~std::uint64_t{0}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<WeekIndex> join_week(0, std::min(c.join_spread, c.n_weeks - 1));

  // Pearson correlation of the latent normals giving the requested rank correlation.
  const double r = 2.0 * std::sin(M_PI * c.degree_beauty_rho / 6.0);
  const double x_min = static_cast<double>(c.min_out_degree);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = normal(rng);
    const double e = normal(rng);
    const double tail = expo(rng);
    const double u = unit(rng);
    double mu = c.beauty_mean + c.beauty_sd * (r * z + std::sqrt(std::max(0.0, 1.0 - r * r)) * e);
    if (c.beauty_tail > 0.0) mu += c.beauty_tail * c.beauty_sd * (tail - 1.0);
    p.mu[i] = std::clamp(mu, 0.02, 0.98);
    p.attract[i] = std::exp(c.popularity_spread * z);
    const double pareto = x_min * std::pow(1.0 - std::min(normal_cdf(z), 1.0 - 1e-12), -1.0 / (c.degree_exponent - 1.0));
    p.degree[i] = std::min(c.max_out_degree, static_cast<std::size_t>(std::floor(pareto)));
    p.join[i] = join_week(rng);
    const double a = c.assortativity;
    p.assortative_p[i] = a <= 0.0 ? 0.0 : a >= 1.0 ? 1.0 : std::pow(u, (1.0 - a) / a);
  }

  const auto stars = static_cast<std::size_t>(std::llround(c.superstar_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < stars; ++k) {
    const std::size_t i = order[k];
    p.superstar[i] = true;
    p.mu[i] = std::clamp(std::max(p.mu[i], c.beauty_mean + 2.0 * c.beauty_sd), 0.02, 0.98);
    p.attract[i] *= c.superstar_boost;
  }
  p.mean_attract = std::accumulate(p.attract.begin(), p.attract.end(), 0.0) / static_cast<double>(n);

  p.by_rank.resize(n);
  std::iota(p.by_rank.begin(), p.by_rank.end(), 0);
  std::stable_sort(p.by_rank.begin(), p.by_rank.end(), [&](std::size_t a, std::size_t b) { return p.mu[a] < p.mu[b]; });
  p.rank.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.rank[p.by_rank[k]] = k;
  return p;
}

}  // namespace

EventStreams generate(const SynthConfig& c, SynthTruth* truth) {
  validate(c);
  const std::size_t n = c.n_users;
  const WeekIndex weeks = c.n_weeks;
  const Timestamp horizon_end = week_start(weeks);
  const Population pop = draw_population(c);
  std::discrete_distribution<std::size_t> by_attractiveness(pop.attract.begin(), pop.attract.end());
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(c.assortative_window * static_cast<double>(n))));
  const std::size_t group_pool = std::max<std::size_t>(10, n / 20);

  EventStreams out;
  if (truth) {
    truth->mu = pop.mu;
    truth->attractiveness = pop.attract;
    truth->superstar = pop.superstar;
    truth->join_week = pop.join;
    truth->churn_week.assign(n, std::nullopt);
  }

  std::vector<std::size_t> followees;
  std::vector<std::vector<std::size_t>> link_weeks(static_cast<std::size_t>(weeks));
  for (std::size_t i = 0; i < n; ++i) {
    // Independent streams per user and purpose, so a planted effect on one
    // user or one process leaves every other draw unchanged.
    std::array<std::mt19937_64, kStreams> rng;
    for (std::uint64_t s = 0; s < kStreams; ++s) rng[s].seed(derive_seed(c.seed, i * kStreams + s));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const WeekIndex join = pop.join[i];

    // Link schedule: a share at the join week, the rest uniformly afterwards.
    for (auto& v : link_weeks) v.clear();
    const std::size_t degree = pop.degree[i];
    const auto initial = static_cast<std::size_t>(std::llround(c.initial_link_fraction * static_cast<double>(degree)));
    std::uniform_int_distribution<WeekIndex> later(std::min(join + 1, weeks - 1), weeks - 1);
    for (std::size_t k = 0; k < degree; ++k)
      link_weeks[static_cast<std::size_t>(k < initial ? join : later(rng[kLinks]))].push_back(k);

    followees.clear();
    double followee_mu = 0.0;
    double shift = 0.0;  // applied to this week's photos
    bool churned = false;
    std::size_t photo_count = 0;
    std::poisson_distribution<int> extra_photos(c.photos_per_week - 1.0);
    std::normal_distribution<double> noise(0.0, c.photo_noise_sd);
    const double fav_rate = c.favorites_per_photo * pop.attract[i] / pop.mean_attract;

    for (WeekIndex w = join; w < weeks; ++w) {
      const double hazard_draw = unit(rng[kChurn]);
      if (w > join && !churned) {
        double delta = 0.0;
        if (!followees.empty())
          delta = (followee_mu / static_cast<double>(followees.size()) - pop.mu[i]) / pop.mu[i];
        const double hazard =
            std::min(1.0, c.base_churn * (1.0 + c.churn_imbalance_strength * std::max(0.0, delta)));
        if (hazard_draw < hazard) {
          churned = true;
          if (truth) truth->churn_week[i] = w;
        }
      }

      double new_mu = 0.0;
      std::size_t new_links = 0;
      for (std::size_t k = 0; k < link_weeks[static_cast<std::size_t>(w)].size(); ++k) {
        const bool assortative = unit(rng[kLinks]) < pop.assortative_p[i];
        std::optional<std::size_t> target;
        for (int attempt = 0; attempt < kMaxTargetDraws && !target; ++attempt) {
          std::size_t t;
          if (assortative) {
            const std::size_t r = pop.rank[i];
            const std::size_t lo = r >= window ? r - window : 0;
            const std::size_t hi = std::min(n - 1, r + window);
            t = pop.by_rank[std::uniform_int_distribution<std::size_t>(lo, hi)(rng[kLinks])];
          } else {
            t = by_attractiveness(rng[kLinks]);
          }
          if (t == i || pop.join[t] > w) continue;
          if (std::find(followees.begin(), followees.end(), t) != followees.end()) continue;
          target = t;
        }
        const Timestamp when = random_time_in_week(w, rng[kLinks]);
        if (!target) continue;
        followees.push_back(*target);
        followee_mu += pop.mu[*target];
        new_mu += pop.mu[*target];
        ++new_links;
        out.follows.push_back({UserId{i + 1}, UserId{*target + 1}, when});
      }

      const bool active = unit(rng[kPhotos]) < c.activity_prob;
      const int uploads = 1 + extra_photos(rng[kPhotos]);
      for (int k = 0; k < uploads; ++k) {
        const double e = noise(rng[kPhotos]);
        const Timestamp when = random_time_in_week(w, rng[kPhotos]);
        if (!active || churned) continue;
        const std::uint64_t photo = (static_cast<std::uint64_t>(i + 1) << kPhotoIdBits) | photo_count++;
        out.photos.push_back({UserId{i + 1}, photo, when, std::clamp(pop.mu[i] + shift + e, 0.0, 1.0)});

        const int favs = std::poisson_distribution<int>(fav_rate)(rng[kFavorites]);
        for (int f = 0; f < favs; ++f) {
          auto actor = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng[kFavorites]);
          if (actor >= i) ++actor;
          const Timestamp lag = std::uniform_int_distribution<Timestamp>(0, 2 * kSecondsPerWeek)(rng[kFavorites]);
          out.favorites.push_back({UserId{actor + 1}, photo, std::min(when + lag, horizon_end - 1)});
        }
      }

      shift = new_links == 0 ? 0.0
                             : c.influence_strength *
                                   std::max(0.0, new_mu / static_cast<double>(new_links) - pop.mu[i]);
    }

    const auto memberships = std::min<std::size_t>(
        group_pool, static_cast<std::size_t>(std::poisson_distribution<int>(c.groups_per_user)(rng[kGroups])));
    std::vector<std::size_t> groups(group_pool);
    std::iota(groups.begin(), groups.end(), 0);
    for (std::size_t k = 0; k < memberships; ++k) {
      const auto pick = std::uniform_int_distribution<std::size_t>(k, group_pool - 1)(rng[kGroups]);
      std::swap(groups[k], groups[pick]);
      const WeekIndex w = std::uniform_int_distribution<WeekIndex>(join, weeks - 1)(rng[kGroups]);
      out.groups.push_back({UserId{i + 1}, groups[k] + 1, random_time_in_week(w, rng[kGroups])});
    }
  }
  return out;
}

}  // namespace nq
