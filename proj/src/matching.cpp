#include "netquality/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "netquality/parallel.hpp"

namespace nq {

const std::array<std::string_view, kNumCovariates>& covariate_names() {
  static const std::array<std::string_view, kNumCovariates> names = {
      "indegree",          "outdegree",          "photos_uploaded",
      "group_memberships", "favorites_given",    "favorites_received",
      "average_beauty",    "weeks_since_join",   "neighbor_photos_uploaded",
      "neighbor_average_beauty", "new_neighbor_photos_uploaded",
  };
  return names;
}

std::vector<UserIndex> eligible_users(const TemporalGraph& g, const EligibilityCriteria& criteria) {
  std::vector<UserIndex> out;
  for (UserIndex u = 0; u < g.num_users(); ++u)
    if (g.out_edges(u).size() >= criteria.min_out_links &&
        g.activity_weeks(u).size() >= criteria.min_active_weeks)
      out.push_back(u);
  return out;
}

std::optional<CovariateVector> covariates(const TemporalGraph& g, UserIndex u, WeekIndex w) {
  const auto own_beauty = g.mean_beauty_before(u, w);
  if (!own_beauty) return std::nullopt;

  CovariateVector x{};
  x[kIndegree] = static_cast<double>(g.in_degree_before(u, w));
  x[kOutdegree] = static_cast<double>(g.out_degree_before(u, w));
  x[kPhotos] = static_cast<double>(g.photos_before(u, w));
  x[kGroups] = static_cast<double>(g.groups_before(u, w));
  x[kFavoritesGiven] = static_cast<double>(g.favorites_given_before(u, w));
  x[kFavoritesReceived] = static_cast<double>(g.favorites_received_before(u, w));
  x[kAverageBeauty] = *own_beauty;
  x[kWeeksSinceJoin] = static_cast<double>(w - g.join_week(u));

  const auto neighbors = g.out_edges_before(u, w);
  double photo_sum = 0.0, beauty_sum = 0.0;
  std::size_t profiled = 0;
  for (const auto& e : neighbors) {
    photo_sum += static_cast<double>(g.photos_before(e.other, w));
    if (auto b = g.mean_beauty_before(e.other, w)) {
      beauty_sum += *b;
      ++profiled;
    }
  }
  if (profiled == 0) return std::nullopt;
  x[kNeighborPhotos] = photo_sum / static_cast<double>(neighbors.size());
  x[kNeighborBeauty] = beauty_sum / static_cast<double>(profiled);

  const auto fresh = g.out_edges_in_week(u, w);
  double fresh_photos = 0.0;
  for (const auto& e : fresh) fresh_photos += static_cast<double>(g.photos_before(e.other, w));
  x[kNewNeighborPhotos] = fresh.empty() ? 0.0 : fresh_photos / static_cast<double>(fresh.size());
  return x;
}

std::optional<double> neighbor_mean_beauty(const TemporalGraph& g, UserIndex u, WeekIndex w,
                                           NeighborSet set) {
  const auto edges = set == NeighborSet::Full ? g.out_edges_before(u, w) : g.out_edges_in_week(u, w);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : edges) {
    if (auto b = g.mean_beauty_until(e.other, w)) {
      sum += *b;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double imbalance_delta(double own, double neighbors) {
  if (own <= 0.0) throw UndefinedError("imbalance undefined for zero own beauty");
  return (neighbors - own) / own;
}

// ---------------------------------------------------------------------------
// group construction
// ---------------------------------------------------------------------------

namespace {

enum class Side { None, Treatment, Control };

struct PerUser {
  std::vector<UserWeekInstance> treatment;
  std::vector<UserWeekInstance> control;
  std::size_t candidates = 0;
  std::size_t skipped = 0;
  std::size_t unclassified = 0;
};

template <class Classify>
GroupSelection collect_groups(const TemporalGraph& g, const GroupOptions& options,
                              std::optional<WeekIndex> last_week, Classify&& classify) {
  const auto users = eligible_users(g, options.eligibility);
  std::vector<PerUser> parts(users.size());
  parallel_for(users.size(), options.threads, [&](std::size_t k) {
    const UserIndex u = users[k];
    PerUser& part = parts[k];
    const auto weeks = g.activity_weeks(u);
    for (std::size_t i = options.min_prior_active_weeks; i < weeks.size(); ++i) {
      const WeekIndex w = weeks[i];  // exactly i distinct active weeks precede w
      if (last_week && w > *last_week) break;
      const Side side = classify(u, w);
      if (side == Side::None) {
        ++part.unclassified;
        continue;
      }
      ++part.candidates;
      auto x = covariates(g, u, w);
      if (!x) {
        ++part.skipped;
        continue;
      }
      (side == Side::Treatment ? part.treatment : part.control).push_back({u, w, *x});
    }
  });

  GroupSelection out;
  for (auto& p : parts) {
    out.treatment.insert(out.treatment.end(), p.treatment.begin(), p.treatment.end());
    out.control.insert(out.control.end(), p.control.begin(), p.control.end());
    out.candidates += p.candidates;
    out.skipped_no_covariates += p.skipped;
    out.unclassified += p.unclassified;
  }
  out.candidates += out.unclassified;
  return out;
}

}  // namespace

GroupSelection build_groups_q4(const TemporalGraph& g, const Q4Variant& variant,
                               const GroupOptions& options) {
  if (variant.kind == Q4Variant::Kind::ExactlyN && variant.n < 1)
    throw PreconditionError("exactly-n variant needs n >= 1");
  if (variant.kind == Q4Variant::Kind::Alpha && !(variant.alpha >= 0.0))
    throw PreconditionError("alpha variant needs alpha >= 0");

  return collect_groups(g, options, std::nullopt, [&](UserIndex u, WeekIndex w) {
    const auto fresh = g.out_edges_in_week(u, w);
    if (fresh.empty()) return Side::None;
    const auto own = g.mean_beauty_until(u, w);
    if (!own) return Side::None;

    std::size_t classified = 0, higher = 0;
    double sum = 0.0;
    for (const auto& e : fresh) {
      const auto b = g.mean_beauty_until(e.other, w);
      if (!b) continue;  // targets without photos do not count either way
      ++classified;
      sum += *b;
      if (*b > *own) ++higher;
    }
    if (classified == 0) return Side::None;
    if (higher == 0) return Side::Control;

    switch (variant.kind) {
      case Q4Variant::Kind::Any:
        return Side::Treatment;
      case Q4Variant::Kind::ExactlyN:
        return higher == static_cast<std::size_t>(variant.n) ? Side::Treatment : Side::None;
      case Q4Variant::Kind::Alpha:
        return sum / static_cast<double>(classified) >= (1.0 + variant.alpha) * *own ? Side::Treatment
                                                                                    : Side::None;
    }
    return Side::None;
  });
}

GroupSelection build_groups_q5(const TemporalGraph& g, const Q5Thresholds& thresholds,
                               std::optional<WeekIndex> last_week, const GroupOptions& options) {
  return collect_groups(g, options, last_week, [&](UserIndex u, WeekIndex w) {
    const auto own = g.mean_beauty_until(u, w);
    if (!own || *own <= 0.0) return Side::None;
    const auto nbr = neighbor_mean_beauty(g, u, w, NeighborSet::Full);
    if (!nbr) return Side::None;
    // Boundaries are inclusive up to rounding in the prefix means.
    constexpr double eps = 1e-9;
    const double delta = imbalance_delta(*own, *nbr);
    if (delta >= thresholds.control_low - eps && delta <= thresholds.control_high + eps) return Side::Control;
    if (delta >= thresholds.treatment_min - eps) return Side::Treatment;
    return Side::None;
  });
}

// ---------------------------------------------------------------------------
// standardized bias and balancing
// ---------------------------------------------------------------------------

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  bool constant = true;
};

Moments treated_moments(std::span<const double> v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) {
    ss += (x - m.mean) * (x - m.mean);
    if (x != v.front()) m.constant = false;
  }
  m.sd = std::sqrt(ss / (n - 1.0));
  if (m.constant) m.mean = v.front();
  return m;
}

// Returns +-inf for a constant treated covariate whose control mean differs.
double sb_value(const Moments& t, double control_mean) {
  if (t.constant || t.sd == 0.0) {
    const double scale = std::max({1.0, std::abs(t.mean), std::abs(control_mean)});
    if (std::abs(t.mean - control_mean) <= 1e-12 * scale) return 0.0;
    return t.mean > control_mean ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
  }
  return (t.mean - control_mean) / t.sd;
}

}  // namespace

double standardized_bias(std::span<const double> treated, std::span<const double> control) {
  if (treated.size() < 2) throw PreconditionError("standardized bias needs at least two treated values");
  if (control.empty()) throw PreconditionError("standardized bias needs a non-empty control group");
  const Moments t = treated_moments(treated);
  const double cm = std::accumulate(control.begin(), control.end(), 0.0) / static_cast<double>(control.size());
  const double sb = sb_value(t, cm);
  if (std::isinf(sb)) throw UnbalanceableError("treated covariate is constant and differs from the control mean");
  return sb;
}

double standardized_bias(std::span<const UserWeekInstance> treated,
                         std::span<const UserWeekInstance> control, std::size_t covariate) {
  if (covariate >= kNumCovariates) throw PreconditionError("covariate index out of range");
  std::vector<double> t, c;
  t.reserve(treated.size());
  c.reserve(control.size());
  for (const auto& i : treated) t.push_back(i.covariates[covariate]);
  for (const auto& i : control) c.push_back(i.covariates[covariate]);
  return standardized_bias(t, c);
}

MatchedGroups balance(std::span<const UserWeekInstance> treatment,
                      std::span<const UserWeekInstance> control_seed, const BalanceOptions& options) {
  if (treatment.size() < 2) throw PreconditionError("balance needs at least two treated instances");
  if (control_seed.size() < 2 * treatment.size())
    throw PreconditionError("control seed must be at least twice the treatment group (" +
                            std::to_string(control_seed.size()) + " < 2 x " +
                            std::to_string(treatment.size()) + ")");

  std::array<Moments, kNumCovariates> tm;
  {
    std::vector<double> col(treatment.size());
    for (std::size_t c = 0; c < kNumCovariates; ++c) {
      for (std::size_t i = 0; i < treatment.size(); ++i) col[i] = treatment[i].covariates[c];
      tm[c] = treated_moments(col);
    }
  }

  std::vector<std::size_t> alive(control_seed.size());
  std::iota(alive.begin(), alive.end(), 0);

  auto current_sb = [&] {
    CovariateVector sums{};
    for (std::size_t i : alive)
      for (std::size_t c = 0; c < kNumCovariates; ++c) sums[c] += control_seed[i].covariates[c];
    CovariateVector sb{};
    for (std::size_t c = 0; c < kNumCovariates; ++c)
      sb[c] = sb_value(tm[c], sums[c] / static_cast<double>(alive.size()));
    return sb;
  };

  MatchedGroups out;
  auto finish = [&](bool converged, std::string failure, const CovariateVector& sb) {
    out.converged = converged;
    out.failure = std::move(failure);
    out.sb_after = sb;
    std::sort(alive.begin(), alive.end());
    out.control_kept = alive;
    return out;
  };

  for (;;) {
    const CovariateVector sb = current_sb();
    if (out.iterations == 0) out.sb_before = sb;

    std::vector<std::size_t> violating;
    for (std::size_t c = 0; c < kNumCovariates; ++c)
      if (options.enforce[c] && !(std::abs(sb[c]) <= options.threshold)) violating.push_back(c);
    if (violating.empty()) return finish(true, {}, sb);
    if (out.iterations >= options.max_iterations)
      return finish(false, "iteration limit reached", sb);

    const auto quantum = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(options.prune_fraction * static_cast<double>(alive.size()))));
    for (std::size_t c : violating) {
      const bool drop_highest = sb[c] < 0.0;
      const std::size_t k = std::min(quantum, alive.size());
      auto extreme_first = [&](std::size_t a, std::size_t b) {
        const double va = control_seed[a].covariates[c], vb = control_seed[b].covariates[c];
        if (va != vb) return drop_highest ? va > vb : va < vb;
        return a < b;
      };
      std::nth_element(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(k - 1), alive.end(),
                       extreme_first);
      alive.erase(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(k));
      if (alive.size() < treatment.size()) {
        ++out.iterations;
        return finish(false,
                      "control group fell below the treatment size; restart with a different seed "
                      "control group",
                      alive.empty() ? sb : current_sb());
      }
    }
    ++out.iterations;
  }
}

// ---------------------------------------------------------------------------
// outcomes
// ---------------------------------------------------------------------------

DeltaBOutcome outcome_delta_b(const TemporalGraph& g, std::span<const UserWeekInstance> group) {
  DeltaBOutcome out;
  double sum = 0.0;
  for (const auto& inst : group) {
    const auto next = g.mean_beauty_in_week(inst.user, inst.week + 1);
    if (!next) {
      ++out.no_next_week;
      continue;
    }
    const auto prior = g.mean_beauty_until(inst.user, inst.week);
    if (!prior || *prior <= 0.0) {
      ++out.zero_prior;
      continue;
    }
    const double r = *next / *prior;
    out.ratios.push_back(r);
    sum += r;
  }
  if (out.ratios.empty()) throw UndefinedError("no instance with a defined beauty ratio");
  out.value = sum / static_cast<double>(out.ratios.size());
  return out;
}

std::vector<double> inactivity_indicators(const TemporalGraph& g,
                                          std::span<const UserWeekInstance> group, int n) {
  if (n < 1) throw PreconditionError("inactivity horizon must be >= 1");
  std::vector<double> out;
  out.reserve(group.size());
  for (const auto& inst : group)
    out.push_back(g.photos_in_weeks(inst.user, inst.week + 1, inst.week + n) == 0 ? 1.0 : 0.0);
  return out;
}

InactivityOutcome outcome_inactivity(const TemporalGraph& g,
                                     std::span<const UserWeekInstance> treatment,
                                     std::span<const UserWeekInstance> control, int n) {
  if (treatment.empty() || control.empty())
    throw PreconditionError("inactivity ratio needs non-empty groups");
  const auto it = inactivity_indicators(g, treatment, n);
  const auto ic = inactivity_indicators(g, control, n);
  InactivityOutcome out;
  out.p_treatment = std::accumulate(it.begin(), it.end(), 0.0) / static_cast<double>(it.size());
  out.p_control = std::accumulate(ic.begin(), ic.end(), 0.0) / static_cast<double>(ic.size());
  if (out.p_control == 0.0) throw UndefinedError("inactivity ratio undefined: no inactive control instance");
  out.ratio = out.p_treatment / out.p_control;
  return out;
}

// ---------------------------------------------------------------------------
// bootstrap
// ---------------------------------------------------------------------------

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(sorted.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(std::vector<double> stats, double level) {
  if (stats.empty()) throw UndefinedError("bootstrap produced no valid resample");
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

double resampled_mean(std::span<const double> v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[pick(rng)];
  return s / static_cast<double>(v.size());
}

void check_bootstrap_args(std::size_t resamples, double level) {
  if (resamples == 0) throw PreconditionError("bootstrap needs at least one resample");
  if (!(level > 0.0 && level < 1.0)) throw PreconditionError("confidence level must be in (0,1)");
}

}  // namespace

Interval bootstrap_mean_ci(std::span<const double> values, std::size_t resamples, std::uint64_t seed,
                           double level) {
  check_bootstrap_args(resamples, level);
  if (values.empty()) throw PreconditionError("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::vector<double> stats(resamples);
  for (auto& s : stats) s = resampled_mean(values, rng);
  return percentile_interval(std::move(stats), level);
}

Interval bootstrap_diff_ci(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                           std::uint64_t seed, double level) {
  check_bootstrap_args(resamples, level);
  if (a.empty() || b.empty()) throw PreconditionError("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::vector<double> stats(resamples);
  for (auto& s : stats) {
    const double ma = resampled_mean(a, rng);
    s = ma - resampled_mean(b, rng);
  }
  return percentile_interval(std::move(stats), level);
}

Interval bootstrap_ratio_ci(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                            std::uint64_t seed, double level) {
  check_bootstrap_args(resamples, level);
  if (a.empty() || b.empty()) throw PreconditionError("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::vector<double> stats;
  stats.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    const double ma = resampled_mean(a, rng);
    const double mb = resampled_mean(b, rng);
    if (mb > 0.0) stats.push_back(ma / mb);
  }
  return percentile_interval(std::move(stats), level);
}

}  // namespace nq
