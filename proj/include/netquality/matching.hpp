#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netquality/temporal_graph.hpp"

namespace nq {

inline constexpr std::size_t kNumCovariates = 11;
using CovariateVector = std::array<double, kNumCovariates>;

enum Covariate : std::size_t {
  kIndegree = 0,
  kOutdegree,
  kPhotos,
  kGroups,
  kFavoritesGiven,
  kFavoritesReceived,
  kAverageBeauty,
  kWeeksSinceJoin,
  kNeighborPhotos,
  kNeighborBeauty,
  kNewNeighborPhotos,
};

/// Stable snake_case names, in Covariate order.
const std::array<std::string_view, kNumCovariates>& covariate_names();

/// A user observed at one week. The same user can appear at several weeks.
struct UserWeekInstance {
  UserIndex user = 0;
  WeekIndex week = 0;
  CovariateVector covariates{};
};

class UnbalanceableError : public UndefinedError {
 public:
  using UndefinedError::UndefinedError;
};

struct EligibilityCriteria {
  std::size_t min_out_links = 10;
  std::size_t min_active_weeks = 12;
};

/// Users with final outdegree >= min_out_links and at least min_active_weeks
/// distinct upload weeks, ascending.
std::vector<UserIndex> eligible_users(const TemporalGraph& g, const EligibilityCriteria& criteria = {});

/// Covariates of u at the beginning of week w. Counts cover events before
/// week w, neighbor terms average over the out-neighbors present at that time,
/// and the new-neighbor term averages over links created during week w.
/// nullopt when u or its neighbors have no photo before w.
std::optional<CovariateVector> covariates(const TemporalGraph& g, UserIndex u, WeekIndex w);

enum class NeighborSet { Full, New };

/// Mean of the cumulative (weeks <= w) beauty over u's out-neighbors: the full
/// set present before week w, or the links created during week w. Neighbors
/// without photos are skipped; nullopt when nothing remains.
std::optional<double> neighbor_mean_beauty(const TemporalGraph& g, UserIndex u, WeekIndex w,
                                           NeighborSet set);

/// delta such that own * (1 + delta) = neighbors.
double imbalance_delta(double own, double neighbors);

struct Q4Variant {
  enum class Kind { Any, ExactlyN, Alpha };
  Kind kind = Kind::Any;
  int n = 1;
  double alpha = 0.0;

  static Q4Variant any() { return {}; }
  static Q4Variant exactly(int n) { return {Kind::ExactlyN, n, 0.0}; }
  static Q4Variant with_alpha(double a) { return {Kind::Alpha, 1, a}; }
};

struct GroupOptions {
  EligibilityCriteria eligibility{};
  /// Distinct active weeks required before the observation week.
  std::size_t min_prior_active_weeks = 12;
  int threads = 1;
};

struct Q5Thresholds {
  double control_low = -0.1;
  double control_high = 0.1;
  double treatment_min = 0.3;
};

struct GroupSelection {
  std::vector<UserWeekInstance> treatment;
  std::vector<UserWeekInstance> control;
  std::size_t candidates = 0;             // user-weeks examined
  std::size_t skipped_no_covariates = 0;  // classified but covariates undefined
  std::size_t unclassified = 0;           // examined but in neither group
};

/// Treatment: eligible users active in week w who followed at least one user
/// with higher cumulative beauty that week (refined by the variant). Control:
/// users who followed only users of equal or lower beauty that week.
GroupSelection build_groups_q4(const TemporalGraph& g, const Q4Variant& variant,
                               const GroupOptions& options = {});

/// Splits active user-weeks by the imbalance between own and neighbor beauty:
/// delta in [control_low, control_high] is control, delta >= treatment_min is
/// treatment. Only weeks <= last_week are considered when given.
GroupSelection build_groups_q5(const TemporalGraph& g, const Q5Thresholds& thresholds = {},
                               std::optional<WeekIndex> last_week = {},
                               const GroupOptions& options = {});

/// (mean_t - mean_c) / sample_sd_t. Returns 0 when the treated values are
/// constant and equal to the control mean; throws UnbalanceableError when they
/// are constant and differ. Requires at least two treated values.
double standardized_bias(std::span<const double> treated, std::span<const double> control);
double standardized_bias(std::span<const UserWeekInstance> treated,
                         std::span<const UserWeekInstance> control, std::size_t covariate);

struct BalanceOptions {
  double threshold = 0.25;
  double prune_fraction = 0.01;
  std::size_t max_iterations = 1'000'000;
  /// Covariates that must satisfy the threshold. The others are reported only.
  std::array<bool, kNumCovariates> enforce = all_covariates();

  static constexpr std::array<bool, kNumCovariates> all_covariates() {
    std::array<bool, kNumCovariates> a{};
    a.fill(true);
    return a;
  }
};

struct MatchedGroups {
  bool converged = false;
  std::string failure;                   // reason when not converged
  std::vector<std::size_t> control_kept; // ascending indices into the control seed
  CovariateVector sb_before{};
  CovariateVector sb_after{};            // +-inf marks an unbalanceable covariate
  std::size_t iterations = 0;
};

/// Greedy pruning of the control group until every enforced covariate has
/// |SB| <= threshold. Each round removes, for every violating covariate, the
/// ceil(prune_fraction * |control|) instances with the highest (SB < 0) or
/// lowest (SB > 0) value. Fails, without throwing, once the control group
/// becomes smaller than the treatment group.
/// Throws PreconditionError when |control_seed| < 2 |treatment| or |treatment| < 2.
MatchedGroups balance(std::span<const UserWeekInstance> treatment,
                      std::span<const UserWeekInstance> control_seed,
                      const BalanceOptions& options = {});

struct DeltaBOutcome {
  double value = 0.0;          // mean ratio over used instances
  std::vector<double> ratios;  // per used instance, input order
  std::size_t no_next_week = 0;
  std::size_t zero_prior = 0;
};

/// Mean over instances of (beauty in week w+1) / (cumulative beauty up to week w).
/// Instances without week-(w+1) photos or with zero prior beauty are counted
/// and left out. Throws UndefinedError when no instance is usable.
DeltaBOutcome outcome_delta_b(const TemporalGraph& g, std::span<const UserWeekInstance> group);

/// 1 for instances with no photo in weeks w+1..w+n, else 0.
std::vector<double> inactivity_indicators(const TemporalGraph& g,
                                          std::span<const UserWeekInstance> group, int n);

struct InactivityOutcome {
  double p_treatment = 0.0;
  double p_control = 0.0;
  double ratio = 0.0;
};

/// p_t / p_c of instances inactive for n weeks after their observation week.
/// Throws UndefinedError when p_c is zero.
InactivityOutcome outcome_inactivity(const TemporalGraph& g,
                                     std::span<const UserWeekInstance> treatment,
                                     std::span<const UserWeekInstance> control, int n);

// --- bootstrap confidence intervals -----------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Percentile bootstrap interval of the mean.
Interval bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                           std::uint64_t seed, double level = 0.95);

/// Percentile bootstrap interval of mean(a) - mean(b), resampling each side independently.
Interval bootstrap_diff_ci(std::span<const double> a, std::span<const double> b,
                           std::size_t resamples, std::uint64_t seed, double level = 0.95);

/// Percentile bootstrap interval of mean(a) / mean(b); resamples with mean(b) = 0 are skipped.
Interval bootstrap_ratio_ci(std::span<const double> a, std::span<const double> b,
                            std::size_t resamples, std::uint64_t seed, double level = 0.95);

}  // namespace nq
