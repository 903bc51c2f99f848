#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netquality/temporal_graph.hpp"

namespace nq {

/// Per-user mean beauty, indexed by UserIndex. Users without photos (in the
/// considered range) have no value.
class BeautyProfiles {
 public:
  BeautyProfiles() = default;
  explicit BeautyProfiles(std::vector<std::optional<double>> values) : values_(std::move(values)) {}

  /// b̄(i) over all photos, or over photos in weeks <= up_to.
  static BeautyProfiles from_graph(const TemporalGraph& g, std::optional<WeekIndex> up_to = {});

  std::size_t size() const { return values_.size(); }
  bool has(UserIndex u) const { return u < values_.size() && values_[u].has_value(); }
  double at(UserIndex u) const { return *values_.at(u); }
  const std::optional<double>& operator[](UserIndex u) const { return values_[u]; }
  std::span<const std::optional<double>> values() const { return values_; }

  std::size_t count() const;
  /// Defined values in UserIndex order.
  std::vector<double> defined_values() const;
  double mean() const;
  double median() const;

 private:
  std::vector<std::optional<double>> values_;
};

/// Mean beauty of u's photos, optionally restricted to weeks <= up_to.
/// nullopt when there is no photo in range.
std::optional<double> user_beauty(const TemporalGraph& g, UserId u,
                                  std::optional<WeekIndex> up_to = {});

// --- inequality ------------------------------------------------------------

/// Gini index, mean-absolute-difference form sum|xi-xj| / (2 n^2 mean).
/// Requires non-negative values, not all zero (UndefinedError otherwise).
double gini(std::span<const double> values);

struct LorenzPoint {
  double population_share = 0.0;
  double resource_share = 0.0;
};

/// n+1 cumulative-share points over the ascending-sorted values, from (0,0) to (1,1).
std::vector<LorenzPoint> lorenz_curve(std::span<const double> values);

/// 1 - 2 * (trapezoid area under the curve).
double gini_from_lorenz(std::span<const LorenzPoint> curve);

// --- correlation spectrum ----------------------------------------------------

struct SpectrumBin {
  int index = 0;
  double center = 0.0;
  double b_nn = 0.0;
  std::size_t count = 0;
  double variance = 0.0;  // population variance of the member users' neighbor means
};

struct SpectrumCurve {
  int bins = 0;
  std::vector<SpectrumBin> points;  // non-empty bins, ascending index
  std::size_t users = 0;            // users contributing to some bin
};

/// Bin of a beauty value under [k/bins, (k+1)/bins) with the last bin closed.
int beauty_bin(double beauty, int bins);

/// Mean beauty of the profiled out-neighbors of each user; nullopt when none.
std::vector<std::optional<double>> out_neighbor_mean_beauty(const GraphSnapshot& snapshot,
                                                            const BeautyProfiles& profiles,
                                                            int threads = 1);

/// b_nn(k): users bucketed by their own beauty, averaged over the mean beauty
/// of their profiled out-neighbors. Users with no profiled out-neighbor are left out.
SpectrumCurve correlation_spectrum(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                   int bins = 100, int threads = 1);

/// Spearman correlation between bin centers and b_nn over the non-empty bins.
double spectrum_rank_correlation(const SpectrumCurve& curve);

/// Count-weighted least-squares slope of b_nn against bin center.
double spectrum_weighted_slope(const SpectrumCurve& curve);

// --- majority illusion -------------------------------------------------------

enum class ThresholdKind { Mean, Median };

struct IllusionReport {
  double threshold = 0.0;
  /// Fraction of profiled users with beauty above the threshold.
  double q = 0.0;
  /// Per node: fraction of profiled out-neighbors above the threshold.
  std::vector<std::optional<double>> neighbor_fraction;
  /// Share of nodes with >= 1 profiled out-neighbor whose fraction exceeds q.
  double share = 0.0;
  std::size_t nodes_considered = 0;
  std::size_t profiled_users = 0;
};

IllusionReport majority_illusion(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 ThresholdKind kind = ThresholdKind::Mean);
IllusionReport majority_illusion(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 double threshold);

/// Uniform random permutation of the defined values over the profiled users.
BeautyProfiles shuffle_null_model(const BeautyProfiles& profiles, std::uint64_t seed);

// --- degree / beauty ---------------------------------------------------------

enum class DegreeDirection { In, Out };

/// Spearman correlation between degree and beauty over profiled users.
double degree_beauty_correlation(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 DegreeDirection direction);

}  // namespace nq
