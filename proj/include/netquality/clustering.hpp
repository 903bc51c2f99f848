#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "netquality/metrics.hpp"

namespace nq {

using Point3 = std::array<double, 3>;

enum Feature : std::size_t { kBeauty = 0, kFavsPerPhoto = 1, kFollowers = 2 };

struct UserFeatures {
  std::vector<UserIndex> users;  // users with at least one photo, ascending
  std::vector<Point3> raw;       // beauty, favorites per photo, indegree
  std::vector<Point3> points;    // log1p then min-max scaled to [0,1]
  std::array<bool, 3> degenerate{};  // dimension had max == min and was set to 0
};

/// log(1 + x) followed by per-dimension min-max scaling. A constant dimension
/// maps to 0 for every point and is flagged.
std::vector<Point3> normalize_features(std::span<const Point3> raw, std::array<bool, 3>* degenerate = nullptr);

/// Features of every user with photos, taken over the whole dataset.
UserFeatures features(const TemporalGraph& g, const BeautyProfiles& profiles);

struct KMeansOptions {
  std::size_t max_iterations = 300;
  int threads = 1;
};

struct ClusterModel {
  std::vector<Point3> centroids;
  std::vector<std::size_t> assignment;
  double inertia = 0.0;                // within-cluster sum of squares
  std::vector<double> inertia_history; // after each assignment step
  std::size_t iterations = 0;

  std::size_t k() const { return centroids.size(); }
};

/// Lloyd iterations from a seeded k-means++ start, until the assignment is
/// stable or max_iterations. An emptied cluster is moved to the point farthest
/// from its centroid. Throws PreconditionError when K is 0 or exceeds the point count.
ClusterModel kmeans(std::span<const Point3> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Best (lowest inertia) of `restarts` seeded runs.
ClusterModel kmeans_best(std::span<const Point3> points, std::size_t k, std::uint64_t seed,
                         std::size_t restarts, const KMeansOptions& options = {});

struct GapOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t references = 10;
  std::size_t restarts = 3;
  KMeansOptions kmeans{};
};

struct GapResult {
  std::size_t selected_k = 0;
  std::vector<std::size_t> ks;
  std::vector<double> log_w;
  std::vector<double> gap;
  std::vector<double> s;  // sd of the reference log W times sqrt(1 + 1/B)
};

/// Gap statistic against uniform references over the bounding box. Selects the
/// smallest K with Gap(K) >= Gap(K+1) - s(K+1), or k_max when none qualifies.
GapResult gap_statistic(std::span<const Point3> points, std::uint64_t seed, const GapOptions& options = {});

enum class ClusterLabel { LowQuality, ForlornBeauty, Regular, Superstar };

std::string_view to_string(ClusterLabel label);

/// Superstar: highest followers. Of the rest, ForlornBeauty: highest beauty,
/// LowQuality: lowest beauty, Regular: the remaining one. Ties prefer higher
/// favorites per photo, then the lower cluster index. nullopt unless K = 4.
std::optional<std::vector<ClusterLabel>> label_clusters(std::span<const Point3> centroids);

}  // namespace nq
