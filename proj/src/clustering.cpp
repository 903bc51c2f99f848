#include "netquality/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "netquality/parallel.hpp"
#include "netquality/random.hpp"

namespace nq {

std::vector<Point3> normalize_features(std::span<const Point3> raw, std::array<bool, 3>* degenerate) {
  std::vector<Point3> out(raw.size());
  std::array<bool, 3> flags{};
  for (std::size_t d = 0; d < 3; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!(raw[i][d] >= 0.0)) throw PreconditionError("features must be non-negative");
      out[i][d] = std::log1p(raw[i][d]);
      lo = std::min(lo, out[i][d]);
      hi = std::max(hi, out[i][d]);
    }
    flags[d] = !(hi > lo);
    for (auto& p : out) p[d] = flags[d] ? 0.0 : (p[d] - lo) / (hi - lo);
  }
  if (degenerate) *degenerate = flags;
  return out;
}

UserFeatures features(const TemporalGraph& g, const BeautyProfiles& profiles) {
  UserFeatures f;
  for (UserIndex u = 0; u < g.num_users(); ++u) {
    const auto photos = g.photos(u).size();
    if (photos == 0 || !profiles.has(u)) continue;
    f.users.push_back(u);
    f.raw.push_back({profiles.at(u), static_cast<double>(g.favorites_received(u)) / static_cast<double>(photos),
                     static_cast<double>(g.in_edges(u).size())});
  }
  f.points = normalize_features(f.raw, &f.degenerate);
  return f;
}

// ---------------------------------------------------------------------------

namespace {

double sq_dist(const Point3& a, const Point3& b) {
  const double x = a[0] - b[0], y = a[1] - b[1], z = a[2] - b[2];
  return x * x + y * y + z * z;
}

std::size_t nearest(const Point3& p, std::span<const Point3> centroids) {
  std::size_t best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Point3> kmeanspp(std::span<const Point3> points, std::size_t k, std::mt19937_64& rng) {
  std::vector<Point3> centroids;
  centroids.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centroids.push_back(points[pick(rng)]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = sq_dist(points[i], centroids[0]);
  while (centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t next;
    if (total > 0.0) {
      std::discrete_distribution<std::size_t> weighted(d2.begin(), d2.end());
      next = weighted(rng);
    } else {
      next = pick(rng);
    }
    centroids.push_back(points[next]);
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
  }
  return centroids;
}

}  // namespace

ClusterModel kmeans(std::span<const Point3> points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  if (k == 0) throw PreconditionError("kmeans: K must be positive");
  if (k > points.size()) throw PreconditionError("kmeans: K exceeds the number of points");
  std::mt19937_64 rng(seed);
  ClusterModel m;
  m.centroids = kmeanspp(points, k, rng);
  m.assignment.assign(points.size(), k);  // k marks "unassigned"
  std::vector<std::size_t> next(points.size());
  const std::size_t max_iter = std::max<std::size_t>(1, options.max_iterations);

  for (std::size_t it = 0;; ++it) {
    parallel_for(points.size(), options.threads, [&](std::size_t i) { next[i] = nearest(points[i], m.centroids); });
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) inertia += sq_dist(points[i], m.centroids[next[i]]);
    m.inertia = inertia;
    m.inertia_history.push_back(inertia);
    m.iterations = it + 1;
    const bool stable = next == m.assignment;
    m.assignment = next;
    if (stable || it + 1 >= max_iter) break;

    std::vector<Point3> sums(k, Point3{0.0, 0.0, 0.0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t d = 0; d < 3; ++d) sums[m.assignment[i]][d] += points[i][d];
      ++counts[m.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < 3; ++d) m.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = sq_dist(points[i], m.centroids[m.assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      m.centroids[c] = points[far];
      m.assignment[far] = c;
    }
  }
  return m;
}

ClusterModel kmeans_best(std::span<const Point3> points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                         const KMeansOptions& options) {
  ClusterModel best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    auto m = kmeans(points, k, derive_seed(seed, r), options);
    if (r == 0 || m.inertia < best.inertia) best = std::move(m);
  }
  return best;
}

GapResult gap_statistic(std::span<const Point3> points, std::uint64_t seed, const GapOptions& options) {
  if (points.size() < 2) throw PreconditionError("gap_statistic needs at least two points");
  const std::size_t k_min = std::max<std::size_t>(1, options.k_min);
  const std::size_t k_max = std::min(options.k_max, points.size());
  if (k_min > k_max) throw PreconditionError("gap_statistic: empty K range");
  const std::size_t B = std::max<std::size_t>(1, options.references);

  Point3 lo{}, hi{};
  for (std::size_t d = 0; d < 3; ++d) {
    lo[d] = hi[d] = points[0][d];
    for (const auto& p : points) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  std::vector<std::vector<Point3>> refs(B, std::vector<Point3>(points.size()));
  for (std::size_t b = 0; b < B; ++b) {
    std::mt19937_64 rng(derive_seed(seed, 1000 + b));
    for (auto& p : refs[b])
      for (std::size_t d = 0; d < 3; ++d) p[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
  }

  auto log_w = [&](std::span<const Point3> pts, std::size_t k, std::uint64_t s) {
    const double w = kmeans_best(pts, k, s, options.restarts, options.kmeans).inertia;
    return std::log(std::max(w, std::numeric_limits<double>::min()));
  };

  GapResult r;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    r.ks.push_back(k);
    r.log_w.push_back(log_w(points, k, derive_seed(seed, k)));
    std::vector<double> ref(B);
    for (std::size_t b = 0; b < B; ++b) ref[b] = log_w(refs[b], k, derive_seed(seed, 100 * (b + 1) + k));
    const double mean = std::accumulate(ref.begin(), ref.end(), 0.0) / static_cast<double>(B);
    double ss = 0.0;
    for (double x : ref) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(B));
    r.gap.push_back(mean - r.log_w.back());
    r.s.push_back(sd * std::sqrt(1.0 + 1.0 / static_cast<double>(B)));
  }
  r.selected_k = r.ks.back();
  for (std::size_t i = 0; i + 1 < r.ks.size(); ++i) {
    if (r.gap[i] >= r.gap[i + 1] - r.s[i + 1]) {
      r.selected_k = r.ks[i];
      break;
    }
  }
  return r;
}

std::string_view to_string(ClusterLabel label) {
  switch (label) {
    case ClusterLabel::LowQuality: return "LowQuality";
    case ClusterLabel::ForlornBeauty: return "ForlornBeauty";
    case ClusterLabel::Regular: return "Regular";
    case ClusterLabel::Superstar: return "Superstar";
  }
  return "Unknown";
}

std::optional<std::vector<ClusterLabel>> label_clusters(std::span<const Point3> centroids) {
  if (centroids.size() != 4) return std::nullopt;
  std::vector<std::size_t> rest{0, 1, 2, 3};

  // Removes and returns the remaining cluster with the highest (or lowest)
  // value of `feature`; ties prefer higher favorites per photo, then lower index.
  auto pick = [&](std::size_t feature, bool highest) {
    auto it = std::min_element(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      const double fa = centroids[a][feature], fb = centroids[b][feature];
      if (fa != fb) return highest ? fa > fb : fa < fb;
      const double pa = centroids[a][kFavsPerPhoto], pb = centroids[b][kFavsPerPhoto];
      if (pa != pb) return pa > pb;
      return a < b;
    });
    const std::size_t c = *it;
    rest.erase(it);
    return c;
  };

  std::vector<ClusterLabel> labels(4, ClusterLabel::Regular);
  labels[pick(kFollowers, true)] = ClusterLabel::Superstar;
  labels[pick(kBeauty, true)] = ClusterLabel::ForlornBeauty;
  labels[pick(kBeauty, false)] = ClusterLabel::LowQuality;
  return labels;
}

}  // namespace nq
