#include "netquality/oracles.hpp"

#include <cmath>

namespace nq {

SpectrumCurve oracle_spectrum(const GraphSnapshot& snapshot, const BeautyProfiles& profiles, int bins) {
  const std::size_t n = snapshot.num_nodes();
  const auto edges = snapshot.edges();
  SpectrumCurve curve;
  curve.bins = bins;

  std::vector<double> neighbor_mean(n, 0.0);
  std::vector<bool> has_neighbor(n, false);
  for (std::size_t u = 0; u < n; ++u) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [src, dst] : edges) {
      if (src != u || !profiles.has(dst)) continue;
      sum += profiles.at(dst);
      ++count;
    }
    if (count > 0) {
      neighbor_mean[u] = sum / static_cast<double>(count);
      has_neighbor[u] = true;
    }
  }

  for (int k = 0; k < bins; ++k) {
    const double lo = static_cast<double>(k) / bins;
    const double hi = static_cast<double>(k + 1) / bins;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (!profiles.has(static_cast<UserIndex>(u)) || !has_neighbor[u]) continue;
      const double b = profiles.at(static_cast<UserIndex>(u));
      const bool inside = k == bins - 1 ? (b >= lo && b <= 1.0) : (b >= lo && b < hi);
      if (!inside) continue;
      sum += neighbor_mean[u];
      ++count;
    }
    if (count == 0) continue;
    SpectrumBin bin;
    bin.index = k;
    bin.center = (static_cast<double>(k) + 0.5) / bins;
    bin.count = count;
    bin.b_nn = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (!profiles.has(static_cast<UserIndex>(u)) || !has_neighbor[u]) continue;
      const double b = profiles.at(static_cast<UserIndex>(u));
      const bool inside = k == bins - 1 ? (b >= lo && b <= 1.0) : (b >= lo && b < hi);
      if (inside) ss += (neighbor_mean[u] - bin.b_nn) * (neighbor_mean[u] - bin.b_nn);
    }
    bin.variance = ss / static_cast<double>(count);
    curve.points.push_back(bin);
    curve.users += count;
  }
  return curve;
}

std::vector<Candidate> oracle_candidates(const GraphSnapshot& snapshot, UserIndex u) {
  const auto n = static_cast<UserIndex>(snapshot.num_nodes());
  std::vector<Candidate> out;
  for (UserIndex c = 0; c < n; ++c) {
    if (c == u || snapshot.has_edge(u, c)) continue;
    std::size_t paths = 0;
    for (UserIndex v = 0; v < n; ++v)
      if (snapshot.has_edge(u, v) && snapshot.has_edge(v, c)) ++paths;
    if (paths > 0) out.push_back({c, paths});
  }
  return out;
}

double oracle_gini(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("inequality of an empty value list");
  double total = 0.0;
  for (double x : values) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw PreconditionError("inequality requires finite non-negative values");
    total += x;
  }
  if (total == 0.0) throw UndefinedError("gini undefined: all values are zero");
  double pairwise = 0.0;
  for (double a : values)
    for (double b : values) pairwise += std::abs(a - b);
  const double n = static_cast<double>(values.size());
  return pairwise / (2.0 * n * n * (total / n));
}

}  // namespace nq
