#include "netquality/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "netquality/parallel.hpp"
#include "netquality/scoring.hpp"

namespace nq {

BeautyProfiles BeautyProfiles::from_graph(const TemporalGraph& g, std::optional<WeekIndex> up_to) {
  std::vector<std::optional<double>> values(g.num_users());
  for (UserIndex u = 0; u < g.num_users(); ++u)
    values[u] = up_to ? g.mean_beauty_until(u, *up_to) : g.mean_beauty(u);
  return BeautyProfiles(std::move(values));
}

std::size_t BeautyProfiles::count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); }));
}

std::vector<double> BeautyProfiles::defined_values() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_)
    if (v) out.push_back(*v);
  return out;
}

double BeautyProfiles::mean() const {
  const auto v = defined_values();
  if (v.empty()) throw UndefinedError("mean beauty of an empty profile set");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double BeautyProfiles::median() const {
  auto v = defined_values();
  if (v.empty()) throw UndefinedError("median beauty of an empty profile set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> user_beauty(const TemporalGraph& g, UserId u, std::optional<WeekIndex> up_to) {
  const UserIndex idx = g.require_index(u);
  return up_to ? g.mean_beauty_until(idx, *up_to) : g.mean_beauty(idx);
}

// ---------------------------------------------------------------------------

namespace {

void check_resource_values(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("inequality of an empty value list");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw PreconditionError("inequality requires finite non-negative values");
}

}  // namespace

double gini(std::span<const double> values) {
  check_resource_values(values);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (total == 0.0) throw UndefinedError("gini undefined: all values are zero");
  // sum_ij |xi - xj| = 2 * sum_i (2i - n - 1) x_(i), i 1-based over ascending order
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  return weighted / (n * total);
}

std::vector<LorenzPoint> lorenz_curve(std::span<const double> values) {
  check_resource_values(values);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (total == 0.0) throw UndefinedError("lorenz curve undefined: all values are zero");
  const double n = static_cast<double>(sorted.size());
  std::vector<LorenzPoint> curve;
  curve.reserve(sorted.size() + 1);
  curve.push_back({0.0, 0.0});
  double running = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    curve.push_back({static_cast<double>(i + 1) / n, running / total});
  }
  curve.back() = {1.0, 1.0};
  return curve;
}

double gini_from_lorenz(std::span<const LorenzPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].population_share - curve[i - 1].population_share) *
            (curve[i].resource_share + curve[i - 1].resource_share) * 0.5;
  return 1.0 - 2.0 * area;
}

// ---------------------------------------------------------------------------

int beauty_bin(double beauty, int bins) {
  if (bins <= 0) throw PreconditionError("bin count must be positive");
  int k = static_cast<int>(std::floor(beauty * bins));
  k = std::clamp(k, 0, bins - 1);
  // Align with edges computed as k / bins so values sitting on an edge land
  // in the bin that starts there.
  while (k + 1 < bins && static_cast<double>(k + 1) / bins <= beauty) ++k;
  while (k > 0 && static_cast<double>(k) / bins > beauty) --k;
  return k;
}

std::vector<std::optional<double>> out_neighbor_mean_beauty(const GraphSnapshot& snapshot,
                                                            const BeautyProfiles& profiles,
                                                            int threads) {
  std::vector<std::optional<double>> out(snapshot.num_nodes());
  parallel_for(snapshot.num_nodes(), threads, [&](std::size_t i) {
    double sum = 0.0;
    std::size_t n = 0;
    for (UserIndex v : snapshot.out_neighbors(static_cast<UserIndex>(i))) {
      if (!profiles.has(v)) continue;
      sum += profiles.at(v);
      ++n;
    }
    if (n > 0) out[i] = sum / static_cast<double>(n);
  });
  return out;
}

SpectrumCurve correlation_spectrum(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                   int bins, int threads) {
  if (bins <= 0) throw PreconditionError("bin count must be positive");
  const auto nbr = out_neighbor_mean_beauty(snapshot, profiles, threads);

  std::vector<std::vector<double>> members(static_cast<std::size_t>(bins));
  SpectrumCurve curve;
  curve.bins = bins;
  for (UserIndex u = 0; u < snapshot.num_nodes(); ++u) {
    if (!profiles.has(u) || !nbr[u]) continue;
    members[static_cast<std::size_t>(beauty_bin(profiles.at(u), bins))].push_back(*nbr[u]);
    ++curve.users;
  }
  for (int k = 0; k < bins; ++k) {
    const auto& m = members[static_cast<std::size_t>(k)];
    if (m.empty()) continue;
    SpectrumBin b;
    b.index = k;
    b.center = (static_cast<double>(k) + 0.5) / bins;
    b.count = m.size();
    b.b_nn = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(m.size());
    double ss = 0.0;
    for (double x : m) ss += (x - b.b_nn) * (x - b.b_nn);
    b.variance = ss / static_cast<double>(m.size());
    curve.points.push_back(b);
  }
  return curve;
}

double spectrum_rank_correlation(const SpectrumCurve& curve) {
  std::vector<double> k, b;
  for (const auto& p : curve.points) {
    k.push_back(p.center);
    b.push_back(p.b_nn);
  }
  return spearman_rho(k, b);
}

double spectrum_weighted_slope(const SpectrumCurve& curve) {
  double w = 0.0, mx = 0.0, my = 0.0;
  for (const auto& p : curve.points) {
    const double c = static_cast<double>(p.count);
    w += c;
    mx += c * p.center;
    my += c * p.b_nn;
  }
  if (w == 0.0) throw UndefinedError("slope of an empty spectrum");
  mx /= w;
  my /= w;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : curve.points) {
    const double c = static_cast<double>(p.count);
    sxy += c * (p.center - mx) * (p.b_nn - my);
    sxx += c * (p.center - mx) * (p.center - mx);
  }
  if (sxx == 0.0) throw UndefinedError("slope undefined: single populated bin");
  return sxy / sxx;
}

// ---------------------------------------------------------------------------

IllusionReport majority_illusion(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 ThresholdKind kind) {
  return majority_illusion(snapshot, profiles,
                           kind == ThresholdKind::Mean ? profiles.mean() : profiles.median());
}

IllusionReport majority_illusion(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 double threshold) {
  IllusionReport r;
  r.threshold = threshold;
  std::size_t above = 0;
  for (UserIndex u = 0; u < profiles.size(); ++u) {
    if (!profiles.has(u)) continue;
    ++r.profiled_users;
    if (profiles.at(u) > threshold) ++above;
  }
  if (r.profiled_users == 0) throw PreconditionError("majority_illusion needs a profiled user");
  r.q = static_cast<double>(above) / static_cast<double>(r.profiled_users);

  r.neighbor_fraction.assign(snapshot.num_nodes(), std::nullopt);
  std::size_t exceeding = 0;
  for (UserIndex u = 0; u < snapshot.num_nodes(); ++u) {
    std::size_t n = 0, hi = 0;
    for (UserIndex v : snapshot.out_neighbors(u)) {
      if (!profiles.has(v)) continue;
      ++n;
      if (profiles.at(v) > threshold) ++hi;
    }
    if (n == 0) continue;
    const double f = static_cast<double>(hi) / static_cast<double>(n);
    r.neighbor_fraction[u] = f;
    ++r.nodes_considered;
    if (f > r.q) ++exceeding;
  }
  if (r.nodes_considered > 0)
    r.share = static_cast<double>(exceeding) / static_cast<double>(r.nodes_considered);
  return r;
}

BeautyProfiles shuffle_null_model(const BeautyProfiles& profiles, std::uint64_t seed) {
  auto values = profiles.defined_values();
  std::mt19937_64 rng(seed);
  std::shuffle(values.begin(), values.end(), rng);
  std::vector<std::optional<double>> out(profiles.size());
  std::size_t next = 0;
  for (UserIndex u = 0; u < profiles.size(); ++u)
    if (profiles.has(u)) out[u] = values[next++];
  return BeautyProfiles(std::move(out));
}

double degree_beauty_correlation(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                 DegreeDirection direction) {
  std::vector<double> deg, beauty;
  for (UserIndex u = 0; u < snapshot.num_nodes(); ++u) {
    if (!profiles.has(u)) continue;
    deg.push_back(static_cast<double>(direction == DegreeDirection::In ? snapshot.in_degree(u)
                                                                        : snapshot.out_degree(u)));
    beauty.push_back(profiles.at(u));
  }
  return spearman_rho(deg, beauty);
}

}  // namespace nq
