#include "netquality/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "netquality/types.hpp"

namespace nq {

double beauty_score(const QualityTriple& q) {
  for (double p : {q.p_lq, q.p_mq, q.p_hq})
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("quality probability outside [0,1]");
  if (std::abs(q.p_lq + q.p_mq + q.p_hq - 1.0) > kTripleTolerance)
    throw InputError("quality probabilities do not sum to 1");
  return 0.5 * (q.p_hq - q.p_lq + 1.0);
}

int rescale_to_5pt(double score) {
  if (!(score >= 0.0 && score <= 1.0)) throw InputError("score outside [0,1]");
  return std::min(5, static_cast<int>(std::floor(score * 5.0)) + 1);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("pearson: length mismatch");
  if (xs.size() < 2) throw PreconditionError("pearson: need at least two pairs");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("spearman_rho: length mismatch");
  if (xs.size() < 2) throw PreconditionError("spearman_rho: need at least two pairs");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

RatingMatrix::RatingMatrix(std::size_t items, std::size_t raters)
    : items_(items), raters_(raters), data_(items * raters, std::nan("")) {}

RatingMatrix build_rating_matrix(std::span<const HumanRating> ratings,
                                 std::vector<std::uint64_t>* item_ids) {
  std::vector<std::uint64_t> items, raters;
  for (const auto& r : ratings) {
    if (r.grade < 1 || r.grade > 5)
      throw InputError("grade " + std::to_string(r.grade) + " outside 1..5");
    items.push_back(r.item);
    raters.push_back(r.rater);
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  std::sort(raters.begin(), raters.end());
  raters.erase(std::unique(raters.begin(), raters.end()), raters.end());

  RatingMatrix m(items.size(), raters.size());
  auto pos = [](const std::vector<std::uint64_t>& v, std::uint64_t x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  for (const auto& r : ratings) {
    double& cell = m.at(pos(items, r.item), pos(raters, r.rater));
    if (!std::isnan(cell))
      throw InputError("duplicate rating for item " + std::to_string(r.item) + " by rater " +
                       std::to_string(r.rater));
    cell = r.grade;
  }
  for (std::size_t i = 0; i < m.items(); ++i)
    for (std::size_t j = 0; j < m.raters(); ++j)
      if (std::isnan(m.at(i, j)))
        throw InputError("incomplete rating matrix: item " + std::to_string(items[i]) +
                         " lacks a grade from rater " + std::to_string(raters[j]));
  if (item_ids) *item_ids = std::move(items);
  return m;
}

namespace {

double sample_variance(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / (n - 1.0);
}

}  // namespace

double cronbach_alpha(const RatingMatrix& ratings) {
  const std::size_t n = ratings.items();
  const std::size_t k = ratings.raters();
  if (k < 2) throw PreconditionError("cronbach_alpha: need at least two raters");
  if (n < 2) throw PreconditionError("cronbach_alpha: need at least two items");

  std::vector<double> column(n), totals(n, 0.0);
  double rater_var_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = ratings.at(i, j);
      totals[i] += column[i];
    }
    rater_var_sum += sample_variance(column);
  }
  const double total_var = sample_variance(totals);
  if (total_var == 0.0) throw UndefinedError("cronbach_alpha undefined: item totals have zero variance");
  const double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - rater_var_sum / total_var);
}

std::array<std::optional<double>, 10> decile_curve(std::span<const double> predicted,
                                                   std::span<const double> human) {
  if (predicted.size() != human.size()) throw PreconditionError("decile_curve: length mismatch");
  std::array<double, 10> sum{};
  std::array<std::size_t, 10> count{};
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double s = predicted[i];
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("predicted score outside [0,1]");
    const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(std::floor(s * 10.0)));
    sum[b] += human[i];
    ++count[b];
  }
  std::array<std::optional<double>, 10> out;
  for (std::size_t b = 0; b < 10; ++b)
    if (count[b] > 0) out[b] = sum[b] / static_cast<double>(count[b]);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_from(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

QualityTriple SyntheticScorer::score(std::uint64_t photo_id) const {
  // Three exponential draws normalized to a point on the simplex.
  const std::uint64_t h = splitmix64(seed_ ^ splitmix64(photo_id));
  double e[3];
  std::uint64_t state = h;
  for (double& x : e) {
    state = splitmix64(state);
    x = -std::log(1.0 - unit_from(state));
  }
  const double total = e[0] + e[1] + e[2];
  if (total <= 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  QualityTriple q{e[0] / total, e[1] / total, 0.0};
  q.p_hq = std::max(0.0, 1.0 - q.p_lq - q.p_mq);
  return q;
}

}  // namespace nq
