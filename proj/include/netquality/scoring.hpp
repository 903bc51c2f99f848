#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nq {

/// Softmax output of a three-class (low / medium / high) quality classifier.
struct QualityTriple {
  double p_lq = 0.0;
  double p_mq = 0.0;
  double p_hq = 0.0;
};

inline constexpr double kTripleTolerance = 1e-6;

/// Scalar beauty in [0,1]: (p_hq - p_lq + 1) / 2. Rejects triples with a
/// component outside [0,1] or a sum farther than 1e-6 from one.
double beauty_score(const QualityTriple& q);

/// Maps a score in [0,1] onto the 1..5 grade scale using five equal bins,
/// the top one closed.
int rescale_to_5pt(double score);

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson correlation. Throws UndefinedError when either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Spearman rank correlation with average ranks for ties.
/// Throws PreconditionError on length mismatch or fewer than two items, and
/// UndefinedError when either ranking is constant.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

/// Complete item x rater grade matrix, row-major.
class RatingMatrix {
 public:
  RatingMatrix(std::size_t items, std::size_t raters);

  std::size_t items() const { return items_; }
  std::size_t raters() const { return raters_; }
  double& at(std::size_t item, std::size_t rater) { return data_[item * raters_ + rater]; }
  double at(std::size_t item, std::size_t rater) const { return data_[item * raters_ + rater]; }

 private:
  std::size_t items_;
  std::size_t raters_;
  std::vector<double> data_;
};

struct HumanRating {
  std::uint64_t item = 0;
  std::uint64_t rater = 0;
  int grade = 0;
};

/// Pivots (item, rater, grade) records into a complete matrix with items and
/// raters in ascending id order. Missing or duplicate cells and grades
/// outside 1..5 are input errors.
RatingMatrix build_rating_matrix(std::span<const HumanRating> ratings,
                                 std::vector<std::uint64_t>* item_ids = nullptr);

/// Cronbach's alpha with raters as the scale components:
/// k/(k-1) * (1 - sum of per-rater variances / variance of item totals),
/// sample (n-1) variances. Throws UndefinedError when the total variance is 0.
double cronbach_alpha(const RatingMatrix& ratings);

/// Mean human score per predicted-score decile [0,0.1), ..., [0.9,1.0].
/// Empty buckets are nullopt.
std::array<std::optional<double>, 10> decile_curve(std::span<const double> predicted,
                                                   std::span<const double> human);

/// Source of per-photo classifier outputs.
class PhotoScorer {
 public:
  virtual ~PhotoScorer() = default;
  virtual QualityTriple score(std::uint64_t photo_id) const = 0;
};

/// Deterministic stand-in for a trained classifier: each photo's triple is
/// derived from a hash of (seed, photo id).
class SyntheticScorer final : public PhotoScorer {
 public:
  explicit SyntheticScorer(std::uint64_t seed) : seed_(seed) {}
  QualityTriple score(std::uint64_t photo_id) const override;

 private:
  std::uint64_t seed_;
};

}  // namespace nq
