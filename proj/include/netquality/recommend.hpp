#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "netquality/metrics.hpp"

namespace nq {

struct Candidate {
  UserIndex user = 0;
  std::size_t two_paths = 0;  // distinct intermediaries v with u -> v -> user

  bool operator==(const Candidate&) const = default;
};

/// Distance-2 candidates of u: targets of 2-paths u -> v -> c with c not u and
/// not already followed by u, ascending by index.
std::vector<Candidate> candidates(const GraphSnapshot& snapshot, UserIndex u);

enum class RecRule { CN, BB };

std::string_view to_string(RecRule rule);

struct Recommendation {
  UserIndex recipient = 0;
  UserIndex candidate = 0;
  RecRule rule = RecRule::CN;
  double score = 0.0;
};

/// Candidate with the most common neighbors; ties go to the smallest id.
std::optional<Recommendation> recommend_cn(const GraphSnapshot& snapshot, UserIndex u);

/// Highest-beauty candidate within [(1-band) b(u), (1+band) b(u)]; ties go to the
/// smallest id. Throws PreconditionError when u has no beauty profile.
std::optional<Recommendation> recommend_bb(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                           UserIndex u, double band = 0.10);

struct RecEvaluation {
  double b_recs = 0.0;
  double b_ratio = 0.0;
  double fav_recs = 0.0;
  double p_forlorn = 0.0;
  std::size_t size = 0;
  std::size_t profiled = 0;  // recommendations whose candidate has a beauty profile
};

/// Averages over the recommendations. `favorites[r]` is the total number of
/// favorites received by r and `forlorn[r]` marks membership of the Forlorn
/// Beauty class. Beauty terms average over candidates with a profile (b_ratio
/// also skips zero beauty) and are NaN when none qualifies. Throws
/// PreconditionError on an empty list or an unprofiled recipient.
RecEvaluation evaluate(std::span<const Recommendation> recs, const BeautyProfiles& profiles,
                       std::span<const double> favorites, const std::vector<bool>& forlorn);

struct RecommendationRun {
  std::vector<Recommendation> cn;
  std::vector<Recommendation> bb;
};

/// One CN and one BB recommendation for each recipient that has a beauty
/// profile, in recipient order. Recipients without a qualifying candidate get none.
RecommendationRun recommend_all(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                std::span<const UserIndex> recipients, double band = 0.10,
                                int threads = 1);

}  // namespace nq
