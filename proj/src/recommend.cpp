#include "netquality/recommend.hpp"

#include <algorithm>
#include <limits>

#include "netquality/parallel.hpp"

namespace nq {

std::vector<Candidate> candidates(const GraphSnapshot& snapshot, UserIndex u) {
  const auto direct = snapshot.out_neighbors(u);
  std::vector<UserIndex> reach;
  for (UserIndex v : direct)
    for (UserIndex c : snapshot.out_neighbors(v))
      if (c != u && !std::binary_search(direct.begin(), direct.end(), c)) reach.push_back(c);
  // Out-neighbor lists are duplicate-free, so each (v, c) pair is one distinct intermediary.
  std::sort(reach.begin(), reach.end());
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < reach.size();) {
    std::size_t j = i;
    while (j < reach.size() && reach[j] == reach[i]) ++j;
    out.push_back({reach[i], j - i});
    i = j;
  }
  return out;
}

std::string_view to_string(RecRule rule) { return rule == RecRule::CN ? "CN" : "BB"; }

std::optional<Recommendation> recommend_cn(const GraphSnapshot& snapshot, UserIndex u) {
  const auto cands = candidates(snapshot, u);
  if (cands.empty()) return std::nullopt;
  const Candidate* best = &cands.front();
  for (const auto& c : cands)
    if (c.two_paths > best->two_paths) best = &c;
  return Recommendation{u, best->user, RecRule::CN, static_cast<double>(best->two_paths)};
}

std::optional<Recommendation> recommend_bb(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                           UserIndex u, double band) {
  if (!profiles.has(u)) throw PreconditionError("recommend_bb: recipient has no beauty profile");
  const double own = profiles.at(u);
  const double lo = (1.0 - band) * own;
  const double hi = (1.0 + band) * own;
  std::optional<Recommendation> best;
  for (const auto& c : candidates(snapshot, u)) {
    if (!profiles.has(c.user)) continue;
    const double b = profiles.at(c.user);
    if (b < lo || b > hi) continue;
    if (!best || b > best->score) best = Recommendation{u, c.user, RecRule::BB, b};
  }
  return best;
}

RecEvaluation evaluate(std::span<const Recommendation> recs, const BeautyProfiles& profiles,
                       std::span<const double> favorites, const std::vector<bool>& forlorn) {
  if (recs.empty()) throw PreconditionError("evaluate: empty recommendation list");
  RecEvaluation e;
  e.size = recs.size();
  std::size_t in_forlorn = 0, ratio_terms = 0;
  for (const auto& r : recs) {
    if (!profiles.has(r.recipient)) throw PreconditionError("evaluate: recipient without a beauty profile");
    e.fav_recs += favorites[r.candidate];
    if (r.candidate < forlorn.size() && forlorn[r.candidate]) ++in_forlorn;
    if (!profiles.has(r.candidate)) continue;
    const double br = profiles.at(r.candidate);
    e.b_recs += br;
    ++e.profiled;
    if (br > 0) {
      e.b_ratio += profiles.at(r.recipient) / br;
      ++ratio_terms;
    }
  }
  const double n = static_cast<double>(recs.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  e.b_recs = e.profiled ? e.b_recs / static_cast<double>(e.profiled) : nan;
  e.b_ratio = ratio_terms ? e.b_ratio / static_cast<double>(ratio_terms) : nan;
  e.fav_recs /= n;
  e.p_forlorn = static_cast<double>(in_forlorn) / n;
  return e;
}

RecommendationRun recommend_all(const GraphSnapshot& snapshot, const BeautyProfiles& profiles,
                                std::span<const UserIndex> recipients, double band, int threads) {
  std::vector<std::optional<Recommendation>> cn(recipients.size()), bb(recipients.size());
  parallel_for(recipients.size(), threads, [&](std::size_t i) {
    const UserIndex u = recipients[i];
    if (!profiles.has(u)) return;
    cn[i] = recommend_cn(snapshot, u);
    bb[i] = recommend_bb(snapshot, profiles, u, band);
  });
  RecommendationRun run;
  for (std::size_t i = 0; i < recipients.size(); ++i) {
    if (cn[i]) run.cn.push_back(*cn[i]);
    if (bb[i]) run.bb.push_back(*bb[i]);
  }
  return run;
}

}  // namespace nq
