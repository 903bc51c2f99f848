#include "netquality/temporal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace nq {

// ---------------------------------------------------------------------------
// GraphSnapshot
// ---------------------------------------------------------------------------

GraphSnapshot GraphSnapshot::from_edges(std::size_t num_nodes,
                                        std::span<const std::pair<UserIndex, UserIndex>> edges,
                                        WeekIndex week) {
  std::vector<std::pair<UserIndex, UserIndex>> sorted(edges.begin(), edges.end());
  for (const auto& [s, d] : sorted) {
    if (s >= num_nodes || d >= num_nodes) throw PreconditionError("edge endpoint out of range");
    if (s == d) throw PreconditionError("self-loop in snapshot edge list");
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  GraphSnapshot g;
  g.week_ = week;
  g.out_offsets_.assign(num_nodes + 1, 0);
  g.in_offsets_.assign(num_nodes + 1, 0);
  for (const auto& [s, d] : sorted) {
    ++g.out_offsets_[s + 1];
    ++g.in_offsets_[d + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

  g.out_targets_.resize(sorted.size());
  g.in_sources_.resize(sorted.size());
  std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // sorted by (src, dst): out lists come out sorted, and in lists are filled in src order
  for (std::size_t e = 0; e < sorted.size(); ++e) {
    const auto [s, d] = sorted[e];
    g.out_targets_[e] = d;
    g.in_sources_[in_fill[d]++] = s;
  }
  return g;
}

std::span<const UserIndex> GraphSnapshot::out_neighbors(UserIndex u) const {
  return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const UserIndex> GraphSnapshot::in_neighbors(UserIndex u) const {
  return {in_sources_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

bool GraphSnapshot::has_edge(UserIndex src, UserIndex dst) const {
  const auto nb = out_neighbors(src);
  return std::binary_search(nb.begin(), nb.end(), dst);
}

std::vector<std::pair<UserIndex, UserIndex>> GraphSnapshot::edges() const {
  std::vector<std::pair<UserIndex, UserIndex>> out;
  out.reserve(num_edges());
  for (UserIndex u = 0; u < num_nodes(); ++u)
    for (UserIndex v : out_neighbors(u)) out.emplace_back(u, v);
  return out;
}

// ---------------------------------------------------------------------------
// TemporalGraph queries
// ---------------------------------------------------------------------------

namespace {

template <class Vec>
std::size_t count_before(const Vec& times, Timestamp t) {
  return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

std::size_t edges_before(std::span<const TemporalGraph::Edge> edges, Timestamp t) {
  auto it = std::lower_bound(edges.begin(), edges.end(), t,
                             [](const TemporalGraph::Edge& e, Timestamp x) { return e.t < x; });
  return static_cast<std::size_t>(it - edges.begin());
}

}  // namespace

std::optional<UserIndex> TemporalGraph::index_of(UserId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<UserIndex>(it - ids_.begin());
}

UserIndex TemporalGraph::require_index(UserId id) const {
  if (auto idx = index_of(id)) return *idx;
  throw InputError("unknown user " + std::to_string(id.value));
}

std::span<const TemporalGraph::Edge> TemporalGraph::out_edges_before(UserIndex u, WeekIndex w) const {
  std::span<const Edge> all = users_[u].out;
  return all.first(edges_before(all, week_start(w)));
}

std::span<const TemporalGraph::Edge> TemporalGraph::out_edges_in_week(UserIndex u, WeekIndex w) const {
  std::span<const Edge> all = users_[u].out;
  const std::size_t lo = edges_before(all, week_start(w));
  const std::size_t hi = edges_before(all, week_start(w + 1));
  return all.subspan(lo, hi - lo);
}

std::size_t TemporalGraph::in_degree_before(UserIndex u, WeekIndex w) const {
  return edges_before(users_[u].in, week_start(w));
}

std::size_t TemporalGraph::photo_index_before(UserIndex u, Timestamp t) const {
  const auto& ph = users_[u].photos;
  auto it = std::lower_bound(ph.begin(), ph.end(), t,
                             [](const Photo& p, Timestamp x) { return p.t < x; });
  return static_cast<std::size_t>(it - ph.begin());
}

std::size_t TemporalGraph::photos_before(UserIndex u, WeekIndex w) const {
  return photo_index_before(u, week_start(w));
}

std::size_t TemporalGraph::photos_in_weeks(UserIndex u, WeekIndex first, WeekIndex last) const {
  if (last < first) return 0;
  return photo_index_before(u, week_start(last + 1)) - photo_index_before(u, week_start(first));
}

std::optional<double> TemporalGraph::mean_of_photo_range(UserIndex u, std::size_t lo,
                                                         std::size_t hi) const {
  if (hi <= lo) return std::nullopt;
  const auto& pre = users_[u].beauty_prefix;
  return (pre[hi] - pre[lo]) / static_cast<double>(hi - lo);
}

std::optional<double> TemporalGraph::mean_beauty(UserIndex u) const {
  return mean_of_photo_range(u, 0, users_[u].photos.size());
}

std::optional<double> TemporalGraph::mean_beauty_until(UserIndex u, WeekIndex w) const {
  return mean_of_photo_range(u, 0, photo_index_before(u, week_start(w + 1)));
}

std::optional<double> TemporalGraph::mean_beauty_before(UserIndex u, WeekIndex w) const {
  return mean_of_photo_range(u, 0, photo_index_before(u, week_start(w)));
}

std::optional<double> TemporalGraph::mean_beauty_in_week(UserIndex u, WeekIndex w) const {
  return mean_of_photo_range(u, photo_index_before(u, week_start(w)),
                             photo_index_before(u, week_start(w + 1)));
}

std::size_t TemporalGraph::favorites_given_before(UserIndex u, WeekIndex w) const {
  return count_before(users_[u].favs_given, week_start(w));
}

std::size_t TemporalGraph::favorites_received_before(UserIndex u, WeekIndex w) const {
  return count_before(users_[u].favs_received, week_start(w));
}

std::size_t TemporalGraph::groups_before(UserIndex u, WeekIndex w) const {
  return count_before(users_[u].groups, week_start(w));
}

std::size_t TemporalGraph::active_weeks_before(UserIndex u, WeekIndex w) const {
  const auto& aw = users_[u].active_weeks;
  return static_cast<std::size_t>(std::lower_bound(aw.begin(), aw.end(), w) - aw.begin());
}

bool TemporalGraph::active_in(UserIndex u, WeekIndex w) const {
  const auto& aw = users_[u].active_weeks;
  return std::binary_search(aw.begin(), aw.end(), w);
}

GraphSnapshot TemporalGraph::snapshot_at(WeekIndex w) const {
  std::vector<std::pair<UserIndex, UserIndex>> edges;
  for (UserIndex u = 0; u < num_users(); ++u)
    for (const Edge& e : out_edges_before(u, w)) edges.emplace_back(u, e.other);
  return GraphSnapshot::from_edges(num_users(), edges, w);
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxWarningLines = 20;

void check_time(Timestamp t, const char* what) {
  if (t < 0) throw InputError(std::string("negative timestamp in ") + what + " record");
}

void warn(IngestReport* report, std::size_t count, const std::string& msg) {
  if (report && count <= kMaxWarningLines) report->warnings.push_back(msg);
}

}  // namespace

TemporalGraph ingest(const EventStreams& streams, IngestReport* report) {
  TemporalGraph g;

  // Validate and collect ids.
  std::vector<UserId> ids;
  ids.reserve(2 * streams.follows.size() + streams.photos.size() + streams.favorites.size() +
              streams.groups.size());
  for (const auto& f : streams.follows) {
    check_time(f.t, "follow");
    if (f.src == f.dst) throw InputError("self-follow of user " + std::to_string(f.src.value));
    ids.push_back(f.src);
    ids.push_back(f.dst);
  }
  for (const auto& p : streams.photos) {
    check_time(p.t, "photo");
    if (!(p.beauty >= 0.0 && p.beauty <= 1.0))
      throw InputError("beauty outside [0,1] for photo " + std::to_string(p.photo));
    ids.push_back(p.owner);
  }
  for (const auto& f : streams.favorites) {
    check_time(f.t, "favorite");
  }
  for (const auto& m : streams.groups) {
    check_time(m.t, "group");
    ids.push_back(m.member);
  }

  // Photo lookup table; ids must be unique.
  std::vector<const PhotoEvent*> photos_by_id;
  photos_by_id.reserve(streams.photos.size());
  for (const auto& p : streams.photos) photos_by_id.push_back(&p);
  std::sort(photos_by_id.begin(), photos_by_id.end(),
            [](const PhotoEvent* a, const PhotoEvent* b) { return a->photo < b->photo; });
  for (std::size_t i = 1; i < photos_by_id.size(); ++i)
    if (photos_by_id[i]->photo == photos_by_id[i - 1]->photo)
      throw InputError("duplicate photo id " + std::to_string(photos_by_id[i]->photo));
  auto find_photo = [&](std::uint64_t id) -> const PhotoEvent* {
    auto it = std::lower_bound(photos_by_id.begin(), photos_by_id.end(), id,
                               [](const PhotoEvent* p, std::uint64_t x) { return p->photo < x; });
    return (it != photos_by_id.end() && (*it)->photo == id) ? *it : nullptr;
  };

  std::vector<std::pair<const FavoriteEvent*, const PhotoEvent*>> favorites;
  favorites.reserve(streams.favorites.size());
  std::size_t dropped = 0;
  for (const auto& f : streams.favorites) {
    const PhotoEvent* p = find_photo(f.photo);
    if (!p) {
      ++dropped;
      warn(report, dropped, "favorite by user " + std::to_string(f.actor.value) +
                                " references unknown photo " + std::to_string(f.photo) + "; dropped");
      continue;
    }
    favorites.emplace_back(&f, p);
    ids.push_back(f.actor);
  }
  if (report) {
    report->dropped_favorites = dropped;
    if (dropped > kMaxWarningLines)
      report->warnings.push_back(std::to_string(dropped - kMaxWarningLines) +
                                 " further favorites referencing unknown photos dropped");
  }

  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  g.ids_ = std::move(ids);
  g.users_.resize(g.ids_.size());
  auto idx = [&](UserId id) { return *g.index_of(id); };

  // Follows: earliest timestamp wins per (src, dst).
  std::vector<std::tuple<UserIndex, UserIndex, Timestamp>> follows;
  follows.reserve(streams.follows.size());
  for (const auto& f : streams.follows) follows.emplace_back(idx(f.src), idx(f.dst), f.t);
  std::sort(follows.begin(), follows.end());
  std::size_t dup_follows = 0;
  for (std::size_t i = 0; i < follows.size(); ++i) {
    const auto& [s, d, t] = follows[i];
    if (i > 0 && std::get<0>(follows[i - 1]) == s && std::get<1>(follows[i - 1]) == d) {
      ++dup_follows;
      continue;
    }
    g.users_[s].out.push_back({d, t});
    g.users_[d].in.push_back({s, t});
  }
  g.num_follows_ = follows.size() - dup_follows;

  for (const auto& p : streams.photos) g.users_[idx(p.owner)].photos.push_back({p.t, p.beauty, p.photo});
  g.num_photos_ = streams.photos.size();

  for (const auto& [f, p] : favorites) {
    g.users_[idx(f->actor)].favs_given.push_back(f->t);
    g.users_[idx(p->owner)].favs_received.push_back(f->t);
  }
  g.num_favorites_ = favorites.size();

  std::vector<std::tuple<UserIndex, std::uint64_t, Timestamp>> groups;
  groups.reserve(streams.groups.size());
  for (const auto& m : streams.groups) groups.emplace_back(idx(m.member), m.group, m.t);
  std::sort(groups.begin(), groups.end());
  std::size_t dup_groups = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& [u, grp, t] = groups[i];
    if (i > 0 && std::get<0>(groups[i - 1]) == u && std::get<1>(groups[i - 1]) == grp) {
      ++dup_groups;
      continue;
    }
    g.users_[u].groups.push_back(t);
  }
  g.num_groups_ = groups.size() - dup_groups;

  if (report) {
    report->duplicate_follows = dup_follows;
    report->duplicate_groups = dup_groups;
  }

  auto by_time = [](const TemporalGraph::Edge& a, const TemporalGraph::Edge& b) {
    return std::tie(a.t, a.other) < std::tie(b.t, b.other);
  };
  WeekIndex first = std::numeric_limits<WeekIndex>::max();
  WeekIndex last = std::numeric_limits<WeekIndex>::min();
  for (auto& ue : g.users_) {
    std::sort(ue.out.begin(), ue.out.end(), by_time);
    std::sort(ue.in.begin(), ue.in.end(), by_time);
    std::sort(ue.photos.begin(), ue.photos.end(),
              [](const TemporalGraph::Photo& a, const TemporalGraph::Photo& b) {
                return std::tie(a.t, a.id) < std::tie(b.t, b.id);
              });
    std::sort(ue.favs_given.begin(), ue.favs_given.end());
    std::sort(ue.favs_received.begin(), ue.favs_received.end());
    std::sort(ue.groups.begin(), ue.groups.end());

    ue.beauty_prefix.assign(ue.photos.size() + 1, 0.0);
    for (std::size_t i = 0; i < ue.photos.size(); ++i)
      ue.beauty_prefix[i + 1] = ue.beauty_prefix[i] + ue.photos[i].beauty;
    for (const auto& p : ue.photos) {
      const WeekIndex w = week_of(p.t);
      if (ue.active_weeks.empty() || ue.active_weeks.back() != w) ue.active_weeks.push_back(w);
    }

    Timestamp earliest = std::numeric_limits<Timestamp>::max();
    Timestamp latest = std::numeric_limits<Timestamp>::min();
    auto see = [&](Timestamp t) {
      earliest = std::min(earliest, t);
      latest = std::max(latest, t);
    };
    if (!ue.out.empty()) { see(ue.out.front().t); see(ue.out.back().t); }
    if (!ue.in.empty()) { see(ue.in.front().t); see(ue.in.back().t); }
    if (!ue.photos.empty()) { see(ue.photos.front().t); see(ue.photos.back().t); }
    if (!ue.favs_given.empty()) { see(ue.favs_given.front()); see(ue.favs_given.back()); }
    if (!ue.favs_received.empty()) { see(ue.favs_received.front()); see(ue.favs_received.back()); }
    if (!ue.groups.empty()) { see(ue.groups.front()); see(ue.groups.back()); }
    ue.join_week = week_of(earliest);
    first = std::min(first, week_of(earliest));
    last = std::max(last, week_of(latest));
  }
  if (!g.users_.empty()) {
    g.first_week_ = first;
    g.last_week_ = last;
  }
  return g;
}

}  // namespace nq
