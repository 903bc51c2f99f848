#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netquality/types.hpp"

namespace nq {

struct FollowEvent {
  UserId src;
  UserId dst;
  Timestamp t = 0;
};

struct PhotoEvent {
  UserId owner;
  std::uint64_t photo = 0;
  Timestamp t = 0;
  double beauty = 0.0;
};

struct FavoriteEvent {
  UserId actor;
  std::uint64_t photo = 0;
  Timestamp t = 0;
};

struct GroupEvent {
  UserId member;
  std::uint64_t group = 0;
  Timestamp t = 0;
};

/// The four raw record streams a dataset is made of.
struct EventStreams {
  std::vector<FollowEvent> follows;
  std::vector<PhotoEvent> photos;
  std::vector<FavoriteEvent> favorites;
  std::vector<GroupEvent> groups;
};

/// Follow edges visible at the beginning of a week, stored as sorted CSR adjacency.
class GraphSnapshot {
 public:
  GraphSnapshot() = default;

  /// Builds a snapshot over `num_nodes` nodes from an arbitrary edge list.
  /// Duplicate edges are collapsed; self-loops are rejected.
  static GraphSnapshot from_edges(std::size_t num_nodes,
                                  std::span<const std::pair<UserIndex, UserIndex>> edges,
                                  WeekIndex week = 0);

  WeekIndex week() const { return week_; }
  std::size_t num_nodes() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t num_edges() const { return out_targets_.size(); }

  std::span<const UserIndex> out_neighbors(UserIndex u) const;
  std::span<const UserIndex> in_neighbors(UserIndex u) const;
  std::size_t out_degree(UserIndex u) const { return out_neighbors(u).size(); }
  std::size_t in_degree(UserIndex u) const { return in_neighbors(u).size(); }
  bool has_edge(UserIndex src, UserIndex dst) const;

  /// All edges in (src, dst) lexicographic order.
  std::vector<std::pair<UserIndex, UserIndex>> edges() const;

 private:
  WeekIndex week_ = 0;
  std::vector<std::size_t> out_offsets_;
  std::vector<UserIndex> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<UserIndex> in_sources_;
};

struct IngestReport {
  std::vector<std::string> warnings;
  std::size_t duplicate_follows = 0;
  std::size_t duplicate_groups = 0;
  std::size_t dropped_favorites = 0;
};

/// Immutable temporal social graph. Users are stored in ascending UserId order,
/// so comparing UserIndex values is the same as comparing ids.
class TemporalGraph {
 public:
  struct Edge {
    UserIndex other = 0;
    Timestamp t = 0;
  };
  struct Photo {
    Timestamp t = 0;
    double beauty = 0.0;
    std::uint64_t id = 0;
  };

  TemporalGraph() = default;

  std::size_t num_users() const { return ids_.size(); }
  std::size_t num_follows() const { return num_follows_; }
  std::size_t num_photos() const { return num_photos_; }
  std::size_t num_favorites() const { return num_favorites_; }
  std::size_t num_group_memberships() const { return num_groups_; }

  UserId id(UserIndex u) const { return ids_[u]; }
  std::span<const UserId> ids() const { return ids_; }
  std::optional<UserIndex> index_of(UserId id) const;
  /// Like index_of but throws InputError for unknown users.
  UserIndex require_index(UserId id) const;

  /// Earliest and latest week containing any event. Both 0 for an empty graph.
  WeekIndex first_week() const { return first_week_; }
  WeekIndex last_week() const { return last_week_; }
  WeekIndex join_week(UserIndex u) const { return users_[u].join_week; }

  // Follow edges, sorted by (t, other).
  std::span<const Edge> out_edges(UserIndex u) const { return users_[u].out; }
  std::span<const Edge> in_edges(UserIndex u) const { return users_[u].in; }
  /// Out-edges created strictly before the start of week w.
  std::span<const Edge> out_edges_before(UserIndex u, WeekIndex w) const;
  /// Out-edges created during week w.
  std::span<const Edge> out_edges_in_week(UserIndex u, WeekIndex w) const;
  std::size_t in_degree_before(UserIndex u, WeekIndex w) const;
  std::size_t out_degree_before(UserIndex u, WeekIndex w) const {
    return out_edges_before(u, w).size();
  }

  // Photos, sorted by (t, id).
  std::span<const Photo> photos(UserIndex u) const { return users_[u].photos; }
  std::size_t photos_before(UserIndex u, WeekIndex w) const;
  std::size_t photos_in_weeks(UserIndex u, WeekIndex first, WeekIndex last) const;
  /// Mean beauty over all photos of u; nullopt when u has none.
  std::optional<double> mean_beauty(UserIndex u) const;
  /// Mean beauty of photos in weeks <= w (cumulative-until-week).
  std::optional<double> mean_beauty_until(UserIndex u, WeekIndex w) const;
  /// Mean beauty of photos in weeks < w (measured at the beginning of week w).
  std::optional<double> mean_beauty_before(UserIndex u, WeekIndex w) const;
  /// Mean beauty of photos uploaded during week w only.
  std::optional<double> mean_beauty_in_week(UserIndex u, WeekIndex w) const;

  std::size_t favorites_given_before(UserIndex u, WeekIndex w) const;
  std::size_t favorites_received_before(UserIndex u, WeekIndex w) const;
  std::size_t favorites_received(UserIndex u) const { return users_[u].favs_received.size(); }
  std::size_t groups_before(UserIndex u, WeekIndex w) const;

  /// Sorted distinct weeks in which u uploaded at least one photo.
  std::span<const WeekIndex> activity_weeks(UserIndex u) const { return users_[u].active_weeks; }
  std::span<const WeekIndex> activity_weeks(UserId id) const { return activity_weeks(require_index(id)); }
  std::size_t active_weeks_before(UserIndex u, WeekIndex w) const;
  bool active_in(UserIndex u, WeekIndex w) const;

  /// Follow edges with week_of(t) < w.
  GraphSnapshot snapshot_at(WeekIndex w) const;
  /// Every follow edge in the dataset.
  GraphSnapshot final_snapshot() const { return snapshot_at(last_week_ + 1); }

  friend TemporalGraph ingest(const EventStreams& streams, IngestReport* report);

 private:
  struct UserEvents {
    std::vector<Edge> out;
    std::vector<Edge> in;
    std::vector<Photo> photos;
    std::vector<double> beauty_prefix;  // size photos + 1
    std::vector<Timestamp> favs_given;
    std::vector<Timestamp> favs_received;
    std::vector<Timestamp> groups;
    std::vector<WeekIndex> active_weeks;
    WeekIndex join_week = 0;
  };

  std::optional<double> mean_of_photo_range(UserIndex u, std::size_t lo, std::size_t hi) const;
  std::size_t photo_index_before(UserIndex u, Timestamp t) const;

  std::vector<UserId> ids_;
  std::vector<UserEvents> users_;
  std::size_t num_follows_ = 0;
  std::size_t num_photos_ = 0;
  std::size_t num_favorites_ = 0;
  std::size_t num_groups_ = 0;
  WeekIndex first_week_ = 0;
  WeekIndex last_week_ = 0;
};

/// Materializes a TemporalGraph. Duplicate follows keep the earliest timestamp,
/// duplicate (member, group) pairs likewise; favorites of unknown photos are
/// dropped with a warning. The result does not depend on record order.
TemporalGraph ingest(const EventStreams& streams, IngestReport* report = nullptr);

}  // namespace nq
