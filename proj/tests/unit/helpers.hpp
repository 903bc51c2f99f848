#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "netquality/temporal_graph.hpp"

namespace nqtest {

inline constexpr nq::Timestamp W = nq::kSecondsPerWeek;

/// Small event-stream builder. Timestamps default to the middle of a week.
struct Streams {
  nq::EventStreams s;
  std::uint64_t next_photo = 1;

  Streams& follow(std::uint64_t a, std::uint64_t b, nq::WeekIndex week) {
    s.follows.push_back({{a}, {b}, week * W + W / 2});
    return *this;
  }
  Streams& photo(std::uint64_t owner, nq::WeekIndex week, double beauty) {
    s.photos.push_back({{owner}, next_photo++, week * W + W / 2, beauty});
    return *this;
  }
  Streams& favorite(std::uint64_t actor, std::uint64_t photo, nq::WeekIndex week) {
    s.favorites.push_back({{actor}, photo, week * W + W / 2});
    return *this;
  }
  Streams& group(std::uint64_t member, std::uint64_t group, nq::WeekIndex week) {
    s.groups.push_back({{member}, group, week * W + W / 2});
    return *this;
  }
  nq::TemporalGraph graph(nq::IngestReport* report = nullptr) const { return nq::ingest(s, report); }
};

inline nq::GraphSnapshot snapshot(std::size_t n, std::initializer_list<std::pair<nq::UserIndex, nq::UserIndex>> edges) {
  std::vector<std::pair<nq::UserIndex, nq::UserIndex>> e(edges);
  return nq::GraphSnapshot::from_edges(n, e);
}

}  // namespace nqtest
