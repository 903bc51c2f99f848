#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "netquality/scoring.hpp"
#include "netquality/temporal_graph.hpp"

namespace nq {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Header-addressed rows of a CSV or JSONL record file. Values are kept as text.
class RecordTable {
 public:
  /// Reads `path`; the format follows the extension (.jsonl, otherwise CSV with
  /// a header row). Missing required columns are reported against line 1.
  static RecordTable read(const std::filesystem::path& path, const std::vector<std::string>& required);

  std::size_t rows() const { return cells_.size(); }
  bool has_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;
  std::string_view cell(std::size_t row, std::size_t col) const { return cells_[row][col]; }
  std::size_t line(std::size_t row) const { return lines_[row]; }
  const std::string& source() const { return source_; }

  std::uint64_t get_u64(std::size_t row, std::size_t col) const;
  double get_double(std::size_t row, std::size_t col) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::size_t> lines_;
};

/// Locates `<dir>/<stem>.csv`, falling back to `<dir>/<stem>.jsonl`.
/// Throws InputError naming the CSV path when neither exists.
std::filesystem::path find_stream_file(const std::filesystem::path& dir, std::string_view stem);

/// Reads follows, photos, favorites and groups from a data directory.
/// Photos carry either a `beauty` column or `p_lq,p_mq,p_hq`.
EventStreams read_event_streams(const std::filesystem::path& dir);

/// Writes the four streams as CSV files with header rows.
void write_event_streams(const std::filesystem::path& dir, const EventStreams& streams);

TemporalGraph load_graph(const std::filesystem::path& dir, IngestReport* report = nullptr);

std::vector<HumanRating> read_ratings(const std::filesystem::path& path);

struct ScoreRecord {
  std::uint64_t item = 0;
  double score = 0.0;
};
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace nq
