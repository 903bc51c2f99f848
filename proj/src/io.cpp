#include "netquality/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nq {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.emplace_back(trim(field));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

RecordTable RecordTable::read(const std::filesystem::path& path, const std::vector<std::string>& required) {
  RecordTable t;
  t.source_ = path.string();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file", t.source_);

  std::string line;
  std::size_t lineno = 0;
  if (path.extension() == ".jsonl") {
    t.header_ = required;
    while (std::getline(in, line)) {
      ++lineno;
      if (is_blank(line)) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw InputError("malformed JSON record", t.source_, lineno);
      }
      if (!j.is_object()) throw InputError("record is not a JSON object", t.source_, lineno);
      // Optional columns present in the first record become part of the header.
      if (t.cells_.empty()) {
        for (const auto& [key, _] : j.items())
          if (std::find(t.header_.begin(), t.header_.end(), key) == t.header_.end()) t.header_.push_back(key);
      }
      std::vector<std::string> row;
      for (const auto& name : t.header_) {
        if (!j.contains(name)) throw InputError("missing field '" + name + "'", t.source_, lineno);
        const auto& v = j.at(name);
        if (v.is_string()) row.push_back(v.get<std::string>());
        else if (v.is_number()) row.push_back(v.dump());
        else throw InputError("field '" + name + "' is not a number", t.source_, lineno);
      }
      t.cells_.push_back(std::move(row));
      t.lines_.push_back(lineno);
    }
    return t;
  }

  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    auto fields = split_csv(line);
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      for (const auto& name : required)
        if (!t.has_column(name)) throw InputError("missing column '" + name + "' in header", t.source_, lineno);
      continue;
    }
    if (fields.size() != t.header_.size())
      throw InputError("expected " + std::to_string(t.header_.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       t.source_, lineno);
    t.cells_.push_back(std::move(fields));
    t.lines_.push_back(lineno);
  }
  if (!have_header) throw InputError("missing header row", t.source_, 1);
  return t;
}

bool RecordTable::has_column(std::string_view name) const {
  return std::find(header_.begin(), header_.end(), name) != header_.end();
}

std::size_t RecordTable::column(std::string_view name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw InputError("missing column '" + std::string(name) + "'", source_, 1);
  return static_cast<std::size_t>(it - header_.begin());
}

std::uint64_t RecordTable::get_u64(std::size_t row, std::size_t col) const {
  const auto s = cell(row, col);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("'" + header_[col] + "' is not an unsigned integer: '" + std::string(s) + "'", source_,
                     lines_[row]);
  return v;
}

double RecordTable::get_double(std::size_t row, std::size_t col) const {
  const auto s = cell(row, col);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InputError("'" + header_[col] + "' is not a number: '" + std::string(s) + "'", source_, lines_[row]);
  return v;
}

std::filesystem::path find_stream_file(const std::filesystem::path& dir, std::string_view stem) {
  const auto csv = dir / (std::string(stem) + ".csv");
  if (std::filesystem::exists(csv)) return csv;
  const auto jsonl = dir / (std::string(stem) + ".jsonl");
  if (std::filesystem::exists(jsonl)) return jsonl;
  throw InputError("input file not found", csv.string());
}

namespace {

Timestamp get_time(const RecordTable& t, std::size_t row, std::size_t col) {
  const auto v = t.get_u64(row, col);
  if (v > static_cast<std::uint64_t>(INT64_MAX)) throw InputError("timestamp out of range", t.source(), t.line(row));
  return static_cast<Timestamp>(v);
}

}  // namespace

EventStreams read_event_streams(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InputError("data directory not found", dir.string());
  EventStreams s;

  {
    const auto t = RecordTable::read(find_stream_file(dir, "follows"), {"src", "dst", "t"});
    const auto cs = t.column("src"), cd = t.column("dst"), ct = t.column("t");
    s.follows.reserve(t.rows());
    for (std::size_t r = 0; r < t.rows(); ++r) {
      FollowEvent e{UserId{t.get_u64(r, cs)}, UserId{t.get_u64(r, cd)}, get_time(t, r, ct)};
      if (e.src == e.dst) throw InputError("self-follow", t.source(), t.line(r));
      s.follows.push_back(e);
    }
  }
  {
    const auto t = RecordTable::read(find_stream_file(dir, "photos"), {"owner", "photo", "t"});
    const auto co = t.column("owner"), cp = t.column("photo"), ct = t.column("t");
    const bool direct = t.has_column("beauty");
    if (!direct && !(t.has_column("p_lq") && t.has_column("p_mq") && t.has_column("p_hq")))
      throw InputError("photos need a 'beauty' column or 'p_lq,p_mq,p_hq' columns", t.source(), 1);
    s.photos.reserve(t.rows());
    for (std::size_t r = 0; r < t.rows(); ++r) {
      double beauty = 0.0;
      if (direct) {
        beauty = t.get_double(r, t.column("beauty"));
        if (!(beauty >= 0.0 && beauty <= 1.0)) throw InputError("beauty outside [0,1]", t.source(), t.line(r));
      } else {
        const QualityTriple q{t.get_double(r, t.column("p_lq")), t.get_double(r, t.column("p_mq")),
                              t.get_double(r, t.column("p_hq"))};
        try {
          beauty = beauty_score(q);
        } catch (const Error& e) {
          throw InputError(e.what(), t.source(), t.line(r));
        }
      }
      s.photos.push_back({UserId{t.get_u64(r, co)}, t.get_u64(r, cp), get_time(t, r, ct), beauty});
    }
  }
  {
    const auto t = RecordTable::read(find_stream_file(dir, "favorites"), {"actor", "photo", "t"});
    const auto ca = t.column("actor"), cp = t.column("photo"), ct = t.column("t");
    s.favorites.reserve(t.rows());
    for (std::size_t r = 0; r < t.rows(); ++r)
      s.favorites.push_back({UserId{t.get_u64(r, ca)}, t.get_u64(r, cp), get_time(t, r, ct)});
  }
  {
    const auto t = RecordTable::read(find_stream_file(dir, "groups"), {"member", "group", "t"});
    const auto cm = t.column("member"), cg = t.column("group"), ct = t.column("t");
    s.groups.reserve(t.rows());
    for (std::size_t r = 0; r < t.rows(); ++r)
      s.groups.push_back({UserId{t.get_u64(r, cm)}, t.get_u64(r, cg), get_time(t, r, ct)});
  }
  return s;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("write failed", path.string());
}

void write_event_streams(const std::filesystem::path& dir, const EventStreams& s) {
  std::filesystem::create_directories(dir);
  std::ostringstream os;
  os << "src,dst,t\n";
  for (const auto& e : s.follows) os << e.src.value << ',' << e.dst.value << ',' << e.t << '\n';
  write_text_file(dir / "follows.csv", os.str());

  os.str({});
  os << "owner,photo,t,beauty\n";
  for (const auto& p : s.photos)
    os << p.owner.value << ',' << p.photo << ',' << p.t << ',' << format_double(p.beauty) << '\n';
  write_text_file(dir / "photos.csv", os.str());

  os.str({});
  os << "actor,photo,t\n";
  for (const auto& f : s.favorites) os << f.actor.value << ',' << f.photo << ',' << f.t << '\n';
  write_text_file(dir / "favorites.csv", os.str());

  os.str({});
  os << "member,group,t\n";
  for (const auto& m : s.groups) os << m.member.value << ',' << m.group << ',' << m.t << '\n';
  write_text_file(dir / "groups.csv", os.str());
}

TemporalGraph load_graph(const std::filesystem::path& dir, IngestReport* report) {
  return ingest(read_event_streams(dir), report);
}

std::vector<HumanRating> read_ratings(const std::filesystem::path& path) {
  const auto t = RecordTable::read(path, {"item", "rater", "grade"});
  const auto ci = t.column("item"), cr = t.column("rater"), cg = t.column("grade");
  std::vector<HumanRating> out;
  out.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto grade = t.get_u64(r, cg);
    if (grade < 1 || grade > 5) throw InputError("grade outside 1..5", t.source(), t.line(r));
    out.push_back({t.get_u64(r, ci), t.get_u64(r, cr), static_cast<int>(grade)});
  }
  return out;
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  const auto t = RecordTable::read(path, {"item", "score"});
  const auto ci = t.column("item"), cs = t.column("score");
  std::vector<ScoreRecord> out;
  out.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double s = t.get_double(r, cs);
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("score outside [0,1]", t.source(), t.line(r));
    out.push_back({t.get_u64(r, ci), s});
  }
  return out;
}

}  // namespace nq
