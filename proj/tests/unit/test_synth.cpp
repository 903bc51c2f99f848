#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "netquality/experiment.hpp"
#include "netquality/io.hpp"
#include "netquality/metrics.hpp"
#include "netquality/synth.hpp"

using namespace nq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SynthConfig small(std::uint64_t seed) {
  SynthConfig c;
  c.n_users = 400;
  c.n_weeks = 20;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("generate is deterministic in the seed") {
  const auto dir = fs::temp_directory_path() / "nq_unit_synth";
  fs::remove_all(dir);
  write_event_streams(dir / "a", generate(small(5)));
  write_event_streams(dir / "b", generate(small(5)));
  write_event_streams(dir / "c", generate(small(6)));
  for (const char* f : {"follows.csv", "photos.csv", "favorites.csv", "groups.csv"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK_FALSE(slurp(dir / "a" / f).empty());
  }
  CHECK(slurp(dir / "a" / "follows.csv") != slurp(dir / "c" / "follows.csv"));
  fs::remove_all(dir);
}

TEST_CASE("generated streams ingest cleanly and respect the data model") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto cfg = small(seed);
    cfg.superstar_fraction = 0.05;
    cfg.influence_strength = 0.3;
    cfg.churn_imbalance_strength = 0.5;
    cfg.assortativity = 0.5;
    SynthTruth truth;
    const auto streams = generate(cfg, &truth);
    IngestReport report;
    const auto g = ingest(streams, &report);
    CHECK(report.warnings.empty());
    CHECK(report.duplicate_follows == 0);
    CHECK(report.dropped_favorites == 0);
    CHECK(g.num_users() == cfg.n_users);
    CHECK(g.last_week() < cfg.n_weeks);
    for (const auto& p : streams.photos) CHECK((p.beauty >= 0.0 && p.beauty <= 1.0));
    CHECK(truth.mu.size() == cfg.n_users);
    for (std::size_t i = 0; i < cfg.n_users; ++i) {
      if (!truth.churn_week[i]) continue;
      const auto weeks = g.activity_weeks(UserId{i + 1});
      if (!weeks.empty()) CHECK(weeks.back() < *truth.churn_week[i]);
    }
  }
}

TEST_CASE("generated beauty mean matches the configuration") {
  SynthConfig cfg;
  cfg.n_users = 5000;
  cfg.n_weeks = 4;
  cfg.beauty_mean = 0.35;
  cfg.seed = 9;
  const auto g = ingest(generate(cfg));
  CHECK(std::abs(BeautyProfiles::from_graph(g).mean() - 0.35) <= 0.02);
}

TEST_CASE("invalid configurations list every violated field") {
  SynthConfig cfg;
  cfg.n_users = 1;
  cfg.activity_prob = 1.5;
  cfg.superstar_fraction = -0.1;
  try {
    validate(cfg);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("n_users") != std::string::npos);
    CHECK(msg.find("activity_prob") != std::string::npos);
    CHECK(msg.find("superstar_fraction") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_synth_config(nlohmann::json{{"n_user", 10}}), InputError);
  CHECK_THROWS_AS(parse_synth_config(nlohmann::json{{"n_users", "many"}}), InputError);
  const auto round = parse_synth_config(to_json(small(4)));
  CHECK(round.n_users == 400);
  CHECK(round.seed == 4);
}

TEST_CASE("planted churn raises the inactivity ratio monotonically") {
  const std::array<double, 3> strength{0.0, 0.5, 1.0};
  std::array<double, 3> mean_ratio{};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (std::size_t s = 0; s < strength.size(); ++s) {
      SynthConfig cfg;
      cfg.n_users = 2000;
      cfg.n_weeks = 40;
      cfg.assortativity = 0.5;
      cfg.base_churn = 0.02;
      cfg.churn_imbalance_strength = strength[s];
      cfg.seed = seed;
      const auto g = ingest(generate(cfg));
      const auto groups = build_groups_q5(g, {}, g.last_week() - 12);
      mean_ratio[s] += outcome_inactivity(g, groups.treatment, groups.control, 12).ratio / 3.0;
    }
  }
  CHECK(mean_ratio[0] < mean_ratio[1]);
  CHECK(mean_ratio[1] < mean_ratio[2]);
}
