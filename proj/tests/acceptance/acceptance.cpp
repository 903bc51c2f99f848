#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "netquality/clustering.hpp"
#include "netquality/experiment.hpp"
#include "netquality/io.hpp"
#include "netquality/matching.hpp"
#include "netquality/metrics.hpp"
#include "netquality/oracles.hpp"
#include "netquality/recommend.hpp"
#include "netquality/scoring.hpp"
#include "netquality/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Pinned tolerances and limits.
constexpr double kScoreTol = 1e-12;
constexpr std::size_t kScoreTriples = 100000;
constexpr double kOracleTol = 1e-9;
constexpr int kOracleGraphs = 20;
constexpr std::size_t kOracleMaxNodes = 200;
constexpr double kSbThreshold = 0.25;
constexpr int kSeeds = 20;
constexpr int kNullRequired = 18;
constexpr double kIllusionExcess = 0.2;
constexpr double kIllusionNullBand = 0.05;
constexpr double kBandLo = 0.9091;
constexpr double kBandHi = 1.1112;
constexpr int kGapRequired = 18;
constexpr double kGapSeparationSigmas = 6.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

nq::TemporalGraph synth_graph(const nq::SynthConfig& cfg) { return nq::ingest(nq::generate(cfg)); }

nq::SynthConfig large(std::uint64_t seed) {
  nq::SynthConfig c;
  c.n_users = 10000;
  c.n_weeks = 52;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------

Verdict c1_beauty_score() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_swap = 0.0;
  for (std::size_t i = 0; i < kScoreTriples; ++i) {
    const double a = u(rng), b = u(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const nq::QualityTriple q{lo, hi - lo, 1.0 - hi};
    const double s = nq::beauty_score(q);
    worst = std::max(worst, std::abs(s - (q.p_hq - q.p_lq + 1.0) / 2.0));
    worst_swap = std::max(worst_swap, std::abs(s + nq::beauty_score({q.p_hq, q.p_mq, q.p_lq}) - 1.0));
  }
  return {worst <= kScoreTol && worst_swap <= kScoreTol,
          "max |s - formula| = " + fmt(worst) + ", max |s + s_swap - 1| = " + fmt(worst_swap) + " over " +
              std::to_string(kScoreTriples) + " triples"};
}

Verdict c2_oracles() {
  std::mt19937_64 rng(2);
  std::size_t mismatches = 0, bins = 0, candidate_lists = 0;
  double worst = 0.0;
  for (int trial = 0; trial < kOracleGraphs; ++trial) {
    const std::size_t n = 10 + (kOracleMaxNodes - 10) * static_cast<std::size_t>(trial) / (kOracleGraphs - 1);
    std::uniform_int_distribution<nq::UserIndex> node(0, static_cast<nq::UserIndex>(n - 1));
    std::vector<std::pair<nq::UserIndex, nq::UserIndex>> edges;
    for (std::size_t e = 0; e < 5 * n; ++e) {
      const auto a = node(rng), b = node(rng);
      if (a != b) edges.emplace_back(a, b);
    }
    const auto snap = nq::GraphSnapshot::from_edges(n, edges);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::optional<double>> v(n);
    for (auto& x : v)
      if (u(rng) < 0.85) x = u(rng);
    const nq::BeautyProfiles profiles(v);

    const auto fast = nq::correlation_spectrum(snap, profiles, 100, 2);
    const auto slow = nq::oracle_spectrum(snap, profiles, 100);
    if (fast.points.size() != slow.points.size() || fast.users != slow.users) ++mismatches;
    for (std::size_t i = 0; i < std::min(fast.points.size(), slow.points.size()); ++i) {
      const auto &f = fast.points[i], &s = slow.points[i];
      if (f.index != s.index || f.count != s.count) ++mismatches;
      worst = std::max({worst, std::abs(f.b_nn - s.b_nn), std::abs(f.variance - s.variance)});
      ++bins;
    }
    for (nq::UserIndex x = 0; x < n; ++x) {
      if (nq::candidates(snap, x) != nq::oracle_candidates(snap, x)) ++mismatches;
      ++candidate_lists;
    }
    std::vector<double> values = profiles.defined_values();
    for (nq::UserIndex x = 0; x < n; ++x) values.push_back(static_cast<double>(snap.in_degree(x)));
    worst = std::max(worst, std::abs(nq::gini(values) - nq::oracle_gini(values)));
  }
  return {mismatches == 0 && worst <= kOracleTol,
          std::to_string(mismatches) + " count mismatches over " + std::to_string(bins) + " bins and " +
              std::to_string(candidate_lists) + " candidate lists, max real deviation " + fmt(worst)};
}

bool contract_holds(const std::vector<nq::UserWeekInstance>& t, const std::vector<nq::UserWeekInstance>& c,
                    const nq::MatchedGroups& m, const std::array<bool, nq::kNumCovariates>& enforce,
                    bool& converged) {
  converged = m.converged;
  if (!m.converged) return !m.failure.empty() && m.control_kept.size() < t.size();
  if (m.control_kept.size() < t.size()) return false;
  for (std::size_t d = 0; d < nq::kNumCovariates; ++d)
    if (enforce[d] && !(std::abs(nq::standardized_bias(t, c, d)) <= kSbThreshold)) return false;
  return true;
}

Verdict c3_balance_contract() {
  int converged_runs = 0, signalled = 0, violations = 0;
  // Direct balancing on 50k-instance problems with seed-dependent shifts and outliers.
  for (int seed = 1; seed <= kSeeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> n;
    std::vector<nq::UserWeekInstance> t(10000), c(40000);
    for (auto& x : t)
      for (auto& v : x.covariates) v = n(rng);
    const double shift = 0.1 * seed;
    const double spread = seed % 4 == 0 ? 0.05 : 1.0;  // a tight, shifted control is unbalanceable
    for (auto& x : c)
      for (std::size_t d = 0; d < nq::kNumCovariates; ++d)
        x.covariates[d] = spread * n(rng) + (d % 3 == 0 ? shift : 0.0) + (n(rng) > 2.5 ? 10.0 : 0.0);
    const auto m = nq::balance(t, c);
    std::vector<nq::UserWeekInstance> kept;
    for (auto k : m.control_kept) kept.push_back(c[k]);
    bool ok = false;
    if (!contract_holds(t, kept, m, nq::BalanceOptions::all_covariates(), ok)) ++violations;
    (ok ? converged_runs : signalled)++;
  }
  const int direct_converged = converged_runs;
  // Full experiments on synthetic timelines, alternating designs.
  for (int seed = 1; seed <= kSeeds; ++seed) {
    nq::SynthConfig cfg;
    cfg.n_users = 2000;
    cfg.n_weeks = 30;
    cfg.assortativity = 0.3;
    cfg.influence_strength = 0.1 * (seed % 3);
    cfg.churn_imbalance_strength = 0.5 * (seed % 2);
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto g = synth_graph(cfg);
    nq::ExperimentConfig ec;
    ec.kind = seed % 2 ? nq::ExperimentKind::Q4Any : nq::ExperimentKind::Q5;
    ec.bootstrap = 100;
    ec.seed = static_cast<std::uint64_t>(seed);
    const auto r = nq::run_experiment(g, ec);
    auto enforce = nq::BalanceOptions::all_covariates();
    if (ec.kind == nq::ExperimentKind::Q5) enforce[nq::kNeighborBeauty] = false;
    bool ok = false;
    bool holds;
    if (r.balance.converged) {
      holds = contract_holds(r.treatment, r.control, r.balance, enforce, ok) && r.control.size() >= r.treatment.size();
    } else {
      holds = !r.balance.failure.empty() && !r.delta_b_difference && r.inactivity.empty();
    }
    if (!holds) ++violations;
    (r.balance.converged ? converged_runs : signalled)++;
  }
  return {violations == 0, "converged within |SB| <= 0.25: " + std::to_string(direct_converged) + "/20 direct, " +
                               std::to_string(converged_runs - direct_converged) + "/20 pipeline; " +
                               std::to_string(signalled) + " signalled failure; " + std::to_string(violations) +
                               " contract violations"};
}

Verdict c4_causal_null() {
  int covered = 0, failed_balance = 0;
  double mean_diff = 0.0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    auto cfg = large(static_cast<std::uint64_t>(seed));
    cfg.influence_strength = 0.0;
    cfg.degree_beauty_rho = 0.0;
    nq::ExperimentConfig ec;
    ec.kind = nq::ExperimentKind::Q4Any;
    const auto r = nq::run_experiment(synth_graph(cfg), ec);
    if (!r.delta_b_difference_ci) {
      ++failed_balance;
      continue;
    }
    covered += r.delta_b_difference_ci->contains(0.0);
    mean_diff += *r.delta_b_difference / kSeeds;
  }
  return {covered >= kNullRequired, std::to_string(covered) + "/" + std::to_string(kSeeds) +
                                        " 95% CIs cover 0 (need >= " + std::to_string(kNullRequired) +
                                        "), mean difference " + fmt(mean_diff) + ", " +
                                        std::to_string(failed_balance) + " unbalanced"};
}

Verdict c5_causal_detection() {
  const std::array<double, 3> strengths{0.1, 0.3, 0.5};
  bool separated = true, monotone = true;
  std::string detail = "effect any/alpha:";
  double prev_any = -1e300, prev_alpha = -1e300;
  for (double f : strengths) {
    auto cfg = large(1);
    cfg.influence_strength = f;
    cfg.degree_beauty_rho = 0.0;
    const auto g = synth_graph(cfg);
    nq::ExperimentConfig any;
    any.kind = nq::ExperimentKind::Q4Any;
    nq::ExperimentConfig alpha;
    alpha.kind = nq::ExperimentKind::Q4Alpha;
    alpha.alpha = 0.2;
    const auto ra = nq::run_experiment(g, any);
    const auto rb = nq::run_experiment(g, alpha);
    for (const auto* r : {&ra, &rb}) {
      if (!r->delta_b_difference) {
        separated = false;
        continue;
      }
      separated = separated && r->delta_b_treatment->value > r->delta_b_control->value &&
                  r->delta_b_treatment->ci.lo > r->delta_b_control->ci.hi;
    }
    const double ea = ra.delta_b_difference.value_or(-1e300), eb = rb.delta_b_difference.value_or(-1e300);
    monotone = monotone && ea >= prev_any && eb >= prev_alpha;
    prev_any = ea;
    prev_alpha = eb;
    detail += " f=" + fmt(f, 2) + ": " + fmt(ea) + "/" + fmt(eb);
  }
  return {separated && monotone,
          detail + (separated ? ", CIs separated" : ", CIs NOT separated") + (monotone ? ", monotone" : ", NOT monotone")};
}

Verdict c6_churn() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto cfg = large(seed);
    cfg.assortativity = 0.5;
    cfg.base_churn = 0.02;
    cfg.churn_imbalance_strength = 2.0;
    nq::ExperimentConfig ec;
    ec.kind = nq::ExperimentKind::Q5;
    ec.bootstrap = 200;
    const auto r = nq::run_experiment(synth_graph(cfg), ec);
    if (r.inactivity.size() != 12) {
      ok = false;
      detail += " seed " + std::to_string(seed) + ": no outcome;";
      continue;
    }
    double prev = 0.0;
    std::string breaks;
    for (const auto& row : r.inactivity) {
      const double ratio = row.ratio.value_or(0.0);
      if (ratio <= 1.0) breaks += " <=1 at n=" + std::to_string(row.horizon);
      if (ratio < prev) breaks += " drop " + fmt(prev, 4) + "->" + fmt(ratio, 4) + " at n=" + std::to_string(row.horizon);
      prev = ratio;
    }
    ok = ok && breaks.empty();
    detail += " seed " + std::to_string(seed) + ": n=1 " + fmt(r.inactivity.front().ratio.value_or(0.0), 3) +
              " -> n=12 " + fmt(r.inactivity.back().ratio.value_or(0.0), 3) + breaks + ";";
  }
  return {ok, "p_t/p_c > 1 and non-decreasing over n=1..12:" + detail};
}

Verdict c7_illusion() {
  double min_excess = 1e300, null_sum = 0.0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    nq::SynthConfig cfg;
    cfg.n_users = 3000;
    cfg.n_weeks = 8;
    cfg.degree_beauty_rho = 0.9;
    cfg.popularity_spread = 0.7;
    cfg.min_out_degree = 30;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto g = synth_graph(cfg);
    const auto snap = g.final_snapshot();
    const auto profiles = nq::BeautyProfiles::from_graph(g);
    const auto observed = nq::majority_illusion(snap, profiles);
    min_excess = std::min(min_excess, observed.share - observed.q);
    const auto null = nq::majority_illusion(snap, nq::shuffle_null_model(profiles, static_cast<std::uint64_t>(seed)));
    null_sum += null.share - null.q;
  }
  const double null_mean = null_sum / kSeeds;
  return {min_excess >= kIllusionExcess && std::abs(null_mean) <= kIllusionNullBand,
          "min planted share - q = " + fmt(min_excess) + " (need >= 0.2), mean shuffled share - q = " +
              fmt(null_mean) + " (need within +-0.05) over 20 seeds"};
}

int run_cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(NQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

Verdict c8_recommender(const fs::path& work) {
  const auto dir = work / "c8";
  fs::create_directories(dir);
  std::ofstream(dir / "synth.json") << R"({"n_users": 3000, "n_weeks": 20, "superstar_fraction": 0.05, "seed": 1})";
  if (run_cli("synth --config " + (dir / "synth.json").string() + " --out " + (dir / "data").string()) != 0 ||
      run_cli("recommend --data " + (dir / "data").string() + " --out " + (dir / "out").string()) != 0)
    return {false, "cli run failed"};
  const auto j = read_json(dir / "out" / "recommend.json");
  const double fav_cn = j["CN"]["fav_recs"], fav_bb = j["BB"]["fav_recs"];
  const double pf_cn = j["CN"]["p_forlorn"], pf_bb = j["BB"]["p_forlorn"];
  const double ratio_bb = j["BB"]["b_ratio"];

  const auto g = nq::load_graph(dir / "data");
  const auto profiles = nq::BeautyProfiles::from_graph(g);
  const auto recs = nq::RecordTable::read(dir / "out" / "recommendations.csv", {"u", "rule", "r", "score"});
  std::size_t bb = 0, out_of_band = 0;
  for (std::size_t i = 0; i < recs.rows(); ++i) {
    if (recs.cell(i, recs.column("rule")) != "BB") continue;
    ++bb;
    const double bu = profiles.at(g.require_index(nq::UserId{recs.get_u64(i, recs.column("u"))}));
    const double br = profiles.at(g.require_index(nq::UserId{recs.get_u64(i, recs.column("r"))}));
    if (!(br >= 0.9 * bu - 1e-12 && br <= 1.1 * bu + 1e-12)) ++out_of_band;
  }
  const bool ok = fav_cn > fav_bb && pf_bb > pf_cn && out_of_band == 0 && bb > 0 && ratio_bb >= kBandLo &&
                  ratio_bb <= kBandHi;
  return {ok, "fav_recs CN " + fmt(fav_cn) + " > BB " + fmt(fav_bb) + ", p_forlorn BB " + fmt(pf_bb) + " > CN " +
                  fmt(pf_cn) + ", b_ratio(BB) " + fmt(ratio_bb) + ", " + std::to_string(out_of_band) + "/" +
                  std::to_string(bb) + " BB pairs outside the band"};
}

Verdict c9_gap() {
  const double sigma = 1.0 / kGapSeparationSigmas;  // unit center distance = 6 sigma
  const std::vector<nq::Point3> four{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double d = 1.0 / std::sqrt(3.0);
  const std::vector<nq::Point3> two{{0, 0, 0}, {d, d, d}};
  std::map<std::size_t, int> hits;
  for (const auto* centers : {&two, &four}) {
    for (int seed = 1; seed <= kSeeds; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
      std::normal_distribution<double> n(0.0, sigma);
      std::vector<nq::Point3> pts;
      for (const auto& c : *centers)
        for (int i = 0; i < 100; ++i) pts.push_back({c[0] + n(rng), c[1] + n(rng), c[2] + n(rng)});
      hits[centers->size()] += nq::gap_statistic(pts, static_cast<std::uint64_t>(seed)).selected_k == centers->size();
    }
  }
  return {hits[2] >= kGapRequired && hits[4] >= kGapRequired,
          "K=2 recovered " + std::to_string(hits[2]) + "/20, K=4 recovered " + std::to_string(hits[4]) +
              "/20 (need >= 18 each) at 6 sigma separation"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Compares two output directories; manifests are compared without the
// fields that legitimately differ between runs.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> fa, fb;
  for (const auto& e : fs::directory_iterator(a)) fa.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) fb.insert(e.path().filename().string());
  if (fa != fb || fa.empty()) {
    why = "file sets differ in " + a.filename().string();
    return false;
  }
  for (const auto& f : fa) {
    if (f == "manifest.json") {
      auto ja = read_json(a / f), jb = read_json(b / f);
      for (auto* j : {&ja, &jb}) {
        j->erase("wall_time_seconds");
        j->erase("output_dir");
      }
      if (ja != jb) {
        why = "manifest differs in " + a.filename().string();
        return false;
      }
    } else if (slurp(a / f) != slurp(b / f)) {
      why = f + " differs in " + a.filename().string();
      return false;
    }
  }
  return true;
}

Verdict c10_determinism(const fs::path& work) {
  const auto dir = work / "c10";
  fs::create_directories(dir);
  std::ofstream(dir / "synth.json")
      << R"({"n_users": 1500, "n_weeks": 30, "superstar_fraction": 0.05, "assortativity": 0.3,)"
      << R"( "influence_strength": 0.2, "churn_imbalance_strength": 1.0, "seed": 4})";
  std::ofstream(dir / "q4.json") << R"({"kind": "q4_any", "bootstrap": 200, "seed": 3})";
  std::ofstream(dir / "q5.json") << R"({"kind": "q5", "bootstrap": 200, "seed": 3})";
  {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 0.7);
    std::ofstream ratings(dir / "ratings.csv"), scores(dir / "scores.csv");
    ratings << "item,rater,grade\n";
    scores << "item,score\n";
    for (int item = 1; item <= 200; ++item) {
      const double s = u(rng);
      scores << item << ',' << nq::format_double(s) << '\n';
      for (int rater = 1; rater <= 5; ++rater)
        ratings << item << ',' << rater << ',' << std::clamp(static_cast<int>(std::lround(1 + 4 * s + n(rng))), 1, 5)
                << '\n';
    }
  }
  const std::string data = (dir / "data").string();
  if (run_cli("synth --config " + (dir / "synth.json").string() + " --out " + data) != 0)
    return {false, "synth failed"};

  const std::vector<std::pair<std::string, std::string>> commands{
      {"synth", "synth --config " + (dir / "synth.json").string()},
      {"ingest-check", "ingest-check --data " + data},
      {"metrics", "metrics --data " + data},
      {"metrics-week", "metrics --data " + data + " --week 20"},
      {"spectrum", "spectrum --data " + data + " --seed 5"},
      {"illusion", "illusion --data " + data + " --seed 5"},
      {"illusion-median", "illusion --data " + data + " --threshold median"},
      {"match-q4", "match --data " + data + " --config " + (dir / "q4.json").string()},
      {"match-q5", "match --data " + data + " --config " + (dir / "q5.json").string()},
      {"recommend", "recommend --data " + data + " --seed 2"},
      {"cluster-gap", "cluster --data " + data + " --seed 2"},
      {"cluster-k4", "cluster --data " + data + " --k 4"},
      {"validate-scores", "validate-scores --data " + dir.string()},
  };
  int identical = 0;
  std::string why;
  for (const auto& [name, args] : commands) {
    const auto a = dir / "run1" / name, b = dir / "run2" / name, c = dir / "run3" / name;
    if (run_cli(args + " --threads 1 --out " + a.string()) != 0 ||
        run_cli(args + " --threads 4 --out " + b.string()) != 0 ||
        run_cli(args + " --out " + c.string(), "NETQUALITY_THREADS=3") != 0) {
      why = name + " failed to run";
      break;
    }
    if (!same_outputs(a, b, why) || !same_outputs(a, c, why)) break;
    ++identical;
  }
  const bool ok = identical == static_cast<int>(commands.size());
  return {ok, std::to_string(identical) + "/" + std::to_string(commands.size()) +
                  " invocations byte-identical across --threads 1, --threads 4 and NETQUALITY_THREADS=3" +
                  (ok ? "" : " (" + why + ")")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const auto work = fs::temp_directory_path() / ("netquality_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<Criterion> criteria{
      {1, "beauty score exactness and swap symmetry", 1.0, c1_beauty_score},
      {2, "oracle equivalence: spectrum, candidates, gini", 30.0, c2_oracles},
      {3, "balance contract", 120.0, c3_balance_contract},
      {4, "causal null", 600.0, c4_causal_null},
      {5, "causal detection and monotonicity", 900.0, c5_causal_detection},
      {6, "churn detection", 600.0, c6_churn},
      {7, "majority illusion construction", 60.0, c7_illusion},
      {8, "recommender direction", 120.0, [&] { return c8_recommender(work); }},
      {9, "gap statistic recovery", 120.0, c9_gap},
      {10, "determinism across reruns and thread counts", 300.0, [&] { return c10_determinism(work); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.limit_seconds;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << v.detail << " ("
              << fmt(seconds, 3) << " s, limit " << c.limit_seconds << " s" << (in_time ? "" : ", EXCEEDED") << ")"
              << std::endl;
  }
  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}
