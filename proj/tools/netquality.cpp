// netquality: command-line front end over the analysis library.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netquality/clustering.hpp"
#include "netquality/experiment.hpp"
#include "netquality/io.hpp"
#include "netquality/metrics.hpp"
#include "netquality/parallel.hpp"
#include "netquality/recommend.hpp"
#include "netquality/scoring.hpp"
#include "netquality/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct CommonArgs {
  std::string data;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

class Run {
 public:
  Run(std::string subcommand, const CommonArgs& args)
      : subcommand_(std::move(subcommand)), args_(args), start_(std::chrono::steady_clock::now()) {}

  void add_input(const fs::path& p) { inputs_.push_back(p.string()); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  /// Writes into --out when given; otherwise `stdout_fallback` outputs go to stdout.
  void emit(const std::string& name, const std::string& content, bool stdout_fallback = false) {
    if (args_.out.empty()) {
      if (stdout_fallback) std::cout << content;
      return;
    }
    nq::write_text_file(fs::path(args_.out) / name, content);
  }

  void finish() {
    if (args_.out.empty()) return;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"subcommand", subcommand_},
              {"config", args_.config.empty() ? json(nullptr) : json(args_.config)},
              {"inputs", inputs_},
              {"seed", seed_ ? json(*seed_) : json(nullptr)},
              {"output_dir", args_.out},
              {"tool_version", kToolVersion},
              {"wall_time_seconds", wall}};
    nq::write_text_file(fs::path(args_.out) / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  CommonArgs args_;
  std::vector<std::string> inputs_;
  std::optional<std::uint64_t> seed_;
  std::chrono::steady_clock::time_point start_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

nq::TemporalGraph load(Run& run, const CommonArgs& a, nq::IngestReport* report = nullptr) {
  const fs::path dir(a.data);
  nq::IngestReport local;
  auto g = nq::load_graph(dir, report ? report : &local);
  for (const char* stem : {"follows", "photos", "favorites", "groups"}) run.add_input(nq::find_stream_file(dir, stem));
  for (const auto& w : (report ? report : &local)->warnings) std::cerr << "warning: " << w << "\n";
  return g;
}

std::string lorenz_csv(std::span<const double> values) {
  std::ostringstream os;
  os << "pop_share,resource_share\n";
  for (const auto& p : nq::lorenz_curve(values))
    os << nq::format_double(p.population_share) << ',' << nq::format_double(p.resource_share) << '\n';
  return os.str();
}

std::string spectrum_csv(const nq::SpectrumCurve& c) {
  std::ostringstream os;
  os << "bin_center,b_nn,count,variance\n";
  for (const auto& b : c.points)
    os << nq::format_double(b.center) << ',' << nq::format_double(b.b_nn) << ',' << b.count << ','
       << nq::format_double(b.variance) << '\n';
  return os.str();
}

json spectrum_summary(const nq::SpectrumCurve& c) {
  json j = {{"bins", c.bins}, {"populated_bins", c.points.size()}, {"users", c.users}};
  try {
    j["rank_correlation"] = nq::spectrum_rank_correlation(c);
  } catch (const nq::Error&) {
    j["rank_correlation"] = nullptr;
  }
  try {
    j["weighted_slope"] = nq::spectrum_weighted_slope(c);
  } catch (const nq::Error&) {
    j["weighted_slope"] = nullptr;
  }
  return j;
}

std::optional<nq::WeekIndex> week_option(int week) {
  return week >= 0 ? std::optional<nq::WeekIndex>(week) : std::nullopt;
}

// --- subcommands -------------------------------------------------------------

int cmd_ingest_check(const CommonArgs& a) {
  Run run("ingest-check", a);
  nq::IngestReport report;
  const auto g = load(run, a, &report);
  const json j = {{"users", g.num_users()},
                  {"follows", g.num_follows()},
                  {"photos", g.num_photos()},
                  {"favorites", g.num_favorites()},
                  {"group_memberships", g.num_group_memberships()},
                  {"first_week", g.first_week()},
                  {"last_week", g.last_week()},
                  {"duplicate_follows", report.duplicate_follows},
                  {"duplicate_groups", report.duplicate_groups},
                  {"dropped_favorites", report.dropped_favorites},
                  {"warnings", report.warnings.size()}};
  run.emit("ingest.json", dump(j), true);
  run.finish();
  return 0;
}

int cmd_metrics(const CommonArgs& a, int week) {
  Run run("metrics", a);
  const auto g = load(run, a);
  const auto up_to = week_option(week);
  const auto profiles = nq::BeautyProfiles::from_graph(g, up_to);
  const auto snapshot = up_to ? g.snapshot_at(*up_to + 1) : g.final_snapshot();

  const auto beauty = profiles.defined_values();
  std::vector<double> favs;
  for (nq::UserIndex u = 0; u < g.num_users(); ++u) favs.push_back(static_cast<double>(g.favorites_received(u)));

  json j = {{"users", g.num_users()}, {"profiled_users", profiles.count()}, {"edges", snapshot.num_edges()}};
  auto guarded = [](auto&& f) -> json {
    try {
      return f();
    } catch (const nq::Error&) {
      return nullptr;
    }
  };
  j["beauty_mean"] = guarded([&] { return json(profiles.mean()); });
  j["beauty_median"] = guarded([&] { return json(profiles.median()); });
  j["rho_indegree_beauty"] =
      guarded([&] { return json(nq::degree_beauty_correlation(snapshot, profiles, nq::DegreeDirection::In)); });
  j["rho_outdegree_beauty"] =
      guarded([&] { return json(nq::degree_beauty_correlation(snapshot, profiles, nq::DegreeDirection::Out)); });
  j["gini_beauty"] = guarded([&] { return json(nq::gini(beauty)); });
  j["gini_favorites"] = guarded([&] { return json(nq::gini(favs)); });

  run.emit("metrics.json", dump(j), true);
  if (!beauty.empty()) {
    try {
      run.emit("lorenz_beauty.csv", lorenz_csv(beauty));
    } catch (const nq::UndefinedError&) {
    }
  }
  try {
    run.emit("lorenz_favorites.csv", lorenz_csv(favs));
  } catch (const nq::Error&) {
  }
  run.finish();
  return 0;
}

int cmd_spectrum(const CommonArgs& a, int bins, int week) {
  Run run("spectrum", a);
  const std::uint64_t seed = a.seed.value_or(1);
  run.set_seed(seed);
  const auto g = load(run, a);
  const auto up_to = week_option(week);
  const auto profiles = nq::BeautyProfiles::from_graph(g, up_to);
  const auto snapshot = up_to ? g.snapshot_at(*up_to + 1) : g.final_snapshot();
  const int threads = nq::resolve_threads(a.threads);

  const auto curve = nq::correlation_spectrum(snapshot, profiles, bins, threads);
  const auto null_curve = nq::correlation_spectrum(snapshot, nq::shuffle_null_model(profiles, seed), bins, threads);
  run.emit("spectrum.csv", spectrum_csv(curve), true);
  run.emit("spectrum_null.csv", spectrum_csv(null_curve));
  run.emit("spectrum.json", dump({{"observed", spectrum_summary(curve)}, {"null", spectrum_summary(null_curve)}}));
  run.finish();
  return 0;
}

int cmd_illusion(const CommonArgs& a, const std::string& threshold) {
  Run run("illusion", a);
  const std::uint64_t seed = a.seed.value_or(1);
  run.set_seed(seed);
  const auto g = load(run, a);
  const auto kind = threshold == "median" ? nq::ThresholdKind::Median : nq::ThresholdKind::Mean;
  const auto profiles = nq::BeautyProfiles::from_graph(g);
  const auto snapshot = g.final_snapshot();

  const auto r = nq::majority_illusion(snapshot, profiles, kind);
  const auto shuffled = nq::shuffle_null_model(profiles, seed);
  const auto null_r = nq::majority_illusion(snapshot, shuffled, kind);

  std::ostringstream os;
  os << "node,neighbor_fraction\n";
  for (nq::UserIndex u = 0; u < g.num_users(); ++u)
    if (r.neighbor_fraction[u]) os << g.id(u).value << ',' << nq::format_double(*r.neighbor_fraction[u]) << '\n';
  run.emit("illusion.csv", os.str());

  auto summary = [](const nq::IllusionReport& x) {
    return json{{"threshold", x.threshold},
                {"q", x.q},
                {"share", x.share},
                {"excess", x.share - x.q},
                {"nodes_considered", x.nodes_considered},
                {"profiled_users", x.profiled_users}};
  };
  run.emit("illusion.json", dump({{"threshold_kind", threshold}, {"observed", summary(r)}, {"null", summary(null_r)}}),
           true);
  run.finish();
  return 0;
}

int cmd_match(const CommonArgs& a) {
  Run run("match", a);
  auto cfg = nq::load_experiment_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  run.set_seed(cfg.seed);
  const auto g = load(run, a);
  const auto result = nq::run_experiment(g, cfg, nq::resolve_threads(a.threads));
  run.emit("results.json", dump(nq::to_json(result)), true);
  std::ostringstream os;
  os << "user,week,group\n";
  for (const auto& i : result.treatment) os << g.id(i.user).value << ',' << i.week << ",treatment\n";
  for (const auto& i : result.control) os << g.id(i.user).value << ',' << i.week << ",control\n";
  run.emit("instances.csv", os.str());
  run.finish();
  return 0;
}

struct ClusterOutcome {
  nq::UserFeatures features;
  nq::ClusterModel model;
  std::optional<nq::GapResult> gap;
  std::optional<std::vector<nq::ClusterLabel>> labels;
};

ClusterOutcome cluster_users(const nq::TemporalGraph& g, const nq::BeautyProfiles& profiles, std::uint64_t seed,
                             int k, const nq::GapOptions& gap_options, int threads) {
  ClusterOutcome c;
  c.features = nq::features(g, profiles);
  if (c.features.points.empty()) throw nq::UndefinedError("no user with photos to cluster");
  auto opts = gap_options;
  opts.kmeans.threads = threads;
  std::size_t chosen = static_cast<std::size_t>(k);
  if (k <= 0) {
    c.gap = nq::gap_statistic(c.features.points, seed, opts);
    chosen = c.gap->selected_k;
  }
  c.model = nq::kmeans_best(c.features.points, chosen, seed, opts.restarts, opts.kmeans);
  c.labels = nq::label_clusters(c.model.centroids);
  return c;
}

int cmd_recommend(const CommonArgs& a, double band) {
  Run run("recommend", a);
  const std::uint64_t seed = a.seed.value_or(1);
  run.set_seed(seed);
  const auto g = load(run, a);
  const int threads = nq::resolve_threads(a.threads);
  const auto profiles = nq::BeautyProfiles::from_graph(g);
  const auto snapshot = g.final_snapshot();

  // Forlorn Beauty membership comes from a four-cluster model.
  const auto clusters = cluster_users(g, profiles, seed, 4, {}, threads);
  std::vector<bool> forlorn(g.num_users(), false);
  for (std::size_t i = 0; i < clusters.features.users.size(); ++i)
    forlorn[clusters.features.users[i]] =
        (*clusters.labels)[clusters.model.assignment[i]] == nq::ClusterLabel::ForlornBeauty;
  std::vector<double> favs(g.num_users());
  for (nq::UserIndex u = 0; u < g.num_users(); ++u) favs[u] = static_cast<double>(g.favorites_received(u));

  std::vector<nq::UserIndex> recipients;
  for (nq::UserIndex u = 0; u < g.num_users(); ++u)
    if (profiles.has(u)) recipients.push_back(u);
  const auto recs = nq::recommend_all(snapshot, profiles, recipients, band, threads);

  std::ostringstream os;
  os << "u,rule,r,score\n";
  for (const auto* list : {&recs.cn, &recs.bb})
    for (const auto& r : *list)
      os << g.id(r.recipient).value << ',' << nq::to_string(r.rule) << ',' << g.id(r.candidate).value << ','
         << nq::format_double(r.score) << '\n';
  run.emit("recommendations.csv", os.str());

  auto eval = [&](const std::vector<nq::Recommendation>& list) -> json {
    if (list.empty()) return nullptr;
    const auto e = nq::evaluate(list, profiles, favs, forlorn);
    return {{"recommendations", e.size},
            {"profiled", e.profiled},
            {"b_recs", e.b_recs},
            {"b_ratio", e.b_ratio},
            {"fav_recs", e.fav_recs},
            {"p_forlorn", e.p_forlorn}};
  };
  run.emit("recommend.json", dump({{"band", band}, {"recipients", recipients.size()}, {"CN", eval(recs.cn)},
                                   {"BB", eval(recs.bb)}}),
           true);
  run.finish();
  return 0;
}

int cmd_cluster(const CommonArgs& a, int k, const nq::GapOptions& gap_options) {
  Run run("cluster", a);
  const std::uint64_t seed = a.seed.value_or(1);
  run.set_seed(seed);
  const auto g = load(run, a);
  const auto profiles = nq::BeautyProfiles::from_graph(g);
  const auto c = cluster_users(g, profiles, seed, k, gap_options, nq::resolve_threads(a.threads));
  const std::size_t K = c.model.k();

  auto label_of = [&](std::size_t cluster) -> std::string {
    return c.labels ? std::string(nq::to_string((*c.labels)[cluster])) : "cluster_" + std::to_string(cluster);
  };

  std::ostringstream os;
  os << "user,cluster,label\n";
  std::vector<std::size_t> sizes(K, 0);
  std::vector<double> photo_sum(K, 0.0), weeks_sum(K, 0.0);
  for (std::size_t i = 0; i < c.features.users.size(); ++i) {
    const auto u = c.features.users[i];
    const auto cl = c.model.assignment[i];
    os << g.id(u).value << ',' << cl << ',' << label_of(cl) << '\n';
    ++sizes[cl];
    photo_sum[cl] += static_cast<double>(g.photos(u).size());
    weeks_sum[cl] += static_cast<double>(g.activity_weeks(u).size());
  }
  run.emit("clusters.csv", os.str());

  json clusters = json::array();
  const double total = static_cast<double>(c.features.users.size());
  for (std::size_t cl = 0; cl < K; ++cl) {
    const double n = static_cast<double>(sizes[cl]);
    clusters.push_back({{"cluster", cl},
                        {"label", label_of(cl)},
                        {"centroid", c.model.centroids[cl]},
                        {"share", n / total},
                        {"size", sizes[cl]},
                        {"mean_photo_count", sizes[cl] ? json(photo_sum[cl] / n) : json(nullptr)},
                        {"mean_time_on_platform_weeks", sizes[cl] ? json(weeks_sum[cl] / n) : json(nullptr)}});
  }
  json j = {{"k", K},
            {"users", c.features.users.size()},
            {"degenerate_dimensions", c.features.degenerate},
            {"inertia", c.model.inertia},
            {"clusters", clusters}};
  if (c.gap) j["gap"] = {{"ks", c.gap->ks}, {"gap", c.gap->gap}, {"s", c.gap->s}, {"log_w", c.gap->log_w}};
  run.emit("clusters.json", dump(j), true);
  run.finish();
  return 0;
}

int cmd_synth(const CommonArgs& a) {
  Run run("synth", a);
  auto cfg = nq::load_synth_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  run.set_seed(cfg.seed);
  const auto streams = nq::generate(cfg);
  nq::write_event_streams(a.out, streams);
  run.emit("synth_config.json", dump(nq::to_json(cfg)));
  run.finish();
  return 0;
}

int cmd_validate_scores(const CommonArgs& a, std::string ratings_path, std::string scores_path) {
  Run run("validate-scores", a);
  if (ratings_path.empty() && !a.data.empty()) ratings_path = (fs::path(a.data) / "ratings.csv").string();
  if (scores_path.empty() && !a.data.empty()) scores_path = (fs::path(a.data) / "scores.csv").string();
  if (ratings_path.empty() || scores_path.empty())
    throw nq::InputError("validate-scores needs --ratings and --scores, or --data with ratings.csv and scores.csv");
  const auto ratings = nq::read_ratings(ratings_path);
  const auto scores = nq::read_scores(scores_path);
  run.add_input(ratings_path);
  run.add_input(scores_path);

  std::vector<std::uint64_t> items;
  const auto matrix = nq::build_rating_matrix(ratings, &items);
  std::map<std::uint64_t, double> predicted;
  for (const auto& s : scores)
    if (!predicted.emplace(s.item, s.score).second)
      throw nq::InputError("duplicate score for item " + std::to_string(s.item), scores_path);

  std::vector<double> pred, human, pred_grade;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto it = predicted.find(items[i]);
    if (it == predicted.end()) throw nq::InputError("no score for rated item " + std::to_string(items[i]), scores_path);
    double sum = 0.0;
    for (std::size_t r = 0; r < matrix.raters(); ++r) sum += matrix.at(i, r);
    pred.push_back(it->second);
    pred_grade.push_back(nq::rescale_to_5pt(it->second));
    human.push_back(sum / static_cast<double>(matrix.raters()));
  }

  auto guarded = [](auto&& f) -> json {
    try {
      return f();
    } catch (const nq::Error&) {
      return nullptr;
    }
  };
  const auto deciles = nq::decile_curve(pred, human);
  json curve = json::array();
  std::ostringstream os;
  os << "bucket,lo,hi,mean_human\n";
  for (std::size_t b = 0; b < deciles.size(); ++b) {
    curve.push_back(nullable(deciles[b]));
    os << b << ',' << nq::format_double(b / 10.0) << ',' << nq::format_double((b + 1) / 10.0) << ','
       << (deciles[b] ? nq::format_double(*deciles[b]) : "") << '\n';
  }
  const json j = {{"items", items.size()},
                  {"raters", matrix.raters()},
                  {"spearman_score_vs_human", guarded([&] { return json(nq::spearman_rho(pred, human)); })},
                  {"spearman_5pt_vs_human", guarded([&] { return json(nq::spearman_rho(pred_grade, human)); })},
                  {"cronbach_alpha", guarded([&] { return json(nq::cronbach_alpha(matrix)); })},
                  {"decile_curve", curve}};
  run.emit("decile.csv", os.str());
  run.emit("validation.json", dump(j), true);
  run.finish();
  return 0;
}

void add_common(CLI::App* sub, CommonArgs& a, bool data, bool config, bool out_required) {
  if (data) sub->add_option("--data", a.data, "Directory with follows, photos, favorites and groups files")->required();
  if (config) sub->add_option("--config", a.config, "JSON configuration file")->required();
  auto* out = sub->add_option("--out", a.out, "Output directory");
  if (out_required) out->required();
  sub->add_option("--seed", a.seed, "Seed for every random step");
  sub->add_option("--threads", a.threads, "Worker threads (default: NETQUALITY_THREADS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-attributed social network analysis"};
  app.name("netquality");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonArgs a;
  int week = -1;
  int bins = 100;
  std::string threshold = "mean";
  double band = 0.10;
  int k = 0;
  nq::GapOptions gap;
  std::string ratings, scores;

  auto* ingest = app.add_subcommand("ingest-check", "Load a dataset and report counts and warnings");
  add_common(ingest, a, true, false, false);

  auto* metrics = app.add_subcommand("metrics", "Degree-beauty correlations, Gini indices and Lorenz curves");
  add_common(metrics, a, true, false, false);
  metrics->add_option("--week", week, "Restrict to photos in weeks <= WEEK and follows before WEEK + 1");

  auto* spectrum = app.add_subcommand("spectrum", "Correlation spectrum b_nn(k) and its reshuffled null");
  add_common(spectrum, a, true, false, false);
  spectrum->add_option("--bins", bins, "Number of equal-width beauty bins")->check(CLI::PositiveNumber);
  spectrum->add_option("--week", week, "Restrict to photos in weeks <= WEEK and follows before WEEK + 1");

  auto* illusion = app.add_subcommand("illusion", "Majority illusion report and its reshuffled null");
  add_common(illusion, a, true, false, false);
  illusion->add_option("--threshold", threshold, "Global threshold: mean or median")
      ->check(CLI::IsMember({"mean", "median"}));

  auto* match = app.add_subcommand("match", "Matching experiment described by a JSON config");
  add_common(match, a, true, true, false);

  auto* recommend = app.add_subcommand("recommend", "CN and BB link recommendations with evaluation");
  add_common(recommend, a, true, false, false);
  recommend->add_option("--band", band, "Relative beauty band of the BB recommender")->check(CLI::Range(0.0, 1.0));

  auto* cluster = app.add_subcommand("cluster", "K-means user classes with gap-statistic selection");
  add_common(cluster, a, true, false, false);
  cluster->add_option("--k", k, "Fixed number of clusters (default: gap statistic)");
  cluster->add_option("--k-max", gap.k_max, "Largest K tried by the gap statistic");
  cluster->add_option("--references", gap.references, "Reference data sets for the gap statistic");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_common(synth, a, false, true, true);

  auto* validate = app.add_subcommand("validate-scores", "Compare predicted scores with human ratings");
  validate->add_option("--data", a.data, "Directory with ratings.csv and scores.csv");
  validate->add_option("--ratings", ratings, "Ratings file (item,rater,grade)");
  validate->add_option("--scores", scores, "Scores file (item,score)");
  validate->add_option("--out", a.out, "Output directory");
  validate->add_option("--seed", a.seed, "Unused; accepted for uniformity");
  validate->add_option("--threads", a.threads, "Unused; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest_check(a);
    if (*metrics) return cmd_metrics(a, week);
    if (*spectrum) return cmd_spectrum(a, bins, week);
    if (*illusion) return cmd_illusion(a, threshold);
    if (*match) return cmd_match(a);
    if (*recommend) return cmd_recommend(a, band);
    if (*cluster) return cmd_cluster(a, k, gap);
    if (*synth) return cmd_synth(a);
    if (*validate) return cmd_validate_scores(a, ratings, scores);
  } catch (const nq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
