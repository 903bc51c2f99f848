#include "netquality/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "netquality/random.hpp"

namespace nq {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Q4Any: return "q4_any";
    case ExperimentKind::Q4ExactlyN: return "q4_exactly_n";
    case ExperimentKind::Q4Alpha: return "q4_alpha";
    case ExperimentKind::Q5: return "q5";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "q4_any") return ExperimentKind::Q4Any;
  if (s == "q4_exactly_n") return ExperimentKind::Q4ExactlyN;
  if (s == "q4_alpha") return ExperimentKind::Q4Alpha;
  if (s == "q5") return ExperimentKind::Q5;
  throw InputError("unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    if (!j.contains("kind")) throw InputError("experiment config lacks \"kind\"");
    c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    c.n = j.value("n", c.n);
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("delta_control")) {
      const auto& d = j.at("delta_control");
      if (!d.is_array() || d.size() != 2) throw InputError("\"delta_control\" must be [low, high]");
      c.delta.control_low = d[0].get<double>();
      c.delta.control_high = d[1].get<double>();
    }
    c.delta.treatment_min = j.value("delta_treatment", c.delta.treatment_min);
    if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<int>>();
    c.seed = j.value("seed", c.seed);
    c.bootstrap = j.value("bootstrap", c.bootstrap);
    c.sb_threshold = j.value("sb_threshold", c.sb_threshold);
    c.control_ratio = j.value("control_ratio", c.control_ratio);
    c.max_restarts = j.value("max_restarts", c.max_restarts);
    c.confidence = j.value("confidence", c.confidence);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  }
  if (c.kind == ExperimentKind::Q4ExactlyN && c.n < 1) throw InputError("\"n\" must be >= 1");
  if (c.kind == ExperimentKind::Q4Alpha && !(c.alpha >= 0.0)) throw InputError("\"alpha\" must be >= 0");
  if (c.delta.control_low > c.delta.control_high) throw InputError("\"delta_control\" low exceeds high");
  if (c.horizons.empty()) throw InputError("\"horizons\" must not be empty");
  for (int h : c.horizons)
    if (h < 1) throw InputError("inactivity horizons must be >= 1");
  if (c.bootstrap == 0) throw InputError("\"bootstrap\" must be positive");
  if (!(c.control_ratio >= 2.0)) throw InputError("\"control_ratio\" must be >= 2");
  if (c.max_restarts < 0) throw InputError("\"max_restarts\" must be >= 0");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open experiment config", path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what(), path.string());
  }
  return parse_experiment_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"n", c.n},
          {"alpha", c.alpha},
          {"delta_control", {c.delta.control_low, c.delta.control_high}},
          {"delta_treatment", c.delta.treatment_min},
          {"horizons", c.horizons},
          {"seed", c.seed},
          {"bootstrap", c.bootstrap},
          {"sb_threshold", c.sb_threshold},
          {"control_ratio", c.control_ratio},
          {"max_restarts", c.max_restarts},
          {"confidence", c.confidence}};
}

namespace {

std::vector<UserWeekInstance> subsample(const std::vector<UserWeekInstance>& group, std::size_t size,
                                        std::uint64_t seed) {
  if (size >= group.size()) return group;
  std::vector<std::size_t> order(group.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(size);
  std::sort(order.begin(), order.end());
  std::vector<UserWeekInstance> out;
  out.reserve(size);
  for (std::size_t i : order) out.push_back(group[i]);
  return out;
}

GroupOutcome summarize(const DeltaBOutcome& o, std::size_t resamples, std::uint64_t seed, double level) {
  GroupOutcome g;
  g.value = o.value;
  g.used = o.ratios.size();
  g.excluded = o.no_next_week + o.zero_prior;
  g.ci = bootstrap_mean_ci(o.ratios, resamples, seed, level);
  return g;
}

}  // namespace

ExperimentResult run_experiment(const TemporalGraph& g, const ExperimentConfig& cfg, int threads) {
  ExperimentResult r;
  r.config = cfg;

  GroupOptions opts;
  opts.threads = threads;
  GroupSelection sel;
  switch (cfg.kind) {
    case ExperimentKind::Q4Any: sel = build_groups_q4(g, Q4Variant::any(), opts); break;
    case ExperimentKind::Q4ExactlyN: sel = build_groups_q4(g, Q4Variant::exactly(cfg.n), opts); break;
    case ExperimentKind::Q4Alpha: sel = build_groups_q4(g, Q4Variant::with_alpha(cfg.alpha), opts); break;
    case ExperimentKind::Q5: {
      // Every instance must have a complete follow-up window for the longest horizon.
      const int longest = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());
      sel = build_groups_q5(g, cfg.delta, g.last_week() - longest, opts);
      break;
    }
  }
  r.candidates = sel.candidates;
  r.skipped_no_covariates = sel.skipped_no_covariates;
  r.treatment_pool = sel.treatment.size();
  r.control_pool = sel.control.size();

  BalanceOptions bopts;
  bopts.threshold = cfg.sb_threshold;
  // The imbalance that defines Q5 treatment is the neighbor beauty itself, so
  // it is reported but not balanced.
  if (cfg.kind == ExperimentKind::Q5) bopts.enforce[kNeighborBeauty] = false;
  double ratio = cfg.control_ratio;
  for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt, ratio *= 2.0) {
    r.restarts = attempt;
    const auto cap = static_cast<std::size_t>(std::floor(static_cast<double>(sel.control.size()) / ratio));
    r.treatment = subsample(sel.treatment, cap, derive_seed(cfg.seed, 100 + attempt));
    r.treatment_size = r.treatment.size();
    if (r.treatment.size() < 2) {
      r.balance = {};
      r.balance.failure = "not enough instances to form a treatment group against the control pool";
      break;
    }
    r.balance = balance(r.treatment, sel.control, bopts);
    if (r.balance.converged) break;
  }
  r.control.clear();
  for (std::size_t i : r.balance.control_kept) r.control.push_back(sel.control[i]);
  r.control_size = r.control.size();
  if (!r.balance.converged) return r;

  const double level = cfg.confidence;
  if (cfg.kind == ExperimentKind::Q5) {
    for (std::size_t k = 0; k < cfg.horizons.size(); ++k) {
      const int h = cfg.horizons[k];
      const auto it = inactivity_indicators(g, r.treatment, h);
      const auto ic = inactivity_indicators(g, r.control, h);
      InactivityRow row;
      row.horizon = h;
      double st = 0.0, sc = 0.0;
      for (double x : it) st += x;
      for (double x : ic) sc += x;
      row.p_treatment = st / static_cast<double>(it.size());
      row.p_control = sc / static_cast<double>(ic.size());
      if (row.p_control > 0.0) {
        row.ratio = row.p_treatment / row.p_control;
        try {
          row.ci = bootstrap_ratio_ci(it, ic, cfg.bootstrap, derive_seed(cfg.seed, 300 + k), level);
        } catch (const UndefinedError&) {
        }
      }
      r.inactivity.push_back(row);
    }
    return r;
  }

  const auto dt = outcome_delta_b(g, r.treatment);
  const auto dc = outcome_delta_b(g, r.control);
  r.delta_b_treatment = summarize(dt, cfg.bootstrap, derive_seed(cfg.seed, 201), level);
  r.delta_b_control = summarize(dc, cfg.bootstrap, derive_seed(cfg.seed, 202), level);
  r.delta_b_difference = dt.value - dc.value;
  r.delta_b_difference_ci = bootstrap_diff_ci(dt.ratios, dc.ratios, cfg.bootstrap, derive_seed(cfg.seed, 203), level);
  return r;
}

namespace {

nlohmann::json sb_json(const CovariateVector& sb) {
  nlohmann::json j = nlohmann::json::object();
  const auto& names = covariate_names();
  for (std::size_t c = 0; c < kNumCovariates; ++c) {
    if (std::isfinite(sb[c]))
      j[std::string(names[c])] = sb[c];
    else
      j[std::string(names[c])] = sb[c] > 0 ? "inf" : "-inf";
  }
  return j;
}

nlohmann::json interval_json(const Interval& i) { return {i.lo, i.hi}; }

nlohmann::json outcome_json(const GroupOutcome& o) {
  return {{"value", o.value}, {"ci", interval_json(o.ci)}, {"used", o.used}, {"excluded", o.excluded}};
}

}  // namespace

nlohmann::json to_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  j["groups"] = {{"candidates", r.candidates},
                 {"skipped_no_covariates", r.skipped_no_covariates},
                 {"treatment_pool", r.treatment_pool},
                 {"control_pool", r.control_pool},
                 {"treatment", r.treatment_size},
                 {"control", r.control_size}};
  j["balance"] = {{"converged", r.balance.converged},
                  {"iterations", r.balance.iterations},
                  {"restarts", r.restarts},
                  {"sb_before", sb_json(r.balance.sb_before)},
                  {"sb_after", sb_json(r.balance.sb_after)}};
  if (!r.balance.failure.empty()) j["balance"]["failure"] = r.balance.failure;

  nlohmann::json outcomes = nlohmann::json::object();
  if (r.delta_b_treatment) {
    outcomes["delta_b"] = {{"treatment", outcome_json(*r.delta_b_treatment)},
                           {"control", outcome_json(*r.delta_b_control)},
                           {"difference", *r.delta_b_difference},
                           {"difference_ci", interval_json(*r.delta_b_difference_ci)}};
  }
  if (!r.inactivity.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.inactivity) {
      nlohmann::json jr = {{"horizon", row.horizon},
                           {"p_treatment", row.p_treatment},
                           {"p_control", row.p_control}};
      jr["ratio"] = row.ratio ? nlohmann::json(*row.ratio) : nlohmann::json(nullptr);
      jr["ci"] = row.ci ? interval_json(*row.ci) : nlohmann::json(nullptr);
      rows.push_back(jr);
    }
    outcomes["inactivity"] = rows;
  }
  j["outcomes"] = outcomes;
  return j;
}

}  // namespace nq
