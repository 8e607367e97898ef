#include "irsjam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace irsjam {

std::string approach_name(Approach a) {
  switch (a) {
    case Approach::FuzzyWolfPhc: return "fuzzy_wolf_phc";
    case Approach::FastQ: return "fast_q";
    case Approach::WolfPhc: return "wolf_phc";
    case Approach::PhcFixed: return "phc_fixed";
    case Approach::Ao: return "ao";
    case Approach::NoIrsPa: return "no_irs_pa";
  }
  throw std::logic_error("unknown approach");
}

Approach approach_from_string(const std::string& s) {
  for (Approach a : {Approach::FuzzyWolfPhc, Approach::FastQ, Approach::WolfPhc,
                     Approach::PhcFixed, Approach::Ao, Approach::NoIrsPa})
    if (approach_name(a) == s) return a;
  throw std::invalid_argument("unknown approach: " + s);
}

std::string sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::PMax: return "p_max";
    case SweepVariable::M: return "m";
    case SweepVariable::SinrMin: return "sinr_min";
  }
  throw std::logic_error("unknown sweep variable");
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "P_MAX" || s == "p_max") return SweepVariable::PMax;
  if (s == "M" || s == "m") return SweepVariable::M;
  if (s == "SINR_MIN" || s == "sinr_min") return SweepVariable::SinrMin;
  throw std::invalid_argument("unknown sweep variable: " + s);
}

// ---- Config -----------------------------------------------------------------

ExperimentConfig ExperimentConfig::desk_preset() {
  ExperimentConfig c;
  c.dims = ChannelDims{4, 8, 2, 4};
  return c;
}

ExperimentConfig ExperimentConfig::paper_preset() {
  ExperimentConfig c;
  c.dims = ChannelDims{8, 60, 4, 8};
  c.geometry.ue_region = Rect{100.0, 0.0, 200.0, 100.0};
  c.geometry.jammer_region = Rect{50.0, 0.0, 100.0, 100.0};
  c.jammer.power_grid_dbm = {15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
  // Tabular learning cannot carry per-element moves at M = 60..100; the
  // codebook mode keeps the action set bounded.
  c.actions.mode = PhaseActionMode::Codebook;
  c.bins = StateBinsConfig{};
  c.bins.jam_bins = 3;
  c.bins.gain_bins = 2;
  c.bins.sinr_bins = 3;
  c.bins.state_cap = 200000;
  c.episodes = 200;
  c.horizon = 100;
  c.realizations = 500;
  return c;
}

void ExperimentConfig::validate() const {
  env_config().validate();
  learner.validate();
  if (ao.max_outer_iters < 1) throw std::invalid_argument("ao_max_iters must be >= 1");
  if (episodes < 1 || horizon < 1 || realizations < 1)
    throw std::invalid_argument("episodes, horizon and realizations must be positive");
  if (approaches.empty()) throw std::invalid_argument("no approaches selected");
}

EnvConfig ExperimentConfig::env_config() const {
  EnvConfig e;
  e.dims = dims;
  e.geometry = geometry;
  e.path_loss = path_loss;
  e.p_max_w = dbm_to_watts(p_max_dbm);
  e.noise_w = dbm_to_watts(noise_dbm);
  e.reward_params.lambda1 = lambda1;
  e.reward_params.lambda2 = lambda2;
  e.reward_params.sinr_min.assign(dims.k_ues, db_to_linear(sinr_min_db));
  e.bf_mode = bf_mode;
  e.bins = bins;
  e.actions = actions;
  e.jammer = jammer;
  e.jam_estimate_noise_db = jam_estimate_noise_db;
  return e;
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a over a canonical text rendering; ties checkpoints to configs.
  std::ostringstream os;
  os << dims.n_bs << ',' << dims.m_irs << ',' << dims.k_ues << ',' << dims.n_jam << ','
     << p_max_dbm << ',' << sinr_min_db << ',' << noise_dbm << ',' << path_loss.pl0_db << ','
     << path_loss.beta_bu << ',' << path_loss.beta_br << ',' << path_loss.beta_ru << ','
     << path_loss.beta_ju << ',' << actions.n_power_levels << ',' << actions.n_phase_levels
     << ',' << static_cast<int>(actions.mode) << ',' << learner.alpha << ',' << learner.gamma
     << ',' << learner.epsilon << ',' << learner.fuzzy_states << ',' << episodes << ','
     << horizon << ',' << realizations << ',' << base_seed;
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : os.str()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

using nlohmann::json;

void parse_rect(const json& j, const char* key, Rect& r) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 4)
    throw std::invalid_argument(std::string(key) + " must be [x0,y0,x1,y1]");
  r = Rect{v[0], v[1], v[2], v[3]};
}

void parse_point(const json& j, const char* key, Point& p) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2)
    throw std::invalid_argument(std::string(key) + " must be [x,y]");
  p = Point{v[0], v[1]};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config root must be a JSON object");

  ExperimentConfig c = desk_preset();
  const std::string preset = j.value("preset", "desk");
  if (preset == "paper")
    c = paper_preset();
  else if (preset != "desk")
    throw std::invalid_argument("unknown preset: " + preset);

  static const std::vector<std::string> known = {
      "preset", "n", "n_j", "k", "m", "p_max_dbm", "sinr_min_db", "noise_dbm", "pl0_db",
      "d0_m", "beta_bu", "beta_br", "beta_ru", "beta_ju", "bs_pos", "irs_pos", "ue_region",
      "jammer_region", "n_power_levels", "n_phase_levels", "phase_mode", "action_cap",
      "beamformer", "jam_bins", "jam_range_dbm", "gain_bins", "gain_range_db", "sinr_bins",
      "sinr_rel_range_db", "state_cap", "alpha", "gamma", "epsilon", "xi_win", "xi_loss",
      "xi_fixed", "variant", "fuzzy_states", "fuzzy_width_scale", "select_by_fsa_score",
      "jammer_kind", "jammer_grid_dbm", "jammer_random_direction", "jam_estimate_noise_db",
      "lambda1", "lambda2", "episodes", "horizon", "realizations", "base_seed", "approaches",
      "out_path", "threads", "ao_max_iters", "ao_tol"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown config key: " + key);
  }

  if (j.contains("n")) c.dims.n_bs = j["n"].get<std::size_t>();
  if (j.contains("n_j")) c.dims.n_jam = j["n_j"].get<std::size_t>();
  if (j.contains("k")) c.dims.k_ues = j["k"].get<std::size_t>();
  if (j.contains("m")) c.dims.m_irs = j["m"].get<std::size_t>();
  if (j.contains("p_max_dbm")) c.p_max_dbm = j["p_max_dbm"];
  if (j.contains("sinr_min_db")) c.sinr_min_db = j["sinr_min_db"];
  if (j.contains("noise_dbm")) c.noise_dbm = j["noise_dbm"];
  if (j.contains("pl0_db")) c.path_loss.pl0_db = j["pl0_db"];
  if (j.contains("d0_m")) c.path_loss.d0 = j["d0_m"];
  if (j.contains("beta_bu")) c.path_loss.beta_bu = j["beta_bu"];
  if (j.contains("beta_br")) c.path_loss.beta_br = j["beta_br"];
  if (j.contains("beta_ru")) c.path_loss.beta_ru = j["beta_ru"];
  if (j.contains("beta_ju")) c.path_loss.beta_ju = j["beta_ju"];
  if (j.contains("bs_pos")) parse_point(j, "bs_pos", c.geometry.bs_position);
  if (j.contains("irs_pos")) parse_point(j, "irs_pos", c.geometry.irs_position);
  if (j.contains("ue_region")) parse_rect(j, "ue_region", c.geometry.ue_region);
  if (j.contains("jammer_region")) parse_rect(j, "jammer_region", c.geometry.jammer_region);
  if (j.contains("n_power_levels")) c.actions.n_power_levels = j["n_power_levels"];
  if (j.contains("n_phase_levels")) c.actions.n_phase_levels = j["n_phase_levels"];
  if (j.contains("phase_mode")) {
    const std::string m = j["phase_mode"];
    if (m == "incremental")
      c.actions.mode = PhaseActionMode::Incremental;
    else if (m == "codebook")
      c.actions.mode = PhaseActionMode::Codebook;
    else
      throw std::invalid_argument("phase_mode must be incremental or codebook");
  }
  if (j.contains("action_cap")) c.actions.action_cap = j["action_cap"];
  if (j.contains("beamformer")) {
    const std::string m = j["beamformer"];
    if (m == "mrt")
      c.bf_mode = BeamformerMode::Mrt;
    else if (m == "mmse")
      c.bf_mode = BeamformerMode::Mmse;
    else
      throw std::invalid_argument("beamformer must be mrt or mmse");
  }
  if (j.contains("jam_bins")) c.bins.jam_bins = j["jam_bins"];
  if (j.contains("jam_range_dbm")) {
    c.bins.jam_lo_dbm = j["jam_range_dbm"].at(0);
    c.bins.jam_hi_dbm = j["jam_range_dbm"].at(1);
  }
  if (j.contains("gain_bins")) c.bins.gain_bins = j["gain_bins"];
  if (j.contains("gain_range_db")) {
    c.bins.gain_lo_db = j["gain_range_db"].at(0);
    c.bins.gain_hi_db = j["gain_range_db"].at(1);
  }
  if (j.contains("sinr_bins")) c.bins.sinr_bins = j["sinr_bins"];
  if (j.contains("sinr_rel_range_db")) {
    c.bins.sinr_rel_lo_db = j["sinr_rel_range_db"].at(0);
    c.bins.sinr_rel_hi_db = j["sinr_rel_range_db"].at(1);
  }
  if (j.contains("state_cap")) c.bins.state_cap = j["state_cap"];
  if (j.contains("alpha")) c.learner.alpha = j["alpha"];
  if (j.contains("gamma")) c.learner.gamma = j["gamma"];
  if (j.contains("epsilon")) c.learner.epsilon = j["epsilon"];
  if (j.contains("xi_win")) c.learner.xi_win = j["xi_win"];
  if (j.contains("xi_loss")) c.learner.xi_loss = j["xi_loss"];
  if (j.contains("xi_fixed")) c.learner.xi_fixed = j["xi_fixed"];
  if (j.contains("variant")) {
    const std::string v = j["variant"];
    if (v == "q_only") c.learner.variant = Variant::QOnly;
    else if (v == "phc_fixed") c.learner.variant = Variant::PhcFixed;
    else if (v == "wolf_phc") c.learner.variant = Variant::WolfPhc;
    else if (v == "fuzzy_wolf_phc") c.learner.variant = Variant::FuzzyWolfPhc;
    else throw std::invalid_argument("unknown variant: " + v);
  }
  if (j.contains("fuzzy_states")) c.learner.fuzzy_states = j["fuzzy_states"];
  if (j.contains("fuzzy_width_scale")) c.learner.fuzzy_width_scale = j["fuzzy_width_scale"];
  if (j.contains("select_by_fsa_score")) c.learner.select_by_fsa_score = j["select_by_fsa_score"];
  if (j.contains("jammer_kind")) c.jammer.kind = jammer_kind_from_string(j["jammer_kind"]);
  if (j.contains("jammer_grid_dbm"))
    c.jammer.power_grid_dbm = j["jammer_grid_dbm"].get<std::vector<double>>();
  if (j.contains("jammer_random_direction")) c.jammer.random_direction = j["jammer_random_direction"];
  if (j.contains("jam_estimate_noise_db")) c.jam_estimate_noise_db = j["jam_estimate_noise_db"];
  if (j.contains("lambda1")) c.lambda1 = j["lambda1"];
  if (j.contains("lambda2")) c.lambda2 = j["lambda2"];
  if (j.contains("episodes")) c.episodes = j["episodes"];
  if (j.contains("horizon")) c.horizon = j["horizon"];
  if (j.contains("realizations")) c.realizations = j["realizations"];
  if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("approaches")) {
    c.approaches.clear();
    for (const auto& a : j["approaches"]) c.approaches.push_back(approach_from_string(a));
  }
  if (j.contains("out_path")) c.out_path = j["out_path"];
  if (j.contains("threads")) c.threads = j["threads"];
  if (j.contains("ao_max_iters")) c.ao.max_outer_iters = j["ao_max_iters"];
  if (j.contains("ao_tol")) c.ao.convergence_tol = j["ao_tol"];

  c.validate();
  return c;
}

// ---- Run orchestration --------------------------------------------------------

namespace {

struct CurveSet {
  std::vector<double> reward, rate, protection;  // per episode
};

LearnerConfig learner_for(const ExperimentConfig& cfg, Approach a) {
  LearnerConfig lc = cfg.learner;
  switch (a) {
    case Approach::FuzzyWolfPhc: lc.variant = Variant::FuzzyWolfPhc; break;
    case Approach::FastQ: lc.variant = Variant::QOnly; break;
    case Approach::WolfPhc: lc.variant = Variant::WolfPhc; break;
    case Approach::PhcFixed: lc.variant = Variant::PhcFixed; break;
    default: throw std::logic_error("not a learning approach");
  }
  return lc;
}

CurveSet curves_from_env(const Environment& env) {
  CurveSet c;
  for (const EpisodeStats& s : env.episode_stats()) {
    c.reward.push_back(s.mean_reward());
    c.rate.push_back(s.mean_rate());
    c.protection.push_back(s.protection(env.config().dims.k_ues));
  }
  return c;
}

/// Trains a learning approach on one realization and returns its per-episode
/// curves.
CurveSet run_learning(const ExperimentConfig& cfg, Approach a, std::uint64_t realization_seed) {
  Environment env(cfg.env_config());
  env.reset_realization(realization_seed);
  Rng rng(mix_seed(realization_seed,
                   seed_tag::train + 16 * static_cast<std::uint64_t>(a)));
  const LearnerConfig lc = learner_for(cfg, a);
  if (a == Approach::FastQ)
    fast_q_baseline(env, lc, cfg.episodes, cfg.horizon, rng);
  else
    train(env, lc, cfg.episodes, cfg.horizon, rng);
  return curves_from_env(env);
}

/// Evaluates a per-slot solver baseline over the same episode structure.
CurveSet run_solver(const ExperimentConfig& cfg, Approach a, std::uint64_t realization_seed) {
  const EnvConfig ec = cfg.env_config();
  Rng placement_rng(mix_seed(realization_seed, seed_tag::placement));
  const Geometry geom =
      sample_placement(ec.geometry, ec.dims.k_ues, ec.path_loss, placement_rng);
  const ChannelSet ch =
      sample_channels(geom, ec.path_loss, ec.dims, mix_seed(realization_seed, seed_tag::fading));
  JammerAgent jammer(ec.jammer, ec.dims.k_ues, ec.dims.n_jam);
  jammer.reset(mix_seed(realization_seed, seed_tag::jammer));

  const ActionSpace actions(ec.actions, ec.p_max_w, ec.dims.k_ues, ec.dims.m_irs,
                            ec.actions.mode == PhaseActionMode::Codebook ? ec.dims.k_ues + 1 : 0);
  SolveConstraints constraints{ec.p_max_w, ec.reward_params.sinr_min, ec.noise_w, ec.bf_mode};

  PhaseConfig phi(ec.dims.m_irs);
  std::vector<double> prev_jam_dbm(
      ec.dims.k_ues, *std::min_element(ec.jammer.power_grid_dbm.begin(),
                                       ec.jammer.power_grid_dbm.end()));
  double last_reward = 0.0;

  auto worst_case_estimate = [&](const std::vector<double>& dbm) {
    JammerAction est;
    est.p_jam_w.resize(ec.dims.k_ues);
    est.z.resize(ec.dims.k_ues);
    for (std::size_t k = 0; k < ec.dims.k_ues; ++k) {
      est.p_jam_w[k] = dbm_to_watts(dbm[k]);
      const double n = arma::norm(ch.h_jam_ue[k]);
      est.z[k] = n > 0.0 ? arma::cx_vec(ch.h_jam_ue[k] / n)
                         : arma::cx_vec(ec.dims.n_jam, arma::fill::zeros);
    }
    return est;
  };

  CurveSet curves;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    EpisodeStats stats;
    for (int t = 0; t < cfg.horizon; ++t) {
      PowerAllocation pa;
      double rate = 0.0;
      std::vector<double> sinrs;
      if (a == Approach::Ao) {
        const AoResult sol = alternating_optimize(ch, worst_case_estimate(prev_jam_dbm),
                                                  cfg.ao, actions, constraints, phi);
        phi = sol.phi;
        pa = sol.pa;
        const JammerAction ja = jammer.act(ch, last_reward);
        const Beamformers w = transmit_beamformers(ch, phi, ec.bf_mode, ec.noise_w, &pa.p);
        sinrs = sinr_all(effective_channels(ch, phi), pa, w, ch, ja, ec.noise_w);
        for (std::size_t k = 0; k < ec.dims.k_ues; ++k)
          prev_jam_dbm[k] = watts_to_dbm(ja.p_jam_w[k]);
      } else {  // NoIrsPa: perfect knowledge of the current jamming action
        const JammerAction ja = jammer.act(ch, last_reward);
        const PaResult sol = optimal_pa_no_irs(ch, ja, actions, constraints);
        pa = sol.pa;
        ChannelSet direct = ch;
        for (auto& g : direct.g_irs_ue) g.zeros();
        const Beamformers w =
            transmit_beamformers(direct, phi, ec.bf_mode, ec.noise_w, &pa.p);
        sinrs = sinr_all(effective_channels(direct, phi), pa, w, direct, ja, ec.noise_w);
        for (std::size_t k = 0; k < ec.dims.k_ues; ++k)
          prev_jam_dbm[k] = watts_to_dbm(ja.p_jam_w[k]);
      }
      const RewardBreakdown rb = reward(sinrs, pa, ec.reward_params);
      rate = rb.rate;
      last_reward = rb.total();
      stats.reward_sum += rb.total();
      stats.rate_sum += rate;
      for (std::size_t k = 0; k < ec.dims.k_ues; ++k)
        stats.protected_pairs += sinrs[k] >= ec.reward_params.sinr_min[k] ? 1 : 0;
      stats.slots += 1;
    }
    curves.reward.push_back(stats.mean_reward());
    curves.rate.push_back(stats.mean_rate());
    curves.protection.push_back(stats.protection(ec.dims.k_ues));
  }
  return curves;
}

CurveSet run_one(const ExperimentConfig& cfg, Approach a, std::uint64_t realization_seed) {
  if (a == Approach::Ao || a == Approach::NoIrsPa) return run_solver(cfg, a, realization_seed);
  return run_learning(cfg, a, realization_seed);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double quartile_mean(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t start = (3 * n) / 4;
  double sum = 0.0;
  for (std::size_t i = start; i < n; ++i) sum += values[i];
  return sum / static_cast<double>(n - start);
}

}  // namespace

std::vector<MetricsRecord> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n_items = static_cast<int>(cfg.approaches.size()) * cfg.realizations;
  std::vector<CurveSet> results(n_items);
  parallel_for(n_items, cfg.threads, [&](int i) {
    const int ai = i / cfg.realizations;
    const int r = i % cfg.realizations;
    results[i] = run_one(cfg, cfg.approaches[ai], cfg.base_seed + r);
  });

  std::vector<MetricsRecord> records;
  for (std::size_t ai = 0; ai < cfg.approaches.size(); ++ai) {
    for (int r = 0; r < cfg.realizations; ++r) {
      const CurveSet& c = results[ai * cfg.realizations + r];
      for (std::size_t ep = 0; ep < c.reward.size(); ++ep) {
        MetricsRecord rec;
        rec.approach = approach_name(cfg.approaches[ai]);
        rec.sweep_var = "none";
        rec.sweep_value = 0.0;
        rec.episode = static_cast<int>(ep);
        rec.seed = cfg.base_seed + r;
        rec.rate_bps_hz = c.rate[ep];
        rec.protection = c.protection[ep];
        rec.reward = c.reward[ep];
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

std::vector<MetricsRecord> run_sweep(const ExperimentConfig& cfg, SweepVariable variable,
                                     const std::vector<double>& values) {
  cfg.validate();
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");

  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    ExperimentConfig c = cfg;
    switch (variable) {
      case SweepVariable::PMax: c.p_max_dbm = v; break;
      case SweepVariable::M:
        if (v < 1.0 || v != std::floor(v))
          throw std::invalid_argument("element counts must be positive integers");
        c.dims.m_irs = static_cast<std::size_t>(v);
        break;
      case SweepVariable::SinrMin: c.sinr_min_db = v; break;
    }
    c.validate();
    configs.push_back(std::move(c));
  }

  struct Item {
    std::size_t vi, ai;
    int r;
  };
  std::vector<Item> items;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (std::size_t ai = 0; ai < cfg.approaches.size(); ++ai)
      for (int r = 0; r < cfg.realizations; ++r) items.push_back({vi, ai, r});

  std::vector<CurveSet> results(items.size());
  parallel_for(static_cast<int>(items.size()), cfg.threads, [&](int i) {
    const Item& it = items[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] =
        run_one(configs[it.vi], cfg.approaches[it.ai], cfg.base_seed + it.r);
  });

  std::vector<MetricsRecord> records;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    const CurveSet& c = results[i];
    MetricsRecord rec;
    rec.approach = approach_name(cfg.approaches[it.ai]);
    rec.sweep_var = sweep_variable_name(variable);
    rec.sweep_value = values[it.vi];
    rec.episode = -1;
    rec.seed = cfg.base_seed + it.r;
    rec.rate_bps_hz = quartile_mean(c.rate);
    rec.protection = quartile_mean(c.protection);
    rec.reward = quartile_mean(c.reward);
    records.push_back(std::move(rec));
  }
  return records;
}

// ---- CSV ---------------------------------------------------------------------

void emit_csv(const std::vector<MetricsRecord>& records, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  std::fputs("approach,sweep_var,sweep_value,episode,seed,rate_bps_hz,protection,reward\n", f);
  for (const MetricsRecord& r : records) {
    std::fprintf(f, "%s,%s,%.6g,%d,%llu,%.6g,%.6g,%.6g\n", r.approach.c_str(),
                 r.sweep_var.c_str(), r.sweep_value, r.episode,
                 static_cast<unsigned long long>(r.seed), r.rate_bps_hz, r.protection,
                 r.reward);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path.string());
}

std::vector<MetricsRecord> parse_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty CSV: " + path.string());
  std::vector<MetricsRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    MetricsRecord r;
    std::string field;
    std::getline(ss, r.approach, ',');
    std::getline(ss, r.sweep_var, ',');
    std::getline(ss, field, ',');
    r.sweep_value = std::stod(field);
    std::getline(ss, field, ',');
    r.episode = std::stoi(field);
    std::getline(ss, field, ',');
    r.seed = std::stoull(field);
    std::getline(ss, field, ',');
    r.rate_bps_hz = std::stod(field);
    std::getline(ss, field, ',');
    r.protection = std::stod(field);
    std::getline(ss, field, ',');
    r.reward = std::stod(field);
    records.push_back(std::move(r));
  }
  return records;
}

int episodes_to_convergence(std::span<const double> episode_rewards) {
  const int n = static_cast<int>(episode_rewards.size());
  if (n == 0) throw std::invalid_argument("empty reward curve");
  const double final_mean = quartile_mean(episode_rewards);
  const double band = final_mean - 0.05 * std::abs(final_mean);
  constexpr int window = 5;
  for (int e = window - 1; e < n; ++e) {
    double trail = 0.0;
    for (int i = e - window + 1; i <= e; ++i) trail += episode_rewards[i];
    trail /= window;
    if (trail >= band) return e;
  }
  return n;
}

double mean_metric(const std::vector<MetricsRecord>& records, const RecordFilter& f,
                   double MetricsRecord::* field) {
  double sum = 0.0;
  int n = 0;
  for (const MetricsRecord& r : records) {
    if (!f.approach.empty() && r.approach != f.approach) continue;
    if (f.match_value && r.sweep_value != f.sweep_value) continue;
    if (f.match_seed && r.seed != f.seed) continue;
    sum += r.*field;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("no records match the filter");
  return sum / n;
}

}  // namespace irsjam
