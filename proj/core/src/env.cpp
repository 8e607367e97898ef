#include "irsjam/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsjam {

// ---- State quantization ---------------------------------------------------

std::size_t StateBinsConfig::state_count(std::size_t k_ues) const {
  std::size_t n = 1;
  for (std::size_t k = 0; k < k_ues; ++k) {
    n *= static_cast<std::size_t>(bins_per_user());
    if (n > static_cast<std::size_t>(state_cap)) break;
  }
  return n;
}

void StateBinsConfig::validate(std::size_t k_ues) const {
  if (jam_bins < 1 || gain_bins < 1 || sinr_bins < 1)
    throw std::invalid_argument("bin counts must be positive");
  if (!(jam_hi_dbm > jam_lo_dbm) || !(gain_hi_db > gain_lo_db) ||
      !(sinr_rel_hi_db > sinr_rel_lo_db))
    throw std::invalid_argument("bin ranges must be nonempty");
  if (state_count(k_ues) > static_cast<std::size_t>(state_cap))
    throw std::invalid_argument("discrete state count exceeds state_cap");
}

int quantize_value(double v, double lo, double hi, int bins) {
  if (std::isnan(v)) throw std::invalid_argument("cannot quantize NaN");
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  const double width = (hi - lo) / bins;
  const int b = static_cast<int>(std::floor((v - lo) / width));
  return std::clamp(b, 0, bins - 1);
}

double bin_center(int bin, double lo, double hi, int bins) {
  if (bin < 0 || bin >= bins) throw std::out_of_range("bin index out of range");
  const double width = (hi - lo) / bins;
  return lo + (bin + 0.5) * width;
}

SystemState quantize_state(const RawObservation& raw, const StateBinsConfig& cfg) {
  const std::size_t k = raw.jam_prev_dbm.size();
  if (raw.gain_db.size() != k || raw.sinr_prev_rel_db.size() != k)
    throw std::invalid_argument("observation vectors differ in length");
  SystemState s;
  s.jam_bin.resize(k);
  s.gain_bin.resize(k);
  s.sinr_bin.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    s.jam_bin[i] = quantize_value(raw.jam_prev_dbm[i], cfg.jam_lo_dbm, cfg.jam_hi_dbm, cfg.jam_bins);
    s.gain_bin[i] = quantize_value(raw.gain_db[i], cfg.gain_lo_db, cfg.gain_hi_db, cfg.gain_bins);
    s.sinr_bin[i] = quantize_value(raw.sinr_prev_rel_db[i], cfg.sinr_rel_lo_db,
                                   cfg.sinr_rel_hi_db, cfg.sinr_bins);
  }
  return s;
}

std::size_t SystemState::encode(const StateBinsConfig& cfg) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < jam_bin.size(); ++k) {
    std::size_t per_user = static_cast<std::size_t>(jam_bin[k]);
    per_user = per_user * cfg.gain_bins + gain_bin[k];
    per_user = per_user * cfg.sinr_bins + sinr_bin[k];
    idx = idx * static_cast<std::size_t>(cfg.bins_per_user()) + per_user;
  }
  return idx;
}

std::vector<double> SystemState::features(const RawObservation& raw,
                                          const StateBinsConfig& cfg) const {
  auto norm = [](double v, double lo, double hi) {
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  };
  std::vector<double> f;
  f.reserve(3 * raw.jam_prev_dbm.size());
  for (std::size_t k = 0; k < raw.jam_prev_dbm.size(); ++k) {
    f.push_back(1.0 - norm(raw.jam_prev_dbm[k], cfg.jam_lo_dbm, cfg.jam_hi_dbm));
    f.push_back(norm(raw.gain_db[k], cfg.gain_lo_db, cfg.gain_hi_db));
    f.push_back(norm(raw.sinr_prev_rel_db[k], cfg.sinr_rel_lo_db, cfg.sinr_rel_hi_db));
  }
  return f;
}

// ---- Action space -----------------------------------------------------------

namespace {

void enumerate_profiles(const ActionSpaceConfig& cfg, double p_max_w, std::size_t k_ues,
                        std::vector<std::vector<double>>& out) {
  if (cfg.n_power_levels < 2) throw std::invalid_argument("need at least two power levels");
  const int levels = cfg.n_power_levels;
  // Feasibility in exact level arithmetic: sum of level indices <= levels-1
  // is equivalent to sum of powers <= p_max.
  std::vector<int> idx(k_ues, 0);
  const double step = p_max_w / (levels - 1);
  while (true) {
    int total = 0;
    for (int i : idx) total += i;
    if (total <= levels - 1) {
      std::vector<double> p(k_ues);
      for (std::size_t k = 0; k < k_ues; ++k) p[k] = idx[k] * step;
      out.push_back(std::move(p));
    }
    // Lexicographic counter, user 0 most significant.
    std::size_t pos = k_ues;
    while (pos > 0) {
      if (++idx[pos - 1] < levels) break;
      idx[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
}

}  // namespace

ActionSpace::ActionSpace(const ActionSpaceConfig& cfg, double p_max_w, std::size_t k_ues,
                         std::size_t m_irs, std::size_t codebook_size)
    : cfg_(cfg), m_irs_(m_irs) {
  if (cfg.n_phase_levels < 1) throw std::invalid_argument("need at least one phase level");
  enumerate_profiles(cfg_, p_max_w, k_ues, profiles_);
  if (cfg_.mode == PhaseActionMode::Incremental) {
    move_count_ = 1 + static_cast<int>(m_irs) * cfg_.n_phase_levels;
  } else {
    if (codebook_size == 0) throw std::invalid_argument("codebook mode needs entries");
    move_count_ = static_cast<int>(codebook_size);
  }
  if (size() > cfg_.action_cap)
    throw std::invalid_argument("joint action count exceeds action_cap");
}

JointAction ActionSpace::decode(int action_id) const {
  if (action_id < 0 || action_id >= size())
    throw std::out_of_range("action id out of range");
  JointAction a;
  a.profile_id = action_id / move_count_;
  const int move = action_id % move_count_;
  if (cfg_.mode == PhaseActionMode::Codebook) {
    a.move.noop = false;
    a.move.level = move;  // codebook entry index
    return a;
  }
  if (move == 0) {
    a.move.noop = true;
  } else {
    a.move.noop = false;
    a.move.element = static_cast<std::size_t>((move - 1) / cfg_.n_phase_levels);
    a.move.level = (move - 1) % cfg_.n_phase_levels;
  }
  return a;
}

const std::vector<double>& ActionSpace::profile(int profile_id) const {
  return profiles_.at(static_cast<std::size_t>(profile_id));
}

// ---- Jammer -----------------------------------------------------------------

void JammerPolicy::validate() const {
  if (power_grid_dbm.empty()) throw std::invalid_argument("jammer grid must be nonempty");
  for (double p : power_grid_dbm)
    if (p < 15.0 || p > 40.0)
      throw std::invalid_argument("jammer power outside the 15..40 dBm range");
  if (!(reactive_alpha > 0.0 && reactive_alpha <= 1.0) ||
      !(reactive_epsilon >= 0.0 && reactive_epsilon <= 1.0))
    throw std::invalid_argument("bad reactive learner parameters");
}

JammerPolicy::Kind jammer_kind_from_string(const std::string& s) {
  if (s == "constant") return JammerPolicy::Kind::Constant;
  if (s == "random") return JammerPolicy::Kind::Random;
  if (s == "sweep") return JammerPolicy::Kind::Sweep;
  if (s == "reactive") return JammerPolicy::Kind::Reactive;
  throw std::invalid_argument("unknown jammer kind: " + s);
}

std::string jammer_kind_name(JammerPolicy::Kind k) {
  switch (k) {
    case JammerPolicy::Kind::Constant: return "constant";
    case JammerPolicy::Kind::Random: return "random";
    case JammerPolicy::Kind::Sweep: return "sweep";
    case JammerPolicy::Kind::Reactive: return "reactive";
  }
  throw std::logic_error("unknown jammer kind");
}

JammerAgent::JammerAgent(const JammerPolicy& policy, std::size_t k_ues, std::size_t n_jam)
    : policy_(policy), k_ues_(k_ues), n_jam_(n_jam) {
  policy_.validate();
  if (policy_.kind == JammerPolicy::Kind::Reactive) {
    std::size_t joint = 1;
    for (std::size_t k = 0; k < k_ues_; ++k) {
      joint *= policy_.power_grid_dbm.size();
      if (joint > 4096) throw std::invalid_argument("reactive jammer action space too large");
    }
    bandit_q_.assign(joint, 0.0);
  }
}

void JammerAgent::reset(std::uint64_t seed) {
  rng_.seed(seed);
  sweep_idx_ = 0;
  std::fill(bandit_q_.begin(), bandit_q_.end(), 0.0);
  last_joint_ = -1;
}

std::vector<double> JammerAgent::decode_levels(int joint) const {
  std::vector<double> levels(k_ues_);
  const int base = static_cast<int>(policy_.power_grid_dbm.size());
  for (std::size_t k = k_ues_; k-- > 0;) {
    levels[k] = policy_.power_grid_dbm[joint % base];
    joint /= base;
  }
  return levels;
}

JammerAction JammerAgent::act(const ChannelSet& ch, double last_legit_reward) {
  std::vector<double> levels_dbm(k_ues_);
  switch (policy_.kind) {
    case JammerPolicy::Kind::Constant:
      std::fill(levels_dbm.begin(), levels_dbm.end(), policy_.power_grid_dbm.front());
      break;
    case JammerPolicy::Kind::Random: {
      std::uniform_int_distribution<std::size_t> pick(0, policy_.power_grid_dbm.size() - 1);
      const double level = policy_.power_grid_dbm[pick(rng_)];
      std::fill(levels_dbm.begin(), levels_dbm.end(), level);
      break;
    }
    case JammerPolicy::Kind::Sweep: {
      const double level = policy_.power_grid_dbm[sweep_idx_ % policy_.power_grid_dbm.size()];
      ++sweep_idx_;
      std::fill(levels_dbm.begin(), levels_dbm.end(), level);
      break;
    }
    case JammerPolicy::Kind::Reactive: {
      if (last_joint_ >= 0) {
        // Damage the legitimate link: the jammer's payoff is -r.
        double& q = bandit_q_[static_cast<std::size_t>(last_joint_)];
        q += policy_.reactive_alpha * (-last_legit_reward - q);
      }
      const int joint =
          egreedy_select(bandit_q_, policy_.reactive_epsilon, rng_);
      last_joint_ = joint;
      levels_dbm = decode_levels(joint);
      break;
    }
  }

  JammerAction ja;
  ja.p_jam_w.resize(k_ues_);
  ja.z.resize(k_ues_);
  for (std::size_t k = 0; k < k_ues_; ++k) {
    ja.p_jam_w[k] = dbm_to_watts(levels_dbm[k]);
    if (policy_.random_direction) {
      arma::cx_vec z(n_jam_);
      std::normal_distribution<double> n01(0.0, 1.0);
      for (arma::uword i = 0; i < z.n_elem; ++i) z[i] = cxd(n01(rng_), n01(rng_));
      ja.z[k] = z / arma::norm(z);
    } else {
      const double norm = arma::norm(ch.h_jam_ue[k]);
      ja.z[k] = norm > 0.0 ? arma::cx_vec(ch.h_jam_ue[k] / norm)
                           : arma::cx_vec(n_jam_, arma::fill::zeros);
    }
  }
  return ja;
}

// ---- Environment -------------------------------------------------------------

void EnvConfig::validate() const {
  dims.validate();
  bins.validate(dims.k_ues);
  jammer.validate();
  if (!(p_max_w > 0.0)) throw std::invalid_argument("p_max must be positive");
  if (!(noise_w > 0.0)) throw std::invalid_argument("noise power must be positive");
  if (reward_params.sinr_min.size() != dims.k_ues)
    throw std::invalid_argument("one SINR threshold per user required");
}

Environment::Environment(const EnvConfig& cfg)
    : cfg_(cfg),
      actions_(cfg.actions, cfg.p_max_w, cfg.dims.k_ues, cfg.dims.m_irs,
               cfg.actions.mode == PhaseActionMode::Codebook ? cfg.dims.k_ues + 1 : 0),
      jammer_(cfg.jammer, cfg.dims.k_ues, cfg.dims.n_jam) {
  cfg_.validate();
  reset_realization(0);
}

int Environment::state_count() const {
  return static_cast<int>(cfg_.bins.state_count(cfg_.dims.k_ues));
}

void Environment::reset_realization(std::uint64_t seed) {
  realization_seed_ = seed;
  Rng placement_rng(mix_seed(seed, seed_tag::placement));
  geometry_ = sample_placement(cfg_.geometry, cfg_.dims.k_ues, cfg_.path_loss, placement_rng);
  channels_ = sample_channels(geometry_, cfg_.path_loss, cfg_.dims, mix_seed(seed, seed_tag::fading));
  phases_ = PhaseConfig(cfg_.dims.m_irs);
  jammer_.reset(mix_seed(seed, seed_tag::jammer));
  obs_rng_.seed(mix_seed(seed, seed_tag::observation));
  if (cfg_.actions.mode == PhaseActionMode::Codebook) rebuild_codebook();

  episode_index_ = -1;
  t_global_ = 0;
  last_reward_ = 0.0;
  prev_jam_dbm_.assign(cfg_.dims.k_ues,
                       *std::min_element(cfg_.jammer.power_grid_dbm.begin(),
                                         cfg_.jammer.power_grid_dbm.end()));
  prev_sinr_rel_db_.assign(cfg_.dims.k_ues, cfg_.bins.sinr_rel_lo_db);
  log_.clear();
  episode_stats_.clear();
  refresh_state();
}

void Environment::begin_episode() {
  ++episode_index_;
  if (cfg_.redraw_channels_each_episode && episode_index_ > 0) {
    channels_ = sample_channels(
        geometry_, cfg_.path_loss, cfg_.dims,
        mix_seed(realization_seed_, seed_tag::fading + 1000 + episode_index_));
    refresh_state();
  }
  episode_stats_.emplace_back();
}

void Environment::rebuild_codebook() {
  // Entry 0: all-zero phases. Entry k+1: per-element co-phasing that aligns
  // the reflected path with user k's direct path, quantized to the grid.
  codebook_.clear();
  codebook_.push_back(PhaseConfig(cfg_.dims.m_irs));
  const int levels = cfg_.actions.n_phase_levels;
  for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k) {
    PhaseConfig pc(cfg_.dims.m_irs);
    const arma::cx_vec& direct = channels_.g_bs_ue[k];
    const double dnorm = arma::norm(direct);
    if (dnorm > 0.0) {
      const arma::cx_vec w = direct / dnorm;
      const cxd direct_term = arma::cdot(direct, w);
      const arma::cx_vec gw = channels_.g_bs_irs * w;  // length M
      for (std::size_t m = 0; m < cfg_.dims.m_irs; ++m) {
        const cxd elem = std::conj(channels_.g_irs_ue[k][m]) * gw[m];
        if (std::abs(elem) == 0.0) continue;
        const double want = std::arg(direct_term) - std::arg(elem);
        const double step = 2.0 * std::numbers::pi / levels;
        int lvl = static_cast<int>(std::lround(want / step));
        lvl %= levels;
        if (lvl < 0) lvl += levels;
        pc.set_level(m, lvl, levels);
      }
    }
    codebook_.push_back(std::move(pc));
  }
}

PhaseConfig Environment::codebook_entry(std::size_t idx) const {
  return codebook_.at(idx);
}

void Environment::refresh_state() {
  RawObservation raw;
  raw.jam_prev_dbm = prev_jam_dbm_;
  raw.sinr_prev_rel_db = prev_sinr_rel_db_;
  raw.gain_db.resize(cfg_.dims.k_ues);
  const auto h = effective_channels(channels_, phases_);
  for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k) {
    const double g = arma::dot(arma::abs(h[k]), arma::abs(h[k]));
    raw.gain_db[k] = linear_to_db(std::max(g, 1e-300));
  }
  state_ = quantize_state(raw, cfg_.bins);
  features_cache_ = state_.features(raw, cfg_.bins);
}

std::vector<double> Environment::state_features() const { return features_cache_; }

StepOutcome Environment::step_full(int action_id) {
  if (action_id < 0 || action_id >= actions_.size())
    throw std::out_of_range("invalid action id");
  const JointAction act = actions_.decode(action_id);
  const std::vector<int> state_bins_before = [&] {
    std::vector<int> bins;
    for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k) {
      bins.push_back(state_.jam_bin[k]);
      bins.push_back(state_.gain_bin[k]);
      bins.push_back(state_.sinr_bin[k]);
    }
    return bins;
  }();

  if (!act.move.noop) {
    if (cfg_.actions.mode == PhaseActionMode::Codebook)
      phases_ = codebook_entry(static_cast<std::size_t>(act.move.level));
    else
      phases_.set_level(act.move.element, act.move.level, actions_.phase_levels());
  }

  PowerAllocation pa{actions_.profile(act.profile_id)};
  pa.validate(cfg_.p_max_w);
  const JammerAction ja = jammer_.act(channels_, last_reward_);
  const Beamformers w =
      transmit_beamformers(channels_, phases_, cfg_.bf_mode, cfg_.noise_w, &pa.p);
  const auto h = effective_channels(channels_, phases_);
  const std::vector<double> sinrs = sinr_all(h, pa, w, channels_, ja, cfg_.noise_w);
  const RewardBreakdown breakdown = reward(sinrs, pa, cfg_.reward_params);

  StepOutcome out;
  out.sinrs = sinrs;
  out.rate = breakdown.rate;
  out.breakdown = breakdown;
  out.reward = breakdown.total();
  out.powers_used = pa;
  out.jam_powers_w = ja.p_jam_w;
  out.protected_users.resize(cfg_.dims.k_ues);
  for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k)
    out.protected_users[k] = sinrs[k] >= cfg_.reward_params.sinr_min[k];

  // This slot's jamming powers become the next state's "previous" feature,
  // optionally blurred by estimation noise.
  for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k) {
    double est = watts_to_dbm(ja.p_jam_w[k]);
    if (cfg_.jam_estimate_noise_db > 0.0) {
      std::normal_distribution<double> n(0.0, cfg_.jam_estimate_noise_db);
      est += n(obs_rng_);
    }
    prev_jam_dbm_[k] = est;
    const double sinr_db = linear_to_db(std::max(sinrs[k], 1e-300));
    prev_sinr_rel_db_[k] = sinr_db - linear_to_db(cfg_.reward_params.sinr_min[k]);
  }
  last_reward_ = out.reward;
  refresh_state();
  out.next_state = state_;

  TrajectoryRecord rec;
  rec.t = t_global_++;
  rec.state_bins = state_bins_before;
  rec.action_id = action_id;
  rec.reward = out.reward;
  rec.sinr_db.resize(cfg_.dims.k_ues);
  rec.jam_dbm.resize(cfg_.dims.k_ues);
  for (std::size_t k = 0; k < cfg_.dims.k_ues; ++k) {
    rec.sinr_db[k] = linear_to_db(std::max(sinrs[k], 1e-300));
    rec.jam_dbm[k] = watts_to_dbm(ja.p_jam_w[k]);
  }
  log_.push_back(std::move(rec));

  if (episode_stats_.empty()) episode_stats_.emplace_back();
  EpisodeStats& stats = episode_stats_.back();
  stats.reward_sum += out.reward;
  stats.rate_sum += out.rate;
  for (bool p : out.protected_users) stats.protected_pairs += p ? 1 : 0;
  stats.slots += 1;
  return out;
}

double protection_level(const std::vector<StepOutcome>& window) {
  if (window.empty()) throw std::invalid_argument("empty evaluation window");
  std::int64_t satisfied = 0, total = 0;
  for (const StepOutcome& o : window) {
    for (bool p : o.protected_users) {
      satisfied += p ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(satisfied) / static_cast<double>(total);
}

}  // namespace irsjam
