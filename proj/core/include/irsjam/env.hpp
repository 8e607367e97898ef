#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "irsjam/channel.hpp"
#include "irsjam/learning.hpp"
#include "irsjam/signal.hpp"

namespace irsjam {

// ---- State quantization ---------------------------------------------------

/// Uniform-width bin edges per state feature. The discrete state count is
/// (jam_bins * gain_bins * sinr_bins)^K and must stay under state_cap.
struct StateBinsConfig {
  int jam_bins = 4;
  double jam_lo_dbm = 15.0, jam_hi_dbm = 35.0;
  int gain_bins = 3;
  double gain_lo_db = -115.0, gain_hi_db = -85.0;
  int sinr_bins = 4;
  double sinr_rel_lo_db = -30.0, sinr_rel_hi_db = 20.0;
  int state_cap = 10000;

  int bins_per_user() const { return jam_bins * gain_bins * sinr_bins; }
  std::size_t state_count(std::size_t k_ues) const;
  void validate(std::size_t k_ues) const;
};

/// Half-open uniform binning with clamping to the end bins. Values on an
/// interior edge land in the higher bin. NaN input is an error.
int quantize_value(double v, double lo, double hi, int bins);
double bin_center(int bin, double lo, double hi, int bins);

/// Raw per-user observations feeding the quantizer.
struct RawObservation {
  std::vector<double> jam_prev_dbm;
  std::vector<double> gain_db;          // current effective channel gain
  std::vector<double> sinr_prev_rel_db; // previous SINR minus its target
};

struct SystemState {
  std::vector<int> jam_bin, gain_bin, sinr_bin;  // K entries each
  std::size_t encode(const StateBinsConfig& cfg) const;
  /// Normalized features in [0,1]^(3K), ordered (jam, gain, sinr_rel) per
  /// user. The jam coordinate is inverted so that "larger is better" along
  /// every dimension.
  std::vector<double> features(const RawObservation& raw, const StateBinsConfig& cfg) const;
};

SystemState quantize_state(const RawObservation& raw, const StateBinsConfig& cfg);

// ---- Joint action space ----------------------------------------------------

enum class PhaseActionMode { Incremental, Codebook };

struct PhaseMove {
  bool noop = true;
  std::size_t element = 0;  // incremental mode
  int level = 0;            // incremental: quantized level; codebook: entry index
};

struct JointAction {
  int profile_id = 0;
  PhaseMove move;
};

struct ActionSpaceConfig {
  int n_power_levels = 4;  // per-user grid size over {0 .. p_max}
  int n_phase_levels = 4;
  PhaseActionMode mode = PhaseActionMode::Incremental;
  int action_cap = 4096;
};

/// Deterministically ordered joint actions: power profiles (all feasible
/// K-tuples over the per-user grid, lexicographic) crossed with phase moves
/// (NO-OP plus one (element, level) move per pair, or codebook entries).
class ActionSpace {
 public:
  ActionSpace(const ActionSpaceConfig& cfg, double p_max_w, std::size_t k_ues,
              std::size_t m_irs, std::size_t codebook_size = 0);

  int size() const { return profile_count() * move_count(); }
  int profile_count() const { return static_cast<int>(profiles_.size()); }
  int move_count() const { return move_count_; }
  int phase_levels() const { return cfg_.n_phase_levels; }
  PhaseActionMode mode() const { return cfg_.mode; }

  JointAction decode(int action_id) const;
  const std::vector<double>& profile(int profile_id) const;
  const std::vector<std::vector<double>>& profiles() const { return profiles_; }

 private:
  ActionSpaceConfig cfg_;
  std::size_t m_irs_ = 0;
  int move_count_ = 0;
  std::vector<std::vector<double>> profiles_;  // watts per user
};

// ---- Jammer ----------------------------------------------------------------

struct JammerPolicy {
  enum class Kind { Constant, Random, Sweep, Reactive };
  Kind kind = Kind::Sweep;
  std::vector<double> power_grid_dbm{15.0, 20.0, 25.0, 30.0};
  bool random_direction = false;  // default: beamformed straight at each UE
  double reactive_alpha = 0.5;
  double reactive_epsilon = 0.1;

  void validate() const;  // grid within [15, 40] dBm
};

JammerPolicy::Kind jammer_kind_from_string(const std::string& s);
std::string jammer_kind_name(JammerPolicy::Kind k);

/// Stateful jammer: fixed level, per-slot random level, cycling sweep, or an
/// epsilon-greedy bandit over joint per-UE levels that maximizes the damage
/// -r observed on its previous action.
class JammerAgent {
 public:
  JammerAgent(const JammerPolicy& policy, std::size_t k_ues, std::size_t n_jam);

  void reset(std::uint64_t seed);
  JammerAction act(const ChannelSet& ch, double last_legit_reward);
  const JammerPolicy& policy() const { return policy_; }

 private:
  std::vector<double> decode_levels(int joint) const;

  JammerPolicy policy_;
  std::size_t k_ues_ = 0, n_jam_ = 0;
  Rng rng_;
  std::size_t sweep_idx_ = 0;
  std::vector<double> bandit_q_;
  int last_joint_ = -1;
};

// ---- Environment -----------------------------------------------------------

struct StepOutcome {
  SystemState next_state;
  double reward = 0.0;
  std::vector<double> sinrs;  // linear
  double rate = 0.0;
  std::vector<bool> protected_users;
  PowerAllocation powers_used;
  std::vector<double> jam_powers_w;
  RewardBreakdown breakdown;
};

/// Append-only trajectory log record.
struct TrajectoryRecord {
  int t = 0;                    // global slot index within the realization
  std::vector<int> state_bins;  // 3K bins of the state observed before acting
  int action_id = 0;
  double reward = 0.0;
  std::vector<double> sinr_db;
  std::vector<double> jam_dbm;
};

/// Per-episode aggregates maintained by the environment.
struct EpisodeStats {
  double reward_sum = 0.0;
  double rate_sum = 0.0;
  std::int64_t protected_pairs = 0;
  std::int64_t slots = 0;

  double mean_reward() const { return slots ? reward_sum / slots : 0.0; }
  double mean_rate() const { return slots ? rate_sum / slots : 0.0; }
  double protection(std::size_t k_ues) const {
    return slots ? static_cast<double>(protected_pairs) / (static_cast<double>(slots) * k_ues)
                 : 0.0;
  }
};

struct EnvConfig {
  ChannelDims dims;
  Geometry geometry;
  PathLossParams path_loss;
  double p_max_w = dbm_to_watts(30.0);
  double noise_w = dbm_to_watts(-105.0);
  RewardParams reward_params;
  BeamformerMode bf_mode = BeamformerMode::Mrt;
  StateBinsConfig bins;
  ActionSpaceConfig actions;
  JammerPolicy jammer;
  double jam_estimate_noise_db = 0.0;
  bool redraw_channels_each_episode = false;

  void validate() const;
};

/// The episodic decision process: applies joint actions, runs the jammer,
/// evaluates the slot, and maintains the quantized system state. Channels
/// are quasi-static: sampled at realization boundaries only (optionally per
/// episode).
class Environment final : public LearningEnv {
 public:
  explicit Environment(const EnvConfig& cfg);

  /// Redraws geometry and channels, zeroes the phases, resets the jammer and
  /// all bookkeeping. Realization r of a run uses seed = base_seed + r.
  void reset_realization(std::uint64_t seed);

  // LearningEnv surface.
  int state_count() const override;
  int action_count() const override { return actions_.size(); }
  int feature_dim() const override { return static_cast<int>(3 * cfg_.dims.k_ues); }
  int state_index() const override { return static_cast<int>(state_.encode(cfg_.bins)); }
  std::vector<double> state_features() const override;
  double step(int action) override { return step_full(action).reward; }
  void begin_episode() override;

  StepOutcome step_full(int action_id);

  const EnvConfig& config() const { return cfg_; }
  const ChannelSet& channels() const { return channels_; }
  const Geometry& geometry() const { return geometry_; }
  const PhaseConfig& phases() const { return phases_; }
  const ActionSpace& actions() const { return actions_; }
  const SystemState& state() const { return state_; }
  const std::vector<TrajectoryRecord>& trajectory() const { return log_; }
  const std::vector<EpisodeStats>& episode_stats() const { return episode_stats_; }

 private:
  void rebuild_codebook();
  void refresh_state();
  PhaseConfig codebook_entry(std::size_t idx) const;

  EnvConfig cfg_;
  ActionSpace actions_;
  Geometry geometry_;
  ChannelSet channels_;
  PhaseConfig phases_;
  JammerAgent jammer_;
  Rng obs_rng_;
  std::uint64_t realization_seed_ = 0;
  int episode_index_ = -1;
  int t_global_ = 0;
  double last_reward_ = 0.0;
  std::vector<double> prev_jam_dbm_;
  std::vector<double> prev_sinr_rel_db_;
  SystemState state_;
  std::vector<double> features_cache_;
  std::vector<PhaseConfig> codebook_;
  std::vector<TrajectoryRecord> log_;
  std::vector<EpisodeStats> episode_stats_;
};

/// Fraction of (slot, user) pairs meeting their SINR target over a window.
double protection_level(const std::vector<StepOutcome>& window);

}  // namespace irsjam
