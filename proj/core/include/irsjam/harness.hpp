#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "irsjam/baselines.hpp"
#include "irsjam/env.hpp"

namespace irsjam {

enum class Approach { FuzzyWolfPhc, FastQ, WolfPhc, PhcFixed, Ao, NoIrsPa };

std::string approach_name(Approach a);
Approach approach_from_string(const std::string& s);

enum class SweepVariable { PMax, M, SinrMin };

std::string sweep_variable_name(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& s);

/// Full run specification. The desk preset keeps complete suites under
/// minutes; the paper-scale preset reproduces the published setup and is
/// expressible but slow.
struct ExperimentConfig {
  ChannelDims dims;
  double p_max_dbm = 30.0;
  double sinr_min_db = 10.0;
  double noise_dbm = -105.0;
  PathLossParams path_loss;
  Geometry geometry;
  ActionSpaceConfig actions;
  BeamformerMode bf_mode = BeamformerMode::Mrt;
  StateBinsConfig bins;
  LearnerConfig learner;
  JammerPolicy jammer;
  double jam_estimate_noise_db = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 2.0;
  int episodes = 100;
  int horizon = 40;
  int realizations = 20;
  std::uint64_t base_seed = 1;
  std::vector<Approach> approaches{Approach::FuzzyWolfPhc, Approach::FastQ, Approach::Ao,
                                   Approach::NoIrsPa};
  std::string out_path = "results.csv";
  int threads = 0;  // 0 = hardware concurrency
  AoConfig ao;

  static ExperimentConfig desk_preset();
  static ExperimentConfig paper_preset();
  static ExperimentConfig from_json_file(const std::filesystem::path& path);

  void validate() const;
  EnvConfig env_config() const;
  std::uint64_t hash() const;
};

struct MetricsRecord {
  std::string approach;
  std::string sweep_var;  // "none" for convergence runs
  double sweep_value = 0.0;
  int episode = -1;  // -1 marks steady-state aggregates
  std::uint64_t seed = 0;
  double rate_bps_hz = 0.0;
  double protection = 0.0;
  double reward = 0.0;
};

/// Per-episode learning/evaluation curves for every approach and
/// realization. Non-learning baselines appear as flat reference lines.
std::vector<MetricsRecord> run_convergence(const ExperimentConfig& cfg);

/// Approaches x values x realizations, steady-state metrics averaged over
/// the final quartile of episodes.
std::vector<MetricsRecord> run_sweep(const ExperimentConfig& cfg, SweepVariable variable,
                                     const std::vector<double>& values);

void emit_csv(const std::vector<MetricsRecord>& records, const std::filesystem::path& path);
std::vector<MetricsRecord> parse_csv(const std::filesystem::path& path);

/// First episode whose trailing-5-episode mean reward reaches the final
/// quartile mean (within 5% of its magnitude, one-sided); returns the
/// episode count if the curve never gets there.
int episodes_to_convergence(std::span<const double> episode_rewards);

/// Mean of a metric over matching records (simple filter helper for tests
/// and the CLI summary).
struct RecordFilter {
  std::string approach;
  double sweep_value = 0.0;
  bool match_value = false;
  std::uint64_t seed = 0;
  bool match_seed = false;
};
double mean_metric(const std::vector<MetricsRecord>& records, const RecordFilter& f,
                   double MetricsRecord::* field);

}  // namespace irsjam
