#pragma once

#include <utility>
#include <vector>

#include "irsjam/env.hpp"

namespace irsjam {

struct AoConfig {
  int max_outer_iters = 5;
  double convergence_tol = 1e-9;  // rate improvement threshold
};

struct SolveConstraints {
  double p_max_w = 0.0;
  std::vector<double> sinr_min;  // linear per-user thresholds
  double noise_w = 0.0;
  BeamformerMode bf_mode = BeamformerMode::Mrt;
};

/// Lexicographic solver objective: satisfied-user count first, sum rate
/// second (the infeasibility fallback maximizes coverage, then rate).
struct Objective {
  int satisfied = -1;
  double rate = 0.0;
  bool better_than(const Objective& o) const {
    return satisfied > o.satisfied || (satisfied == o.satisfied && rate > o.rate);
  }
};

struct AoResult {
  PowerAllocation pa;
  PhaseConfig phi;
  double rate = 0.0;
  int satisfied = 0;
  std::vector<Objective> objective_trace;  // one entry per half-step
};

/// Per-slot alternating optimizer: exhaustive search over the discrete power
/// profiles with phases fixed, then one coordinate-ascent pass over the
/// quantized levels of every element with powers fixed, repeated until the
/// objective stops improving or the iteration cap is hit. The jamming input
/// is whatever estimate the caller has (typically the previous slot).
AoResult alternating_optimize(const ChannelSet& ch, const JammerAction& jam_estimate,
                              const AoConfig& cfg, const ActionSpace& actions,
                              const SolveConstraints& constraints,
                              const PhaseConfig& initial_phi);

struct PaResult {
  PowerAllocation pa;
  double rate = 0.0;
  int satisfied = 0;
};

/// Power allocation without the reflecting surface: exhaustive search over
/// the profile set against the *actual* jamming action (deliberately granted
/// perfect knowledge), with the direct paths only.
PaResult optimal_pa_no_irs(const ChannelSet& ch, const JammerAction& jam,
                           const ActionSpace& actions, const SolveConstraints& constraints);

/// Named wrapper so harness comparisons against plain Q-learning are
/// symmetric: forces the QOnly variant and delegates to train().
TrainResult fast_q_baseline(LearningEnv& env, LearnerConfig cfg, int episodes, int horizon,
                            Rng& rng);

}  // namespace irsjam
