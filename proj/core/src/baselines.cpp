#include "irsjam/baselines.hpp"

#include <stdexcept>

namespace irsjam {

namespace {

Objective evaluate(const ChannelSet& ch, const PhaseConfig& phi,
                   const std::vector<double>& powers, const JammerAction& jam,
                   const SolveConstraints& c) {
  PowerAllocation pa{powers};
  const Beamformers w = transmit_beamformers(ch, phi, c.bf_mode, c.noise_w, &powers);
  const auto h = effective_channels(ch, phi);
  const auto sinrs = sinr_all(h, pa, w, ch, jam, c.noise_w);
  Objective obj;
  obj.satisfied = 0;
  for (std::size_t k = 0; k < sinrs.size(); ++k)
    obj.satisfied += sinrs[k] >= c.sinr_min[k] ? 1 : 0;
  obj.rate = sum_rate(sinrs);
  return obj;
}

/// Exhaustive power half-step. Ties keep the lexicographically first profile.
int best_profile(const ChannelSet& ch, const PhaseConfig& phi, const ActionSpace& actions,
                 const JammerAction& jam, const SolveConstraints& c, Objective& obj_out) {
  int best = -1;
  Objective best_obj;
  for (int p = 0; p < actions.profile_count(); ++p) {
    const Objective obj = evaluate(ch, phi, actions.profile(p), jam, c);
    if (best < 0 || obj.better_than(best_obj)) {
      best = p;
      best_obj = obj;
    }
  }
  obj_out = best_obj;
  return best;
}

}  // namespace

AoResult alternating_optimize(const ChannelSet& ch, const JammerAction& jam_estimate,
                              const AoConfig& cfg, const ActionSpace& actions,
                              const SolveConstraints& constraints,
                              const PhaseConfig& initial_phi) {
  if (cfg.max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
  if (actions.profile_count() == 0) throw std::invalid_argument("empty power profile set");
  if (initial_phi.size() != ch.dims.m_irs)
    throw std::invalid_argument("initial phases do not match element count");

  AoResult res;
  res.phi = initial_phi;
  const int levels = actions.phase_levels();

  Objective current;
  int profile = best_profile(ch, res.phi, actions, jam_estimate, constraints, current);
  res.objective_trace.push_back(current);

  for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
    const Objective before_pass = current;

    // Phase half-step: one coordinate-ascent pass, exhaustive per element.
    for (std::size_t m = 0; m < ch.dims.m_irs; ++m) {
      const double original = res.phi.theta[m];
      double best_theta = original;
      for (int lvl = 0; lvl < levels; ++lvl) {
        PhaseConfig cand = res.phi;
        cand.set_level(m, lvl, levels);
        const Objective obj =
            evaluate(ch, cand, actions.profile(profile), jam_estimate, constraints);
        if (obj.better_than(current)) {
          current = obj;
          best_theta = cand.theta[m];
        }
      }
      res.phi.theta[m] = best_theta;
    }
    res.objective_trace.push_back(current);

    // Power half-step: exhaustive over profiles with phases fixed. The
    // incumbent profile is in the enumeration, so this cannot regress.
    Objective after_power;
    profile = best_profile(ch, res.phi, actions, jam_estimate, constraints, after_power);
    current = after_power;
    res.objective_trace.push_back(current);

    const bool improved = current.satisfied > before_pass.satisfied ||
                          current.rate > before_pass.rate + cfg.convergence_tol;
    if (!improved) break;
  }

  res.pa = PowerAllocation{actions.profile(profile)};
  res.rate = current.rate;
  res.satisfied = current.satisfied;
  return res;
}

PaResult optimal_pa_no_irs(const ChannelSet& ch, const JammerAction& jam,
                           const ActionSpace& actions, const SolveConstraints& constraints) {
  if (actions.profile_count() == 0) throw std::invalid_argument("empty power profile set");
  // Remove the reflected paths; the direct channels are all that remains.
  ChannelSet direct = ch;
  for (auto& g : direct.g_irs_ue) g.zeros();
  const PhaseConfig phi(ch.dims.m_irs);

  Objective best_obj;
  int best = best_profile(direct, phi, actions, jam, constraints, best_obj);
  PaResult res;
  res.pa = PowerAllocation{actions.profile(best)};
  res.rate = best_obj.rate;
  res.satisfied = best_obj.satisfied;
  return res;
}

TrainResult fast_q_baseline(LearningEnv& env, LearnerConfig cfg, int episodes, int horizon,
                            Rng& rng) {
  cfg.variant = Variant::QOnly;
  return train(env, cfg, episodes, horizon, rng);
}

}  // namespace irsjam
