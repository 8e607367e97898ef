#pragma once

#include <vector>

#include "irsjam/channel.hpp"

namespace irsjam {

/// Per-user transmit powers, linear watts.
struct PowerAllocation {
  std::vector<double> p;

  double total() const;
  /// Checks nonnegativity and sum <= p_max (with 1e-12 slack).
  void validate(double p_max_w) const;
};

/// One slot of jammer behavior: per-user jamming powers and unit-norm
/// jamming directions.
struct JammerAction {
  std::vector<double> p_jam_w;
  std::vector<arma::cx_vec> z;
};

/// Unit-norm transmit beamformers, one per user.
struct Beamformers {
  std::vector<arma::cx_vec> w;
};

enum class BeamformerMode { Mrt, Mmse };

struct RewardParams {
  double lambda1 = 1.0;          // power cost weight, per watt
  double lambda2 = 2.0;          // outage cost weight
  std::vector<double> sinr_min;  // per-user linear SINR thresholds
};

struct RewardBreakdown {
  double rate = 0.0;         // part 1, bits/s/Hz
  double power_cost = 0.0;   // part 2, lambda1 * sum(p)
  double outage_cost = 0.0;  // part 3, lambda2 * violations
  double total() const { return rate - power_cost - outage_cost; }
};

/// Computes unit-norm beamformers on the effective channels. Mrt matches the
/// effective channel; Mmse solves the regularized interference-plus-noise
/// covariance (per-user powers weight the interference terms when given,
/// otherwise unit weights). noise_w and powers are ignored in Mrt mode.
Beamformers transmit_beamformers(const ChannelSet& ch, const PhaseConfig& phi,
                                 BeamformerMode mode, double noise_w = 1.0,
                                 const std::vector<double>* powers = nullptr);

/// Received SINR of user k: desired power over inter-user interference plus
/// received jamming power plus noise.
double sinr(std::size_t k, const PowerAllocation& pa, const PhaseConfig& phi,
            const ChannelSet& ch, const Beamformers& w, const JammerAction& ja,
            double noise_w);

/// Same computation on precomputed effective channels, for all users.
std::vector<double> sinr_all(const std::vector<arma::cx_vec>& h_eff,
                             const PowerAllocation& pa, const Beamformers& w,
                             const ChannelSet& ch, const JammerAction& ja,
                             double noise_w);

double sum_rate(const std::vector<double>& sinrs);

/// 0 where sinr >= threshold (equality satisfies), 1 otherwise.
std::vector<int> outage_indicator(const std::vector<double>& sinrs, const RewardParams& rp);

/// rate - lambda1 * sum(p) - lambda2 * #violations, parts exposed separately.
RewardBreakdown reward(const std::vector<double>& sinrs, const PowerAllocation& pa,
                       const RewardParams& rp);

}  // namespace irsjam
