#pragma once

#include <armadillo>
#include <cstddef>
#include <vector>

#include "irsjam/geometry.hpp"

namespace irsjam {

struct ChannelDims {
  std::size_t n_bs = 4;   // BS antennas
  std::size_t m_irs = 8;  // reflecting elements
  std::size_t k_ues = 2;  // users
  std::size_t n_jam = 4;  // jammer antennas

  void validate() const;
};

/// Unit-modulus reflection phases, one per element. The reflection amplitude
/// is fixed at 1, so coefficient m is exp(j*theta[m]).
struct PhaseConfig {
  std::vector<double> theta;  // radians in [0, 2*pi)

  PhaseConfig() = default;
  explicit PhaseConfig(std::size_t m) : theta(m, 0.0) {}

  std::size_t size() const { return theta.size(); }
  arma::cx_vec coefficients() const;
  void set(std::size_t m, double value);
  /// Sets element m to level * 2*pi / n_levels.
  void set_level(std::size_t m, int level, int n_levels);
};

/// All channel coefficients for one coherence realization.
struct ChannelSet {
  ChannelDims dims;
  arma::cx_mat g_bs_irs;               // m_irs x n_bs
  std::vector<arma::cx_vec> g_bs_ue;   // k vectors of length n_bs
  std::vector<arma::cx_vec> g_irs_ue;  // k vectors of length m_irs
  std::vector<arma::cx_vec> h_jam_ue;  // k vectors of length n_jam
};

/// Log-distance channel gain in dB (non-positive): -(pl0 + 10*beta*log10(d/d0)).
/// Throws std::domain_error for d < d0.
double channel_gain_db(double d, double beta, const PathLossParams& params);

/// Draws one quasi-static realization. Entries are i.i.d. circularly-symmetric
/// complex Gaussian scaled so the expected squared magnitude equals the linear
/// large-scale gain of the link. Each link type uses its own substream of the
/// given seed, so draws for one link do not depend on the dimensions of the
/// others.
ChannelSet sample_channels(const Geometry& geom, const PathLossParams& params,
                           const ChannelDims& dims, std::uint64_t seed);

/// Composite BS->UE response through the surface plus the direct path,
/// returned as a length-n_bs vector h with h^H = g_irs_ue^H * Phi * G + g_bs_ue^H.
arma::cx_vec effective_channel(const ChannelSet& ch, const PhaseConfig& phi, std::size_t k);

/// effective_channel for every user.
std::vector<arma::cx_vec> effective_channels(const ChannelSet& ch, const PhaseConfig& phi);

}  // namespace irsjam
