#include "irsjam/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsjam {

void ChannelDims::validate() const {
  if (n_bs == 0 || m_irs == 0 || k_ues == 0 || n_jam == 0)
    throw std::invalid_argument("channel dims must be positive");
}

arma::cx_vec PhaseConfig::coefficients() const {
  arma::cx_vec c(theta.size());
  for (std::size_t m = 0; m < theta.size(); ++m)
    c[m] = std::polar(1.0, theta[m]);
  return c;
}

void PhaseConfig::set(std::size_t m, double value) {
  if (m >= theta.size()) throw std::out_of_range("phase index out of range");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double v = std::fmod(value, two_pi);
  if (v < 0.0) v += two_pi;
  theta[m] = v;
}

void PhaseConfig::set_level(std::size_t m, int level, int n_levels) {
  if (n_levels <= 0 || level < 0 || level >= n_levels)
    throw std::invalid_argument("phase level out of range");
  set(m, 2.0 * std::numbers::pi * static_cast<double>(level) / n_levels);
}

double channel_gain_db(double d, double beta, const PathLossParams& params) {
  if (params.d0 <= 0.0) throw std::invalid_argument("d0 must be positive");
  if (!(d >= params.d0))
    throw std::domain_error("channel_gain_db: distance below reference distance");
  return -(params.pl0_db + 10.0 * beta * std::log10(d / params.d0));
}

namespace {

/// Fills dst with CN(0, gain_lin) entries from rng.
void fill_cn(arma::cx_vec& dst, double gain_lin, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double s = std::sqrt(gain_lin / 2.0);
  for (arma::uword i = 0; i < dst.n_elem; ++i) {
    const double re = n01(rng);
    const double im = n01(rng);
    dst[i] = cxd(s * re, s * im);
  }
}

}  // namespace

ChannelSet sample_channels(const Geometry& geom, const PathLossParams& params,
                           const ChannelDims& dims, std::uint64_t seed) {
  dims.validate();
  geom.validate(dims.k_ues);

  ChannelSet ch;
  ch.dims = dims;

  // BS -> IRS matrix, row m = element m.
  {
    const double gain = db_to_linear(
        channel_gain_db(distance(geom.bs_position, geom.irs_position), params.beta_br, params));
    Rng rng(mix_seed(seed, 10));
    ch.g_bs_irs.set_size(dims.m_irs, dims.n_bs);
    std::normal_distribution<double> n01(0.0, 1.0);
    const double s = std::sqrt(gain / 2.0);
    for (arma::uword m = 0; m < dims.m_irs; ++m)
      for (arma::uword n = 0; n < dims.n_bs; ++n)
        ch.g_bs_irs(m, n) = cxd(s * n01(rng), s * n01(rng));
  }

  ch.g_bs_ue.resize(dims.k_ues);
  ch.g_irs_ue.resize(dims.k_ues);
  ch.h_jam_ue.resize(dims.k_ues);
  for (std::size_t k = 0; k < dims.k_ues; ++k) {
    const Point& ue = geom.ue_positions[k];
    {
      const double gain = db_to_linear(
          channel_gain_db(distance(geom.bs_position, ue), params.beta_bu, params));
      Rng rng(mix_seed(seed, 100 + k));
      ch.g_bs_ue[k].set_size(dims.n_bs);
      fill_cn(ch.g_bs_ue[k], gain, rng);
    }
    {
      const double gain = db_to_linear(
          channel_gain_db(distance(geom.irs_position, ue), params.beta_ru, params));
      Rng rng(mix_seed(seed, 200 + k));
      ch.g_irs_ue[k].set_size(dims.m_irs);
      fill_cn(ch.g_irs_ue[k], gain, rng);
    }
    {
      const double gain = db_to_linear(
          channel_gain_db(distance(geom.jammer_position, ue), params.beta_ju, params));
      Rng rng(mix_seed(seed, 300 + k));
      ch.h_jam_ue[k].set_size(dims.n_jam);
      fill_cn(ch.h_jam_ue[k], gain, rng);
    }
  }
  return ch;
}

arma::cx_vec effective_channel(const ChannelSet& ch, const PhaseConfig& phi, std::size_t k) {
  if (k >= ch.dims.k_ues) throw std::out_of_range("user index out of range");
  if (phi.size() != ch.dims.m_irs)
    throw std::invalid_argument("phase configuration does not match element count");
  if (ch.g_bs_irs.n_rows != ch.dims.m_irs || ch.g_bs_irs.n_cols != ch.dims.n_bs ||
      ch.g_irs_ue[k].n_elem != ch.dims.m_irs || ch.g_bs_ue[k].n_elem != ch.dims.n_bs)
    throw std::invalid_argument("channel dimensions inconsistent");
  // h = G^H Phi^H g_irs_ue + g_bs_ue, so that h^H w = (g_irs_ue^H Phi G + g_bs_ue^H) w.
  const arma::cx_vec phased = arma::conj(phi.coefficients()) % ch.g_irs_ue[k];
  return ch.g_bs_irs.t() * phased + ch.g_bs_ue[k];
}

std::vector<arma::cx_vec> effective_channels(const ChannelSet& ch, const PhaseConfig& phi) {
  std::vector<arma::cx_vec> h(ch.dims.k_ues);
  for (std::size_t k = 0; k < ch.dims.k_ues; ++k) h[k] = effective_channel(ch, phi, k);
  return h;
}

}  // namespace irsjam
