#include "irsjam/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace irsjam {

double PowerAllocation::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

void PowerAllocation::validate(double p_max_w) const {
  for (double v : p)
    if (!(v >= 0.0)) throw std::invalid_argument("transmit power must be nonnegative");
  if (total() > p_max_w + 1e-12)
    throw std::invalid_argument("power allocation exceeds the power budget");
}

Beamformers transmit_beamformers(const ChannelSet& ch, const PhaseConfig& phi,
                                 BeamformerMode mode, double noise_w,
                                 const std::vector<double>* powers) {
  const std::size_t k_ues = ch.dims.k_ues;
  const auto h = effective_channels(ch, phi);
  Beamformers bf;
  bf.w.resize(k_ues);

  if (mode == BeamformerMode::Mrt) {
    for (std::size_t k = 0; k < k_ues; ++k) {
      const double norm = arma::norm(h[k]);
      if (norm == 0.0) throw std::runtime_error("degenerate geometry: zero effective channel");
      bf.w[k] = h[k] / norm;
    }
    return bf;
  }

  if (noise_w <= 0.0) throw std::invalid_argument("noise power must be positive");
  for (std::size_t k = 0; k < k_ues; ++k) {
    arma::cx_mat cov(ch.dims.n_bs, ch.dims.n_bs, arma::fill::zeros);
    for (std::size_t i = 0; i < k_ues; ++i) {
      if (i == k) continue;
      const double weight = powers ? (*powers)[i] : 1.0;
      cov += weight * (h[i] * h[i].t());
    }
    cov += noise_w * arma::cx_mat(arma::eye(ch.dims.n_bs, ch.dims.n_bs),
                                  arma::mat(ch.dims.n_bs, ch.dims.n_bs, arma::fill::zeros));
    const arma::cx_vec v = arma::solve(cov, h[k]);
    const double norm = arma::norm(v);
    if (norm == 0.0) throw std::runtime_error("degenerate geometry: zero effective channel");
    bf.w[k] = v / norm;
  }
  return bf;
}

namespace {

double received_jam_power(const ChannelSet& ch, const JammerAction& ja, std::size_t k) {
  if (ja.p_jam_w[k] == 0.0) return 0.0;
  const cxd corr = arma::cdot(ch.h_jam_ue[k], ja.z[k]);
  return ja.p_jam_w[k] * std::norm(corr);
}

}  // namespace

std::vector<double> sinr_all(const std::vector<arma::cx_vec>& h_eff,
                             const PowerAllocation& pa, const Beamformers& w,
                             const ChannelSet& ch, const JammerAction& ja,
                             double noise_w) {
  if (noise_w <= 0.0) throw std::invalid_argument("noise power must be positive");
  const std::size_t k_ues = ch.dims.k_ues;
  std::vector<double> out(k_ues);
  for (std::size_t k = 0; k < k_ues; ++k) {
    const double desired = pa.p[k] * std::norm(arma::cdot(h_eff[k], w.w[k]));
    double iui = 0.0;
    for (std::size_t i = 0; i < k_ues; ++i) {
      if (i == k) continue;
      iui += pa.p[i] * std::norm(arma::cdot(h_eff[k], w.w[i]));
    }
    out[k] = desired / (iui + received_jam_power(ch, ja, k) + noise_w);
  }
  return out;
}

double sinr(std::size_t k, const PowerAllocation& pa, const PhaseConfig& phi,
            const ChannelSet& ch, const Beamformers& w, const JammerAction& ja,
            double noise_w) {
  if (k >= ch.dims.k_ues) throw std::out_of_range("user index out of range");
  return sinr_all(effective_channels(ch, phi), pa, w, ch, ja, noise_w)[k];
}

double sum_rate(const std::vector<double>& sinrs) {
  double r = 0.0;
  for (double s : sinrs) {
    if (!(s >= 0.0)) throw std::invalid_argument("SINR must be nonnegative");
    r += std::log2(1.0 + s);
  }
  return r;
}

std::vector<int> outage_indicator(const std::vector<double>& sinrs, const RewardParams& rp) {
  if (sinrs.size() != rp.sinr_min.size())
    throw std::invalid_argument("threshold count does not match user count");
  std::vector<int> out(sinrs.size());
  for (std::size_t k = 0; k < sinrs.size(); ++k)
    out[k] = sinrs[k] >= rp.sinr_min[k] ? 0 : 1;
  return out;
}

RewardBreakdown reward(const std::vector<double>& sinrs, const PowerAllocation& pa,
                       const RewardParams& rp) {
  RewardBreakdown b;
  b.rate = sum_rate(sinrs);
  b.power_cost = rp.lambda1 * pa.total();
  int violations = 0;
  for (int o : outage_indicator(sinrs, rp)) violations += o;
  b.outage_cost = rp.lambda2 * violations;
  return b;
}

}  // namespace irsjam
