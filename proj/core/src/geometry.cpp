#include "irsjam/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace irsjam {

void Geometry::validate(std::size_t expected_ues) const {
  if (expected_ues < 1) throw std::invalid_argument("geometry: need at least one UE");
  if (ue_positions.size() != expected_ues)
    throw std::invalid_argument("geometry: UE count mismatch");
  auto finite = [](const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); };
  if (!finite(bs_position) || !finite(irs_position) || !finite(jammer_position))
    throw std::invalid_argument("geometry: non-finite position");
  for (const Point& p : ue_positions)
    if (!finite(p)) throw std::invalid_argument("geometry: non-finite UE position");
}

namespace {

Point draw_in(const Rect& r, Rng& rng) {
  std::uniform_real_distribution<double> ux(r.x0, r.x1);
  std::uniform_real_distribution<double> uy(r.y0, r.y1);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

}  // namespace

Geometry sample_placement(const Geometry& base, std::size_t n_ues,
                          const PathLossParams& pl, Rng& rng) {
  Geometry g = base;
  g.ue_positions.resize(n_ues);
  const int max_attempts = 1000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t k = 0; k < n_ues; ++k) g.ue_positions[k] = draw_in(g.ue_region, rng);
    g.jammer_position = draw_in(g.jammer_region, rng);

    bool ok = distance(g.bs_position, g.irs_position) >= pl.d0;
    for (std::size_t k = 0; ok && k < n_ues; ++k) {
      ok = distance(g.bs_position, g.ue_positions[k]) >= pl.d0 &&
           distance(g.irs_position, g.ue_positions[k]) >= pl.d0 &&
           distance(g.jammer_position, g.ue_positions[k]) >= pl.d0;
    }
    if (ok) {
      g.validate(n_ues);
      return g;
    }
  }
  throw std::runtime_error("sample_placement: could not place nodes at least d0 apart");
}

}  // namespace irsjam
