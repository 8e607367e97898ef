#pragma once

#include <cstddef>
#include <vector>

#include "irsjam/common.hpp"

namespace irsjam {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, corners (x0,y0) .. (x1,y1).
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Log-distance path loss parameters. Defaults follow the simulated
/// deployment: heavily obstructed BS->UE links, a favorably placed
/// reflecting surface, and a line-of-sight-ish jammer.
struct PathLossParams {
  double pl0_db = 30.0;  // reference loss at d0
  double d0 = 1.0;       // reference distance, meters
  double beta_bu = 3.75;
  double beta_br = 2.2;
  double beta_ru = 2.2;
  double beta_ju = 2.5;
};

/// Node layout for one realization. UE and jammer positions are redrawn
/// uniformly in their regions once per realization; BS and IRS are fixed.
struct Geometry {
  Point bs_position{0.0, 0.0};
  Point irs_position{75.0, 100.0};
  std::vector<Point> ue_positions;
  Point jammer_position{675.0, 50.0};
  Rect ue_region{5.0, 0.0, 105.0, 100.0};
  Rect jammer_region{650.0, 0.0, 700.0, 100.0};

  void validate(std::size_t expected_ues) const;
};

/// Draws UE and jammer positions uniformly inside their regions. Draws that
/// put any transmitter-receiver pair closer than the path-loss reference
/// distance are rejected and redrawn.
Geometry sample_placement(const Geometry& base, std::size_t n_ues,
                          const PathLossParams& pl, Rng& rng);

}  // namespace irsjam
