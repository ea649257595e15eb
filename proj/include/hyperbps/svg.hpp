#pragma once

// Minimal SVG 1.1 rendering of a traced network snapshot: one polyline per
// critical trajectory, with distinct markers for turning points and poles.

#include <string>

#include "hyperbps/trajectory.hpp"

namespace hyperbps {

struct SvgOptions {
  double width = 800.0;
  double height = 800.0;
  // View box half-size in multiples of the curve scale, centered on the
  // centroid of the finite critical points. Trajectory points outside the
  // box are kept in the polyline and clipped by the viewport.
  double view_factor = 2.5;
};

std::string network_svg(const CurveData& curve, const NetworkSnapshot& snap,
                        const SvgOptions& opt = {});

}  // namespace hyperbps
