#include "hyperbps/svg.hpp"

#include <cmath>
#include <sstream>

namespace hyperbps {

namespace {

struct Frame {
  double cx, cy, half, width, height;
  double px(cplx z) const {
    return (z.real() - cx + half) / (2.0 * half) * width;
  }
  double py(cplx z) const {
    return (cy - z.imag() + half) / (2.0 * half) * height;
  }
};

void fmt(std::ostringstream& os, double v) {
  // Two decimals in pixel space keep files small; sub-pixel detail is
  // invisible at the default stroke width.
  os << std::round(v * 100.0) / 100.0;
}

}  // namespace

std::string network_svg(const CurveData& curve, const NetworkSnapshot& snap,
                        const SvgOptions& opt) {
  // Center the view on the finite critical points of Q.
  cplx centroid = 0.0;
  int count = 0;
  for (const auto& tp : curve.turning_points) {
    centroid += tp.x;
    ++count;
  }
  for (const auto& p : curve.poles)
    if (!p.x.inf) {
      centroid += p.x.v;
      ++count;
    }
  if (count > 0) centroid /= double(count);
  const Frame f{centroid.real(), centroid.imag(),
                opt.view_factor * curve.scale(), opt.width, opt.height};

  std::ostringstream os;
  os.setf(std::ios::fmtflags(0), std::ios::floatfield);
  os.precision(8);
  os << "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" "
     << "width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Trajectory& t : snap.critical_trajectories) {
    os << "<polyline fill=\"none\" stroke=\""
       << (t.termination == Termination::closed_loop ? "#1f77b4" : "#d62728")
       << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < t.points.size(); ++i) {
      if (i) os << ' ';
      fmt(os, f.px(t.points[i]));
      os << ',';
      fmt(os, f.py(t.points[i]));
    }
    os << "\"/>\n";
  }

  // Turning points: filled dots for zeros, crosses for the simple poles
  // that act as turning points.
  for (const auto& tp : curve.turning_points) {
    const double x = f.px(tp.x), y = f.py(tp.x);
    if (tp.kind == TurningKind::simple_zero) {
      os << "<circle cx=\"";
      fmt(os, x);
      os << "\" cy=\"";
      fmt(os, y);
      os << "\" r=\"4\" fill=\"#ff7f0e\"/>\n";
    } else {
      os << "<path stroke=\"#ff7f0e\" stroke-width=\"2\" d=\"M";
      fmt(os, x - 4);
      os << ' ';
      fmt(os, y - 4);
      os << " L";
      fmt(os, x + 4);
      os << ' ';
      fmt(os, y + 4);
      os << " M";
      fmt(os, x - 4);
      os << ' ';
      fmt(os, y + 4);
      os << " L";
      fmt(os, x + 4);
      os << ' ';
      fmt(os, y - 4);
      os << "\"/>\n";
    }
  }

  // Higher-order finite poles: open squares.
  for (const auto& p : curve.poles) {
    if (p.x.inf || p.order < 2) continue;
    const double x = f.px(p.x.v), y = f.py(p.x.v);
    os << "<rect x=\"";
    fmt(os, x - 4);
    os << "\" y=\"";
    fmt(os, y - 4);
    os << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#2ca02c\" "
          "stroke-width=\"2\"/>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace hyperbps
