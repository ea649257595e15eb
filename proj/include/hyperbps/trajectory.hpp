#pragma once

// Foliation tracing for catalog quadratic differentials: critical
// trajectories Im(e^{-i theta} int sqrt(Q) dx) = const, spectral-network
// snapshots, and degeneration detection (saddles + degenerate ring domains).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperbps/bps.hpp"
#include "hyperbps/curve.hpp"

namespace hyperbps {

// Phase of the foliation, stored mod pi in [0, pi).
struct Phase {
  double theta = 0.0;
  static Phase mod_pi(double t);
};

enum class Termination {
  infinite_pole,   // escaped toward a pole of order >= 3 (or order-2 sink)
  turning_point,   // entered the capture ball of a turning point
  length_cap,      // exceeded the w-length budget
  closed_loop,     // returned to the start with matching direction
};

struct Trajectory {
  std::vector<cplx> points;    // polyline in the x-chart
  std::vector<cplx> w_values;  // running e^{-i theta} int sqrt(Q) dx
  Termination termination = Termination::length_cap;
  int turning_index = -1;      // target index when termination==turning_point
  double miss_distance = 0.0;  // closest approach to the captured target
  double drift = 0.0;          // max |Im w - Im w(0)| over the trace
  double w_length = 0.0;       // Re w at the end (monotone along the trace)
  int side_sign = 0;           // sign of cross(tangent, to-target) at capture
};

struct TraceLimits {
  double max_w_length = 0.0;    // 0: pick from curve scale
  double capture_radius = 0.0;  // 0: 1e-3 * curve scale
  double escape_radius = 0.0;   // 0: 1e3 * curve scale
  double step_tol = 1e-10;
};

struct Seed {
  int turning_index = -1;
  cplx start;        // offset from the turning point along the ray
  double direction;  // arg of the initial ray
};

struct NetworkSnapshot {
  CurveId id{};
  double theta = 0.0;
  std::vector<Trajectory> critical_trajectories;
  // second-order pole label -> a degenerate ring domain sits there at theta
  std::map<std::string, bool> ring_domain_flags;
};

struct DegenerationEvent {
  Phase theta_star;
  enum class Kind { saddle_I, saddle_II, saddle_III, ring_degenerate } kind{};
  int endpoint_a = -1;  // turning-point indices for saddles
  int endpoint_b = -1;
  std::string pole;     // flagged pole for ring events
  double length = 0.0;  // metric length L of the saddle / half the ring lift
  std::optional<Charge> matched_charge;
};

std::string to_string(DegenerationEvent::Kind k);

// Initial ray directions at a turning point: three for a simple zero,
// one for a simple pole (local normal forms w ~ (x-b)^{3/2}, (x-p)^{1/2}).
std::vector<double> seed_rays(const CurveData& curve, int turning_index,
                              double theta);
std::vector<Seed> all_seeds(const CurveData& curve, double theta);

Trajectory trace(const CurveData& curve, const Seed& seed, double theta,
                 const TraceLimits& limits = {});

NetworkSnapshot build_network(const CurveData& curve, double theta,
                              const TraceLimits& limits = {});

struct RingPhase {
  std::string pole;
  Phase phase;
  std::string charge_label;  // "s+ - s-"
};
std::vector<RingPhase> ring_phases(const CurveData& curve);

// Ring events analytically plus saddle events by a phase sweep with
// side-sign bisection. Requires generic parameters.
std::vector<DegenerationEvent> detect_degenerations(const CurveData& curve,
                                                    int grid_steps = 2000,
                                                    double refine_tol = 1e-10);

}  // namespace hyperbps
