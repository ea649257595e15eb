#include "hyperbps/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <tuple>

namespace hyperbps {

Phase Phase::mod_pi(double t) {
  double r = std::fmod(t, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r -= kPi;
  return {r};
}

std::string to_string(DegenerationEvent::Kind k) {
  switch (k) {
    case DegenerationEvent::Kind::saddle_I: return "saddle_I";
    case DegenerationEvent::Kind::saddle_II: return "saddle_II";
    case DegenerationEvent::Kind::saddle_III: return "saddle_III";
    case DegenerationEvent::Kind::ring_degenerate: return "ring_degenerate";
  }
  return "?";
}

namespace {

double phase_gap(double a, double b) {
  const double d =
      std::fabs(Phase::mod_pi(a).theta - Phase::mod_pi(b).theta);
  return std::min(d, kPi - d);
}

// Leading coefficient of the local normal form: Q ~ c (x - b) at a simple
// zero, Q ~ c / (x - p) at a simple pole.
cplx normal_form_coeff(const CurveData& c, int turning_index) {
  const TurningPoint& t = c.turning_points[turning_index];
  if (t.kind == TurningKind::simple_zero)  // Q(b) = 0, so Q'(b) = num'/den
    return c.Q.num.derivative()(t.x) / c.Q.den(t.x);
  return residue_at(c.Q, t.x);
}

// w-distance from a turning point to a point at distance rho from it, per the
// local normal form (integrating sqrt(Q) along the ray).
double normal_form_w(const CurveData& c, int turning_index, double rho) {
  const double sc = std::sqrt(std::abs(normal_form_coeff(c, turning_index)));
  if (c.turning_points[turning_index].kind == TurningKind::simple_zero)
    return (2.0 / 3.0) * sc * std::pow(rho, 1.5);
  return 2.0 * sc * std::sqrt(rho);
}

struct ResolvedLimits {
  double max_w, capture, escape, tol;
};

ResolvedLimits resolve(const CurveData& c, const TraceLimits& l) {
  const double s = c.scale();
  ResolvedLimits r;
  r.capture = l.capture_radius > 0.0 ? l.capture_radius : 1e-3 * s;
  r.escape = l.escape_radius > 0.0 ? l.escape_radius : 1e3 * s;
  // Toward a high-order pole the w-coordinate grows at worst quadratically in
  // |x| on the catalog (order-6 pole at infinity), so this budget guarantees
  // escapes are reported as such rather than as length_cap.
  r.max_w = l.max_w_length > 0.0 ? l.max_w_length : r.escape * r.escape;
  r.tol = l.step_tol > 0.0 ? l.step_tol : 1e-10;
  return r;
}

// sqrt(Q) with branch continuity: the sign is chosen to stay aligned with a
// running reference value along the trace.
struct Flow {
  const CurveData* c;
  cplx phase;  // e^{i theta}
  cplx ref;    // current branch value of sqrt(Q)

  cplx sq(cplx x) const {
    cplx s = std::sqrt((*c).Q(x));
    if (std::real(std::conj(ref) * s) < 0.0) s = -s;
    return s;
  }
  cplx vel(cplx x) const { return phase / sq(x); }
};

double seg_distance(cplx p, cplx a, cplx b, double* t_out) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0
                 ? std::clamp(std::real(std::conj(ab) * (p - a)) / len2, 0.0, 1.0)
                 : 0.0;
  if (t_out) *t_out = t;
  return std::abs(p - (a + t * ab));
}

struct ClosestApproach {
  double dist = std::numeric_limits<double>::infinity();
  int side = 0;        // sign of cross(tangent, to-target)
  double w_length = 0.0;
};

// Closest approach of a polyline (with running w-lengths) to a point.
ClosestApproach closest_approach(const std::vector<cplx>& pts,
                                 const std::vector<double>& s, cplx target) {
  ClosestApproach best;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double t = 0.0;
    const double d = seg_distance(target, pts[i], pts[i + 1], &t);
    if (d < best.dist) {
      best.dist = d;
      const cplx tan = pts[i + 1] - pts[i];
      const double cross = std::imag(std::conj(tan) * (target - pts[i]));
      best.side = cross > 0.0 ? 1 : (cross < 0.0 ? -1 : 0);
      best.w_length = s[i] + t * (s[i + 1] - s[i]);
    }
  }
  return best;
}

}  // namespace

std::vector<double> seed_rays(const CurveData& curve, int turning_index,
                              double theta) {
  if (turning_index < 0 ||
      turning_index >= static_cast<int>(curve.turning_points.size()))
    throw InvalidParamError("seed_rays: turning point index out of range");
  // The foliation has period pi in theta; canonicalizing here makes the
  // snapshots at theta and theta + pi literally identical.
  theta = Phase::mod_pi(theta).theta;
  const cplx c = normal_form_coeff(curve, turning_index);
  std::vector<double> rays;
  if (curve.turning_points[turning_index].kind == TurningKind::simple_zero) {
    // w = (2/3) sqrt(c) (x-b)^{3/2}: Im(e^{-i theta} w) = 0 along
    // arg(x-b) = (2 theta - arg c + 2 pi k)/3.
    for (int k = 0; k < 3; ++k)
      rays.push_back((2.0 * theta - std::arg(c) + 2.0 * kPi * k) / 3.0);
  } else {
    // w = 2 sqrt(c) (x-p)^{1/2}: single ray at arg(x-p) = 2 theta - arg c.
    rays.push_back(2.0 * theta - std::arg(c));
  }
  return rays;
}

std::vector<Seed> all_seeds(const CurveData& curve, double theta) {
  const double offset = 5e-4 * curve.scale();
  std::vector<Seed> seeds;
  for (int ti = 0; ti < static_cast<int>(curve.turning_points.size()); ++ti)
    for (double dir : seed_rays(curve, ti, theta))
      seeds.push_back({ti, offset * std::polar(1.0, dir), dir});
  return seeds;
}

Trajectory trace(const CurveData& curve, const Seed& seed, double theta,
                 const TraceLimits& limits) {
  const ResolvedLimits lim = resolve(curve, limits);
  theta = Phase::mod_pi(theta).theta;  // trace direction is set by the seed

  cplx x = seed.turning_index >= 0
               ? curve.turning_points[seed.turning_index].x + seed.start
               : seed.start;
  Flow flow{&curve, std::polar(1.0, theta), std::sqrt(curve.Q(x))};
  // Pick the branch whose velocity points along the requested direction.
  if (std::real(std::conj(std::polar(1.0, seed.direction)) * flow.vel(x)) <
      0.0)
    flow.ref = -flow.ref;
  const cplx v0 = flow.vel(x);

  // Finite points the stepper must not fly over in one step.
  std::vector<cplx> obstacles;
  for (const auto& t : curve.turning_points) obstacles.push_back(t.x);
  std::vector<std::pair<cplx, int>> sink_poles;  // finite poles of order >= 2
  for (const auto& p : curve.poles)
    if (!p.x.inf) {
      obstacles.push_back(p.x.v);
      if (p.order >= 2) sink_poles.emplace_back(p.x.v, p.order);
    }

  Trajectory out;
  out.points.push_back(x);
  out.w_values.push_back(cplx{0.0});
  cplx w{0.0};
  double s = 0.0;
  std::vector<double> s_at;  // running w-length per point
  s_at.push_back(0.0);

  const int nt = static_cast<int>(curve.turning_points.size());
  std::vector<double> tp_dist(nt, std::numeric_limits<double>::infinity());
  int pending_capture = -1;
  double prev_capture_dist = 0.0;

  // Dormand-Prince 5(4) tableau.
  static const double A[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
       11.0 / 84}};
  static const double B5[7] = {35.0 / 384,     0.0,  500.0 / 1113,
                               125.0 / 192,    -2187.0 / 6784,
                               11.0 / 84,      0.0};
  static const double B4[7] = {5179.0 / 57600,    0.0,
                               7571.0 / 16695,    393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100,
                               1.0 / 40};

  double h = 0.4 * lim.capture * std::abs(flow.sq(x));
  const double h_floor = 1e-14 * std::max(1.0, std::abs(x));

  while (true) {
    if (s >= lim.max_w * (1.0 - 1e-12)) {
      out.termination = Termination::length_cap;
      break;
    }
    // Keep one step from spanning a sizable fraction of the distance to the
    // nearest obstacle (branch continuity and capture detection both rely on
    // locally small steps).
    double near = 0.5 * std::abs(x) + lim.escape * 0.05;
    for (cplx o : obstacles) near = std::min(near, std::abs(x - o));
    const double speed = std::abs(flow.vel(x));
    if (speed * h > 0.25 * near) h = 0.25 * near / speed;
    h = std::min(h, lim.max_w - s);  // land exactly on the length budget

    // One embedded step.
    cplx k[7];
    bool stage_ok = true;
    for (int i = 0; i < 7 && stage_ok; ++i) {
      cplx xi = x;
      for (int j = 0; j < i; ++j) xi += h * A[i][j] * k[j];
      if (!std::isfinite(std::abs(xi))) {
        stage_ok = false;
        break;
      }
      k[i] = flow.vel(xi);
    }
    cplx x5 = x, x4 = x;
    if (stage_ok)
      for (int i = 0; i < 7; ++i) {
        x5 += h * B5[i] * k[i];
        x4 += h * B4[i] * k[i];
      }
    const double err = stage_ok ? std::abs(x5 - x4)
                                : std::numeric_limits<double>::infinity();
    const double tol = lim.tol * std::max(1.0, std::abs(x));
    if (err > tol) {
      h *= std::max(0.2, 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2));
      if (h < h_floor)
        throw NumericError("trajectory step underflow near x = (" +
                           std::to_string(x.real()) + ", " +
                           std::to_string(x.imag()) + ")");
      continue;
    }

    const cplx x_old = x;
    x = x5;
    s += h;
    h *= std::min(5.0, 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2));

    // Independent w update: integrate sqrt(Q) along the chord (the integral
    // is path independent, so chord quadrature measures how well the
    // polyline tracks the leaf). 4-point Gauss-Legendre.
    {
      static const double gx[2] = {0.3399810435848563, 0.8611363115940526};
      static const double gw[2] = {0.6521451548625461, 0.3478548451374538};
      const cplx mid = 0.5 * (x_old + x), half = 0.5 * (x - x_old);
      cplx acc{0.0};
      for (int i = 0; i < 2; ++i) {
        acc += gw[i] * (flow.sq(mid + gx[i] * half) +
                        flow.sq(mid - gx[i] * half));
      }
      w += 0.5 * acc * (x - x_old);
    }
    flow.ref = flow.sq(x);
    out.points.push_back(x);
    out.w_values.push_back(w);
    s_at.push_back(s);
    out.drift = std::max(
        out.drift, std::abs(std::imag(w / flow.phase)));
    out.w_length = std::real(w / flow.phase);

    // Turning-point capture (the seed's own origin is exempt).
    for (int ti = 0; ti < nt; ++ti) {
      if (ti == seed.turning_index) continue;
      double tpar = 0.0;
      const double d =
          seg_distance(curve.turning_points[ti].x, x_old, x, &tpar);
      tp_dist[ti] = std::min(tp_dist[ti], d);
      if (d < lim.capture && pending_capture < 0) {
        pending_capture = ti;
        prev_capture_dist = std::abs(x - curve.turning_points[ti].x);
      }
    }
    if (pending_capture >= 0) {
      const cplx tp = curve.turning_points[pending_capture].x;
      const double d_now = std::abs(x - tp);
      if (d_now > prev_capture_dist || d_now < 10.0 * lim.tol) {
        out.termination = Termination::turning_point;
        out.turning_index = pending_capture;
        const ClosestApproach ca = closest_approach(out.points, s_at, tp);
        out.miss_distance = ca.dist;
        out.side_sign = ca.side;
        break;
      }
      prev_capture_dist = d_now;
    }

    // Pole sinks and escape.
    bool sunk = false;
    for (const auto& [p, order] : sink_poles)
      if (std::abs(x - p) < lim.capture) sunk = true;
    if (sunk || std::abs(x) > lim.escape) {
      out.termination = Termination::infinite_pole;
      break;
    }

    // Closed loop: the last segment passes back through the start, moving
    // the same way. Segment distance, not point distance: steps can be much
    // longer than the capture radius.
    if (s > 20.0 * lim.capture) {
      double tpar = 0.0;
      const double dloop =
          seg_distance(out.points.front(), x_old, x, &tpar);
      if (dloop < lim.capture &&
          std::real(std::conj(v0) * flow.vel(x)) > 0.0) {
        const cplx w_prev = out.w_values[out.w_values.size() - 2];
        out.points.back() = x_old + tpar * (x - x_old);
        out.w_values.back() = w_prev + tpar * (w - w_prev);
        out.w_length = std::real(out.w_values.back() / flow.phase);
        out.termination = Termination::closed_loop;
        break;
      }
    }
  }

  // Record the closest non-source approach even without capture, so sweeps
  // can track which side of a target the trajectory passed.
  if (out.termination != Termination::turning_point) {
    int best = -1;
    for (int ti = 0; ti < nt; ++ti)
      if (ti != seed.turning_index &&
          (best < 0 || tp_dist[ti] < tp_dist[best]))
        best = ti;
    if (best >= 0 && std::isfinite(tp_dist[best])) {
      const ClosestApproach ca =
          closest_approach(out.points, s_at, curve.turning_points[best].x);
      out.turning_index = best;
      out.miss_distance = ca.dist;
      out.side_sign = ca.side;
    }
  }
  return out;
}

NetworkSnapshot build_network(const CurveData& curve, double theta,
                              const TraceLimits& limits) {
  NetworkSnapshot snap;
  snap.id = curve.id;
  snap.theta = theta;
  for (const Seed& seed : all_seeds(curve, theta))
    snap.critical_trajectories.push_back(trace(curve, seed, theta, limits));
  for (const auto& [label, ms] : curve.second_order_masses())
    snap.ring_domain_flags[label] =
        phase_gap(theta, std::arg(ms) + kPi / 2.0) < 1e-6;
  return snap;
}

std::vector<RingPhase> ring_phases(const CurveData& curve) {
  std::vector<RingPhase> out;
  for (const auto& [label, ms] : curve.second_order_masses())
    out.push_back({label, Phase::mod_pi(std::arg(ms) + kPi / 2.0),
                   label + "+ - " + label + "-"});
  return out;
}

namespace {

int sweep_threads() {
  if (const char* env = std::getenv("HYPERBPS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(std::min(hc, 16u)) : 4;
}

struct ApproachRecord {
  double dist;
  int side;
};

// One sweep cell: trace every seed at this phase and record the closest
// approach to every other turning point within the window.
// Keyed by (turning point, ray index, target).
std::map<std::tuple<int, int, int>, ApproachRecord> sweep_cell(
    const CurveData& curve, double theta, const TraceLimits& lim,
    double window) {
  std::map<std::tuple<int, int, int>, ApproachRecord> rec;
  const int nt = static_cast<int>(curve.turning_points.size());
  const double offset = 5e-4 * curve.scale();
  std::vector<double> s_at;
  for (int ti = 0; ti < nt; ++ti) {
    const std::vector<double> rays = seed_rays(curve, ti, theta);
    for (int ri = 0; ri < static_cast<int>(rays.size()); ++ri) {
      const Seed seed{ti, offset * std::polar(1.0, rays[ri]), rays[ri]};
      const Trajectory tr = trace(curve, seed, theta, lim);
      s_at.assign(tr.points.size(), 0.0);
      for (size_t i = 1; i < tr.points.size(); ++i)
        s_at[i] = std::real((tr.w_values[i]) * std::polar(1.0, -theta));
      for (int tj = 0; tj < nt; ++tj) {
        if (tj == ti) continue;
        const ClosestApproach ca =
            closest_approach(tr.points, s_at, curve.turning_points[tj].x);
        if (ca.dist < window && ca.side != 0)
          rec[{ti, ri, tj}] = {ca.dist, ca.side};
      }
    }
  }
  return rec;
}

}  // namespace

std::vector<DegenerationEvent> detect_degenerations(const CurveData& curve,
                                                    int grid_steps,
                                                    double refine_tol) {
  if (grid_steps < 8) throw InvalidParamError("grid_steps too small");
  std::vector<DegenerationEvent> events;

  // Degenerate ring domains: analytic phases, confirmed by a closed leaf
  // launched near the pole.
  for (const RingPhase& rp : ring_phases(curve)) {
    DegenerationEvent ev;
    ev.theta_star = rp.phase;
    ev.kind = DegenerationEvent::Kind::ring_degenerate;
    ev.pole = rp.pole;
    cplx ms{0.0};
    for (const auto& [label, mv] : curve.second_order_masses())
      if (label == rp.pole) ms = mv;
    ev.length = 2.0 * kPi * std::abs(ms);
    events.push_back(ev);
  }

  // Saddle sweep. The per-cell trace budget only needs to cover saddle
  // lengths (a few mass units), not full escapes to infinity.
  double mass_sum = 0.0;
  for (const auto& [name, mv] : curve.m) mass_sum += std::abs(mv);
  TraceLimits lim;
  lim.max_w_length = 10.0 * curve.scale() + 4.0 * kPi * mass_sum;
  const double window = 0.1 * curve.scale();

  const int G = grid_steps;
  std::vector<std::map<std::tuple<int, int, int>, ApproachRecord>> cells(
      G + 1);
  {
    const int nthreads = sweep_threads();
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i <= G; i = next.fetch_add(1))
          cells[i] = sweep_cell(curve, kPi * i / G, lim, window);
      });
    for (auto& th : pool) th.join();
  }

  const int nt = static_cast<int>(curve.turning_points.size());
  auto kind_of = [&](int a, int b) {
    const int zeros =
        (curve.turning_points[a].kind == TurningKind::simple_zero) +
        (curve.turning_points[b].kind == TurningKind::simple_zero);
    return zeros == 2 ? DegenerationEvent::Kind::saddle_I
           : zeros == 1 ? DegenerationEvent::Kind::saddle_II
                        : DegenerationEvent::Kind::saddle_III;
  };

  const double offset = 5e-4 * curve.scale();
  // Acceptance: a fresh trace at the refined phase must land in the target's
  // capture ball with a tiny miss. The same saddle is typically found from
  // both endpoints; the seed-offset bias keeps the two refined phases equal
  // only to ~1e-5, so deduplication works at the phase-reporting tolerance.
  auto try_accept = [&](int ti, int ri, int tj, double theta_star) {
    const std::vector<double> rays = seed_rays(curve, ti, theta_star);
    if (ri >= static_cast<int>(rays.size())) return;
    const Seed seed{ti, offset * std::polar(1.0, rays[ri]), rays[ri]};
    const Trajectory tr = trace(curve, seed, theta_star, lim);
    if (tr.termination != Termination::turning_point ||
        tr.turning_index != tj || tr.miss_distance > 1e-6)
      return;  // unresolved candidate, not an event

    DegenerationEvent ev;
    ev.theta_star = Phase::mod_pi(theta_star);
    ev.kind = kind_of(ti, tj);
    ev.endpoint_a = std::min(ti, tj);
    ev.endpoint_b = std::max(ti, tj);
    // The trace runs between small disks around the endpoints; add back
    // the normal-form w-distance across those disks.
    const double d_end =
        std::abs(tr.points.back() - curve.turning_points[tj].x);
    ev.length = tr.w_length + normal_form_w(curve, ti, offset) +
                normal_form_w(curve, tj, d_end);

    for (const auto& e : events)
      if (e.kind == ev.kind && e.endpoint_a == ev.endpoint_a &&
          e.endpoint_b == ev.endpoint_b &&
          phase_gap(e.theta_star.theta, ev.theta_star.theta) < 1e-3)
        return;
    events.push_back(ev);
  };

  // A saddle sitting exactly on a grid phase leaves no side-sign flip to
  // bisect; keep such direct hits as fallback candidates. The threshold is
  // well below the quadratic-contact distance (~1e-6) that near-saddle
  // traces reach when hairpinning around a simple-pole target.
  std::vector<std::tuple<int, int, int, double>> direct_hits;
  for (int i = 0; i <= G; ++i) {
    for (const auto& [key, ra] : cells[i]) {
      const auto [ti, ri, tj] = key;
      if (ra.dist < 1e-8)
        direct_hits.emplace_back(ti, ri, tj, kPi * i / G);
      if (i == G) continue;
      auto it = cells[i + 1].find(key);
      if (it == cells[i + 1].end()) continue;
      if (ra.side * it->second.side >= 0) continue;

      // Side-sign bisection in theta, retracing only the candidate seed.
      double lo = kPi * i / G, hi = kPi * (i + 1) / G;
      const int lo_side = ra.side;
      bool resolved = true;
      while (hi - lo > refine_tol) {
        const double mid = 0.5 * (lo + hi);
        const std::vector<double> rays = seed_rays(curve, ti, mid);
        const Seed seed{ti, offset * std::polar(1.0, rays[ri]), rays[ri]};
        const Trajectory tr = trace(curve, seed, mid, lim);
        std::vector<double> s_at(tr.points.size(), 0.0);
        for (size_t p = 1; p < tr.points.size(); ++p)
          s_at[p] = std::real(tr.w_values[p] * std::polar(1.0, -mid));
        const ClosestApproach ca =
            closest_approach(tr.points, s_at, curve.turning_points[tj].x);
        if (ca.dist >= window || ca.side == 0) {
          resolved = false;
          break;
        }
        (ca.side == lo_side ? lo : hi) = mid;
      }
      if (resolved) try_accept(ti, ri, tj, 0.5 * (lo + hi));
    }
  }
  for (const auto& [ti, ri, tj, th] : direct_hits) try_accept(ti, ri, tj, th);

  std::sort(events.begin(), events.end(),
            [](const DegenerationEvent& a, const DegenerationEvent& b) {
              return a.theta_star.theta < b.theta_star.theta;
            });
  return events;
}

}  // namespace hyperbps
