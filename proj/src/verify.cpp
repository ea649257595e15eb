#include "hyperbps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hyperbps {

namespace {

constexpr double kBoundaryTol = 1e-9;

cplx fg_coeff(int g) {
  return bernoulli(2 * g) / double(2 * g * (2 * g - 2));
}

double rel_error(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  // Two numerical zeros (empty-spectrum curves) agree by definition.
  if (scale < 1e-9) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace

bool HalfPlane::contains(cplx Z) const {
  return (Z * std::exp(cplx{0.0, -boundary_phase})).real() > 0.0;
}

void HalfPlane::require_admissible(const BPSStructure& s) const {
  const cplx rot = std::exp(cplx{0.0, -boundary_phase});
  for (const SpectrumRow& row : s.rows)
    if (std::abs((row.Z * rot).real()) <= kBoundaryTol * std::abs(row.Z))
      throw VerificationError(
          "half plane boundary passes through an active central charge");
}

HalfPlane adapted_half_plane(CurveId id, const MassParams& m) {
  const auto cands = candidate_charges(id, m);
  if (cands.empty()) return {};
  // Directions of the positive-orientation charges Z = 2 pi i mu. All of
  // them fit in an open half plane iff the largest circular gap between
  // consecutive directions exceeds pi; center the half plane on the arc
  // complementary to that gap.
  std::vector<double> ang;
  for (const auto& c : cands) ang.push_back(std::arg(kTwoPiI * c.mu));
  std::sort(ang.begin(), ang.end());
  const size_t n = ang.size();
  double best_gap = 0.0;
  size_t best_i = 0;
  for (size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? ang[i + 1] : ang[0] + 2.0 * kPi;
    if (next - ang[i] > best_gap) {
      best_gap = next - ang[i];
      best_i = i;
    }
  }
  if (best_gap <= kPi + 1e-12)
    throw VerificationError(
        "positive central charges span a half plane or more; no adapted "
        "half plane exists");
  // Points occupy [gap end, gap start] going forward; take the arc midpoint.
  const double lo = (best_i + 1 < n) ? ang[best_i + 1] : ang[0] + 2.0 * kPi;
  const double hi = ang[best_i] + 2.0 * kPi;
  return {std::remainder(0.5 * (lo + hi), 2.0 * kPi)};
}

cplx bps_free_energy(const BPSStructure& s, int g, const HalfPlane& H) {
  if (g < 2)
    throw InvalidParamError("bps_free_energy requires g >= 2");
  H.require_admissible(s);
  cplx sum = 0.0;
  for (const SpectrumRow& row : s.rows)
    if (H.contains(row.Z))
      sum += double(row.omega) * ipow(kTwoPiI / row.Z, 2 * g - 2);
  return fg_coeff(g) * sum;
}

cplx f0_bps(const BPSStructure& s, const HalfPlane& H) {
  H.require_admissible(s);
  cplx sum = 0.0;
  for (const SpectrumRow& row : s.rows)
    if (H.contains(row.Z)) {
      const cplx mu = row.Z / kTwoPiI;
      sum += double(row.omega) * 0.5 * mu * mu * std::log(mu);
    }
  return sum;
}

cplx f1_bps(const BPSStructure& s, const HalfPlane& H) {
  H.require_admissible(s);
  cplx sum = 0.0;
  for (const SpectrumRow& row : s.rows)
    if (H.contains(row.Z)) sum += double(row.omega) * std::log(row.Z / kTwoPiI);
  return -sum / 12.0;
}

namespace {

// F0/F1 of the BPS side at the canonical orientation: the adapted half
// plane selects Z = +2 pi i mu for every candidate, keeping the log branch
// choices continuous across a finite-difference stencil.
cplx f_bps_at(CurveId id, const MassParams& m, int which) {
  const CurveData curve = build_curve(id, m);
  const BPSStructure s = expected_spectrum(curve);
  const HalfPlane H = adapted_half_plane(id, m);
  return which == 0 ? f0_bps(s, H) : f1_bps(s, H);
}

MassParams shifted(const MassParams& m, const std::string& name, double h) {
  MassParams out = m;
  out[name] += h;
  return out;
}

// Max relative entry error between the central-difference Hessians of the
// BPS and closed-form F0 (holomorphic in the masses, so real-direction
// differences recover the complex second derivatives).
double f0_hessian_error(CurveId id, const MassParams& m) {
  const auto names = param_names(id);
  if (names.empty()) return 0.0;
  auto closed0 = [&](const MassParams& p) {
    return free_energy_closed(id, p, 0, /*allow_ambiguous=*/true).value;
  };
  auto bps0 = [&](const MassParams& p) { return f_bps_at(id, p, 0); };

  std::vector<std::vector<cplx>> hc, hb;
  double scale = 0.0;
  for (size_t a = 0; a < names.size(); ++a) {
    hc.emplace_back();
    hb.emplace_back();
    const double ha = 1e-4 * std::abs(mass(m, names[a]));
    for (size_t b = 0; b <= a; ++b) {
      const double hbb = 1e-4 * std::abs(mass(m, names[b]));
      auto second = [&](auto&& f) {
        if (a == b) {
          return (f(shifted(m, names[a], ha)) - 2.0 * f(m) +
                  f(shifted(m, names[a], -ha))) /
                 (ha * ha);
        }
        const auto pp = shifted(shifted(m, names[a], ha), names[b], hbb);
        const auto pm = shifted(shifted(m, names[a], ha), names[b], -hbb);
        const auto mp = shifted(shifted(m, names[a], -ha), names[b], hbb);
        const auto mm = shifted(shifted(m, names[a], -ha), names[b], -hbb);
        return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * ha * hbb);
      };
      hc[a].push_back(second(closed0));
      hb[a].push_back(second(bps0));
      scale = std::max(scale, std::abs(hc[a][b]));
    }
  }
  double worst = 0.0;
  for (size_t a = 0; a < hc.size(); ++a)
    for (size_t b = 0; b < hc[a].size(); ++b)
      worst = std::max(worst, std::abs(hc[a][b] - hb[a][b]) /
                                  std::max(scale, 1e-300));
  return worst;
}

// F1 is defined modulo additive constants; compare a two-point difference
// against the closed form at a nearby second generic point.
double f1_difference_error(CurveId id, const MassParams& m) {
  if (param_names(id).empty()) return 0.0;
  MassParams m2 = m;
  for (auto& [name, value] : m2) value *= cplx{1.02, 0.013};
  if (!check_genericity(id, m2).generic)
    for (auto& [name, value] : m2) value *= cplx{1.01, -0.017};
  auto closed1 = [&](const MassParams& p) {
    return free_energy_closed(id, p, 1, /*allow_ambiguous=*/true).value;
  };
  const cplx diff_bps = f_bps_at(id, m, 1) - f_bps_at(id, m2, 1);
  const cplx diff_closed = closed1(m) - closed1(m2);
  return std::abs(diff_bps - diff_closed) /
         std::max(1.0, std::abs(diff_closed));
}

}  // namespace

VerificationReport verify_curve(CurveId id, const MassParams& m, int g_max,
                                double tol_bps, double tol_recursion) {
  if (g_max < 2) throw InvalidParamError("verify_curve requires g_max >= 2");
  const GenericityReport rep = check_genericity(id, m);
  if (!rep.generic) {
    std::string why = "verify_curve refuses non-generic parameters";
    for (const auto& v : rep.violated_constraints) why += "; " + v;
    throw InvalidParamError(why);
  }

  VerificationReport out;
  out.id = id;
  out.m = m;
  out.tol_bps = tol_bps;
  out.tol_recursion = tol_recursion;

  const CurveData curve = build_curve(id, m);
  const BPSStructure s = expected_spectrum(curve);
  const bool empty = s.rows.empty();
  const HalfPlane H = empty ? HalfPlane{} : adapted_half_plane(id, m);

  CorrelatorSession session(curve);
  const int g_rec = std::min(g_max, 3);
  bool pass = true;
  for (int g = 2; g <= g_max; ++g) {
    VerificationRow row;
    row.g = g;
    row.closed = free_energy_closed(id, m, g).value;
    row.bps = empty ? cplx{0.0} : bps_free_energy(s, g, H);
    row.rel_closed_bps = rel_error(row.closed, row.bps);
    if (g <= g_rec) {
      row.recursion = session.free_energy_recursion(g).value;
      row.has_recursion = true;
      row.rel_recursion_closed = rel_error(row.recursion, row.closed);
    }
    pass = pass && row.rel_closed_bps <= tol_bps &&
           (!row.has_recursion || row.rel_recursion_closed <= tol_recursion);
    out.rows.push_back(row);
  }

  // The identity must not depend on the admissible half plane: +/- gamma
  // contribute equally because 2g-2 is even. Assert at 8 random phases.
  out.half_plane_independent = true;
  if (!empty) {
    std::mt19937 rng(0x5eedu + unsigned(id));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int k = 0; k < 8; ++k) {
      HalfPlane Hk{phase(rng)};
      for (;;) {
        try {
          Hk.require_admissible(s);
          break;
        } catch (const VerificationError&) {
          Hk.boundary_phase = phase(rng);
        }
      }
      for (const VerificationRow& row : out.rows)
        if (rel_error(bps_free_energy(s, row.g, Hk), row.bps) > 1e-12)
          out.half_plane_independent = false;
    }
  }
  pass = pass && out.half_plane_independent;

  if (!empty) {
    out.f0_hessian_rel = f0_hessian_error(id, m);
    out.f1_diff_rel = f1_difference_error(id, m);
    pass = pass && out.f0_hessian_rel <= 1e-5 && out.f1_diff_rel <= 1e-9;
  }

  out.pass = pass;
  return out;
}

Degree3Report degree3_check(CurveId id, const MassParams& m, int g_max) {
  if (id != CurveId::C14 && id != CurveId::C23)
    throw InvalidParamError("degree3_check accepts only C14 and C23");
  const GenericityReport rep = check_genericity(id, m);
  if (!rep.in_M) {
    std::string why = "degree3_check parameter out of domain";
    for (const auto& v : rep.violated_constraints) why += "; " + v;
    throw InvalidParamError(why);
  }

  Degree3Report out;
  out.id = id;
  out.pass = true;
  const auto cands = candidate_charges(id, m);
  for (int g = 2; g <= g_max; ++g) {
    Degree3Row row;
    row.g = g;
    // Closed side: m_inf^{2-2g} times the Bernoulli factor for the curve
    // carrying the residue class, zero for the empty spectrum.
    row.closed = (id == CurveId::C14)
                     ? fg_coeff(g) * ipow(mass(m, "minf"), 2 - 2 * g)
                     : cplx{0.0};
    cplx sum = 0.0;
    for (const auto& c : cands)
      sum += double(c.omega) * ipow(c.mu, 2 - 2 * g);
    row.bps = fg_coeff(g) * sum;
    row.rel = rel_error(row.closed, row.bps);
    out.pass = out.pass && row.rel <= 1e-12;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace hyperbps
