#pragma once

// Numerical checks tying the three free-energy computations together: the
// closed-form catalog, the topological recursion, and the BPS side
// F_g = B_{2g}/(2g(2g-2)) sum_gamma Omega(gamma) (2 pi i / Z(gamma))^{2g-2}
// summed over the active charges in a half plane. Also derivative-level
// checks of the F0/F1 formulas and the degree-3 spectrum arithmetic.

#include <vector>

#include "hyperbps/bps.hpp"
#include "hyperbps/toprec.hpp"

namespace hyperbps {

// Open half plane { Z : Re(e^{-i phi} Z) > 0 }. A half plane is admissible
// for a spectrum when no active central charge lies on its boundary.
struct HalfPlane {
  double boundary_phase = 0.0;

  bool contains(cplx Z) const;
  // Throws VerificationError when some active charge sits within 1e-9
  // relative of the boundary ray.
  void require_admissible(const BPSStructure& s) const;
};

// Half plane containing the positive orientation of every candidate charge,
// centered on their angular span. Throws VerificationError when the span is
// too wide (>= pi) for such a half plane to exist. With this choice
// Z/(2 pi i) equals the canonical mass combination mu for every selected
// charge, so f0_bps/f1_bps reproduce the closed-form branch choices.
HalfPlane adapted_half_plane(CurveId id, const MassParams& m);

// B_{2g}/(2g(2g-2)) sum_{Z(gamma) in H} Omega(gamma) (2 pi i/Z)^{2g-2}.
cplx bps_free_energy(const BPSStructure& s, int g, const HalfPlane& H);

// F0 = sum Omega * (1/2) mu^2 log mu and F1 = -(1/12) sum Omega log mu with
// mu = Z/(2 pi i) over the active charges in H, principal logarithms. Both
// carry normalization ambiguities; only second derivatives of F0 and
// two-point differences of F1 are comparison-safe.
cplx f0_bps(const BPSStructure& s, const HalfPlane& H);
cplx f1_bps(const BPSStructure& s, const HalfPlane& H);

struct VerificationRow {
  int g = 0;
  cplx closed{0.0};
  cplx bps{0.0};
  cplx recursion{0.0};
  bool has_recursion = false;
  double rel_closed_bps = 0.0;
  double rel_recursion_closed = 0.0;
};

struct VerificationReport {
  CurveId id{};
  MassParams m;
  std::vector<VerificationRow> rows;  // g = 2 .. g_max
  double f0_hessian_rel = 0.0;        // max relative Hessian entry error
  double f1_diff_rel = 0.0;           // two-point difference error
  bool half_plane_independent = false;
  double tol_bps = 0.0;
  double tol_recursion = 0.0;
  bool pass = false;
};

// Builds the curve and spectrum, runs the recursion to min(g_max, 3) and the
// closed/BPS values to g_max, checks half-plane independence at 8 random
// admissible half planes, and compares the F0 Hessian (central differences,
// h = 1e-4 |m_a|) and an F1 two-point difference against the closed forms.
// Refuses non-generic parameters.
VerificationReport verify_curve(CurveId id, const MassParams& m, int g_max,
                                double tol_bps = 1e-12,
                                double tol_recursion = 1e-6);

struct Degree3Row {
  int g = 0;
  cplx closed{0.0};
  cplx bps{0.0};
  double rel = 0.0;
};

struct Degree3Report {
  CurveId id{};
  std::vector<Degree3Row> rows;
  bool pass = false;
};

// Arithmetic check for the two degree-3 tags: C14 carries the single residue
// class with Omega = 1 and Z = +/- 2 pi i m_inf, reproducing
// F_g = B_{2g}/(2g(2g-2)) m_inf^{2-2g}; C23 has empty spectrum and F_g = 0.
Degree3Report degree3_check(CurveId id, const MassParams& m, int g_max);

}  // namespace hyperbps
