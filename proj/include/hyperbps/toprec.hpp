#pragma once

// Eynard-Orantin topological recursion on the catalog curves: pointwise
// correlators W_{g,n} by nested contour residues, free energies F_g from the
// residue pairing with a primitive of y dx, and the closed-form free-energy
// catalog.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperbps/curve.hpp"

namespace hyperbps {

struct FreeEnergyValue {
  int g = 0;
  cplx value{0.0};
  enum class Method { recursion, closed_form } method = Method::closed_form;
  double error_estimate = 0.0;
  // F_0 is defined modulo degree-two polynomials in the masses and F_1
  // modulo additive constants; comparisons must stay at derivative level.
  bool ambiguous = false;
};

// Bidifferential coefficient 1/(z1-z2)^2. Throws on coincident arguments.
cplx bergman(cplx z1, cplx z2);

struct SessionConfig {
  int nodes = 64;            // trapezoid nodes per residue circle
  int extraction_nodes = 96; // nodes for the F_g Laurent extraction circle
  double radius_factor = 0.45;
  double extraction_radius_factor = 0.4;
  double depth_shrink = 0.55;
  double residue_free_tol = 1e-6;
};

// Evaluates correlators for one curve, memoizing pointwise values. Residues
// at ramification points use circles whose radius shrinks geometrically with
// nesting depth, so argument points never land on an active contour. Not
// thread safe; use one session per worker.
class CorrelatorSession {
 public:
  explicit CorrelatorSession(CurveData curve, SessionConfig cfg = {});
  ~CorrelatorSession();

  const CurveData& curve() const { return curve_; }

  // W_{g,n}(points), the coefficient of dz_1...dz_n. Points must stay away
  // from ramification points (outside the outermost residue circles).
  cplx eval_W(int g, int n, const std::vector<cplx>& points);

  // K_r(z0, z) for the ramification point with the given index.
  cplx recursion_kernel(int ram_index, cplx z0, cplx z) const;

  // F_g via Eq. (2.5): (1/(2-2g)) sum_r Res_r [Phi W_{g,1}], g >= 2.
  FreeEnergyValue free_energy_recursion(int g);

  size_t memo_size() const { return memo_.size(); }

 private:
  struct Ring {  // residue contour around one ramification point at a depth
    std::vector<cplx> z, zbar;
    std::vector<cplx> weight;  // (z_j - r)/N, or -z_j/N at infinity
    std::vector<cplx> kden;    // 2 (y(z_j) - y(zbar_j)) x'(z_j)
    std::vector<cplx> jac;     // -sigma'(z_j): dzbar Jacobian of the
                               // zbar slot, folded with the kernel sign
  };

  cplx eval(int g, int n, std::vector<cplx> pts, int depth);
  const Ring& ring(int ram_index, int depth);
  double base_radius(int ram_index) const;
  double ring_radius(int ram_index, int depth);

  // Partial-fraction backend for free energies: every stable W_{g,n} on a
  // genus-zero curve is an exact finite combination of pole-basis functions
  // at the ramification points, so the recursion closes on small coefficient
  // tensors. The nested pointwise quadrature stays as the eval_W surface.
  struct PoleBasis;
  cplx free_energy_from_basis(PoleBasis& basis, int g) const;

  CurveData curve_;
  SessionConfig cfg_;
  std::vector<double> base_radius_;  // per ramification point
  // Per-depth residue-circle radii. The involution fixes each ramification
  // point with derivative -1 but is not an isometry; its second-order
  // distance distortion can pull sigma(z0) much closer to the ramification
  // point than z0 itself, so successive radii contract by the sampled
  // worst-case image distance, not by a fixed geometric factor.
  std::vector<std::vector<double>> depth_radius_;
  std::unordered_map<std::string, Ring> rings_;
  std::unordered_map<std::string, cplx> memo_;
  std::unique_ptr<PoleBasis> basis_, basis_check_;  // full / half node count
};

// Table 2 / closed-form free energies. g <= 1 values carry normalization
// ambiguities and are refused unless allow_ambiguous is set.
FreeEnergyValue free_energy_closed(CurveId id, const MassParams& m, int g,
                                   bool allow_ambiguous = false);

// F_0 .. F_gmax closed-form coefficients of the hbar-series
// F(hbar) = sum_g hbar^{2g-2} F_g.
std::vector<FreeEnergyValue> partition_series(CurveId id, const MassParams& m,
                                              int g_max);

}  // namespace hyperbps
