#pragma once

// The nine hypergeometric-type curves: quadratic differential Q(x) dx^2,
// genus-0 rational parametrization (x(z), y(z)) with y^2 = Q(x), covering
// involution, ramification points, and punctures with residue labels.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperbps/numeric.hpp"

namespace hyperbps {

enum class CurveId { HG, dHG, Kum, Leg, Bes, Whi, Web, dBes, Ai, C14, C23 };

std::string to_string(CurveId id);
CurveId curve_id_from_string(const std::string& s);

// Parameter names are fixed per curve: HG {m0, m1, minf}; dHG {m1, minf};
// Kum {m0, minf}; Leg/Whi/Web {minf}; Bes {m0}; Ai/dBes {}.
using MassParams = std::map<std::string, cplx>;

std::vector<std::string> param_names(CurveId id);
cplx mass(const MassParams& m, const std::string& name);

// Linear fractional map z -> (az + b)/(cz + d).
struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
  cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
  cplx derivative(cplx z) const {
    const cplx den = c * z + d;
    return (a * d - b * c) / (den * den);
  }
};

// Point on the Riemann sphere.
struct PP1 {
  cplx v{0.0};
  bool inf = false;
  static PP1 infinity() { return {cplx{0.0}, true}; }
  static PP1 at(cplx z) { return {z, false}; }
};

enum class TurningKind { simple_zero, simple_pole };

struct TurningPoint {
  cplx x;
  TurningKind kind;
};

struct PoleInfo {
  std::string label;  // "0", "1", "-1", "inf"
  PP1 x;
  int order;
};

struct Puncture {
  std::string label;            // "0+", "inf-", ... or bare "0"/"inf" for odd
  std::string pole;             // label of the underlying pole of Q
  PP1 z;                        // location in the parametrizing z-plane
  std::optional<cplx> residue;  // Res_z y x' dz = +/- m_s at even-order poles
};

struct CurveData {
  CurveId id{};
  MassParams m;
  RationalFn Q;
  std::vector<TurningPoint> turning_points;
  std::vector<PoleInfo> poles;
  RationalFn x_of_z;
  RationalFn y_of_z;
  RationalFn xprime_of_z;
  RationalFn w01;  // y(z) * x'(z), the (0,1) correlator density
  Mobius involution;
  std::vector<PP1> ramification_z;
  std::vector<Puncture> punctures;

  // Max pairwise distance among finite critical points of Q, floored at 1.
  double scale() const;
  // (pole label, m_s) for every second-order pole of Q (ring-domain seats).
  std::vector<std::pair<std::string, cplx>> second_order_masses() const;
  const PoleInfo* pole_by_label(const std::string& label) const;
};

struct GenericityReport {
  bool in_M = false;
  bool generic = false;
  std::vector<std::string> violated_constraints;
};

// Instantiates and validates a catalog curve. Throws InvalidParamError when
// the parameters violate the curve's domain assumption or when the id is one
// of the verify-only degree-3 tags.
CurveData build_curve(CurveId id, const MassParams& m);

GenericityReport check_genericity(CurveId id, const MassParams& m);

struct CatalogEntry {
  CurveId id;
  std::vector<std::string> params;
  std::string q_formula;
};
std::vector<CatalogEntry> catalog();

}  // namespace hyperbps
