#include "hyperbps/curve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hyperbps/bps.hpp"

namespace hyperbps {

namespace {

Poly poly(std::vector<cplx> c) { return Poly(std::move(c)); }

cplx sq(cplx a) { return a * a; }

std::string fmt_violation(const std::string& what) { return what; }

}  // namespace

std::string to_string(CurveId id) {
  switch (id) {
    case CurveId::HG: return "HG";
    case CurveId::dHG: return "dHG";
    case CurveId::Kum: return "Kum";
    case CurveId::Leg: return "Leg";
    case CurveId::Bes: return "Bes";
    case CurveId::Whi: return "Whi";
    case CurveId::Web: return "Web";
    case CurveId::dBes: return "dBes";
    case CurveId::Ai: return "Ai";
    case CurveId::C14: return "C14";
    case CurveId::C23: return "C23";
  }
  return "?";
}

CurveId curve_id_from_string(const std::string& s) {
  for (CurveId id :
       {CurveId::HG, CurveId::dHG, CurveId::Kum, CurveId::Leg, CurveId::Bes,
        CurveId::Whi, CurveId::Web, CurveId::dBes, CurveId::Ai, CurveId::C14,
        CurveId::C23})
    if (to_string(id) == s) return id;
  throw InvalidParamError("unknown curve id: " + s);
}

std::vector<std::string> param_names(CurveId id) {
  switch (id) {
    case CurveId::HG: return {"m0", "m1", "minf"};
    case CurveId::dHG: return {"m1", "minf"};
    case CurveId::Kum: return {"m0", "minf"};
    case CurveId::Leg:
    case CurveId::Whi:
    case CurveId::Web: return {"minf"};
    case CurveId::Bes: return {"m0"};
    case CurveId::dBes:
    case CurveId::Ai: return {};
    case CurveId::C14:
    case CurveId::C23: return {"minf", "t"};
  }
  return {};
}

cplx mass(const MassParams& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end())
    throw InvalidParamError("missing mass parameter: " + name);
  return it->second;
}

double CurveData::scale() const {
  std::vector<cplx> pts;
  for (const auto& t : turning_points) pts.push_back(t.x);
  for (const auto& p : poles)
    if (!p.x.inf) pts.push_back(p.x.v);
  double s = 1.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      s = std::max(s, std::abs(pts[i] - pts[j]));
  return s;
}

std::vector<std::pair<std::string, cplx>> CurveData::second_order_masses()
    const {
  // Pole label -> mass parameter carrying the residue of sqrt(Q) there.
  std::vector<std::pair<std::string, cplx>> out;
  for (const auto& p : poles) {
    if (p.order != 2) continue;
    std::string name = p.label == "inf" ? "minf" : "m" + p.label;
    out.emplace_back(p.label, mass(m, name));
  }
  return out;
}

const PoleInfo* CurveData::pole_by_label(const std::string& label) const {
  for (const auto& p : poles)
    if (p.label == label) return &p;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Domain assumptions (membership in M_curve)

namespace {

void collect_nonzero(std::vector<std::string>& out, cplx v,
                     const std::string& what, double scale) {
  if (std::abs(v) <= 1e-10 * std::max(1.0, scale))
    out.push_back(fmt_violation(what));
}

std::vector<std::string> domain_violations(CurveId id, const MassParams& m) {
  std::vector<std::string> v;
  auto get = [&](const char* n) { return mass(m, n); };
  double sc = 0.0;
  for (const auto& [k, val] : m) sc = std::max(sc, std::abs(val));
  switch (id) {
    case CurveId::HG: {
      const cplx m0 = get("m0"), m1 = get("m1"), minf = get("minf");
      collect_nonzero(v, m0, "m0 != 0", sc);
      collect_nonzero(v, m1, "m1 != 0", sc);
      collect_nonzero(v, minf, "minf != 0", sc);
      for (int e1 : {+1, -1})
        for (int e2 : {+1, -1}) {
          std::ostringstream os;
          os << "m0 " << (e1 > 0 ? "+" : "-") << " m1 "
             << (e2 > 0 ? "+" : "-") << " minf != 0";
          collect_nonzero(v, m0 + double(e1) * m1 + double(e2) * minf,
                          os.str(), sc);
        }
      break;
    }
    case CurveId::dHG: {
      const cplx m1 = get("m1"), minf = get("minf");
      collect_nonzero(v, m1, "m1 != 0", sc);
      collect_nonzero(v, minf, "minf != 0", sc);
      collect_nonzero(v, m1 + minf, "m1 + minf != 0", sc);
      collect_nonzero(v, m1 - minf, "m1 - minf != 0", sc);
      break;
    }
    case CurveId::Kum: {
      const cplx m0 = get("m0"), minf = get("minf");
      collect_nonzero(v, m0, "m0 != 0", sc);
      collect_nonzero(v, m0 + minf, "m0 + minf != 0", sc);
      collect_nonzero(v, m0 - minf, "m0 - minf != 0", sc);
      break;
    }
    case CurveId::Leg:
    case CurveId::Whi:
    case CurveId::Web:
      collect_nonzero(v, get("minf"), "minf != 0", sc);
      break;
    case CurveId::Bes:
      collect_nonzero(v, get("m0"), "m0 != 0", sc);
      break;
    case CurveId::dBes:
    case CurveId::Ai:
      break;
    case CurveId::C14:
      collect_nonzero(v, get("minf"), "minf != 0", sc);
      break;
    case CurveId::C23:
      collect_nonzero(v, get("t"), "t != 0", sc);
      break;
  }
  return v;
}

void require_params(CurveId id, const MassParams& m) {
  const auto names = param_names(id);
  if (m.size() != names.size())
    throw InvalidParamError("curve " + to_string(id) + " expects exactly " +
                            std::to_string(names.size()) + " parameters");
  for (const auto& n : names) mass(m, n);
}

// ---------------------------------------------------------------------------
// Per-curve raw data before validation / label assignment

struct RawPuncture {
  std::string pole;  // pole label of Q
  PP1 z;
  bool carries_mass;  // even-order pole: residue must be +/- m_s
  cplx mass_value;    // m_s when carries_mass
};

struct RawCurve {
  RationalFn Q;
  RationalFn x_of_z, y_of_z;
  Mobius sigma;
  std::vector<PP1> ram;
  std::vector<RawPuncture> punct;
};

RawCurve raw_curve(CurveId id, const MassParams& mp) {
  RawCurve r;
  switch (id) {
    case CurveId::HG: {
      const cplx m0 = mass(mp, "m0"), m1 = mass(mp, "m1"),
                 minf = mass(mp, "minf");
      const cplx delta = (m0 + m1 + minf) * (m0 + m1 - minf) *
                         (m0 - m1 + minf) * (m0 - m1 - minf);
      const cplx sd = std::sqrt(delta);
      r.Q = {poly({m0 * m0, -(minf * minf + m0 * m0 - m1 * m1), minf * minf}),
             poly({0.0, 0.0, 1.0}) * poly({1.0, -2.0, 1.0})};
      const cplx a = sd / (4.0 * sq(minf));
      const cplx c =
          (sq(minf) + sq(m0) - sq(m1)) / (2.0 * sq(minf));
      r.x_of_z = {poly({a, c, a}), poly({cplx{0.0}, cplx{1.0}})};
      const cplx p0p = -(sq(m0 + minf) - sq(m1)) / sd;
      const cplx p0m = -(sq(m0 - minf) - sq(m1)) / sd;
      const cplx p1p = (sq(m1 + minf) - sq(m0)) / sd;
      const cplx p1m = (sq(m1 - minf) - sq(m0)) / sd;
      Poly yden = Poly::linear_root(p0p) * Poly::linear_root(p0m) *
                  Poly::linear_root(p1p) * Poly::linear_root(p1m) * sd;
      // Overall sign of y chosen so that Res_{z=inf} y x' dz = + m_inf
      // (the labeling convention for the punctures over x = infinity).
      r.y_of_z = {poly({0.0, 1.0}) * (4.0 * minf * sq(minf)) -
                      poly({0.0, 0.0, 0.0, 1.0}) * (4.0 * minf * sq(minf)),
                  yden};
      r.sigma = {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}};  // 1/z
      r.ram = {PP1::at(cplx{1.0}), PP1::at(cplx{-1.0})};
      r.punct = {{"0", PP1::at(p0p), true, m0},
                 {"0", PP1::at(p0m), true, m0},
                 {"1", PP1::at(p1p), true, m1},
                 {"1", PP1::at(p1m), true, m1},
                 {"inf", PP1::infinity(), true, minf},
                 {"inf", PP1::at(cplx{0.0}), true, minf}};
      break;
    }
    case CurveId::dHG: {
      const cplx m1 = mass(mp, "m1"), minf = mass(mp, "minf");
      r.Q = {poly({sq(m1) - sq(minf), sq(minf)}),
             poly({0.0, 1.0}) * poly({1.0, -2.0, 1.0})};
      r.x_of_z = {poly({sq(m1) - sq(minf)}), poly({-sq(minf), 0.0, 1.0})};
      r.y_of_z = {poly({0.0, sq(minf), 0.0, -1.0}), poly({-sq(m1), 0.0, 1.0})};
      r.sigma = {cplx{-1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};  // -z
      r.ram = {PP1::at(cplx{0.0}), PP1::infinity()};
      r.punct = {{"0", PP1::infinity(), false, cplx{0.0}},
                 {"1", PP1::at(m1), true, m1},
                 {"1", PP1::at(-m1), true, m1},
                 {"inf", PP1::at(minf), true, minf},
                 {"inf", PP1::at(-minf), true, minf}};
      break;
    }
    case CurveId::Kum: {
      const cplx m0 = mass(mp, "m0"), minf = mass(mp, "minf");
      const cplx D = std::sqrt(sq(minf) - sq(m0));
      r.Q = {poly({4.0 * sq(m0), 4.0 * minf, 1.0}), poly({0.0, 0.0, 4.0})};
      r.x_of_z = {poly({D, -2.0 * minf, D}), poly({cplx{0.0}, cplx{1.0}})};
      r.y_of_z = {poly({-D, 0.0, D}), poly({2.0 * D, -4.0 * minf, 2.0 * D})};
      r.sigma = {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}};  // 1/z
      r.ram = {PP1::at(cplx{1.0}), PP1::at(cplx{-1.0})};
      r.punct = {{"0", PP1::at((minf + m0) / D), true, m0},
                 {"0", PP1::at((minf - m0) / D), true, m0},
                 {"inf", PP1::infinity(), true, minf},
                 {"inf", PP1::at(cplx{0.0}), true, minf}};
      break;
    }
    case CurveId::Leg: {
      const cplx minf = mass(mp, "minf");
      r.Q = {poly({sq(minf)}), poly({-1.0, 0.0, 1.0})};
      r.x_of_z = {poly({0.5, 0.0, 0.5}), poly({cplx{0.0}, cplx{1.0}})};
      r.y_of_z = {poly({cplx{0.0}, 2.0 * minf}), poly({-1.0, 0.0, 1.0})};
      r.sigma = {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}};  // 1/z
      r.ram = {PP1::at(cplx{1.0}), PP1::at(cplx{-1.0})};
      r.punct = {{"1", PP1::at(cplx{1.0}), false, cplx{0.0}},
                 {"-1", PP1::at(cplx{-1.0}), false, cplx{0.0}},
                 {"inf", PP1::at(cplx{0.0}), true, minf},
                 {"inf", PP1::infinity(), true, minf}};
      break;
    }
    case CurveId::Bes: {
      const cplx m0 = mass(mp, "m0");
      r.Q = {poly({4.0 * sq(m0), 1.0}), poly({0.0, 0.0, 4.0})};
      r.x_of_z = {poly({-4.0 * sq(m0), 0.0, 4.0}), poly({1.0})};
      r.y_of_z = {poly({cplx{0.0}, cplx{1.0}}), poly({-4.0 * sq(m0), 0.0, 4.0})};
      r.sigma = {cplx{-1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};  // -z
      r.ram = {PP1::at(cplx{0.0})};
      r.punct = {{"0", PP1::at(m0), true, m0},
                 {"0", PP1::at(-m0), true, m0},
                 {"inf", PP1::infinity(), false, cplx{0.0}}};
      break;
    }
    case CurveId::Whi: {
      const cplx minf = mass(mp, "minf");
      r.Q = {poly({-4.0 * minf, 1.0}), poly({cplx{0.0}, cplx{4.0}})};
      r.x_of_z = {poly({minf, 2.0 * minf, minf}), poly({cplx{0.0}, cplx{1.0}})};
      r.y_of_z = {poly({cplx{-1.0}, cplx{1.0}}), poly({cplx{2.0}, cplx{2.0}})};
      r.sigma = {cplx{0.0}, cplx{1.0}, cplx{1.0}, cplx{0.0}};  // 1/z
      r.ram = {PP1::at(cplx{1.0}), PP1::at(cplx{-1.0})};
      r.punct = {{"0", PP1::at(cplx{-1.0}), false, cplx{0.0}},
                 {"inf", PP1::infinity(), true, minf},
                 {"inf", PP1::at(cplx{0.0}), true, minf}};
      break;
    }
    case CurveId::Web: {
      const cplx minf = mass(mp, "minf");
      const cplx s = std::sqrt(minf);
      r.Q = {poly({-minf, 0.0, 0.25}), poly({1.0})};
      r.x_of_z = {poly({minf, 0.0, 1.0}), poly({cplx{0.0}, cplx{1.0}})};
      r.y_of_z = {poly({-minf, 0.0, 1.0}), poly({cplx{0.0}, cplx{2.0}})};
      r.sigma = {cplx{0.0}, minf, cplx{1.0}, cplx{0.0}};  // minf / z
      r.ram = {PP1::at(s), PP1::at(-s)};
      r.punct = {{"inf", PP1::infinity(), true, minf},
                 {"inf", PP1::at(cplx{0.0}), true, minf}};
      break;
    }
    case CurveId::dBes: {
      r.Q = {poly({1.0}), poly({cplx{0.0}, cplx{1.0}})};
      r.x_of_z = {poly({0.0, 0.0, 1.0}), poly({1.0})};
      r.y_of_z = {poly({1.0}), poly({cplx{0.0}, cplx{1.0}})};
      r.sigma = {cplx{-1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};  // -z
      r.ram = {PP1::at(cplx{0.0})};
      r.punct = {{"0", PP1::at(cplx{0.0}), false, cplx{0.0}},
                 {"inf", PP1::infinity(), false, cplx{0.0}}};
      break;
    }
    case CurveId::Ai: {
      r.Q = {poly({cplx{0.0}, cplx{1.0}}), poly({1.0})};
      r.x_of_z = {poly({0.0, 0.0, 1.0}), poly({1.0})};
      r.y_of_z = {poly({cplx{0.0}, cplx{1.0}}), poly({1.0})};
      r.sigma = {cplx{-1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};  // -z
      r.ram = {PP1::at(cplx{0.0})};
      r.punct = {{"inf", PP1::infinity(), false, cplx{0.0}}};
      break;
    }
    default:
      throw InvalidParamError(
          "curve " + to_string(id) +
          " is a verify-only degree-3 tag; it has no buildable differential");
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// build_curve

CurveData build_curve(CurveId id, const MassParams& mp) {
  require_params(id, mp);
  const auto violated = domain_violations(id, mp);
  if (!violated.empty())
    throw InvalidParamError("parameters outside the curve domain: " +
                            violated.front());

  RawCurve raw = raw_curve(id, mp);
  CurveData c;
  c.id = id;
  c.m = mp;
  c.Q = raw.Q;
  c.x_of_z = raw.x_of_z;
  c.y_of_z = raw.y_of_z;
  c.xprime_of_z = raw.x_of_z.derivative();
  c.w01 = raw.y_of_z * c.xprime_of_z;
  c.involution = raw.sigma;
  c.ramification_z = raw.ram;

  // Poles of Q with orders: finite roots of the denominator, plus infinity
  // in the 1/x chart where the differential picks up x^4.
  {
    Poly den = c.Q.den.trimmed(1e-14);
    Poly num = c.Q.num.trimmed(1e-14);
    std::vector<cplx> roots =
        den.degree() >= 1 ? poly_roots(den) : std::vector<cplx>{};
    std::vector<std::pair<cplx, int>> grouped;
    for (cplx rt : roots) {
      bool merged = false;
      for (auto& [v, k] : grouped)
        // Double roots come back ~sqrt(eps) off from the eigensolver.
        if (std::abs(v - rt) < 1e-5 * std::max(1.0, std::abs(v))) {
          ++k;
          merged = true;
          break;
        }
      if (!merged) grouped.emplace_back(rt, 1);
    }
    for (auto [v, k] : grouped) {
      std::string label;
      if (std::abs(v) < 1e-6) {
        label = "0";
        v = 0.0;
      } else if (std::abs(v - cplx{1.0}) < 1e-6) {
        label = "1";
        v = 1.0;
      } else if (std::abs(v + cplx{1.0}) < 1e-6) {
        label = "-1";
        v = -1.0;
      } else {
        label = "p";
      }
      c.poles.push_back({label, PP1::at(v), k});
    }
    const int inf_order = 4 + num.degree() - den.degree();
    if (inf_order > 0) c.poles.push_back({"inf", PP1::infinity(), inf_order});
  }

  // Turning points: simple zeros of Q plus its simple poles.
  {
    Poly num = c.Q.num.trimmed(1e-14);
    if (num.degree() >= 1)
      for (cplx b : poly_roots(num))
        c.turning_points.push_back({b, TurningKind::simple_zero});
    for (const auto& p : c.poles)
      if (!p.x.inf && p.order == 1)
        c.turning_points.push_back({p.x.v, TurningKind::simple_pole});
  }

  // Validation: parametrization identity and involution behavior.
  {
    std::mt19937 gen(8891u + static_cast<unsigned>(id));
    std::uniform_real_distribution<double> dr(0.3, 2.5), dth(0.0, 2.0 * kPi);
    int checked = 0;
    while (checked < 50) {
      const cplx z = std::polar(dr(gen), dth(gen));
      const cplx xd = c.x_of_z.den(z), yd = c.y_of_z.den(z);
      if (std::abs(xd) < 1e-3 || std::abs(yd) < 1e-3) continue;
      const cplx x = c.x_of_z(z);
      const cplx qd = c.Q.den(x);
      if (std::abs(qd) < 1e-6) continue;
      const cplx y = c.y_of_z(z);
      const cplx q = c.Q(x);
      const double ref = std::abs(q) + 1.0;
      if (std::abs(y * y - q) > 1e-10 * ref)
        throw NumericError("curve validation failed: y(z)^2 != Q(x(z))");
      const cplx zs = c.involution(z);
      if (std::abs(c.x_of_z(zs) - x) > 1e-8 * (std::abs(x) + 1.0) ||
          std::abs(c.y_of_z(zs) + y) > 1e-8 * (std::abs(y) + 1.0))
        throw NumericError("curve validation failed: involution symmetry");
      if (std::abs(c.involution(zs) - z) > 1e-9 * (std::abs(z) + 1.0))
        throw NumericError("curve validation failed: sigma is not involutive");
      ++checked;
    }
  }

  // Residue labels: each even-order pole s has two punctures; the one whose
  // residue of y x' dz equals +m_s gets the "+" label.
  for (const RawPuncture& rp : raw.punct) {
    Puncture p;
    p.pole = rp.pole;
    p.z = rp.z;
    if (!rp.carries_mass) {
      p.label = rp.pole;
      c.punctures.push_back(p);
      continue;
    }
    const cplx res =
        rp.z.inf ? residue_at_infinity(c.w01) : residue_at(c.w01, rp.z.v);
    const double tol = 1e-8 * std::max(1.0, std::abs(rp.mass_value));
    if (std::abs(res - rp.mass_value) < tol)
      p.label = rp.pole + "+";
    else if (std::abs(res + rp.mass_value) < tol)
      p.label = rp.pole + "-";
    else
      throw NumericError("curve validation failed: puncture residue " +
                         std::to_string(std::abs(res)) +
                         " does not match +/- m_s at pole " + rp.pole);
    p.residue = res;
    c.punctures.push_back(p);
  }

  // Every even pole must have received one + and one - puncture.
  for (const auto& [label, ms] : c.second_order_masses()) {
    (void)ms;
    int plus = 0, minus = 0;
    for (const auto& p : c.punctures) {
      if (p.pole != label || !p.residue) continue;
      (p.label.back() == '+' ? plus : minus)++;
    }
    if (plus != 1 || minus != 1)
      throw NumericError("curve validation failed: pole " + label +
                         " lacks a +/- puncture pair");
  }

  return c;
}

// ---------------------------------------------------------------------------
// Genericity

GenericityReport check_genericity(CurveId id, const MassParams& mp) {
  require_params(id, mp);
  GenericityReport rep;
  rep.violated_constraints = domain_violations(id, mp);
  rep.in_M = rep.violated_constraints.empty();
  if (!rep.in_M) return rep;

  // Generic = no two non-proportional candidate charges share a ray (their
  // central-charge ratio must not be real). Proportional lattice vectors are
  // exempt: a ring charge 2*gamma rides the same ray as gamma by design.
  const auto cands = candidate_charges(id, mp);
  bool generic = true;
  for (size_t i = 0; i < cands.size() && generic; ++i)
    for (size_t j = i + 1; j < cands.size() && generic; ++j) {
      const cplx ratio = cands[i].mu / cands[j].mu;
      if (std::abs(ratio.imag()) > 1e-9 * std::abs(ratio)) continue;
      if (std::abs(ratio) < 1e-12) continue;
      // Real ratio: demand proportional coefficient vectors.
      const auto& a = cands[i].charge.coeffs;
      const auto& b = cands[j].charge.coeffs;
      for (size_t u = 0; u < a.size() && generic; ++u)
        for (size_t v = u + 1; v < a.size() && generic; ++v)
          if (a[u] * b[v] != a[v] * b[u]) {
            generic = false;
            rep.violated_constraints.push_back(
                "central charges share a ray: non-generic parameters");
          }
    }
  rep.generic = generic;
  return rep;
}

std::vector<CatalogEntry> catalog() {
  return {
      {CurveId::HG,
       {"m0", "m1", "minf"},
       "(minf^2 x^2 - (minf^2 + m0^2 - m1^2) x + m0^2) / (x^2 (x-1)^2)"},
      {CurveId::dHG,
       {"m1", "minf"},
       "(minf^2 x + m1^2 - minf^2) / (x (x-1)^2)"},
      {CurveId::Kum, {"m0", "minf"}, "(x^2 + 4 minf x + 4 m0^2) / (4 x^2)"},
      {CurveId::Leg, {"minf"}, "minf^2 / (x^2 - 1)"},
      {CurveId::Bes, {"m0"}, "(x + 4 m0^2) / (4 x^2)"},
      {CurveId::Whi, {"minf"}, "(x - 4 minf) / (4 x)"},
      {CurveId::Web, {"minf"}, "x^2/4 - minf"},
      {CurveId::dBes, {}, "1/x"},
      {CurveId::Ai, {}, "x"},
  };
}

}  // namespace hyperbps
