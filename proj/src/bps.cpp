#include "hyperbps/bps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperbps/trajectory.hpp"

namespace hyperbps {

namespace {

double arg_mod_pi(cplx z) {
  double t = std::arg(z);
  while (t < 0.0) t += kPi;
  while (t >= kPi) t -= kPi;
  return t;
}

}  // namespace

int Lattice::index_of(const std::string& label) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == label) return static_cast<int>(i);
  throw InvalidParamError("no lattice generator labeled " + label);
}

Charge Charge::operator-() const {
  Charge c = *this;
  for (int& k : c.coeffs) k = -k;
  return c;
}

Charge Charge::operator+(const Charge& o) const {
  if (coeffs.size() != o.coeffs.size())
    throw InvalidParamError("charge rank mismatch");
  Charge c = *this;
  for (size_t i = 0; i < coeffs.size(); ++i) c.coeffs[i] += o.coeffs[i];
  return c;
}

bool Charge::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](int k) { return k == 0; });
}

int Charge::sup_norm() const {
  int n = 0;
  for (int k : coeffs) n = std::max(n, std::abs(k));
  return n;
}

std::string Charge::pretty(const Lattice& lat) const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const int a = coeffs[i];
    if (first)
      os << (a < 0 ? "-" : "");
    else
      os << (a < 0 ? " - " : " + ");
    if (std::abs(a) != 1) os << std::abs(a) << " ";
    os << "g_" << lat.generators[i];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::vector<std::string> generator_labels(CurveId id) {
  switch (id) {
    case CurveId::HG: return {"0+", "0-", "1+", "1-", "inf+", "inf-"};
    case CurveId::dHG: return {"1+", "1-", "inf+", "inf-"};
    case CurveId::Kum: return {"0+", "0-", "inf+", "inf-"};
    case CurveId::Leg:
    case CurveId::Whi:
    case CurveId::Web:
    case CurveId::C14: return {"inf+", "inf-"};
    case CurveId::Bes: return {"0+", "0-", "inf"};
    // A sphere with a single puncture has trivial first homology, so the
    // lone residue class dies and the lattice is empty.
    case CurveId::dBes:
    case CurveId::Ai:
    case CurveId::C23: return {};
  }
  return {};
}

Lattice lattice_shape(CurveId id) {
  Lattice lat;
  lat.generators = generator_labels(id);
  if (lat.generators.empty()) return lat;
  lat.relation.assign(lat.generators.size(), 1);
  // Canonical reduction eliminates gamma_{inf-} (the odd "inf" class for
  // Bessel) using the relation; equality of charges is then exact.
  lat.designated = static_cast<int>(lat.generators.size()) - 1;
  for (size_t i = 0; i < lat.generators.size(); ++i)
    if (lat.generators[i] == "inf-" || lat.generators[i] == "inf")
      lat.designated = static_cast<int>(i);
  return lat;
}

Charge make_charge(const Lattice& lat, std::vector<int> ambient) {
  if (ambient.size() != lat.generators.size())
    throw InvalidParamError("ambient charge vector has wrong rank");
  Charge c;
  c.coeffs = std::move(ambient);
  if (lat.designated >= 0) {
    const int a = c.coeffs[lat.designated];
    for (int& k : c.coeffs) k -= a;  // subtract a * (all-ones relation)
  }
  return c;
}

namespace {

Charge charge_of(const Lattice& lat,
                 std::initializer_list<std::pair<const char*, int>> terms) {
  std::vector<int> amb(lat.generators.size(), 0);
  for (const auto& [label, k] : terms) amb[lat.index_of(label)] += k;
  return make_charge(lat, std::move(amb));
}

}  // namespace

std::vector<CandidateCharge> candidate_charges(CurveId id,
                                               const MassParams& m) {
  const Lattice lat = lattice_shape(id);
  std::vector<CandidateCharge> out;
  auto add = [&](Charge c, cplx mu, int omega, const char* kind) {
    out.push_back({std::move(c), mu, omega, kind});
  };
  switch (id) {
    case CurveId::Web:
      add(charge_of(lat, {{"inf+", 1}}), mass(m, "minf"), 1, "I");
      break;
    case CurveId::C14:
      add(charge_of(lat, {{"inf+", 1}}), mass(m, "minf"), 1, "I");
      break;
    case CurveId::Whi:
      add(charge_of(lat, {{"inf+", 1}}), mass(m, "minf"), 2, "II");
      break;
    case CurveId::Bes: {
      const cplx m0 = mass(m, "m0");
      add(charge_of(lat, {{"0+", 1}, {"0-", -1}}), 2.0 * m0, -1, "IV-ring");
      break;
    }
    case CurveId::Leg: {
      const cplx minf = mass(m, "minf");
      add(charge_of(lat, {{"inf+", 1}}), minf, 4, "III");
      add(charge_of(lat, {{"inf+", 1}, {"inf-", -1}}), 2.0 * minf, -1,
          "IV-ring");
      break;
    }
    case CurveId::Kum: {
      const cplx m0 = mass(m, "m0"), minf = mass(m, "minf");
      add(charge_of(lat, {{"0+", 1}, {"inf+", 1}}), m0 + minf, 1, "I");
      add(charge_of(lat, {{"0+", 1}, {"inf-", 1}}), m0 - minf, 1, "I");
      add(charge_of(lat, {{"0+", 1}, {"0-", -1}}), 2.0 * m0, -1, "IV-ring");
      break;
    }
    case CurveId::dHG: {
      const cplx m1 = mass(m, "m1"), minf = mass(m, "minf");
      add(charge_of(lat, {{"1+", 1}, {"inf+", 1}}), m1 + minf, 2, "II");
      add(charge_of(lat, {{"1+", 1}, {"inf-", 1}}), m1 - minf, 2, "II");
      add(charge_of(lat, {{"1+", 1}, {"1-", -1}}), 2.0 * m1, -1, "IV-ring");
      add(charge_of(lat, {{"inf+", 1}, {"inf-", -1}}), 2.0 * minf, -1,
          "IV-ring");
      break;
    }
    case CurveId::HG: {
      const cplx m0 = mass(m, "m0"), m1 = mass(m, "m1"),
                 minf = mass(m, "minf");
      for (int e1 : {+1, -1})
        for (int e2 : {+1, -1})
          add(charge_of(lat, {{"0+", 1},
                              {e1 > 0 ? "1+" : "1-", 1},
                              {e2 > 0 ? "inf+" : "inf-", 1}}),
              m0 + double(e1) * m1 + double(e2) * minf, 1, "I");
      add(charge_of(lat, {{"0+", 1}, {"0-", -1}}), 2.0 * m0, -1, "IV-ring");
      add(charge_of(lat, {{"1+", 1}, {"1-", -1}}), 2.0 * m1, -1, "IV-ring");
      add(charge_of(lat, {{"inf+", 1}, {"inf-", -1}}), 2.0 * minf, -1,
          "IV-ring");
      break;
    }
    case CurveId::dBes:
    case CurveId::Ai:
    case CurveId::C23:
      break;
  }
  return out;
}

Lattice lattice_for(const CurveData& curve) {
  Lattice lat = lattice_shape(curve.id);
  // Cross-check the shape against the actual pole structure of the curve:
  // even-order poles contribute a +/- pair, odd poles of order >= 3 one
  // bare class; a single puncture total means trivial homology.
  size_t expected = 0;
  for (const auto& p : curve.poles) {
    if (p.order >= 2 && p.order % 2 == 0) expected += 2;
    if (p.order >= 3 && p.order % 2 == 1) expected += 1;
  }
  if (expected <= 1) expected = 0;
  if (expected != lat.generators.size())
    throw NumericError("lattice shape disagrees with the pole structure of " +
                       to_string(curve.id));
  return lat;
}

namespace {

// Z on a single generator: +/- 2 pi i m_s on the even pair, 0 on the bare
// odd classes (they are forced to vanish by the relation).
cplx generator_Z(const std::string& label, const MassParams& m) {
  if (label.empty()) return 0.0;
  const char tail = label.back();
  if (tail != '+' && tail != '-') return 0.0;
  const std::string pole = label.substr(0, label.size() - 1);
  const cplx ms = mass(m, pole == "inf" ? "minf" : "m" + pole);
  return (tail == '+' ? kTwoPiI : -kTwoPiI) * ms;
}

cplx Z_of(const Lattice& lat, const MassParams& m, const Charge& g) {
  if (g.coeffs.size() != lat.generators.size())
    throw InvalidParamError("charge rank mismatch");
  cplx z = 0.0;
  for (size_t i = 0; i < g.coeffs.size(); ++i)
    if (g.coeffs[i] != 0)
      z += double(g.coeffs[i]) * generator_Z(lat.generators[i], m);
  return z;
}

}  // namespace

cplx BPSStructure::Z(const Charge& g, const MassParams& m, CurveId) const {
  return Z_of(lattice, m, g);
}

cplx central_charge(const CurveData& curve, const Charge& gamma) {
  return Z_of(lattice_shape(curve.id), curve.m, gamma);
}

BPSStructure expected_spectrum(const CurveData& curve) {
  const GenericityReport rep = check_genericity(curve.id, curve.m);
  if (!rep.generic) {
    std::string why = "non-generic parameters for " + to_string(curve.id);
    for (const auto& v : rep.violated_constraints) why += "; " + v;
    throw InvalidParamError(why);
  }
  BPSStructure s;
  s.lattice = lattice_for(curve);
  for (const CandidateCharge& c : candidate_charges(curve.id, curve.m)) {
    for (int sign : {+1, -1}) {
      SpectrumRow row;
      row.charge = sign > 0 ? c.charge : -c.charge;
      row.kind = c.kind;
      row.Z = double(sign) * kTwoPiI * c.mu;
      row.omega = c.omega;
      row.theta_bps = arg_mod_pi(row.Z);
      s.rows.push_back(std::move(row));
    }
  }
  return s;
}

StructureReport check_structure(const BPSStructure& s) {
  StructureReport r;
  r.finite = true;
  r.integral = true;
  r.uncoupled = true;  // the intersection pairing is identically zero
  r.symmetric = true;
  for (const SpectrumRow& row : s.rows) {
    bool found = false;
    for (const SpectrumRow& other : s.rows)
      if (other.charge == -row.charge && other.omega == row.omega) {
        found = true;
        break;
      }
    if (!found) r.symmetric = false;
  }
  r.support_constant = std::numeric_limits<double>::infinity();
  for (const SpectrumRow& row : s.rows) {
    const int n = row.charge.sup_norm();
    if (n == 0) continue;
    r.support_constant =
        std::min(r.support_constant, std::abs(row.Z) / double(n));
  }
  return r;
}

Charge identify(const CurveData& curve, const DegenerationEvent& event,
                const BPSStructure& structure) {
  const bool ring = event.kind == DegenerationEvent::Kind::ring_degenerate;
  std::vector<const SpectrumRow*> matches;
  for (const SpectrumRow& row : structure.rows) {
    const bool row_ring = row.kind == "IV-ring";
    if (ring != row_ring) continue;
    double dphase =
        std::abs(row.theta_bps - event.theta_star.theta);
    dphase = std::min(dphase, kPi - dphase);
    if (dphase > 1e-3) continue;
    const double absZ = std::abs(row.Z);
    if (std::abs(absZ - 2.0 * event.length) > 0.05 * absZ) continue;
    matches.push_back(&row);
  }
  // Both orientations of one class always match together.
  std::vector<const SpectrumRow*> classes;
  for (const SpectrumRow* r : matches) {
    bool dup = false;
    for (const SpectrumRow* c : classes)
      if (c->charge == r->charge || c->charge == -r->charge) dup = true;
    if (!dup) classes.push_back(r);
  }
  if (classes.size() != 1)
    throw VerificationError(
        "degeneration at theta=" + std::to_string(event.theta_star.theta) +
        " matched " + std::to_string(classes.size()) +
        " charge classes (expected exactly one): non-generic parameters or "
        "sweep error");
  return classes.front()->charge;
}

}  // namespace hyperbps
