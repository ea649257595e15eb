#pragma once

// BPS structure of a catalog curve: charge lattice spanned by residue
// classes, central charges Z(gamma_{s+/-}) = +/- 2 pi i m_s, closed-form BPS
// spectra with indices, and identification of detected degenerations.

#include <optional>
#include <string>
#include <vector>

#include "hyperbps/curve.hpp"

namespace hyperbps {

struct Lattice {
  std::vector<std::string> generators;  // gamma labels, e.g. "0+", "inf"
  std::vector<int> relation;            // all-ones when nonempty
  int designated = -1;                  // generator eliminated by reduction
  int index_of(const std::string& label) const;
};

struct Charge {
  std::vector<int> coeffs;  // canonical representative (designated slot 0)
  bool operator==(const Charge& o) const { return coeffs == o.coeffs; }
  Charge operator-() const;
  Charge operator+(const Charge& o) const;
  bool is_zero() const;
  int sup_norm() const;
  std::string pretty(const Lattice& lat) const;
};

struct SpectrumRow {
  Charge charge;
  std::string kind;  // "I", "II", "III", "IV-ring"
  cplx Z;
  int omega;
  double theta_bps;  // arg Z mod pi, in [0, pi)
};

struct BPSStructure {
  Lattice lattice;
  std::vector<SpectrumRow> rows;  // full spectrum, both orientations
  cplx Z(const Charge& g, const MassParams& m, CurveId id) const;
};

struct StructureReport {
  bool symmetric = false;
  bool finite = false;
  bool integral = false;
  bool uncoupled = false;
  double support_constant = 0.0;  // min |Z| / ||gamma||_sup; +inf when empty
};

// Positive-orientation candidate charges (mu = Z / 2 pi i built from the
// + mass combinations). Pure arithmetic on (id, m): usable for genericity
// checks at non-generic points.
struct CandidateCharge {
  Charge charge;
  cplx mu;
  int omega;
  std::string kind;
};
std::vector<std::string> generator_labels(CurveId id);
Lattice lattice_shape(CurveId id);
std::vector<CandidateCharge> candidate_charges(CurveId id,
                                               const MassParams& m);
Charge make_charge(const Lattice& lat, std::vector<int> ambient);

Lattice lattice_for(const CurveData& curve);
cplx central_charge(const CurveData& curve, const Charge& gamma);
// Full closed-form spectrum; refuses non-generic parameters.
BPSStructure expected_spectrum(const CurveData& curve);
StructureReport check_structure(const BPSStructure& s);

struct DegenerationEvent;  // from trajectory.hpp
// Unique active charge matching the event by phase (1e-3 mod pi) and length
// (|Z| = 2L within 5%). Zero or multiple matches raise VerificationError.
Charge identify(const CurveData& curve, const DegenerationEvent& event,
                const BPSStructure& structure);

}  // namespace hyperbps
