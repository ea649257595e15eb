#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hyperbps/verify.hpp"

using namespace hyperbps;

namespace {

const MassParams kHGFig = {{"m0", std::sqrt(cplx{0.5, 0.2})},
                           {"m1", std::sqrt(cplx{0.5, 0.4})},
                           {"minf", std::sqrt(cplx{-0.4, 0.5})}};

}  // namespace

TEST_CASE("half plane membership and admissibility") {
  HalfPlane right{0.0};  // right half plane Re Z > 0
  CHECK(right.contains(cplx{1.0, 5.0}));
  CHECK(!right.contains(cplx{-1.0, 5.0}));

  const CurveData web = build_curve(CurveId::Web, {{"minf", cplx{1.0, 0.0}}});
  const BPSStructure s = expected_spectrum(web);
  // Z = +/- 2 pi i: the phase-0 half plane has the imaginary axis as its
  // boundary and hits both charges; phase pi/2 has the real axis, which
  // misses them.
  CHECK_THROWS_AS(HalfPlane{0.0}.require_admissible(s), VerificationError);
  CHECK_NOTHROW(HalfPlane{kPi / 2}.require_admissible(s));
}

TEST_CASE("adapted half plane contains every positive charge") {
  for (auto [id, m] : std::vector<std::pair<CurveId, MassParams>>{
           {CurveId::Web, {{"minf", cplx{0.4, 0.25}}}},
           {CurveId::Kum,
            {{"m0", cplx{0.07, 0.60}}, {"minf", cplx{-0.4, -0.4}}}},
           {CurveId::HG, kHGFig}}) {
    const HalfPlane H = adapted_half_plane(id, m);
    for (const auto& c : candidate_charges(id, m))
      CHECK(H.contains(kTwoPiI * c.mu));
  }
}

TEST_CASE("bps free energy closed values") {
  SUBCASE("Weber g=2 is -1/(240 m^2)") {
    const cplx m{0.4, 0.25};
    const CurveData c = build_curve(CurveId::Web, {{"minf", m}});
    const BPSStructure s = expected_spectrum(c);
    const cplx f = bps_free_energy(s, 2, adapted_half_plane(CurveId::Web, c.m));
    CHECK(std::abs(f - (-1.0 / (240.0 * m * m))) < 1e-15);
  }
  SUBCASE("Airy spectrum is empty, all sums vanish") {
    const CurveData c = build_curve(CurveId::Ai, {});
    const BPSStructure s = expected_spectrum(c);
    CHECK(s.rows.empty());
    for (int g = 2; g <= 6; ++g)
      CHECK(bps_free_energy(s, g, HalfPlane{0.3}) == cplx{0.0});
  }
  SUBCASE("Legendre g=2 combines Omega=4 and Omega=-1") {
    const cplx m{0.0, 1.0};
    const CurveData c = build_curve(CurveId::Leg, {{"minf", m}});
    const BPSStructure s = expected_spectrum(c);
    const cplx f = bps_free_energy(s, 2, adapted_half_plane(CurveId::Leg, c.m));
    CHECK(std::abs(f - (-1.0 / (64.0 * m * m))) < 1e-15);
  }
  SUBCASE("g below 2 refused") {
    const CurveData c = build_curve(CurveId::Web, {{"minf", cplx{1.0, 0.0}}});
    CHECK_THROWS_AS(
        bps_free_energy(expected_spectrum(c), 1, HalfPlane{0.0}),
        InvalidParamError);
  }
}

TEST_CASE("f0 bps reproduces the Weber closed form") {
  const cplx m{0.7, 0.35};
  const CurveData c = build_curve(CurveId::Web, {{"minf", m}});
  const BPSStructure s = expected_spectrum(c);
  const cplx f0 = f0_bps(s, adapted_half_plane(CurveId::Web, c.m));
  CHECK(std::abs(f0 - 0.5 * m * m * std::log(m)) < 1e-15);
}

TEST_CASE("verify_curve reports") {
  SUBCASE("Weber to g=4") {
    const VerificationReport r =
        verify_curve(CurveId::Web, {{"minf", cplx{0.4, 0.25}}}, 4);
    CHECK(r.pass);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
      CHECK(row.rel_closed_bps < 1e-12);
      if (row.has_recursion) CHECK(row.rel_recursion_closed < 1e-6);
    }
    CHECK(r.rows[0].has_recursion);
    CHECK(r.rows[1].has_recursion);
    CHECK(!r.rows[2].has_recursion);  // recursion capped at g=3
    CHECK(r.half_plane_independent);
    CHECK(r.f0_hessian_rel < 1e-5);
    CHECK(r.f1_diff_rel < 1e-9);
  }
  SUBCASE("hypergeometric at the figure parameters") {
    const VerificationReport r = verify_curve(CurveId::HG, kHGFig, 3);
    CHECK(r.pass);
    CHECK(r.f0_hessian_rel < 1e-5);
  }
  SUBCASE("Legendre closed vs bps to rounding through g=5") {
    const VerificationReport r =
        verify_curve(CurveId::Leg, {{"minf", cplx{0.0, 1.0}}}, 5);
    CHECK(r.pass);
    for (const auto& row : r.rows) CHECK(row.rel_closed_bps < 1e-14);
  }
  SUBCASE("Kummer F1 two-point difference") {
    const VerificationReport r = verify_curve(
        CurveId::Kum, {{"m0", cplx{0.07, 0.60}}, {"minf", cplx{-0.4, -0.4}}},
        2);
    CHECK(r.pass);
    CHECK(r.f1_diff_rel < 1e-9);
  }
  SUBCASE("non-generic parameters are refused") {
    CHECK_THROWS_AS(
        verify_curve(CurveId::Kum,
                     {{"m0", cplx{0.3, 0.1}}, {"minf", cplx{0.3, 0.1}}}, 2),
        InvalidParamError);
  }
  SUBCASE("empty spectra verify trivially") {
    for (CurveId id : {CurveId::Ai, CurveId::dBes}) {
      const VerificationReport r = verify_curve(id, {}, 4);
      CHECK(r.pass);
      for (const auto& row : r.rows) {
        CHECK(row.closed == cplx{0.0});
        CHECK(row.bps == cplx{0.0});
      }
    }
  }
}

TEST_CASE("degree-3 arithmetic") {
  const MassParams m14 = {{"minf", cplx{0.8, 0.3}}, {"t", cplx{1.0, 0.0}}};
  SUBCASE("C14 matches the residue-class sum") {
    const Degree3Report r = degree3_check(CurveId::C14, m14, 6);
    CHECK(r.pass);
    const cplx minf = mass(m14, "minf");
    CHECK(std::abs(r.rows[0].closed - (-1.0 / 240.0) / (minf * minf)) <
          1e-15);
    // g=3 coefficient is B_6/24 = 1/1008
    CHECK(std::abs(r.rows[1].closed - ipow(minf, -4) / 1008.0) < 1e-15);
    for (const auto& row : r.rows) CHECK(row.rel == 0.0);
  }
  SUBCASE("C23 is identically zero") {
    const Degree3Report r = degree3_check(
        CurveId::C23, {{"minf", cplx{0.5, 0.0}}, {"t", cplx{1.0, 0.2}}}, 4);
    CHECK(r.pass);
    for (const auto& row : r.rows) {
      CHECK(row.closed == cplx{0.0});
      CHECK(row.bps == cplx{0.0});
    }
  }
  SUBCASE("only the degree-3 tags are accepted") {
    CHECK_THROWS_AS(degree3_check(CurveId::Web, {{"minf", cplx{1.0, 0.0}}}, 3),
                    InvalidParamError);
    CHECK_THROWS_AS(
        degree3_check(CurveId::C23,
                      {{"minf", cplx{0.5, 0.0}}, {"t", cplx{0.0, 0.0}}}, 3),
        InvalidParamError);
  }
}
