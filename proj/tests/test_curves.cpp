#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperbps/bps.hpp"
#include "hyperbps/curve.hpp"

using namespace hyperbps;

namespace {

MassParams random_generic_params(CurveId id, std::mt19937& gen) {
  std::uniform_real_distribution<double> dr(0.3, 1.2), dth(0.0, 2.0 * kPi);
  for (int attempt = 0; attempt < 200; ++attempt) {
    MassParams m;
    for (const auto& name : param_names(id))
      m[name] = std::polar(dr(gen), dth(gen));
    const auto rep = check_genericity(id, m);
    if (rep.in_M && rep.generic) return m;
  }
  throw std::runtime_error("could not sample generic parameters");
}

bool has_turning(const CurveData& c, cplx x, TurningKind kind,
                 double tol = 1e-8) {
  for (const auto& t : c.turning_points)
    if (t.kind == kind && std::abs(t.x - x) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("Weber at m_inf = 1: turning points and pole order") {
  const CurveData c = build_curve(CurveId::Web, {{"minf", cplx{1.0}}});
  REQUIRE(c.turning_points.size() == 2);
  CHECK(has_turning(c, cplx{2.0}, TurningKind::simple_zero));
  CHECK(has_turning(c, cplx{-2.0}, TurningKind::simple_zero));
  REQUIRE(c.poles.size() == 1);
  CHECK(c.poles[0].x.inf);
  CHECK(c.poles[0].order == 6);
}

TEST_CASE("dHG turning points: simple zero at (minf^2-m1^2)/minf^2, simple "
          "pole at 0") {
  const cplx m1{0.8, 0.3}, minf{-0.5, 0.7};
  const CurveData c = build_curve(CurveId::dHG, {{"m1", m1}, {"minf", minf}});
  const cplx zero = (minf * minf - m1 * m1) / (minf * minf);
  CHECK(has_turning(c, zero, TurningKind::simple_zero));
  CHECK(has_turning(c, cplx{0.0}, TurningKind::simple_pole));
  REQUIRE(c.turning_points.size() == 2);
}

TEST_CASE("HG punctures at m0=1, m1=2, minf=4: inf+ at z=infinity, inf- at "
          "z=0") {
  const CurveData c = build_curve(
      CurveId::HG,
      {{"m0", cplx{1.0}}, {"m1", cplx{2.0}}, {"minf", cplx{4.0}}});
  const Puncture* at_inf = nullptr;
  const Puncture* at_zero = nullptr;
  for (const auto& p : c.punctures) {
    if (p.pole != "inf") continue;
    if (p.z.inf)
      at_inf = &p;
    else if (std::abs(p.z.v) < 1e-12)
      at_zero = &p;
  }
  REQUIRE(at_inf != nullptr);
  REQUIRE(at_zero != nullptr);
  CHECK(at_inf->label == "inf+");
  CHECK(at_zero->label == "inf-");
  CHECK(std::abs(*at_inf->residue - cplx{4.0}) < 1e-10);
  CHECK(std::abs(*at_zero->residue + cplx{4.0}) < 1e-10);
}

TEST_CASE("genericity examples") {
  SUBCASE("HG(1,2,4): in M but non-generic (all Z on one ray)") {
    const auto rep = check_genericity(
        CurveId::HG,
        {{"m0", cplx{1.0}}, {"m1", cplx{2.0}}, {"minf", cplx{4.0}}});
    CHECK(rep.in_M);
    CHECK_FALSE(rep.generic);
  }
  SUBCASE("Kum(1,-1): outside M, names the violated constraint") {
    const auto rep = check_genericity(
        CurveId::Kum, {{"m0", cplx{1.0}}, {"minf", cplx{-1.0}}});
    CHECK_FALSE(rep.in_M);
    CHECK_FALSE(rep.generic);
    bool named = false;
    for (const auto& v : rep.violated_constraints)
      if (v.find("m0 + minf") != std::string::npos) named = true;
    CHECK(named);
  }
  SUBCASE("HG at the figure parameters: generic") {
    const auto rep = check_genericity(
        CurveId::HG, {{"m0", std::sqrt(cplx{0.5, 0.2})},
                      {"m1", std::sqrt(cplx{0.5, 0.4})},
                      {"minf", std::sqrt(cplx{-0.4, 0.5})}});
    CHECK(rep.in_M);
    CHECK(rep.generic);
  }
  SUBCASE("Leg is generic whenever minf != 0, despite the shared ray") {
    const auto rep = check_genericity(CurveId::Leg, {{"minf", cplx{0.0, 1.0}}});
    CHECK(rep.in_M);
    CHECK(rep.generic);
  }
}

TEST_CASE("build_curve rejects out-of-domain parameters") {
  CHECK_THROWS_AS(build_curve(CurveId::Web, {{"minf", cplx{0.0}}}),
                  InvalidParamError);
  CHECK_THROWS_AS(
      build_curve(CurveId::Kum, {{"m0", cplx{1.0}}, {"minf", cplx{1.0}}}),
      InvalidParamError);
  CHECK_THROWS_AS(build_curve(CurveId::Web, {}), InvalidParamError);
  CHECK_THROWS_AS(
      build_curve(CurveId::C14, {{"minf", cplx{1.0}}, {"t", cplx{1.0}}}),
      InvalidParamError);
}

TEST_CASE("catalog metadata") {
  const auto cat = catalog();
  REQUIRE(cat.size() == 9);
  bool saw_ai = false, saw_bes = false;
  for (const auto& e : cat) {
    if (e.id == CurveId::Ai) {
      saw_ai = true;
      CHECK(e.params.empty());
    }
    if (e.id == CurveId::Bes) {
      saw_bes = true;
      CHECK(e.q_formula == "(x + 4 m0^2) / (4 x^2)");
    }
  }
  CHECK(saw_ai);
  CHECK(saw_bes);
}

TEST_CASE("Kummer confluence spot-check: pole of order exactly 4 at infinity") {
  const CurveData c =
      build_curve(CurveId::Kum, {{"m0", cplx{0.07, 0.60}},
                                 {"minf", cplx{-0.4, -0.4}}});
  const PoleInfo* inf = c.pole_by_label("inf");
  REQUIRE(inf != nullptr);
  CHECK(inf->x.inf);
  CHECK(inf->order == 4);
  const PoleInfo* origin = c.pole_by_label("0");
  REQUIRE(origin != nullptr);
  CHECK(origin->order == 2);
}

TEST_CASE("property suite: invariants at random generic parameters") {
  std::mt19937 gen(20260825u);
  std::uniform_real_distribution<double> dr(0.3, 2.5), dth(0.0, 2.0 * kPi);
  for (CurveId id : {CurveId::HG, CurveId::dHG, CurveId::Kum, CurveId::Leg,
                     CurveId::Bes, CurveId::Whi, CurveId::Web, CurveId::dBes,
                     CurveId::Ai}) {
    CAPTURE(to_string(id));
    const int reps = param_names(id).empty() ? 1 : 20;
    for (int rep = 0; rep < reps; ++rep) {
      const MassParams m = random_generic_params(id, gen);
      const CurveData c = build_curve(id, m);

      // y^2 = Q(x) and involution antisymmetry at 50 random points.
      int checked = 0;
      while (checked < 50) {
        const cplx z = std::polar(dr(gen), dth(gen));
        if (std::abs(c.x_of_z.den(z)) < 1e-3 ||
            std::abs(c.y_of_z.den(z)) < 1e-3)
          continue;
        const cplx x = c.x_of_z(z);
        if (std::abs(c.Q.den(x)) < 1e-6) continue;
        const cplx y = c.y_of_z(z);
        const cplx q = c.Q(x);
        CHECK(std::abs(y * y - q) < 1e-10 * (std::abs(q) + 1.0));
        const cplx zs = c.involution(z);
        CHECK(std::abs(c.x_of_z(zs) - x) < 1e-8 * (std::abs(x) + 1.0));
        CHECK(std::abs(c.y_of_z(zs) + y) < 1e-8 * (std::abs(y) + 1.0));
        CHECK(std::abs(c.involution(zs) - z) < 1e-9 * (std::abs(z) + 1.0));
        ++checked;
      }

      // Finite ramification points are fixed by the involution and map onto
      // turning points of Q.
      for (const auto& r : c.ramification_z) {
        if (r.inf) continue;
        CHECK(std::abs(c.involution(r.v) - r.v) <
              1e-8 * (std::abs(r.v) + 1.0));
        const cplx xr = c.x_of_z(r.v);
        bool is_turning = false;
        for (const auto& t : c.turning_points)
          if (std::abs(t.x - xr) < 1e-8 * (std::abs(t.x) + 1.0))
            is_turning = true;
        CHECK(is_turning);
      }

      // Residue convention at even-order poles.
      for (const auto& p : c.punctures) {
        if (!p.residue) continue;
        const cplx ms =
            mass(m, p.pole == "inf" ? "minf" : "m" + p.pole);
        const cplx expect = p.label.back() == '+' ? ms : -ms;
        CHECK(std::abs(*p.residue - expect) < 1e-10 * (std::abs(ms) + 1.0));
      }
    }
  }
}

TEST_CASE("candidate charge count matches the published spectra") {
  std::mt19937 gen(7u);
  auto count = [&](CurveId id) {
    const MassParams m = random_generic_params(id, gen);
    return candidate_charges(id, m).size();
  };
  CHECK(count(CurveId::Web) == 1);
  CHECK(count(CurveId::Whi) == 1);
  CHECK(count(CurveId::Bes) == 1);
  CHECK(count(CurveId::Leg) == 2);
  CHECK(count(CurveId::Kum) == 3);
  CHECK(count(CurveId::dHG) == 4);
  CHECK(count(CurveId::HG) == 7);
  CHECK(candidate_charges(CurveId::Ai, {}).empty());
  CHECK(candidate_charges(CurveId::dBes, {}).empty());
}
