// Command-line surface for the library: catalog listing, free energies,
// network tracing with SVG output, degeneration sweeps, and verification.
//
// Exit codes: 0 success, 1 verification or identification failure,
// 2 invalid or non-generic parameters, 3 numeric failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "hyperbps/svg.hpp"
#include "hyperbps/trajectory.hpp"
#include "hyperbps/verify.hpp"

using namespace hyperbps;
using nlohmann::json;

namespace {

// Complex literals "RE", "RE+IMi", "RE-IMi" (e.g. "0.4+0.25i", "-1i", "i").
cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto bad = [&] {
    return InvalidParamError("cannot parse complex literal '" + raw + "'");
  };
  auto to_double = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != t.size()) throw bad();
    return v;
  };
  if (s.empty()) throw bad();
  if (s.back() == 'i') {
    s.pop_back();
    // Split at the last sign that does not follow an exponent marker.
    size_t split = std::string::npos;
    for (size_t k = 1; k < s.size(); ++k)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
        split = k;
    if (split == std::string::npos) return {0.0, to_double(s)};
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
  }
  return {to_double(s), 0.0};
}

std::string format_complex(cplx z) {
  char buf[80];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

std::string format_short(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

// Default parameters reproducing the reference figures, so sweep and verify
// run without flags.
MassParams preset(CurveId id) {
  switch (id) {
    case CurveId::Web: return {{"minf", {0.4, 0.25}}};
    case CurveId::Whi: return {{"minf", {0.3, 0.4}}};
    case CurveId::Bes: return {{"m0", {-0.5, 0.4}}};
    case CurveId::Leg: return {{"minf", {0.0, 1.0}}};
    case CurveId::Kum:
      return {{"m0", {0.07, 0.60}}, {"minf", {-0.4, -0.4}}};
    case CurveId::dHG:
      return {{"m1", {-0.53, -0.28}}, {"minf", {-0.32, -0.63}}};
    case CurveId::HG:
      return {{"m0", std::sqrt(cplx{0.5, 0.2})},
              {"m1", std::sqrt(cplx{0.5, 0.4})},
              {"minf", std::sqrt(cplx{-0.4, 0.5})}};
    case CurveId::C14: return {{"minf", {0.8, 0.3}}, {"t", {1.0, 0.0}}};
    case CurveId::C23: return {{"minf", {0.5, 0.0}}, {"t", {1.0, 0.2}}};
    default: return {};
  }
}

MassParams resolve_params(CurveId id, const std::string& spec) {
  MassParams m = preset(id);
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw InvalidParamError("expected name=value in --params, got '" +
                              item + "'");
    m[item.substr(0, eq)] = parse_complex(item.substr(eq + 1));
  }
  return m;
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------

int cmd_curves(bool as_json) {
  const auto entries = catalog();
  if (as_json) {
    json arr = json::array();
    for (const auto& e : entries)
      arr.push_back({{"id", to_string(e.id)},
                     {"params", e.params},
                     {"q", e.q_formula}});
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : entries) {
    std::string params;
    for (const auto& p : e.params) params += (params.empty() ? "" : ", ") + p;
    std::printf("%-5s %-18s %s\n", to_string(e.id).c_str(),
                params.empty() ? "-" : params.c_str(), e.q_formula.c_str());
  }
  return 0;
}

int cmd_fg(CurveId id, const MassParams& m, int g, const std::string& method,
           std::optional<double> halfplane, bool as_json) {
  FreeEnergyValue v;
  if (method == "closed") {
    v = free_energy_closed(id, m, g);
  } else if (method == "tr") {
    CorrelatorSession session(build_curve(id, m));
    v = session.free_energy_recursion(g);
  } else {  // bps
    const CurveData curve = build_curve(id, m);
    const BPSStructure s = expected_spectrum(curve);
    const HalfPlane H =
        halfplane ? HalfPlane{*halfplane} : adapted_half_plane(id, m);
    v.g = g;
    v.value = s.rows.empty() ? cplx{0.0} : bps_free_energy(s, g, H);
  }
  if (as_json) {
    std::cout << json{{"curve", to_string(id)},
                      {"g", g},
                      {"method", method},
                      {"value", complex_json(v.value)},
                      {"error_estimate", v.error_estimate}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("F_%d[%s] = %s", g, method.c_str(),
                format_complex(v.value).c_str());
    if (method == "tr") std::printf("  (error estimate %.3g)", v.error_estimate);
    std::printf("\n");
  }
  return 0;
}

int cmd_network(CurveId id, const MassParams& m, double theta,
                const std::string& out_svg, const std::string& out_json) {
  const CurveData curve = build_curve(id, m);
  const NetworkSnapshot snap = build_network(curve, theta);
  if (!out_svg.empty()) {
    std::ofstream f(out_svg);
    if (!f) throw InvalidParamError("cannot open " + out_svg + " for writing");
    f << network_svg(curve, snap);
  }
  if (!out_json.empty()) {
    json trajs = json::array();
    for (const Trajectory& t : snap.critical_trajectories) {
      json pts = json::array();
      for (cplx p : t.points) pts.push_back({p.real(), p.imag()});
      trajs.push_back({{"points", std::move(pts)},
                       {"w_length", t.w_length},
                       {"termination", int(t.termination)}});
    }
    json rings = json::object();
    for (const auto& [label, flag] : snap.ring_domain_flags)
      rings[label] = flag;
    std::ofstream f(out_json);
    if (!f) throw InvalidParamError("cannot open " + out_json + " for writing");
    f << json{{"curve", to_string(id)},
              {"theta", snap.theta},
              {"trajectories", std::move(trajs)},
              {"ring_domain_flags", std::move(rings)}}
             .dump(2)
      << "\n";
  }
  std::printf("traced %zu critical trajectories at theta = %.6f\n",
              snap.critical_trajectories.size(), snap.theta);
  return 0;
}

int cmd_sweep(CurveId id, const MassParams& m, int steps, double refine_tol,
              bool as_json) {
  const CurveData curve = build_curve(id, m);
  const BPSStructure s = expected_spectrum(curve);
  auto events = detect_degenerations(curve, steps, refine_tol);
  for (auto& e : events) e.matched_charge = identify(curve, e, s);
  json arr = json::array();
  if (!as_json)
    std::printf("%-9s %-15s %-22s %-28s %s\n", "theta*", "kind", "charge",
                "Z", "Omega");
  for (const auto& e : events) {
    const Charge& gamma = *e.matched_charge;
    cplx Z = 0.0;
    int omega = 0;
    for (const auto& row : s.rows)
      if (row.charge == gamma) {
        Z = row.Z;
        omega = row.omega;
      }
    if (as_json) {
      arr.push_back({{"theta", e.theta_star.theta},
                     {"kind", to_string(e.kind)},
                     {"charge", gamma.pretty(s.lattice)},
                     {"Z", complex_json(Z)},
                     {"omega", omega},
                     {"length", e.length}});
    } else {
      std::printf("%-9.6f %-15s %-22s %-28s %d\n", e.theta_star.theta,
                  to_string(e.kind).c_str(), gamma.pretty(s.lattice).c_str(),
                  format_short(Z).c_str(), omega);
    }
  }
  if (as_json) std::cout << arr.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& which, int g_max, double tol,
               bool as_json) {
  std::vector<CurveId> ids;
  if (which == "all") {
    for (const auto& e : catalog()) ids.push_back(e.id);
    ids.push_back(CurveId::C14);
    ids.push_back(CurveId::C23);
  } else {
    ids.push_back(curve_id_from_string(which));
  }
  bool all_pass = true;
  json arr = json::array();
  for (CurveId id : ids) {
    bool pass = false;
    json detail;
    if (id == CurveId::C14 || id == CurveId::C23) {
      const Degree3Report r = degree3_check(id, preset(id), g_max);
      pass = r.pass;
      json rows = json::array();
      for (const auto& row : r.rows)
        rows.push_back({{"g", row.g},
                        {"closed", complex_json(row.closed)},
                        {"bps", complex_json(row.bps)},
                        {"rel", row.rel}});
      detail = {{"rows", std::move(rows)}};
    } else {
      const VerificationReport r =
          verify_curve(id, preset(id), g_max, 1e-12, tol);
      pass = r.pass;
      json rows = json::array();
      for (const auto& row : r.rows)
        rows.push_back({{"g", row.g},
                        {"closed", complex_json(row.closed)},
                        {"bps", complex_json(row.bps)},
                        {"rel_closed_bps", row.rel_closed_bps},
                        {"rel_recursion_closed",
                         row.has_recursion ? row.rel_recursion_closed : -1.0}});
      detail = {{"rows", std::move(rows)},
                {"f0_hessian_rel", r.f0_hessian_rel},
                {"f1_diff_rel", r.f1_diff_rel},
                {"half_plane_independent", r.half_plane_independent}};
    }
    all_pass = all_pass && pass;
    if (as_json) {
      detail["curve"] = to_string(id);
      detail["pass"] = pass;
      arr.push_back(std::move(detail));
    } else {
      std::printf("%-5s %s\n", to_string(id).c_str(),
                  pass ? "pass" : "FAIL");
    }
  }
  if (as_json) std::cout << arr.dump(2) << "\n";
  if (!all_pass && !as_json) std::printf("verification failed\n");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral networks and free energies of hypergeometric-type "
               "quadratic differentials"};
  app.require_subcommand(1);

  bool as_json = false;
  auto add_json_flag = [&](CLI::App* cmd) {
    cmd->add_flag("--json", as_json, "emit JSON instead of text");
  };

  auto* c_curves = app.add_subcommand("curves", "list the curve catalog");
  add_json_flag(c_curves);

  std::string curve_name, params_spec, method = "closed";
  int g = 2;
  double halfplane_phase = 0.0;
  bool halfplane_set = false;
  auto add_curve_opts = [&](CLI::App* cmd, bool required = true) {
    auto* o = cmd->add_option("--curve", curve_name, "curve id (e.g. Web)");
    if (required) o->required();
    cmd->add_option("--params", params_spec,
                    "comma-separated name=value complex overrides");
  };

  auto* c_fg = app.add_subcommand("fg", "one free energy F_g");
  add_json_flag(c_fg);
  add_curve_opts(c_fg);
  c_fg->add_option("--g", g, "genus")->required();
  c_fg->add_option("--method", method, "tr | closed | bps")
      ->check(CLI::IsMember({"tr", "closed", "bps"}));
  c_fg->add_option("--halfplane", halfplane_phase,
                   "half-plane boundary phase for --method bps")
      ->each([&](const std::string&) { halfplane_set = true; });

  double theta = 0.0;
  std::string out_svg, out_json_path;
  auto* c_net = app.add_subcommand("network", "trace a network snapshot");
  add_curve_opts(c_net);
  c_net->add_option("--theta", theta, "foliation phase");
  c_net->add_option("--out", out_svg, "SVG output path")->required();
  c_net->add_option("--json-out", out_json_path, "JSON point-list dump path");

  int steps = 2000;
  double refine_tol = 1e-10;
  auto* c_sweep = app.add_subcommand("sweep", "degeneration table over phase");
  add_json_flag(c_sweep);
  add_curve_opts(c_sweep);
  c_sweep->add_option("--steps", steps, "phase grid cells");
  c_sweep->add_option("--refine-tol", refine_tol, "bisection tolerance");

  std::string verify_which = "all";
  int g_max = 3;
  double tol = 1e-6;
  auto* c_ver = app.add_subcommand("verify", "check the free-energy identity");
  add_json_flag(c_ver);
  c_ver->add_option("--curve", verify_which, "curve id or 'all'");
  c_ver->add_option("--gmax", g_max, "highest genus checked");
  c_ver->add_option("--tol", tol, "recursion tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // invalid usage maps to the invalid-parameter exit code
  }

  try {
    if (c_curves->parsed()) return cmd_curves(as_json);
    const CurveId id =
        c_ver->parsed() ? CurveId::Web : curve_id_from_string(curve_name);
    if (c_fg->parsed())
      return cmd_fg(id, resolve_params(id, params_spec), g, method,
                    halfplane_set ? std::optional<double>(halfplane_phase)
                                  : std::nullopt,
                    as_json);
    if (c_net->parsed())
      return cmd_network(id, resolve_params(id, params_spec), theta, out_svg,
                         out_json_path);
    if (c_sweep->parsed())
      return cmd_sweep(id, resolve_params(id, params_spec), steps, refine_tol,
                       as_json);
    return cmd_verify(verify_which, g_max, tol, as_json);
  } catch (const InvalidParamError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return 2;
  } catch (const VerificationError& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
}
