#include "hyperbps/toprec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hyperbps {

cplx bergman(cplx z1, cplx z2) {
  const cplx d = z1 - z2;
  if (std::abs(d) == 0.0)
    throw NumericError("bergman kernel evaluated on the diagonal");
  return 1.0 / (d * d);
}

namespace {

std::string pack_key(int g, int n, const std::vector<cplx>& pts) {
  std::string key(sizeof(int) * 2 + sizeof(cplx) * pts.size(), '\0');
  std::memcpy(key.data(), &g, sizeof(int));
  std::memcpy(key.data() + sizeof(int), &n, sizeof(int));
  std::memcpy(key.data() + 2 * sizeof(int), pts.data(),
              sizeof(cplx) * pts.size());
  return key;
}

void sort_args(std::vector<cplx>& pts) {
  std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

CorrelatorSession::CorrelatorSession(CurveData curve, SessionConfig cfg)
    : curve_(std::move(curve)), cfg_(cfg) {
  // Finite special points: ramification points and punctures; the residue
  // circles must stay clear of all of them.
  std::vector<cplx> specials;
  for (const auto& r : curve_.ramification_z)
    if (!r.inf) specials.push_back(r.v);
  for (const auto& p : curve_.punctures)
    if (!p.z.inf) specials.push_back(p.z.v);

  for (const auto& r : curve_.ramification_z) {
    if (r.inf) {
      double smax = 1.0;
      for (cplx s : specials) smax = std::max(smax, std::abs(s));
      base_radius_.push_back(2.0 * smax);  // big-circle radius R0
      continue;
    }
    double d = std::numeric_limits<double>::infinity();
    for (cplx s : specials)
      if (std::abs(s - r.v) > 1e-9) d = std::min(d, std::abs(s - r.v));
    if (!std::isfinite(d)) d = 1.0;
    base_radius_.push_back(d);
  }
  depth_radius_.assign(curve_.ramification_z.size(), {});
}

double CorrelatorSession::base_radius(int ram_index) const {
  return base_radius_[ram_index];
}

double CorrelatorSession::ring_radius(int ram_index, int depth) {
  const PP1 r = curve_.ramification_z[ram_index];
  if (r.inf) {
    // Big circles about infinity grow with depth so inner contours enclose
    // all outer sample points; the involution is z -> -z there, an isometry.
    return base_radius_[ram_index] / std::pow(cfg_.depth_shrink, depth);
  }
  auto& radii = depth_radius_[ram_index];
  if (static_cast<int>(radii.size()) > depth) return radii[depth];

  // Worst-case factor by which the involution compresses the distance of a
  // circle of radius rho about r back towards r.
  auto image_factor = [&](double rho) {
    double worst = 1.0;
    for (int j = 0; j < 128; ++j) {
      const cplx z = r.v + std::polar(rho, 2.0 * kPi * j / 128.0);
      worst = std::min(worst, std::abs(curve_.involution(z) - r.v) / rho);
    }
    return worst;
  };

  if (radii.empty()) radii.push_back(cfg_.radius_factor * base_radius_[ram_index]);
  while (static_cast<int>(radii.size()) <= depth) {
    // Depth-1 rings must also clear the F_g extraction circle and the
    // involution images of either parent contour.
    double prev = radii.back();
    if (radii.size() == 1)
      prev = std::min(prev,
                      cfg_.extraction_radius_factor * base_radius_[ram_index]);
    radii.push_back(cfg_.depth_shrink * prev * image_factor(prev));
  }
  return radii[depth];
}

const CorrelatorSession::Ring& CorrelatorSession::ring(int ram_index,
                                                       int depth) {
  const std::string key =
      std::to_string(ram_index) + ":" + std::to_string(depth);
  auto it = rings_.find(key);
  if (it != rings_.end()) return it->second;

  const PP1 r = curve_.ramification_z[ram_index];
  const int N = cfg_.nodes;
  Ring ring;
  ring.z.resize(N);
  ring.zbar.resize(N);
  ring.weight.resize(N);
  ring.kden.resize(N);
  ring.jac.resize(N);
  const double rho = ring_radius(ram_index, depth);
  for (int j = 0; j < N; ++j) {
    const double th = 2.0 * kPi * (j + 0.5) / N;
    cplx z, w;
    if (r.inf) {
      z = std::polar(rho, th);
      w = -z / double(N);  // Res_inf = -(1/2 pi i) * contour integral
    } else {
      z = r.v + std::polar(rho, th);
      w = (z - r.v) / double(N);
    }
    const cplx zb = curve_.involution(z);
    ring.z[j] = z;
    ring.zbar[j] = zb;
    ring.weight[j] = w;
    ring.kden[j] = 2.0 * (curve_.y_of_z(z) - curve_.y_of_z(zb)) *
                   curve_.xprime_of_z(z);
    // The zbar slot of the recursion bracket carries dzbar = sigma'(z) dz.
    // For sigma(z) = -z this is the constant -1 absorbed into the usual
    // kernel sign convention; for Mobius involutions it varies with z.
    ring.jac[j] = -curve_.involution.derivative(z);
  }
  return rings_.emplace(key, std::move(ring)).first->second;
}

cplx CorrelatorSession::recursion_kernel(int ram_index, cplx z0,
                                         cplx z) const {
  (void)ram_index;  // the kernel formula is the same at every r
  const cplx zb = curve_.involution(z);
  const cplx num = 1.0 / (z0 - zb) - 1.0 / (z0 - z);
  const cplx den =
      2.0 * (curve_.y_of_z(z) - curve_.y_of_z(zb)) * curve_.xprime_of_z(z);
  if (std::abs(den) == 0.0)
    throw NumericError("recursion kernel singular: z on the fixed locus");
  return num / den;
}

cplx CorrelatorSession::eval_W(int g, int n,
                               const std::vector<cplx>& points) {
  if (static_cast<int>(points.size()) != n)
    throw InvalidParamError("eval_W: argument count does not match n");
  return eval(g, n, points, 0);
}

cplx CorrelatorSession::eval(int g, int n, std::vector<cplx> pts, int depth) {
  if (g < 0) return 0.0;
  if (g == 0 && n == 1) return curve_.w01(pts[0]);
  if (g == 0 && n == 2) return bergman(pts[0], pts[1]);
  if (2 * g + n < 2) return 0.0;

  sort_args(pts);
  const std::string key = pack_key(g, n, pts);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const cplx z0 = pts[0];
  const std::vector<cplx> rest(pts.begin() + 1, pts.end());
  const int m = static_cast<int>(rest.size());

  cplx total = 0.0;
  for (size_t ri = 0; ri < curve_.ramification_z.size(); ++ri) {
    const Ring& rg = ring(static_cast<int>(ri), depth);
    cplx acc = 0.0;
    for (size_t j = 0; j < rg.z.size(); ++j) {
      const cplx z = rg.z[j], zb = rg.zbar[j];

      std::vector<cplx> args;
      args.reserve(m + 2);
      args.push_back(z);
      args.push_back(zb);
      args.insert(args.end(), rest.begin(), rest.end());
      cplx A = eval(g - 1, n + 1, std::move(args), depth + 1);

      // Primed sum: stable partitions g1+g2=g, I1 disjoint-union I2 = rest,
      // excluding the two W_{0,1} terms.
      for (int g1 = 0; g1 <= g; ++g1) {
        const int g2 = g - g1;
        for (int mask = 0; mask < (1 << m); ++mask) {
          const int pc = __builtin_popcount(static_cast<unsigned>(mask));
          if (g1 == 0 && pc == 0) continue;
          if (g2 == 0 && pc == m) continue;
          std::vector<cplx> a1{z}, a2{zb};
          for (int b = 0; b < m; ++b)
            (mask >> b & 1 ? a1 : a2).push_back(rest[b]);
          A += eval(g1, pc + 1, std::move(a1), depth + 1) *
               eval(g2, m - pc + 1, std::move(a2), depth + 1);
        }
      }

      const cplx K = (1.0 / (z0 - zb) - 1.0 / (z0 - z)) / rg.kden[j];
      acc += rg.weight[j] * K * rg.jac[j] * A;
    }
    total += acc;
  }
  memo_.emplace(key, total);
  return total;
}

// ---------------------------------------------------------------------------
// Partial-fraction backend
//
// On a genus-zero curve with simple ramification every stable correlator is a
// rational density with poles confined to the ramification points: iterated
// partial fractions write W_{g,n} as a finite sum of products of single-slot
// pole-basis functions. The recursion then closes on small coefficient
// tensors; one quadrature ring per ramification point supplies the residues,
// and all expansions in the outer variables are analytic, so nothing nests.

struct CorrelatorSession::PoleBasis {
  const CurveData* curve = nullptr;
  int R = 0;     // ramification points
  int Omax = 0;  // largest retained pole order per slot
  int S = 0;     // global seat count: (ram, order k), k = 2..Omax
  int N = 0;     // quadrature nodes per ring
  std::vector<char> inf_ram;
  std::vector<cplx> ram;  // finite location (unused for the infinite one)

  // Recursion tensors, all indexed with global seats.
  std::vector<cplx> T;          // [a][b][c]: Res K xi_a(z) xi_b(zbar) -> c
  std::vector<cplx> Uzb, Ubz;   // [b][c0][ci]: one factor is W_{0,2}(., z_i)
  std::vector<cplx> svec;       // [c0]: Res K B(z, zbar)
  std::vector<cplx> C03;        // W_{0,3} tensor, R^3 (order-2 seats only)
  std::map<std::pair<int, int>, std::vector<cplx>> cache;

  static int max_order(int g, int n) { return 6 * g + 2 * n - 4; }
  int seat_count(int g, int n) const {
    return R * std::max(0, std::min(max_order(g, n), Omax) - 1);
  }
  int seat(int ri, int k) const { return (k - 2) * R + ri; }
  cplx xi(int s, cplx z) const {
    const int ri = s % R, k = 2 + s / R;
    if (inf_ram[ri]) return -ipow(z, k - 2);  // u-chart density u^{-k}
    return ipow(z - ram[ri], -k);
  }

  PoleBasis(const CurveData& c, const std::vector<double>& base_radius,
            double radius_factor, int nodes, int omax)
      : curve(&c), Omax(omax), N(nodes) {
    R = static_cast<int>(c.ramification_z.size());
    S = R * (Omax - 1);
    inf_ram.resize(R);
    ram.resize(R);
    for (int ri = 0; ri < R; ++ri) {
      inf_ram[ri] = c.ramification_z[ri].inf ? 1 : 0;
      ram[ri] = c.ramification_z[ri].v;
    }
    T.assign(size_t(S) * S * S, cplx{0.0});
    Uzb.assign(size_t(S) * S * S, cplx{0.0});
    Ubz.assign(size_t(S) * S * S, cplx{0.0});
    svec.assign(S, cplx{0.0});
    C03.assign(size_t(R) * R * R, cplx{0.0});

    std::vector<cplx> kap(Omax + 1), bz(Omax + 1), bs(Omax + 1);
    std::vector<cplx> xv(S), xs(S);
    for (int ri = 0; ri < R; ++ri) {
      const bool inf = inf_ram[ri];
      const cplx r = ram[ri];
      for (int j = 0; j < N; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / N;
        cplx z, w;
        if (inf) {
          z = std::polar(base_radius[ri], th);
          w = -z / double(N);  // Res_inf = -(1/2 pi i) contour integral
        } else {
          z = r + std::polar(radius_factor * base_radius[ri], th);
          w = (z - r) / double(N);
        }
        const cplx zb = c.involution(z);
        const cplx kden = 2.0 * (c.y_of_z(z) - c.y_of_z(zb)) *
                          c.xprime_of_z(z);
        const cplx cw = w * (-c.involution.derivative(z)) / kden;

        // Laurent data of the kernel and of B(s, .) about this ring's
        // ramification point, one entry per retained order k:
        //   kap[k]: coefficient of the z0-slot seat (ri, k) in
        //           1/(z0-zbar) - 1/(z0-z)
        //   bz[k]/bs[k]: coefficient of the zi-slot seat (ri, k) in
        //           B(z, zi) / B(zbar, zi)
        for (int k = 2; k <= Omax; ++k) {
          if (inf) {
            kap[k] = ipow(zb, 1 - k) - ipow(z, 1 - k);
            bz[k] = -double(k - 1) * ipow(z, -k);
            bs[k] = -double(k - 1) * ipow(zb, -k);
          } else {
            kap[k] = ipow(zb - r, k - 1) - ipow(z - r, k - 1);
            bz[k] = double(k - 1) * ipow(z - r, k - 2);
            bs[k] = double(k - 1) * ipow(zb - r, k - 2);
          }
        }
        for (int a = 0; a < S; ++a) {
          xv[a] = xi(a, z);
          xs[a] = xi(a, zb);
        }
        const cplx Bzzb = 1.0 / ((z - zb) * (z - zb));

        for (int k = 2; k <= Omax; ++k) {
          const int c0 = seat(ri, k);
          const cplx kc = cw * kap[k];
          svec[c0] += kc * Bzzb;
          for (int a = 0; a < S; ++a) {
            const cplx ta = kc * xv[a];
            cplx* Trow = &T[(size_t(a) * S) * S + c0];
            for (int b = 0; b < S; ++b) Trow[size_t(b) * S] += ta * xs[b];
          }
          for (int b = 0; b < S; ++b) {
            cplx* uzb = &Uzb[(size_t(b) * S + c0) * S];
            cplx* ubz = &Ubz[(size_t(b) * S + c0) * S];
            const cplx fzb = kc * xs[b], fbz = kc * xv[b];
            for (int ki = 2; ki <= Omax; ++ki) {
              uzb[seat(ri, ki)] += fzb * bz[ki];
              ubz[seat(ri, ki)] += fbz * bs[ki];
            }
          }
        }
        // W_{0,3}: both partners are W_{0,2}; order-2 seats throughout.
        const cplx k2 = cw * kap[2];
        for (int c1 = 0; c1 < R; ++c1)
          for (int c2 = 0; c2 < R; ++c2) {
            if (c1 != ri || c2 != ri) continue;
            C03[(size_t(ri) * R + c1) * R + c2] +=
                k2 * 2.0 * bz[2] * bs[2];
          }
      }
    }
  }

  const std::vector<cplx>& tensor(int g, int m) {
    const auto key = std::make_pair(g, m);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<cplx> C =
        (g == 0 && m == 3) ? C03 : assemble(g, m);
    return cache.emplace(key, std::move(C)).first->second;
  }

  std::vector<cplx> assemble(int g, int m) {
    const int n = m - 1;
    const int So = seat_count(g, m);
    size_t sz = 1;
    for (int i = 0; i < m; ++i) sz *= size_t(So);
    std::vector<cplx> C(sz, cplx{0.0});
    const size_t out_stride = sz / std::max<size_t>(So, 1);

    // Iterate J over [0, lim)^n with per-slot limits.
    auto for_each = [&](const std::vector<int>& lim, auto&& fn) {
      std::vector<int> J(n, 0);
      while (true) {
        fn(J);
        int i = n - 1;
        while (i >= 0 && ++J[i] == lim[i]) J[i--] = 0;
        if (i < 0) break;
      }
    };
    auto out_flat = [&](const std::vector<int>& J) {
      size_t f = 0;
      for (int v : J) f = f * So + v;
      return f;
    };

    // W_{g-1, n+2}(z, zbar, J)
    if (g >= 1) {
      if (g == 1 && n == 0) {
        for (int c0 = 0; c0 < So; ++c0) C[c0] += svec[c0];
      } else {
        const auto& D = tensor(g - 1, n + 2);
        const int Sd = seat_count(g - 1, n + 2);
        size_t dstr = 1;
        for (int i = 0; i < n; ++i) dstr *= size_t(Sd);
        for_each(std::vector<int>(n, Sd), [&](const std::vector<int>& J) {
          size_t jd = 0;
          for (int v : J) jd = jd * Sd + v;
          const size_t jo = out_flat(J);
          for (int a = 0; a < Sd; ++a)
            for (int b = 0; b < Sd; ++b) {
              const cplx d = D[(size_t(a) * Sd + b) * dstr + jd];
              if (d == cplx{0.0}) continue;
              const cplx* Trow = &T[(size_t(a) * S + b) * S];
              for (int c0 = 0; c0 < So; ++c0)
                C[size_t(c0) * out_stride + jo] += d * Trow[c0];
            }
        });
      }
    }

    // Stable splittings g1 + g2 = g, I1 disjoint-union I2 = J slots.
    for (int g1 = 0; g1 <= g; ++g1) {
      const int g2 = g - g1;
      for (int mask = 0; mask < (1 << n); ++mask) {
        const int p = __builtin_popcount(static_cast<unsigned>(mask));
        if (g1 == 0 && p == 0) continue;
        if (g2 == 0 && p == n) continue;
        const bool b_left = (g1 == 0 && p == 1);
        const bool b_right = (g2 == 0 && n - p == 1);
        if (b_left && b_right)
          throw NumericError("assemble reached the W_{0,3} base case");

        if (b_left || b_right) {
          // One factor is W_{0,2} against a free slot; its pole data lives
          // in the U tensors. The other factor keeps genus g.
          const int islot = b_left ? __builtin_ctz(static_cast<unsigned>(mask))
                                   : __builtin_ctz(~static_cast<unsigned>(
                                         mask) &
                                     ((1u << n) - 1));
          const auto& W = tensor(g, n);  // n-1 partner slots + its own z-slot
          const int Sw = seat_count(g, n);
          const auto& U = b_left ? Uzb : Ubz;
          std::vector<int> lim(n, Sw);
          lim[islot] = So;
          size_t wstr = 1;  // stride of W's leading (z / zbar) slot
          for (int i = 1; i < n; ++i) wstr *= size_t(Sw);
          for_each(lim, [&](const std::vector<int>& J) {
            size_t jw = 0;
            for (int i = 0; i < n; ++i)
              if (i != islot) jw = jw * Sw + J[i];
            const size_t jo = out_flat(J);
            for (int b = 0; b < Sw; ++b) {
              const cplx wv = W[size_t(b) * wstr + jw];
              if (wv == cplx{0.0}) continue;
              const cplx* Urow = &U[(size_t(b) * S) * S];
              for (int c0 = 0; c0 < So; ++c0)
                C[size_t(c0) * out_stride + jo] +=
                    wv * Urow[size_t(c0) * S + J[islot]];
            }
          });
          continue;
        }

        const auto& W1 = tensor(g1, p + 1);
        const auto& W2 = tensor(g2, n - p + 1);
        const int S1 = seat_count(g1, p + 1);
        const int S2 = seat_count(g2, n - p + 1);
        std::vector<int> lim(n);
        for (int i = 0; i < n; ++i) lim[i] = (mask >> i & 1) ? S1 : S2;
        size_t str1 = 1, str2 = 1;
        for (int i = 0; i < p; ++i) str1 *= size_t(S1);
        for (int i = 0; i < n - p; ++i) str2 *= size_t(S2);
        for_each(lim, [&](const std::vector<int>& J) {
          size_t j1 = 0, j2 = 0;
          for (int i = 0; i < n; ++i)
            (mask >> i & 1) ? j1 = j1 * S1 + J[i] : j2 = j2 * S2 + J[i];
          const size_t jo = out_flat(J);
          for (int a = 0; a < S1; ++a) {
            const cplx w1 = W1[size_t(a) * str1 + j1];
            if (w1 == cplx{0.0}) continue;
            for (int b = 0; b < S2; ++b) {
              const cplx prod = w1 * W2[size_t(b) * str2 + j2];
              if (prod == cplx{0.0}) continue;
              const cplx* Trow = &T[(size_t(a) * S + b) * S];
              for (int c0 = 0; c0 < So; ++c0)
                C[size_t(c0) * out_stride + jo] += prod * Trow[c0];
            }
          }
        });
      }
    }
    return C;
  }
};

CorrelatorSession::~CorrelatorSession() = default;

cplx CorrelatorSession::free_energy_from_basis(PoleBasis& basis,
                                               int g) const {
  const auto& W = basis.tensor(g, 1);
  const int So = basis.seat_count(g, 1);
  cplx total = 0.0;
  for (int ri = 0; ri < basis.R; ++ri) {
    if (!basis.inf_ram[ri]) {
      // Taylor coefficients of Phi at r from termwise integration of the
      // series of Phi' = y x'; pairing Res_r[Phi xi_{r,k}] = Phi_{k-1}.
      const auto a = rational_series(curve_.w01, basis.ram[ri], 0, 6 * g);
      for (int k = 2; k <= basis.Omax; ++k) {
        const int s = basis.seat(ri, k);
        if (s >= So) break;
        total += W[s] * a[k - 2] / double(k - 1);
      }
    } else {
      // u = 1/z chart: Phi' du-density is -w01(1/u)/u^2, so the u-Taylor
      // coefficient of Phi at order t is -s_{-t-1}/t with s the z-expansion
      // of w01 about infinity. Valid only without logarithmic monodromy.
      const auto sinf = rational_series_at_infinity(curve_.w01, -(6 * g + 2));
      if (std::abs(sinf.at(-1)) > 1e-12 * curve_.w01.num.coeff_scale())
        throw NumericError("Phi has logarithmic monodromy at infinity");
      for (int k = 2; k <= basis.Omax; ++k) {
        const int s = basis.seat(ri, k);
        if (s >= So) break;
        total += W[s] * (-sinf.at(-k)) / double(k - 1);
      }
    }
  }
  return total / double(2 - 2 * g);
}

FreeEnergyValue CorrelatorSession::free_energy_recursion(int g) {
  if (g < 2)
    throw InvalidParamError(
        "free_energy_recursion requires g >= 2 (F0/F1 have their own "
        "normalizations)");
  if (g > 5)
    throw NumericError(
        "free_energy_recursion: coefficient tensors above g = 5 exceed "
        "double-precision usefulness and memory budget");
  const int omax = 6 * g - 2;
  if (!basis_ || basis_->Omax < omax) {
    // Node count clears the Laurent span of the worst integrand with margin.
    const int nodes = std::max(cfg_.nodes, 8 * omax);
    basis_ = std::make_unique<PoleBasis>(curve_, base_radius_,
                                         cfg_.radius_factor, nodes, omax);
    // The check basis drops a quarter of the nodes; with the trapezoid
    // rule's exponential convergence that gap dominates the difference, so
    // |full - check| bounds the check error and overestimates the full one.
    basis_check_ = std::make_unique<PoleBasis>(
        curve_, base_radius_, cfg_.radius_factor, (3 * nodes) / 4, omax);
  }
  FreeEnergyValue out;
  out.g = g;
  out.method = FreeEnergyValue::Method::recursion;
  out.value = free_energy_from_basis(*basis_, g);
  out.error_estimate =
      std::abs(out.value - free_energy_from_basis(*basis_check_, g));
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

cplx half_sq_log(cplx mu) { return 0.5 * mu * mu * std::log(mu); }

cplx fg_coeff(int g) {
  return bernoulli(2 * g) / double(2 * g * (2 * g - 2));
}

// mu^{2-2g}
cplx neg_pow(cplx mu, int g) { return ipow(mu, 2 - 2 * g); }

}  // namespace

FreeEnergyValue free_energy_closed(CurveId id, const MassParams& m, int g,
                                   bool allow_ambiguous) {
  if (g < 0) throw InvalidParamError("free energy genus must be >= 0");
  if (g <= 1 && !allow_ambiguous)
    throw InvalidParamError(
        "F0/F1 are defined only modulo normalization ambiguities; pass "
        "allow_ambiguous to acknowledge");
  FreeEnergyValue out;
  out.g = g;
  out.method = FreeEnergyValue::Method::closed_form;
  out.ambiguous = g <= 1;

  auto mget = [&](const char* n) { return mass(m, n); };
  cplx v = 0.0;
  switch (id) {
    case CurveId::HG: {
      const cplx m0 = mget("m0"), m1 = mget("m1"), minf = mget("minf");
      std::vector<cplx> webers;
      for (int e1 : {+1, -1})
        for (int e2 : {+1, -1})
          webers.push_back(m0 + double(e1) * m1 + double(e2) * minf);
      const cplx bes[] = {m0, m1, minf};
      if (g == 0) {
        for (cplx mu : webers) v += half_sq_log(mu);
        for (cplx ms : bes) v -= half_sq_log(2.0 * ms);
      } else if (g == 1) {
        cplx delta = 1.0;
        for (cplx mu : webers) delta *= mu;
        v = -std::log(delta / (m0 * m1 * minf)) / 12.0;
      } else {
        cplx s = 0.0;
        for (cplx mu : webers) s += neg_pow(mu, g);
        for (cplx ms : bes) s -= neg_pow(2.0 * ms, g);
        v = fg_coeff(g) * s;
      }
      break;
    }
    case CurveId::dHG: {
      const cplx m1 = mget("m1"), minf = mget("minf");
      const cplx mup = m1 + minf, mum = m1 - minf;
      if (g == 0) {
        v = 2.0 * half_sq_log(mup) + 2.0 * half_sq_log(mum) -
            half_sq_log(2.0 * m1) - half_sq_log(2.0 * minf);
      } else if (g == 1) {
        v = -std::log(mup * mup * mum * mum / (m1 * minf)) / 12.0;
      } else {
        v = fg_coeff(g) * (2.0 * neg_pow(mup, g) + 2.0 * neg_pow(mum, g) -
                           neg_pow(2.0 * m1, g) - neg_pow(2.0 * minf, g));
      }
      break;
    }
    case CurveId::Kum: {
      const cplx m0 = mget("m0"), minf = mget("minf");
      const cplx mup = m0 + minf, mum = m0 - minf;
      if (g == 0) {
        v = half_sq_log(mup) + half_sq_log(mum) - half_sq_log(2.0 * m0);
      } else if (g == 1) {
        v = -std::log(mup * mum / m0) / 12.0;
      } else {
        v = fg_coeff(g) *
            (neg_pow(mup, g) + neg_pow(mum, g) - neg_pow(2.0 * m0, g));
      }
      break;
    }
    case CurveId::Leg: {
      const cplx minf = mget("minf");
      if (g == 0) {
        v = 2.0 * minf * minf * std::log(minf) - half_sq_log(2.0 * minf);
      } else if (g == 1) {
        v = -std::log(ipow(minf, 4) / (2.0 * minf)) / 12.0;
      } else {
        v = fg_coeff(g) * (4.0 * neg_pow(minf, g) - neg_pow(2.0 * minf, g));
      }
      break;
    }
    case CurveId::Bes: {
      const cplx m0 = mget("m0");
      if (g == 0)
        v = -half_sq_log(2.0 * m0);
      else if (g == 1)
        v = std::log(2.0 * m0) / 12.0;
      else
        v = -fg_coeff(g) * neg_pow(2.0 * m0, g);
      break;
    }
    case CurveId::Whi: {
      const cplx minf = mget("minf");
      if (g == 0)
        v = minf * minf * std::log(minf);
      else if (g == 1)
        v = -std::log(minf) / 6.0;
      else
        v = fg_coeff(g) * 2.0 * neg_pow(minf, g);
      break;
    }
    case CurveId::Web: {
      const cplx minf = mget("minf");
      if (g == 0)
        v = 0.5 * minf * minf * std::log(minf);
      else if (g == 1)
        v = -std::log(minf) / 12.0;
      else
        v = fg_coeff(g) * neg_pow(minf, g);
      break;
    }
    case CurveId::dBes:
    case CurveId::Ai:
      v = 0.0;
      break;
    default:
      throw InvalidParamError("no closed-form free energy for " +
                              to_string(id));
  }
  out.value = v;
  return out;
}

std::vector<FreeEnergyValue> partition_series(CurveId id, const MassParams& m,
                                              int g_max) {
  std::vector<FreeEnergyValue> out;
  for (int g = 0; g <= g_max; ++g)
    out.push_back(free_energy_closed(id, m, g, /*allow_ambiguous=*/true));
  return out;
}

}  // namespace hyperbps
