#include "hyperbps/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace hyperbps {

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(cplx{0.0});
}

bool Poly::is_zero() const {
  for (const cplx& a : c_)
    if (a != cplx{0.0}) return false;
  return true;
}

double Poly::coeff_scale() const {
  double s = 0.0;
  for (const cplx& a : c_) s = std::max(s, std::abs(a));
  return s;
}

cplx Poly::operator()(cplx z) const {
  cplx v{0.0};
  for (int k = degree(); k >= 0; --k) v = v * z + c_[k];
  return v;
}

Poly Poly::derivative() const {
  if (degree() == 0) return Poly::constant(0.0);
  std::vector<cplx> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx{0.0});
  for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx{-1.0}; }

Poly Poly::operator*(const Poly& o) const {
  std::vector<cplx> r(c_.size() + o.c_.size() - 1, cplx{0.0});
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(r));
}

Poly Poly::operator*(cplx s) const {
  std::vector<cplx> r(c_);
  for (cplx& a : r) a *= s;
  return Poly(std::move(r));
}

Poly Poly::shifted(cplx center) const {
  // Repeated synthetic division by (t - 0) after substituting z = t + center:
  // classic Horner-based Taylor shift.
  std::vector<cplx> r(c_);
  const int n = degree();
  for (int j = 0; j <= n; ++j)
    for (int k = n - 1; k >= j; --k) r[k] += center * r[k + 1];
  return Poly(std::move(r));
}

Poly Poly::reversed() const {
  std::vector<cplx> r(c_.rbegin(), c_.rend());
  return Poly(std::move(r));
}

Poly Poly::trimmed(double eps) const {
  const double cut = eps * coeff_scale();
  int top = degree();
  while (top > 0 && std::abs(c_[top]) <= cut) --top;
  return Poly(std::vector<cplx>(c_.begin(), c_.begin() + top + 1));
}

std::vector<cplx> poly_roots(const Poly& p_in) {
  Poly p = p_in.trimmed(1e-14);
  const int n = p.degree();
  if (n < 1) throw InvalidParamError("poly_roots: degree must be >= 1");
  const cplx lead = p.coeff(n);
  if (lead == cplx{0.0}) throw NumericError("poly_roots: zero polynomial");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) companion(k, n - 1) = -p.coeff(k) / lead;
  for (int k = 1; k < n; ++k) companion(k, k - 1) = cplx{1.0};

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  if (es.info() != Eigen::Success)
    throw NumericError("poly_roots: eigenvalue iteration did not converge");

  const Poly dp = p.derivative();
  std::vector<cplx> roots(n);
  for (int k = 0; k < n; ++k) {
    cplx r = es.eigenvalues()(k);
    // One or two Newton polishes; skip when the derivative is tiny
    // (multiple roots: the companion value is already our best estimate).
    for (int it = 0; it < 2; ++it) {
      const cplx d = dp(r);
      if (std::abs(d) < 1e-12 * std::max(1.0, dp.coeff_scale())) break;
      const cplx step = p(r) / d;
      if (!std::isfinite(std::abs(step))) break;
      r -= step;
    }
    roots[k] = r;
  }
  return roots;
}

// ---------------------------------------------------------------------------
// RationalFn

RationalFn::RationalFn(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero())
    throw InvalidParamError("RationalFn: denominator is identically zero");
}

RationalFn RationalFn::derivative() const {
  return {num.derivative() * den - num * den.derivative(), den * den};
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
  return {num * o.den + o.num * den, den * o.den};
}
RationalFn RationalFn::operator-(const RationalFn& o) const {
  return {num * o.den - o.num * den, den * o.den};
}
RationalFn RationalFn::operator*(const RationalFn& o) const {
  return {num * o.num, den * o.den};
}

// ---------------------------------------------------------------------------
// Series

namespace {

// First index with a coefficient that is not numerically negligible.
int vanishing_order(const Poly& p, double rel_eps = 1e-11) {
  const double cut = rel_eps * p.coeff_scale();
  for (int k = 0; k <= p.degree(); ++k)
    if (std::abs(p.coeff(k)) > cut) return k;
  return p.degree() + 1;
}

// Power-series division u/w to `len` terms; w[0] != 0 required.
std::vector<cplx> series_divide(const std::vector<cplx>& u,
                                const std::vector<cplx>& w, int len) {
  std::vector<cplx> q(len, cplx{0.0});
  const cplx w0 = w[0];
  for (int k = 0; k < len; ++k) {
    cplx acc = k < static_cast<int>(u.size()) ? u[k] : cplx{0.0};
    for (int j = 1; j <= k && j < static_cast<int>(w.size()); ++j)
      acc -= w[j] * q[k - j];
    q[k] = acc / w0;
  }
  return q;
}

std::vector<cplx> series_about_zero(const Poly& num, const Poly& den, int kmin,
                                    int count) {
  const int vn = vanishing_order(num);
  const int vd = vanishing_order(den);
  if (vd > den.degree())
    throw NumericError("rational_series: denominator vanishes identically");
  if (vn > num.degree()) return std::vector<cplx>(count, cplx{0.0});
  const int lead = vn - vd;  // f = t^lead * (unit series)
  std::vector<cplx> u, w;
  for (int k = vn; k <= num.degree(); ++k) u.push_back(num.coeff(k));
  for (int k = vd; k <= den.degree(); ++k) w.push_back(den.coeff(k));
  const int len = kmin + count - lead;  // need orders lead .. kmin+count-1
  std::vector<cplx> out(count, cplx{0.0});
  if (len <= 0) return out;
  const std::vector<cplx> q = series_divide(u, w, len);
  for (int k = 0; k < count; ++k) {
    const int j = kmin + k - lead;
    if (j >= 0 && j < len) out[k] = q[j];
  }
  return out;
}

}  // namespace

std::vector<cplx> rational_series(const RationalFn& f, cplx center, int kmin,
                                  int count) {
  if (count <= 0) return {};
  return series_about_zero(f.num.shifted(center), f.den.shifted(center), kmin,
                           count);
}

SeriesAtInfinity rational_series_at_infinity(const RationalFn& f, int kmin) {
  // Substitute z = 1/t: f = t^(deg den - deg num) * rev(num)/rev(den), and
  // the t^j coefficient multiplies z^{-j}.
  const Poly num = f.num.trimmed(1e-14);
  const Poly den = f.den.trimmed(1e-14);
  const int top = num.degree() - den.degree();  // largest possible z power
  const int count = top - kmin + 1;
  SeriesAtInfinity s{top, {}};
  if (count <= 0) return s;
  // t-series of rev(num)/rev(den) starts at t^0 and corresponds to z^top.
  s.coeffs = series_about_zero(num.reversed(), den.reversed(), 0, count);
  return s;
}

cplx residue_at(const RationalFn& f, cplx p) {
  const Poly num = f.num.shifted(p);
  const Poly den = f.den.shifted(p);
  const int vn = vanishing_order(num);
  const int vd = vanishing_order(den);
  if (vn > num.degree()) return cplx{0.0};
  if (vn >= 3 && vd >= 3)
    throw NumericError(
        "residue_at: numerator and denominator both vanish deeply at the "
        "expansion point; input is ill-conditioned");
  return series_about_zero(num, den, -1, 1)[0];
}

cplx residue_at_infinity(const RationalFn& f) {
  return -rational_series_at_infinity(f, -1).at(-1);
}

// ---------------------------------------------------------------------------
// Contour quadrature

LaurentCoeffs contour_coeffs(const std::function<cplx(cplx)>& f, cplx center,
                             double radius, int order_min, int order_max,
                             const NumericConfig& cfg) {
  if (order_max < order_min)
    throw InvalidParamError("contour_coeffs: empty order range");
  const int m = order_max - order_min + 1;
  std::vector<cplx> prev, cur;
  double prev_diff = -1.0;
  for (int n = cfg.contour_nodes_start; n <= cfg.contour_nodes_cap; n *= 2) {
    cur.assign(m, cplx{0.0});
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * j / n;
      const cplx u = std::polar(radius, th);  // z - center on the circle
      const cplx fv = f(center + u);
      // a_k picks up fv * u^{-k}; walk the requested orders incrementally.
      cplx w = ipow(u, -order_min);
      for (int k = 0; k < m; ++k) {
        cur[k] += fv * w;
        w /= u;
      }
    }
    for (cplx& a : cur) a /= double(n);
    if (!prev.empty()) {
      double diff = 0.0, scale = 0.0;
      for (int k = 0; k < m; ++k) {
        diff = std::max(diff, std::abs(cur[k] - prev[k]));
        scale = std::max(scale, std::abs(cur[k]));
      }
      scale = std::max(scale, 1e-300);
      if (diff <= cfg.contour_rel_tol * std::max(scale, 1.0))
        return {center, order_min, std::move(cur)};
      prev_diff = diff;
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "contour_coeffs: no convergence at node cap "
     << cfg.contour_nodes_cap << " (last successive difference " << prev_diff
     << ")";
  throw NumericError(os.str());
}

// ---------------------------------------------------------------------------
// Path integrals

namespace {

// 16-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlX = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlW = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

cplx gl16(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx acc{0.0};
  for (int j = 0; j < 8; ++j)
    acc += kGlW[j] * (f(mid + half * kGlX[j]) + f(mid - half * kGlX[j]));
  return acc * half;
}

cplx integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b,
                       double tol, int depth) {
  const cplx whole = gl16(f, a, b);
  const cplx mid = 0.5 * (a + b);
  const cplx split = gl16(f, a, mid) + gl16(f, mid, b);
  if (std::abs(whole - split) <= tol || depth >= 24) return split;
  return integrate_segment(f, a, mid, 0.5 * tol, depth + 1) +
         integrate_segment(f, mid, b, 0.5 * tol, depth + 1);
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * ab.real() +
              (p.imag() - a.imag()) * ab.imag()) /
             len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

cplx path_integral(const std::function<cplx(cplx)>& f,
                   const std::vector<cplx>& polyline, int gl_order,
                   double abs_tol, const std::vector<cplx>& poles,
                   double exclusion) {
  (void)gl_order;  // fixed 16-point panels with adaptive bisection
  if (polyline.size() < 2)
    throw InvalidParamError("path_integral: need at least two path points");
  const size_t nseg = polyline.size() - 1;
  for (size_t s = 0; s < nseg; ++s)
    for (const cplx& p : poles)
      if (point_segment_distance(p, polyline[s], polyline[s + 1]) < exclusion)
        throw NumericError(
            "path_integral: path passes within the pole-exclusion radius");
  cplx acc{0.0};
  for (size_t s = 0; s < nseg; ++s)
    acc += integrate_segment(f, polyline[s], polyline[s + 1],
                             abs_tol / double(nseg), 0);
  return acc;
}

// ---------------------------------------------------------------------------
// Utilities

double bernoulli(int n) {
  if (n < 0) throw InvalidParamError("bernoulli: negative index");
  static std::vector<long double> cache{1.0L};
  while (static_cast<int>(cache.size()) <= n) {
    const int m = static_cast<int>(cache.size());
    // sum_{k=0}^{m} C(m+1, k) B_k = 0  (with B_m the unknown).
    long double binom = 1.0L;  // C(m+1, 0)
    long double acc = 0.0L;
    for (int k = 0; k < m; ++k) {
      acc += binom * cache[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    cache.push_back(-acc / (m + 1));  // C(m+1, m) = m+1
  }
  return static_cast<double>(cache[n]);
}

cplx ipow(cplx base, int n) {
  if (n < 0) return cplx{1.0} / ipow(base, -n);
  cplx acc{1.0};
  for (int k = 0; k < n; ++k) acc *= base;
  return acc;
}

}  // namespace hyperbps
