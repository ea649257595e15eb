#pragma once

// Complex-arithmetic substrate shared by the whole library: polynomials,
// rational functions, root finding, residues, Laurent coefficients from
// contour quadrature, and adaptive path integrals.

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperbps {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kI{0.0, 1.0};
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

// Error taxonomy mirroring the CLI exit-code contract:
//   InvalidParamError -> 2, NumericError -> 3, VerificationError -> 1.
struct InvalidParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericConfig {
  double contour_rel_tol = 1e-12;
  int contour_nodes_start = 64;
  int contour_nodes_cap = 4096;
  double path_abs_tol = 1e-10;
  double pole_exclusion = 1e-6;
  // Target working precision. Double is the only backend wired up; the knob
  // exists so an extended-precision substitute can honor the same configs.
  double precision_target = 1e-12;
};

// ---------------------------------------------------------------------------
// Polynomials (dense, ascending coefficients)

class Poly {
 public:
  Poly() : c_{cplx{0.0}} {}
  explicit Poly(std::vector<cplx> coeffs);
  Poly(std::initializer_list<cplx> coeffs) : Poly(std::vector<cplx>(coeffs)) {}

  static Poly constant(cplx a) { return Poly{{a}}; }
  // x - a
  static Poly linear_root(cplx a) { return Poly{{-a, cplx{1.0}}}; }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cplx{0.0};
  }
  bool is_zero() const;
  double coeff_scale() const;  // max |c_k|

  cplx operator()(cplx z) const;  // Horner
  Poly derivative() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(cplx s) const;

  // Coefficients of p(t + center) in t (Taylor shift).
  Poly shifted(cplx center) const;
  // t^degree * p(1/t): coefficient reversal.
  Poly reversed() const;
  // Drop trailing coefficients below eps * coeff_scale().
  Poly trimmed(double eps = 0.0) const;

 private:
  std::vector<cplx> c_;
};

// All complex roots with multiplicity, via the companion matrix (Eigen) with
// one Newton polish per root. Throws NumericError on non-convergence.
std::vector<cplx> poly_roots(const Poly& p);

// ---------------------------------------------------------------------------
// Rational functions

struct RationalFn {
  Poly num;
  Poly den;

  RationalFn() : num(Poly::constant(0.0)), den(Poly::constant(1.0)) {}
  RationalFn(Poly n, Poly d);

  cplx operator()(cplx z) const { return num(z) / den(z); }
  RationalFn derivative() const;

  RationalFn operator+(const RationalFn& o) const;
  RationalFn operator-(const RationalFn& o) const;
  RationalFn operator*(const RationalFn& o) const;
  RationalFn operator*(cplx s) const { return {num * s, den}; }
};

// Laurent series of f about a finite center: coefficients of (z-center)^k for
// k = kmin .. kmin+count-1. Exact up to rounding (Taylor shift + series
// division); common vanishing of num and den at the center is cancelled.
std::vector<cplx> rational_series(const RationalFn& f, cplx center, int kmin,
                                  int count);

// Laurent series of f about infinity. f = sum_{k <= top_order} a_k z^k;
// returns a_k for k = top_order down to kmin (descending powers).
struct SeriesAtInfinity {
  int top_order;
  std::vector<cplx> coeffs;  // coeffs[j] multiplies z^(top_order - j)
  cplx at(int k) const {
    int j = top_order - k;
    return (j >= 0 && j < static_cast<int>(coeffs.size())) ? coeffs[j]
                                                           : cplx{0.0};
  }
};
SeriesAtInfinity rational_series_at_infinity(const RationalFn& f, int kmin);

// Coefficient of (z-p)^{-1}; 0 at regular points. Ill-conditioned inputs
// (num and den both vanishing deeply at p) raise NumericError.
cplx residue_at(const RationalFn& f, cplx p);
// Residue at infinity of f dz: -a_{-1} of the expansion about infinity.
cplx residue_at_infinity(const RationalFn& f);

// ---------------------------------------------------------------------------
// Contour quadrature

struct LaurentCoeffs {
  cplx center;
  int min_order;
  std::vector<cplx> coeffs;  // orders min_order .. min_order+len-1
  cplx at(int k) const {
    int j = k - min_order;
    return (j >= 0 && j < static_cast<int>(coeffs.size())) ? coeffs[j]
                                                           : cplx{0.0};
  }
};

// a_k = (1/2pi i) \oint f(z) (z-center)^{-k-1} dz on |z-center| = radius,
// N-node trapezoid rule with N doubled until successive estimates agree to
// cfg.contour_rel_tol. Throws NumericError at the node cap.
LaurentCoeffs contour_coeffs(const std::function<cplx(cplx)>& f, cplx center,
                             double radius, int order_min, int order_max,
                             const NumericConfig& cfg = {});

// Adaptive Gauss-Legendre along a polyline. Known poles closer than
// `exclusion` to any segment are rejected (NumericError).
cplx path_integral(const std::function<cplx(cplx)>& f,
                   const std::vector<cplx>& polyline, int gl_order = 16,
                   double abs_tol = 1e-10,
                   const std::vector<cplx>& poles = {},
                   double exclusion = 1e-6);

// ---------------------------------------------------------------------------
// Small utilities

// Bernoulli number B_n from the generating series w/(e^w - 1) recurrence.
double bernoulli(int n);

// Integer power by repeated multiplication (n may be negative).
cplx ipow(cplx base, int n);

}  // namespace hyperbps
