#pragma once

#include <utility>

// Kummer's confluent hypergeometric function M(b,c;s) on s >= 0, its
// derivatives and contiguous relations, and the derived decaying family
// phi_beta(s) = e^{-s} M(gamma - beta, gamma; s).
//
// All functions are pure; no caching, no shared state.

namespace radsup::specfun {

struct KummerParams {
  double b;  // first parameter
  double c;  // second parameter; must not be zero or a negative integer
};

struct PhiParams {
  double beta;       // decay exponent, >= 0
  double gamma_eps;  // gamma_eps > 0; sign guarantees require beta < gamma_eps
};

// M(b,c;s). Taylor series below the regime switch, leading asymptotic
// Gamma(c)/Gamma(b) s^{b-c} e^s (with 1/s corrections) above it.
// Throws std::invalid_argument for invalid c, std::range_error when e^s
// overflows a double.
double kummer_m(const KummerParams& p, double s);

// e^{-s} M(b,c;s), evaluated without forming e^s. Safe for arbitrarily
// large s.
double kummer_m_scaled(const KummerParams& p, double s);

// m-th derivative of M with respect to s, via
// M^{(m)}(b,c;s) = (b)_m/(c)_m M(b+m,c+m;s). m <= 4.
double kummer_m_derivative(const KummerParams& p, double s, int m);

// s M'' + (c-s) M' - b M; zero for the exact function, the magnitude is
// the evaluation diagnostic.
double kummer_ode_residual(const KummerParams& p, double s);

// Residuals of the two contiguous relations
//   s M = s M' + (c-b) M - (c-b) M(b-1,c;s)
//   c M' = c M - (c-b) M(b,c+1;s)
std::pair<double, double> contiguous_check(const KummerParams& p, double s);

// phi_beta(s) = e^{-s} M(gamma-beta, gamma; s). Strictly positive and
// comparable to (1+s)^{-beta} when 0 < beta < gamma_eps.
double phi_beta(const PhiParams& p, double s);

// (phi, phi', phi'') from the closed forms
//   phi'  = -(beta/gamma) e^{-s} M(gamma-beta, gamma+1; s)
//   phi'' = beta(beta+1)/(gamma(gamma+1)) e^{-s} M(gamma-beta, gamma+2; s).
struct PhiDerivs {
  double phi;
  double dphi;
  double d2phi;
};
PhiDerivs phi_beta_derivs(const PhiParams& p, double s);

// Gamma(c)/Gamma(b) via log-gamma; throws on poles.
double gamma_ratio(double c, double b);

}  // namespace radsup::specfun
