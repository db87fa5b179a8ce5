#include "radsup/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radsup::specfun {

namespace {

constexpr double kSeriesSwitch = 300.0;  // series is stable for all s >= 0; switch only to dodge overflow
constexpr double kExpOverflow = 700.0;
constexpr int kMaxSeriesTerms = 10000;

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

void validate(const KummerParams& p) {
  if (is_nonpositive_integer(p.c)) {
    throw std::invalid_argument("kummer_m: c = " + std::to_string(p.c) +
                                " is zero or a negative integer");
  }
}

// Taylor series sum_n (b)_n/(c)_n s^n/n!. All terms are eventually positive
// (s >= 0), so no catastrophic cancellation occurs on this domain.
double series_sum(double b, double c, double s) {
  double term = 1.0;
  double sum = 1.0;
  int small_streak = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    term *= (b + n) / (c + n) * s / (n + 1);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) {
      if (++small_streak >= 3) break;
    } else {
      small_streak = 0;
    }
    if (term == 0.0) break;  // b a nonpositive integer: series terminates
  }
  return sum;
}

// sum_k (c-b)_k (1-b)_k / (k! s^k), the correction factor of
// M(b,c;s) ~ Gamma(c)/Gamma(b) e^s s^{b-c}.
double asymptotic_factor(double b, double c, double s) {
  double term = 1.0;
  double sum = 1.0;
  double prev = std::abs(term);
  for (int k = 0; k < 24; ++k) {
    term *= (c - b + k) * (1.0 - b + k) / ((k + 1) * s);
    if (std::abs(term) > prev) break;  // divergent tail reached
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double gamma_ratio(double c, double b) {
  if (is_nonpositive_integer(b) || is_nonpositive_integer(c)) {
    throw std::invalid_argument("gamma_ratio: argument at a pole of Gamma");
  }
  auto sign_of_gamma = [](double x) {
    if (x > 0.0) return 1.0;
    // Gamma alternates sign on (-k-1,-k); negative on (-1,0).
    return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1.0 : -1.0;
  };
  double value = std::exp(std::lgamma(c) - std::lgamma(b));
  return value * sign_of_gamma(c) * sign_of_gamma(b);
}

double kummer_m(const KummerParams& p, double s) {
  validate(p);
  if (s < 0.0) throw std::invalid_argument("kummer_m: s must be >= 0");
  if (s <= kSeriesSwitch || is_nonpositive_integer(p.b)) {
    return series_sum(p.b, p.c, s);
  }
  if (s > kExpOverflow) {
    throw std::range_error(
        "kummer_m: e^s overflows at s = " + std::to_string(s) +
        " (asymptotic regime; use kummer_m_scaled)");
  }
  return gamma_ratio(p.c, p.b) * std::exp(s) * std::pow(s, p.b - p.c) *
         asymptotic_factor(p.b, p.c, s);
}

double kummer_m_scaled(const KummerParams& p, double s) {
  validate(p);
  if (s < 0.0) throw std::invalid_argument("kummer_m_scaled: s must be >= 0");
  if (s <= kSeriesSwitch || is_nonpositive_integer(p.b)) {
    return std::exp(-s) * series_sum(p.b, p.c, s);
  }
  return gamma_ratio(p.c, p.b) * std::pow(s, p.b - p.c) *
         asymptotic_factor(p.b, p.c, s);
}

double kummer_m_derivative(const KummerParams& p, double s, int m) {
  if (m < 0 || m > 4) {
    throw std::invalid_argument("kummer_m_derivative: order must be in [0,4]");
  }
  double factor = 1.0;
  for (int k = 0; k < m; ++k) factor *= (p.b + k) / (p.c + k);
  return factor * kummer_m({p.b + m, p.c + m}, s);
}

double kummer_ode_residual(const KummerParams& p, double s) {
  const double m0 = kummer_m(p, s);
  const double m1 = kummer_m_derivative(p, s, 1);
  const double m2 = kummer_m_derivative(p, s, 2);
  return s * m2 + (p.c - s) * m1 - p.b * m0;
}

std::pair<double, double> contiguous_check(const KummerParams& p, double s) {
  const double m0 = kummer_m(p, s);
  const double m1 = kummer_m_derivative(p, s, 1);
  const double m_down = kummer_m({p.b - 1.0, p.c}, s);
  const double m_cup = kummer_m({p.b, p.c + 1.0}, s);
  const double r1 = s * m0 - (s * m1 + (p.c - p.b) * m0 - (p.c - p.b) * m_down);
  const double r2 = p.c * m1 - (p.c * m0 - (p.c - p.b) * m_cup);
  return {r1, r2};
}

double phi_beta(const PhiParams& p, double s) {
  return kummer_m_scaled({p.gamma_eps - p.beta, p.gamma_eps}, s);
}

PhiDerivs phi_beta_derivs(const PhiParams& p, double s) {
  const double b = p.gamma_eps - p.beta;
  const double g = p.gamma_eps;
  PhiDerivs d;
  d.phi = kummer_m_scaled({b, g}, s);
  d.dphi = -(p.beta / g) * kummer_m_scaled({b, g + 1.0}, s);
  d.d2phi = p.beta * (p.beta + 1.0) / (g * (g + 1.0)) *
            kummer_m_scaled({b, g + 2.0}, s);
  return d;
}

}  // namespace radsup::specfun
