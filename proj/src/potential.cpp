#include "radsup/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace radsup {

namespace {

double interp_linear(const Eigen::ArrayXd& y, double x0, double dx, double x) {
  const int n = static_cast<int>(y.size());
  double u = (x - x0) / dx;
  if (u <= 0.0) return y[0];
  if (u >= n - 1) return y[n - 1];
  int i = static_cast<int>(u);
  double f = u - i;
  return (1.0 - f) * y[i] + f * y[i + 1];
}

}  // namespace

double CoefficientProfile::eval(double r) const {
  switch (kind) {
    case ProfileKind::PurePower:
      if (r <= 0.0) {
        if (alpha > 0.0) throw std::domain_error("pure-power profile singular at r = 0");
        if (alpha < 0.0) return 0.0;
        return a0;
      }
      return a0 * std::pow(r, -alpha);
    case ProfileKind::JapaneseBracket:
      return a0 * std::pow(japanese_bracket(r), -alpha);
    case ProfileKind::Tabulated:
      if (table.size() < 2) throw std::invalid_argument("tabulated profile has no table");
      return interp_linear(table, table_r0, table_dr, r);
  }
  throw std::logic_error("unreachable");
}

Eigen::ArrayXd CoefficientProfile::eval(const RadialGrid& grid) const {
  const int n = grid.size();
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) out[i] = eval(grid.r(i));
  return out;
}

double closed_form_potential(double alpha, double a0, int N, double r) {
  if (alpha >= std::min(2.0, static_cast<double>(N))) {
    throw std::invalid_argument("closed_form_potential: need alpha < min(2, N)");
  }
  return a0 * std::pow(r, 2.0 - alpha) / ((2.0 - alpha) * (N - alpha));
}

PotentialTable closed_form_table(double alpha, double a0, const RadialGrid& grid) {
  const int n = grid.size();
  const int N = grid.dim;
  PotentialTable pt;
  pt.grid = grid;
  pt.A.resize(n);
  pt.Aprime.resize(n);
  pt.laplA.resize(n);
  for (int i = 0; i < n; ++i) {
    double r = grid.r(i);
    pt.A[i] = closed_form_potential(alpha, a0, N, r);
    pt.Aprime[i] = r > 0.0 ? a0 * std::pow(r, 1.0 - alpha) / (N - alpha) : (alpha < 1.0 ? 0.0 : 0.0);
    pt.laplA[i] = r > 0.0 ? a0 * std::pow(r, -alpha) : (alpha > 0.0 ? std::numeric_limits<double>::infinity() : a0);
  }
  return pt;
}

PotentialTable build_radial_potential(const CoefficientProfile& profile,
                                      const RadialGrid& grid) {
  const int N = grid.dim;
  if (profile.alpha >= N) {
    throw std::invalid_argument("build_radial_potential: alpha >= N, inner integral diverges");
  }
  if (profile.a0 <= 0.0) {
    throw std::invalid_argument("build_radial_potential: need a0 > 0");
  }

  // For pure powers every integrand is an exact power of r, so both layers of
  // the quadrature collapse to the closed form; anything else gets composite
  // trapezoid on an integration path that starts at 0 even when the grid does
  // not (A is anchored by A(0) = 0).
  if (profile.kind == ProfileKind::PurePower) {
    PotentialTable pt = closed_form_table(profile.alpha, profile.a0, grid);
    if (grid.r0 == 0.0 && profile.alpha > 0.0) pt.laplA[0] = pt.laplA[1];
    return pt;
  }

  std::vector<double> s;  // integration nodes: [0, r0] filler, then the grid
  if (grid.r0 > 0.0) {
    int m = std::max(1, static_cast<int>(std::llround(grid.r0 / grid.dr)));
    for (int j = 0; j < m; ++j) s.push_back(grid.r0 * j / m);
  }
  const int n = grid.size();
  for (int i = 0; i < n; ++i) s.push_back(grid.r(i));
  const int total = static_cast<int>(s.size());
  const int offset = total - n;

  std::vector<double> inner(total), Afull(total);
  inner[0] = 0.0;
  Afull[0] = 0.0;
  for (int j = 1; j < total; ++j) {
    double h = s[j] - s[j - 1];
    // product rule exact for tau^{N-1} times a linear interpolant of a;
    // plain trapezoid is 50% off in the first cell where the weight vanishes
    double m0 = (std::pow(s[j], N) - std::pow(s[j - 1], N)) / N;
    double m1 = (std::pow(s[j], N + 1) - std::pow(s[j - 1], N + 1)) / (N + 1);
    double w1 = (m1 - s[j - 1] * m0) / h;
    double w0 = m0 - w1;
    inner[j] = inner[j - 1] + w0 * profile.eval(s[j - 1]) + w1 * profile.eval(s[j]);
    auto f_out = [&](int idx) {
      return s[idx] > 0.0 ? std::pow(s[idx], 1 - N) * inner[idx] : 0.0;
    };
    Afull[j] = Afull[j - 1] + 0.5 * h * (f_out(j - 1) + f_out(j));
  }

  PotentialTable pt;
  pt.grid = grid;
  pt.A.resize(n);
  pt.Aprime.resize(n);
  pt.laplA.resize(n);
  for (int i = 0; i < n; ++i) {
    int j = offset + i;
    pt.A[i] = Afull[j];
    pt.Aprime[i] = s[j] > 0.0 ? std::pow(s[j], 1 - N) * inner[j] : 0.0;
  }
  // honest discrete Laplacian of the built A; this is the quadrature check
  const double dr = grid.dr;
  for (int i = 1; i < n - 1; ++i) {
    double r = grid.r(i);
    pt.laplA[i] = (pt.A[i + 1] - 2.0 * pt.A[i] + pt.A[i - 1]) / (dr * dr) +
                  (N - 1) * (pt.A[i + 1] - pt.A[i - 1]) / (2.0 * dr * r);
  }
  if (grid.r0 == 0.0) {
    pt.laplA[0] = 2.0 * N * (pt.A[1] - pt.A[0]) / (dr * dr);
  } else {
    pt.laplA[0] = pt.laplA[1];
  }
  pt.laplA[n - 1] = pt.laplA[n - 2];
  return pt;
}

double PotentialTable::value(double r) const {
  return interp_linear(A, grid.r0, grid.dr, r);
}

double PotentialTable::derivative(double r) const {
  return interp_linear(Aprime, grid.r0, grid.dr, r);
}

PotentialReport verify_potential(const PotentialTable& pt,
                                 const CoefficientProfile& profile, double eps) {
  const RadialGrid& g = pt.grid;
  const int n = g.size();
  const double bound_a3 = (2.0 - profile.alpha) / (g.dim - profile.alpha) + eps;

  PotentialReport rep;
  rep.a1_min_ratio = 1e300;
  rep.a1_max_ratio = -1e300;
  rep.a3_max_ratio = 0.0;
  rep.c_fit = 1e300;
  rep.C_fit = 0.0;

  for (int i = 0; i < n; ++i) {
    double r = g.r(i);
    if (r <= 0.0) continue;  // a may be singular and A vanishes there
    double a = profile.eval(r);
    double ratio1 = pt.laplA[i] / a;
    rep.a1_min_ratio = std::min(rep.a1_min_ratio, ratio1);
    rep.a1_max_ratio = std::max(rep.a1_max_ratio, ratio1);
    if (pt.A[i] > 0.0) {
      rep.a3_max_ratio = std::max(rep.a3_max_ratio,
                                  pt.Aprime[i] * pt.Aprime[i] / (a * pt.A[i]));
    }
    double env = pt.A[i] / std::pow(japanese_bracket(r), 2.0 - profile.alpha);
    rep.c_fit = std::min(rep.c_fit, env);
    rep.C_fit = std::max(rep.C_fit, env);
  }
  const double slack = 1e-9;
  rep.a1_pass = rep.a1_min_ratio >= 1.0 - eps - slack &&
                rep.a1_max_ratio <= 1.0 + eps + slack;
  rep.a2_pass = rep.c_fit > 0.0;
  rep.a3_pass = rep.a3_max_ratio <= bound_a3 + slack;
  return rep;
}

StructuralConstants structural_constants(double alpha, int N, double eps) {
  if (alpha >= std::min(2.0, static_cast<double>(N)) || eps < 0.0 || eps >= 1.0) {
    throw std::invalid_argument("structural_constants: need alpha < min(2,N), eps in [0,1)");
  }
  StructuralConstants c;
  c.epsilon = eps;
  c.gamma_tilde = 1.0 / ((2.0 - alpha) / (N - alpha) + eps);
  c.gamma = (1.0 - eps) * c.gamma_tilde;
  return c;
}

}  // namespace radsup
