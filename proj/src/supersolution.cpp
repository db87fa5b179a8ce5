#include "radsup/supersolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radsup {

using specfun::PhiParams;
using specfun::phi_beta;
using specfun::phi_beta_derivs;

SupersolutionParams make_supersolution_params(double alpha, int N, double sigma,
                                              double eps, double delta,
                                              double t0) {
  if (sigma <= 0.0 || sigma >= (N - alpha) / 2.0) {
    throw std::invalid_argument("make_supersolution_params: need 0 < sigma < (N-alpha)/2");
  }
  if (delta <= 0.0 || delta >= 0.5 || t0 < 1.0) {
    throw std::invalid_argument("make_supersolution_params: need delta in (0,1/2), t0 >= 1");
  }
  SupersolutionParams p;
  p.sigma = sigma;
  p.beta = 2.0 * sigma / (2.0 - alpha);
  p.delta = delta;
  p.lambda = (1.0 - 2.0 * delta) * p.beta;
  p.eps = eps;
  p.t0 = t0;
  p.consts = structural_constants(alpha, N, eps);
  return p;
}

double eval_psi(const SupersolutionParams& p, const PotentialTable& pt,
                double r, double t) {
  return p.t0 + t + pt.value(r);
}

double eval_phi_at(const SupersolutionParams& p, double A_value, double t) {
  double z = p.consts.gamma_tilde * A_value / (p.t0 + t);
  return std::pow(p.t0 + t, -p.beta) *
         phi_beta({p.beta, p.consts.gamma}, z);
}

Eigen::ArrayXd eval_phi_field(const SupersolutionParams& p,
                              const PotentialTable& pt, double t) {
  const int n = pt.grid.size();
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) out[i] = eval_phi_at(p, pt.A[i], t);
  return out;
}

namespace {

// the bracket of the residual identity; residual = -a (t0+t)^{-beta-1} * bracket
double residual_bracket(const SupersolutionParams& p, double z, double ratio_a1,
                        double ratio_a3) {
  auto d = phi_beta_derivs({p.beta, p.consts.gamma}, z);
  const double g = p.consts.gamma_tilde;
  return p.beta * d.phi + z * d.dphi + g * ratio_a1 * d.dphi +
         g * ratio_a3 * z * d.d2phi;
}

}  // namespace

Eigen::ArrayXd supersolution_residual(const SupersolutionParams& p,
                                      const PotentialTable& pt,
                                      const CoefficientProfile& profile,
                                      double t) {
  const RadialGrid& g = pt.grid;
  const int n = g.size();
  Eigen::ArrayXd out(n);
  const double pref = std::pow(p.t0 + t, -p.beta - 1.0);
  for (int i = 0; i < n; ++i) {
    double r = g.r(i);
    double a = (r > 0.0 || profile.kind != ProfileKind::PurePower)
                   ? profile.eval(r)
                   : profile.eval(g.dr);  // singular point: a cancels in the margin anyway
    double z = p.consts.gamma_tilde * pt.A[i] / (p.t0 + t);
    double r1 = pt.laplA[i] / a;
    double r3 = pt.A[i] > 0.0
                    ? pt.Aprime[i] * pt.Aprime[i] / (a * pt.A[i])
                    : 2.0 / g.dim;  // r -> 0 limit for regular profiles
    out[i] = -a * pref * residual_bracket(p, z, r1, r3);
  }
  return out;
}

Eigen::ArrayXd supersolution_laplacian(const SupersolutionParams& p,
                                       const PotentialTable& pt,
                                       const CoefficientProfile& profile,
                                       double t) {
  const RadialGrid& g = pt.grid;
  const int n = g.size();
  Eigen::ArrayXd out(n);
  const double pref = std::pow(p.t0 + t, -p.beta - 1.0);
  const double gt = p.consts.gamma_tilde;
  for (int i = 0; i < n; ++i) {
    double r = g.r(i);
    double a = (r > 0.0 || profile.kind != ProfileKind::PurePower)
                   ? profile.eval(r)
                   : profile.eval(g.dr);
    double z = gt * pt.A[i] / (p.t0 + t);
    auto d = phi_beta_derivs({p.beta, p.consts.gamma}, z);
    double r1 = pt.laplA[i] / a;
    double r3 = pt.A[i] > 0.0 ? pt.Aprime[i] * pt.Aprime[i] / (a * pt.A[i])
                              : 2.0 / g.dim;
    out[i] = a * pref * (gt * r1 * d.dphi + gt * r3 * z * d.d2phi);
  }
  return out;
}

double exact_self_similar(double beta, double alpha, int N, double r, double t) {
  if (t <= 0.0) throw std::domain_error("exact_self_similar: need t > 0");
  const double gamma0 = (N - alpha) / (2.0 - alpha);
  const double xi = std::pow(r, 2.0 - alpha) / ((2.0 - alpha) * (2.0 - alpha) * t);
  return std::pow(t, -beta) * phi_beta({beta, gamma0}, xi);
}

double modified_phi_1d(const SupersolutionParams& p, const PotentialTable& pt,
                       double alpha, double r, double t) {
  if (pt.grid.dim != 1) throw std::invalid_argument("modified_phi_1d: requires N = 1");
  const double kappa = 2.0 * (1.0 - alpha) / (2.0 - alpha);
  const double mult = 2.0 - std::pow(p.t0 + t, -kappa);
  double z = p.consts.gamma_tilde * pt.value(r) / (p.t0 + t);
  return mult * std::pow(p.t0 + t, -p.beta) * phi_beta({p.beta, p.consts.gamma}, z);
}

Eigen::ArrayXd modified_residual_margin_1d(const SupersolutionParams& p,
                                           const PotentialTable& pt,
                                           const CoefficientProfile& profile,
                                           double t) {
  if (pt.grid.dim != 1) {
    throw std::invalid_argument("modified_residual_margin_1d: requires N = 1");
  }
  const double alpha = profile.alpha;
  const double kappa = 2.0 * (1.0 - alpha) / (2.0 - alpha);
  const double mult = 2.0 - std::pow(p.t0 + t, -kappa);
  const double dmult = kappa * std::pow(p.t0 + t, -kappa - 1.0);

  Eigen::ArrayXd base = supersolution_residual(p, pt, profile, t);
  Eigen::ArrayXd phi = eval_phi_field(p, pt, t);
  Eigen::ArrayXd a = profile.eval(pt.grid);
  // residual of the modified weight minus its claimed lower bound
  Eigen::ArrayXd resid = mult * base + a * dmult * phi;
  double rate = (1.0 - alpha) / (2.0 - alpha) *
                std::pow(p.t0 + t, -2.0 + alpha / (2.0 - alpha));
  return resid - rate * a * mult * phi;
}

Certificate theorem11_certificate(const SupersolutionParams& p,
                                  const PotentialTable& pt,
                                  const CoefficientProfile& profile,
                                  const std::vector<double>& time_samples) {
  const RadialGrid& g = pt.grid;
  const int n = g.size();
  const double alpha = profile.alpha;
  Certificate cert;
  cert.passed = true;

  // sandwich constants of phi on a dense sample of z
  cert.k_fit = 1e300;
  cert.K_fit = 0.0;
  for (double z = 0.0; z <= 200.0; z += 0.05) {
    double q = phi_beta({p.beta, p.consts.gamma}, z) * std::pow(1.0 + z, p.beta);
    cert.k_fit = std::min(cert.k_fit, q);
    cert.K_fit = std::max(cert.K_fit, q);
  }

  // envelope of A against <r>^{2-alpha}
  double C_env = 0.0;
  for (int i = 0; i < n; ++i) {
    C_env = std::max(C_env, pt.A[i] / std::pow(japanese_bracket(g.r(i)), 2.0 - alpha));
  }
  cert.Ktilde = std::pow(p.t0 + p.consts.gamma_tilde * C_env, p.beta) / cert.k_fit;

  cert.min_initial_margin = 1e300;
  cert.cD = 1e300;
  cert.CD = 0.0;
  cert.CprimeD = 0.0;
  cert.min_residual_margin = 1e300;
  cert.witness_r = g.r0;
  cert.witness_t = 0.0;

  SupersolutionParams pnext = p;  // for dt Phi = -beta Phi_{beta+1}
  pnext.beta = p.beta + 1.0;

  for (double t : time_samples) {
    Eigen::ArrayXd resid = supersolution_residual(p, pt, profile, t);
    Eigen::ArrayXd phi = eval_phi_field(p, pt, t);
    Eigen::ArrayXd phinext = eval_phi_field(pnext, pt, t);
    for (int i = 0; i < n; ++i) {
      double r = g.r(i);
      double a = (r > 0.0 || profile.kind != ProfileKind::PurePower)
                     ? profile.eval(r)
                     : profile.eval(g.dr);
      double z = p.consts.gamma_tilde * pt.A[i] / (p.t0 + t);
      double scale = a * std::pow(p.t0 + t, -p.beta - 1.0) * (1.0 + z);
      double margin = resid[i] / scale;
      if (margin < cert.min_residual_margin) {
        cert.min_residual_margin = margin;
        cert.witness_r = r;
        cert.witness_t = t;
      }
      double env = 1.0 + t + std::pow(japanese_bracket(r), 2.0 - alpha);
      double ubar = cert.Ktilde * phi[i];
      cert.cD = std::min(cert.cD, ubar * std::pow(env, p.beta));
      cert.CD = std::max(cert.CD, ubar * std::pow(env, p.beta));
      double dtubar = cert.Ktilde * p.beta * phinext[i];
      cert.CprimeD = std::max(cert.CprimeD, dtubar * std::pow(env, p.beta + 1.0));
      if (t == time_samples.front()) {
        double w = std::pow(japanese_bracket(r), -2.0 * p.sigma);
        double u0 = cert.Ktilde * eval_phi_at(p, pt.A[i], 0.0);
        cert.min_initial_margin =
            std::min(cert.min_initial_margin, (u0 - w) / w);
      }
    }
  }
  // a spread below 10^3 is the documented two-sided-bound sanity threshold
  if (cert.min_residual_margin < -1e-8) cert.passed = false;
  if (cert.min_initial_margin < -1e-10) cert.passed = false;
  if (!(cert.cD > 0.0) || !(cert.CD / cert.cD < 1e3)) cert.passed = false;
  if (!(cert.CprimeD > 0.0) || !std::isfinite(cert.CprimeD)) cert.passed = false;
  return cert;
}

}  // namespace radsup
