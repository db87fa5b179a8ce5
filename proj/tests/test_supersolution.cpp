#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "radsup/supersolution.hpp"

using namespace radsup;

namespace {

std::vector<double> log_times(double t0) {
  std::vector<double> ts;
  for (int k = 0; k <= 8; ++k) ts.push_back(t0 * std::pow(10.0, k / 4.0) - t0);
  return ts;
}

}  // namespace

TEST_CASE("parameter assembly") {
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);
  CHECK(p.beta == doctest::Approx(1.0));
  CHECK(p.lambda == doctest::Approx(0.5));
  CHECK(p.consts.gamma_tilde == doctest::Approx(1.0 / (2.0 / 3.0 + 0.1)));
  CHECK_THROWS_AS(make_supersolution_params(0.0, 3, 2.0, 0.1, 0.25, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_supersolution_params(0.0, 3, 1.0, 0.1, 0.6, 10.0),
                  std::invalid_argument);
}

TEST_CASE("psi and phi field basics") {
  RadialGrid g(0.0, 30.0, 0.01, 3);
  CoefficientProfile prof{ProfileKind::PurePower, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);

  CHECK(eval_psi(p, pt, 0.0, 0.0) == doctest::Approx(10.0));
  CHECK(eval_psi(p, pt, 0.0, 4.0) == doctest::Approx(14.0));
  CHECK(eval_psi(p, pt, 3.0, 0.0) == doctest::Approx(11.5));

  auto phi = eval_phi_field(p, pt, 0.0);
  CHECK(phi[0] == doctest::Approx(std::pow(10.0, -p.beta)).epsilon(1e-12));
  CHECK((phi > 0.0).all());
  // two-sided bound against Psi^{-beta}
  double lo = 1e300, hi = 0.0;
  for (double t : {0.0, 1.0, 10.0, 100.0}) {
    auto f = eval_phi_field(p, pt, t);
    for (int i = 0; i < g.size(); i += 11) {
      double q = f[i] * std::pow(eval_psi(p, pt, g.r(i), t), p.beta);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 1e3);
}

TEST_CASE("residual vanishes for the exact self-similar construction") {
  // eps = 0 and pure power: the bracket collapses to the Kummer equation
  RadialGrid g(0.0, 50.0, 0.02, 3);
  CoefficientProfile prof{ProfileKind::PurePower, 0.5, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  SupersolutionParams p;
  p.sigma = 0.45;
  p.beta = 2.0 * p.sigma / 1.5;
  p.delta = 0.25;
  p.lambda = 0.5 * p.beta;
  p.eps = 0.0;
  p.t0 = 1.0;
  p.consts = structural_constants(0.5, 3, 0.0);
  for (double t : {0.0, 1.0, 10.0}) {
    auto resid = supersolution_residual(p, pt, prof, t);
    for (int i = 1; i < g.size(); i += 17) {
      double a = prof.eval(g.r(i));
      double scale = a * std::pow(p.t0 + t, -p.beta - 1.0);
      CHECK(std::abs(resid[i]) <= 1e-10 * scale * (1.0 + pt.A[i] / (p.t0 + t)));
    }
  }
}

TEST_CASE("residual nonnegativity across parameter sweep") {
  for (auto [alpha, eps] : std::vector<std::pair<double, double>>{
           {0.0, 0.1}, {0.5, 0.1}, {0.3, 0.05}}) {
    RadialGrid g(0.0, 100.0, 0.05, 3);
    CoefficientProfile prof{ProfileKind::JapaneseBracket, alpha, 1.0, 3};
    auto pt = build_radial_potential(prof, g);
    auto consts = structural_constants(alpha, 3, eps);
    double sigma = 0.9 * consts.gamma * (2.0 - alpha) / 2.0;  // beta = 0.9 gamma
    auto p = make_supersolution_params(alpha, 3, sigma, eps, 0.25, 10.0);
    for (double t : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
      auto resid = supersolution_residual(p, pt, prof, t);
      auto a = prof.eval(g);
      for (int i = 0; i < g.size(); ++i) {
        double z = p.consts.gamma_tilde * pt.A[i] / (p.t0 + t);
        double scale = a[i] * std::pow(p.t0 + t, -p.beta - 1.0) * (1.0 + z);
        CHECK(resid[i] >= -1e-8 * scale);
      }
    }
  }
}

TEST_CASE("time derivative recurrence dPhi/dt = -beta Phi_{beta+1}") {
  RadialGrid g(0.0, 30.0, 0.02, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.5, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.5, 3, 0.75, 0.1, 0.25, 10.0);
  SupersolutionParams pn = p;
  pn.beta = p.beta + 1.0;
  for (double t : {0.0, 5.0, 50.0}) {
    double h = 1e-4 * (p.t0 + t);
    for (double r : {0.0, 1.0, 10.0, 25.0}) {
      double A = pt.value(r);
      double fd = (eval_phi_at(p, A, t + h) - eval_phi_at(p, A, t - h)) / (2 * h);
      double rec = -p.beta * eval_phi_at(pn, A, t);
      CHECK(fd == doctest::Approx(rec).epsilon(1e-6));
    }
  }
}

TEST_CASE("exact self-similar solution properties") {
  double alpha = 0.5, beta = 0.6;
  int N = 3;
  // scaling identity
  for (double s : {0.5, 2.0, 10.0}) {
    for (double r : {0.3, 1.0, 4.0}) {
      double lhs = exact_self_similar(beta, alpha, N, r, 1.7);
      double rhs = std::pow(s, beta) *
                   exact_self_similar(beta, alpha, N,
                                      std::pow(s, 1.0 / (2.0 - alpha)) * r,
                                      s * 1.7);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
  // dt = -beta * next member
  for (double r : {0.5, 2.0}) {
    double t = 2.0, h = 1e-5;
    double fd = (exact_self_similar(beta, alpha, N, r, t + h) -
                 exact_self_similar(beta, alpha, N, r, t - h)) /
                (2 * h);
    double rec = -beta * exact_self_similar(beta + 1.0, alpha, N, r, t);
    CHECK(fd == doctest::Approx(rec).epsilon(1e-7));
  }
  // sandwich against (t + r^{2-alpha}/(2-alpha)^2)^{-beta}
  double lo = 1e300, hi = 0.0;
  for (double t : {0.5, 1.0, 5.0, 20.0})
    for (double r = 0.0; r <= 20.0; r += 0.25) {
      double base = t + std::pow(r, 2.0 - alpha) / ((2.0 - alpha) * (2.0 - alpha));
      double q = exact_self_similar(beta, alpha, N, r, t) * std::pow(base, beta);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  CHECK(lo > 0.0);
  CHECK(std::isfinite(hi));
  CHECK_THROWS_AS(exact_self_similar(0.6, 0.5, 3, 1.0, 0.0), std::domain_error);
}

TEST_CASE("exact self-similar solves the pure-power heat equation") {
  // |x|^{-alpha} dt v = Delta v checked by finite differences in r and t
  double alpha = 0.5, beta = 0.6;
  int N = 3;
  double t = 1.5, h = 1e-4;
  for (double r : {0.4, 1.0, 3.0}) {
    auto v = [&](double rr, double tt) {
      return exact_self_similar(beta, alpha, N, rr, tt);
    };
    double vt = (v(r, t + h) - v(r, t - h)) / (2 * h);
    double lap = (v(r + h, t) - 2 * v(r, t) + v(r - h, t)) / (h * h) +
                 (N - 1) / r * (v(r + h, t) - v(r - h, t)) / (2 * h);
    double a = std::pow(r, -alpha);
    CHECK(a * vt == doctest::Approx(lap).epsilon(1e-5));
  }
}

TEST_CASE("modified 1-D weight") {
  RadialGrid g(1.0, 60.0, 0.02, 1);
  double alpha = 0.3;
  CoefficientProfile prof{ProfileKind::JapaneseBracket, alpha, 1.0, 1};
  auto pt = build_radial_potential(prof, g);
  auto consts = structural_constants(alpha, 1, 0.1);
  double sigma = 0.5 * consts.gamma * (2.0 - alpha) / 2.0;  // beta = 0.5 gamma_eps
  auto p = make_supersolution_params(alpha, 1, sigma, 0.1, 0.25, 10.0);

  // multiplier limits
  double base = eval_phi_at(p, pt.value(2.0), 0.0);
  CHECK(modified_phi_1d(p, pt, alpha, 2.0, 0.0) ==
        doctest::Approx((2.0 - std::pow(10.0, -2.0 * 0.7 / 1.7)) * base));
  double t_large = 1e9;
  double ratio = modified_phi_1d(p, pt, alpha, 2.0, t_large) /
                 eval_phi_at(p, pt.value(2.0), t_large);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-6));

  // strengthened residual inequality
  for (double t : {0.0, 1.0, 10.0, 100.0}) {
    auto margin = modified_residual_margin_1d(p, pt, prof, t);
    auto a = prof.eval(g);
    for (int i = 0; i < g.size(); ++i) {
      double scale = a[i] * std::pow(p.t0 + t, -p.beta - 1.0) *
                     (1.0 + p.consts.gamma_tilde * pt.A[i] / (p.t0 + t));
      CHECK(margin[i] >= -1e-8 * scale);
    }
  }
  RadialGrid g3(0.0, 10.0, 0.02, 3);
  auto pt3 = build_radial_potential(CoefficientProfile{ProfileKind::JapaneseBracket, 0.0, 1.0, 3}, g3);
  CHECK_THROWS_AS(modified_phi_1d(p, pt3, alpha, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("certificate for the main two-sided bound") {
  RadialGrid g(0.0, 100.0, 0.05, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);
  auto cert = theorem11_certificate(p, pt, prof, log_times(p.t0));
  CHECK(cert.passed);
  CHECK(cert.min_residual_margin >= -1e-8);
  CHECK(cert.min_initial_margin >= -1e-10);
  CHECK(cert.cD > 0.0);
  CHECK(cert.CD / cert.cD < 1e3);
  CHECK(cert.k_fit > 0.0);
  CHECK(cert.K_fit >= cert.k_fit);
  CHECK(cert.Ktilde >= 1.0);
}
