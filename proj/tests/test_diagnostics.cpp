#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "radsup/diagnostics.hpp"

using namespace radsup;

namespace {

WaveState make_state(const RadialGrid& g, double t, const Eigen::ArrayXd& u,
                     const Eigen::ArrayXd& ut) {
  WaveState ws;
  ws.t = t;
  ws.u = u;
  ws.ut = ut;
  ws.energy = 0.0;
  ws.dissipation = 0.0;
  return ws;
}

}  // namespace

TEST_CASE("weighted L2 norm") {
  RadialGrid g(1.0, 100.0, 0.01, 3);
  CoefficientProfile prof{ProfileKind::PurePower, 0.0, 1.0, 3};
  CHECK(weighted_l2(Eigen::ArrayXd::Zero(g.size()), 0.0, prof, g) == 0.0);

  // f = <r>^{-2}, weight exponent 1: integrand <r>^{-4} <r>^2 r^2
  Eigen::ArrayXd f(g.size());
  for (int i = 0; i < g.size(); ++i) f[i] = std::pow(japanese_bracket(g.r(i)), -2.0);
  double val = weighted_l2(f, 1.0, prof, g);
  // Richardson-extrapolated trapezoid oracle on a twice-finer grid
  auto quad = [&](double dr) {
    double s = 0.0;
    int n = static_cast<int>(std::round(99.0 / dr));
    for (int i = 0; i <= n; ++i) {
      double r = 1.0 + i * dr;
      double v = std::pow(1.0 + r * r, -2.0) * (1.0 + r * r) * r * r;
      s += (i == 0 || i == n) ? 0.5 * v : v;
    }
    return s * dr;
  };
  double i1 = quad(5e-3), i2 = quad(2.5e-3);
  double oracle = std::sqrt(i2 + (i2 - i1) / 3.0);
  CHECK(val == doctest::Approx(oracle).epsilon(1e-6));

  InitialData gb{DataKind::AnnularBump, 30.0, 5.0, 0.0};
  auto bump = initial_data(gb, g);
  CHECK(weighted_l2(bump, 0.0, prof, g) > 0.0);
}

TEST_CASE("hardy constant arithmetic and admissibility") {
  RadialGrid g(0.0, 50.0, 0.02, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);
  auto w = random_bump_field(g, 1);
  auto res = hardy_check(w, 1.0, 0.1, p, pt, prof, 0.0);
  CHECK(res.constant ==
        doctest::Approx(4.0 * (2.0 / 3.0 + 0.1) / (0.9 * 0.9)).epsilon(1e-12));
  CHECK(res.constant == doctest::Approx(3.786).epsilon(1e-3));
  CHECK_THROWS_AS(hardy_check(w, -5.0, 0.1, p, pt, prof, 0.0),
                  std::invalid_argument);
}

TEST_CASE("hardy inequality holds on seeded random bumps") {
  struct Cfg { int N; double alpha, eps, lambda; };
  for (Cfg c : {Cfg{3, 0.0, 0.1, 1.0}, Cfg{3, 0.5, 0.1, 0.8}, Cfg{2, 0.3, 0.05, 0.5}}) {
    RadialGrid g(0.0, 60.0, 0.02, c.N);
    CoefficientProfile prof{ProfileKind::JapaneseBracket, c.alpha, 1.0, c.N};
    auto pt = build_radial_potential(prof, g);
    double sigma = 0.4 * (c.N - c.alpha);
    auto p = make_supersolution_params(c.alpha, c.N, sigma, c.eps, 0.25, 10.0);
    for (unsigned long seed = 0; seed < 100; ++seed) {
      auto w = random_bump_field(g, seed);
      for (double t : {0.0, 10.0, 100.0}) {
        auto res = hardy_check(w, c.lambda, c.eps, p, pt, prof, t);
        CHECK(res.lhs <= res.constant * res.rhs + 1e-8 * (res.lhs + res.rhs));
      }
    }
  }
}

TEST_CASE("delta-phi inequality reduces to integration by parts when beta=0") {
  RadialGrid g(0.0, 30.0, 0.01, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);
  p.beta = 0.0;  // Phi is identically 1
  auto u = random_bump_field(g, 7);
  auto [lhs, rhs] = delta_phi_check(u, p, pt, prof, 0.25, 0.0);

  Eigen::ArrayXd du = radial_gradient(g, u);
  double grad2 = (du.square() * g.quad_weights()).sum();
  CHECK(lhs == doctest::Approx(-grad2).epsilon(1e-3));
  CHECK(rhs == doctest::Approx(-(0.25 / 0.75) * grad2).epsilon(1e-3));
  CHECK(lhs <= rhs + 1e-6 * grad2);
}

TEST_CASE("delta-phi inequality with a real weight") {
  RadialGrid g(0.0, 40.0, 0.01, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.5, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.5, 3, 0.75, 0.1, 0.25, 10.0);
  for (unsigned long seed = 0; seed < 20; ++seed) {
    auto u = random_bump_field(g, seed);
    Eigen::ArrayXd du = radial_gradient(g, u);
    double scale = (du.square() * g.quad_weights()).sum() +
                   (u.square() * g.quad_weights()).sum();
    auto [lhs, rhs] = delta_phi_check(u, p, pt, prof, 0.25, 5.0);
    CHECK(lhs <= rhs + 1e-6 * scale);
  }
  CHECK_THROWS_AS(delta_phi_check(random_bump_field(g, 0), p, pt, prof, 0.7, 5.0),
                  std::invalid_argument);
}

TEST_CASE("rate fitting") {
  RateSeries s;
  for (int i = 0; i < 40; ++i) {
    double t = 10.0 * std::pow(1.2, i);
    s.t.push_back(t);
    s.value.push_back(std::pow(t, -0.5));
  }
  auto fit = fit_rate(s, 10.0, 1e5, false);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(fit.rsq == doctest::Approx(1.0));

  RateSeries c;
  for (int i = 0; i < 12; ++i) {
    c.t.push_back(5.0 + i);
    c.value.push_back(3.0);
  }
  CHECK(fit_rate(c, 1.0, 100.0, false).slope == doctest::Approx(0.0));

  // sqrt-log correction recovers a clean power from a corrected series
  RateSeries lg;
  for (int i = 0; i < 40; ++i) {
    double t = 10.0 * std::pow(1.2, i);
    lg.t.push_back(t);
    lg.value.push_back(std::pow(t, -1.5) * std::sqrt(std::log(2.0 + t)));
  }
  auto lfit = fit_rate(lg, 10.0, 1e5, true);
  CHECK(lfit.slope == doctest::Approx(-1.5).epsilon(1e-10));

  RateSeries bad;
  for (int i = 0; i < 10; ++i) {
    bad.t.push_back(1.0 + i);
    bad.value.push_back(i == 5 ? -1.0 : 1.0);
  }
  CHECK_THROWS_AS(fit_rate(bad, 0.5, 20.0, false), std::invalid_argument);
  RateSeries few;
  few.t = {1.0, 2.0};
  few.value = {1.0, 1.0};
  CHECK_THROWS_AS(fit_rate(few, 0.5, 3.0, false), std::invalid_argument);
}

TEST_CASE("diffusion comparison basics") {
  RadialGrid g(0.0, 20.0, 0.05, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  std::vector<WaveState> wave;
  std::vector<FieldState> para;
  for (double t : {1.0, 2.0, 3.0}) {
    auto u = random_bump_field(g, static_cast<unsigned long>(t));
    wave.push_back(make_state(g, t, u, Eigen::ArrayXd::Zero(g.size())));
    para.push_back({t, u});
  }
  auto series = diffusion_compare(wave, para, prof, g);
  for (double v : series.value) CHECK(v == 0.0);

  para.back().t = 5.0;
  CHECK_THROWS_AS(diffusion_compare(wave, para, prof, g), std::invalid_argument);
  para.pop_back();
  CHECK_THROWS_AS(diffusion_compare(wave, para, prof, g), std::invalid_argument);
}

TEST_CASE("energies: zero states, exponent arithmetic, coercivity") {
  RadialGrid g(0.0, 40.0, 0.02, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);
  EnergyConfig cfg;
  cfg.lambda = p.lambda;
  cfg.delta = p.delta;

  Eigen::ArrayXd z = Eigen::ArrayXd::Zero(g.size());
  auto zs = make_state(g, 1.0, z, z);
  CHECK(energy_e1(zs, cfg, p, pt, prof) == 0.0);
  CHECK(energy_e0(zs, cfg, p, pt, prof) == 0.0);
  CHECK(energy_e1_tilde(zs, cfg, p, pt, prof) == 0.0);
  CHECK(energy_ekj(zs, cfg, p, pt, prof) == 0.0);

  // alpha = 0: e1 weight is Psi^lambda, so e1 = e1_tilde/(t0+t)
  auto u = random_bump_field(g, 3);
  auto ut = random_bump_field(g, 4);
  auto ws = make_state(g, 2.0, u, ut);
  double e1 = energy_e1(ws, cfg, p, pt, prof);
  double e1t = energy_e1_tilde(ws, cfg, p, pt, prof);
  CHECK(e1 == doctest::Approx(e1t / (p.t0 + 2.0)).epsilon(1e-12));
  // (k,j) = (0,0) reduces to e1
  CHECK(energy_ekj(ws, cfg, p, pt, prof) == doctest::Approx(e1).epsilon(1e-12));

  // u with ut = 0 and positive bump: e0 keeps only the a u^2 term
  auto wu = make_state(g, 0.0, u.abs(), z);
  CHECK(energy_e0(wu, cfg, p, pt, prof) > 0.0);

  // coercivity of e1 + nu e0 on wave snapshots
  SolverConfig scfg;
  scfg.dt = 0.014;
  scfg.horizon = 10.0;
  scfg.snapshots = {1.0, 3.0, 6.0, 10.0};
  InitialData gb{DataKind::GaussianBump, 0.0, 2.0, 0.0};
  auto run = solve_damped_wave(g, prof, scfg, initial_data(gb, g), z);
  for (auto& s : run.snapshots) {
    double v = energy_e1(s, cfg, p, pt, prof) + cfg.nu * energy_e0(s, cfg, p, pt, prof);
    CHECK(v > 0.0);
  }

  EnergyConfig bad = cfg;
  bad.k = 1;
  bad.j = 4;
  CHECK_THROWS_AS(energy_ekj(ws, bad, p, pt, prof), std::invalid_argument);
}
