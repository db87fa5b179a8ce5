#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "radsup/pde.hpp"
#include "radsup/supersolution.hpp"

using namespace radsup;

namespace {

// relative weighted L2 distance under the plain r^{N-1} measure
double rel_l2(const RadialGrid& g, const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  Eigen::ArrayXd w = g.quad_weights();
  double num = ((x - y).square() * w).sum();
  double den = (y.square() * w).sum();
  return std::sqrt(num / den);
}

// exact self-similar oracle run of criterion-4 shape at requested resolution
double oracle_error(double dr, double dt) {
  const double alpha = 0.5, beta = 0.6;
  const int N = 3;
  RadialGrid g(0.1, 40.0, dr, N);
  CoefficientProfile prof{ProfileKind::PurePower, alpha, 1.0, N};

  Eigen::ArrayXd v0(g.size());
  for (int i = 0; i < g.size(); ++i) v0[i] = exact_self_similar(beta, alpha, N, g.r(i), 1.0);

  SolverConfig cfg;
  cfg.dt = dt;
  cfg.horizon = 1.0;  // runs from t=1 to t=2 in solution time
  cfg.scheme = ParabolicScheme::CrankNicolson;
  cfg.snapshots = {1.0};
  cfg.bc_inner = [&](double t) { return exact_self_similar(beta, alpha, N, 0.1, 1.0 + t); };
  cfg.bc_outer = [&](double t) { return exact_self_similar(beta, alpha, N, 40.0, 1.0 + t); };

  auto snaps = solve_parabolic(g, prof, cfg, v0);
  Eigen::ArrayXd exact(g.size());
  for (int i = 0; i < g.size(); ++i) exact[i] = exact_self_similar(beta, alpha, N, g.r(i), 2.0);
  return rel_l2(g, snaps.back().v, exact);
}

}  // namespace

TEST_CASE("radial laplacian on simple fields") {
  RadialGrid g(0.0, 2.0, 0.01, 3);
  Eigen::ArrayXd c = Eigen::ArrayXd::Constant(g.size(), 3.7);
  auto lc = laplacian_radial(g, c);
  for (int i = 1; i < g.size() - 1; ++i) CHECK(lc[i] == doctest::Approx(0.0));

  Eigen::ArrayXd f(g.size());
  for (int i = 0; i < g.size(); ++i) f[i] = g.r(i) * g.r(i);
  auto lf = laplacian_radial(g, f);
  for (int i = 0; i < g.size() - 1; ++i) {
    CHECK(lf[i] == doctest::Approx(6.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(laplacian_radial(g, Eigen::ArrayXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("radial laplacian consistent with the potential table") {
  RadialGrid g(0.0, 10.0, 1e-3, 3);
  CoefficientProfile p{ProfileKind::JapaneseBracket, 0.5, 1.0, 3};
  auto pt = build_radial_potential(p, g);
  auto lap = laplacian_radial(g, pt.A);
  for (int i = 1; i < g.size() - 1; i += 41) {
    CHECK(lap[i] == doctest::Approx(p.eval(g.r(i))).epsilon(1e-4));
  }
}

TEST_CASE("parabolic: zero stays zero, positivity under backward Euler") {
  RadialGrid g(0.0, 10.0, 0.05, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.5, 1.0, 3};
  SolverConfig cfg;
  cfg.dt = 0.02;
  cfg.horizon = 1.0;
  cfg.snapshots = {0.5, 1.0};

  auto z = solve_parabolic(g, prof, cfg, Eigen::ArrayXd::Zero(g.size()));
  CHECK(z.size() == 2);
  CHECK(z.back().v.abs().maxCoeff() == 0.0);

  cfg.scheme = ParabolicScheme::BackwardEuler;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::ArrayXd v0(g.size());
  for (int i = 0; i < g.size(); ++i) v0[i] = uni(rng);
  v0[g.size() - 1] = 0.0;
  auto snaps = solve_parabolic(g, prof, cfg, v0);
  for (auto& s : snaps) CHECK(s.v.minCoeff() >= -1e-14);
}

TEST_CASE("parabolic matches the exact self-similar solution") {
  double err = oracle_error(1e-2, 1e-2);
  CHECK(err <= 1e-3);
  double err2 = oracle_error(0.5e-2, 0.5e-2);
  CHECK(err / err2 >= 3.5);
  CHECK(err / err2 <= 4.5);
}

TEST_CASE("backward Euler is first order in time") {
  // fixed fine grid, vary dt only
  const double alpha = 0.5, beta = 0.6;
  const int N = 3;
  RadialGrid g(0.1, 30.0, 2.5e-3, N);
  CoefficientProfile prof{ProfileKind::PurePower, alpha, 1.0, N};
  Eigen::ArrayXd v0(g.size()), exact(g.size());
  for (int i = 0; i < g.size(); ++i) {
    v0[i] = exact_self_similar(beta, alpha, N, g.r(i), 1.0);
    exact[i] = exact_self_similar(beta, alpha, N, g.r(i), 2.0);
  }
  double errs[2];
  int k = 0;
  for (double dt : {4e-2, 2e-2}) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.horizon = 1.0;
    cfg.scheme = ParabolicScheme::BackwardEuler;
    cfg.snapshots = {1.0};
    cfg.bc_inner = [&](double t) { return exact_self_similar(beta, alpha, N, g.r0, 1.0 + t); };
    cfg.bc_outer = [&](double t) { return exact_self_similar(beta, alpha, N, g.rmax, 1.0 + t); };
    errs[k++] = rel_l2(g, solve_parabolic(g, prof, cfg, v0).back().v, exact);
  }
  CHECK(errs[0] / errs[1] >= 1.6);
  CHECK(errs[0] / errs[1] <= 2.6);
}

TEST_CASE("parabolic comparison against the supersolution") {
  RadialGrid g(0.0, 60.0, 0.05, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  auto pt = build_radial_potential(prof, g);
  auto p = make_supersolution_params(0.0, 3, 1.0, 0.1, 0.25, 10.0);

  Eigen::ArrayXd phi0 = eval_phi_field(p, pt, 0.0);
  // start strictly below the supersolution
  Eigen::ArrayXd v0 = 0.5 * phi0;
  v0[g.size() - 1] = 0.0;

  SolverConfig cfg;
  cfg.dt = 0.02;
  cfg.horizon = 20.0;
  cfg.snapshots = {1.0, 5.0, 20.0};
  auto snaps = solve_parabolic(g, prof, cfg, v0);
  for (auto& s : snaps) {
    Eigen::ArrayXd bound = eval_phi_field(p, pt, s.t);
    double tol = 1e-4 * std::pow(p.t0 + s.t, -p.beta);
    // ignore the outer truncation fringe where Dirichlet pins v to zero
    for (int i = 0; i < g.size() - 5; ++i) {
      CHECK(s.v[i] <= bound[i] + tol);
    }
  }
}

TEST_CASE("initial data shapes") {
  RadialGrid g(0.0, 20.0, 0.01, 3);
  InitialData pw{DataKind::PowerDecay, 0.0, 1.0, 1.0};
  auto v = initial_data(pw, g);
  CHECK(v[0] == doctest::Approx(1.0));
  int i3 = static_cast<int>(std::round((std::sqrt(3.0)) / g.dr));
  CHECK(v[i3] == doctest::Approx(0.25).epsilon(1e-3));

  InitialData gb{DataKind::GaussianBump, 0.0, 2.0, 0.0};
  auto b = initial_data(gb, g);
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b.minCoeff() >= 0.0);
  CHECK(g.integrate(b) > 0.0);
  // compact support
  int icut = static_cast<int>(std::round(2.5 / g.dr));
  CHECK(b[icut] == 0.0);

  InitialData an{DataKind::AnnularBump, 5.0, 1.0, 0.0};
  auto ab = initial_data(an, g);
  CHECK(ab[static_cast<int>(std::round(5.0 / g.dr))] == doctest::Approx(1.0));
  CHECK(ab[0] == 0.0);

  InitialData bad{DataKind::AnnularBump, 19.5, 1.0, 0.0};
  CHECK_THROWS_AS(initial_data(bad, g), std::invalid_argument);
}

TEST_CASE("wave: zero data, CFL guard, finite propagation") {
  RadialGrid g(0.0, 30.0, 0.05, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  SolverConfig cfg;
  cfg.dt = 0.035;
  cfg.horizon = 10.0;
  cfg.snapshots = {5.0, 10.0};

  Eigen::ArrayXd z = Eigen::ArrayXd::Zero(g.size());
  auto quiet = solve_damped_wave(g, prof, cfg, z, z);
  CHECK(quiet.snapshots.back().u.abs().maxCoeff() == 0.0);

  SolverConfig bad = cfg;
  bad.dt = 0.049;
  CHECK_THROWS_AS(solve_damped_wave(g, prof, bad, z, z), std::invalid_argument);

  InitialData gb{DataKind::GaussianBump, 0.0, 2.0, 0.0};
  auto u0 = initial_data(gb, g);
  auto run = solve_damped_wave(g, prof, cfg, u0, z);
  for (auto& s : run.snapshots) {
    double front = 2.0 + s.t + 15.0 * g.dr;
    for (int i = 0; i < g.size(); ++i) {
      if (g.r(i) > front) CHECK(std::abs(s.u[i]) <= 1e-12);
    }
  }
}

TEST_CASE("wave: staggered energy identity is exact, energy decays") {
  RadialGrid g(0.0, 40.0, 0.02, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  SolverConfig cfg;
  cfg.dt = 0.0025;
  cfg.horizon = 30.0;
  for (double t = 2.0; t <= 30.0; t += 2.0) cfg.snapshots.push_back(t);

  InitialData gb{DataKind::GaussianBump, 0.0, 2.0, 0.0};
  auto u0 = initial_data(gb, g);
  Eigen::ArrayXd u1 = Eigen::ArrayXd::Zero(g.size());
  auto run = solve_damped_wave(g, prof, cfg, u0, u1);

  CHECK(run.identity_defect_max <= 1e-10);
  double prev = run.energy0;
  for (auto& s : run.snapshots) {
    CHECK(s.energy <= prev * (1.0 + 1e-10));
    prev = s.energy;
    // physical energy balance: E + 2 iint a|ut|^2 = E(0) within discretization
    double defect = std::abs(s.energy + s.dissipation - run.energy0) / run.energy0;
    CHECK(defect <= 1e-4);
  }
}

TEST_CASE("tail mass monitor") {
  RadialGrid g(0.0, 100.0, 0.1, 3);
  CoefficientProfile prof{ProfileKind::JapaneseBracket, 0.0, 1.0, 3};
  InitialData gb{DataKind::GaussianBump, 0.0, 3.0, 0.0};
  auto v = initial_data(gb, g);
  CHECK(tail_mass_fraction(g, prof, v, 90.0) == 0.0);
  CHECK(tail_mass_fraction(g, prof, v, 1.0) > 0.0);
  CHECK(tail_mass_fraction(g, prof, v, 0.0) == doctest::Approx(1.0));
}
