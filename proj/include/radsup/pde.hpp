#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "radsup/grid.hpp"
#include "radsup/potential.hpp"

// Radial finite-difference solvers:
//   parabolic   a(r) dt v = Delta v   (backward Euler / Crank-Nicolson)
//   damped wave dtt u - Delta u + a(r) dt u = 0   (semi-implicit leapfrog)
// Dirichlet data at both ends; when r0 = 0 the origin is a symmetry point
// handled by the regularized stencil 2N (f1 - f0)/dr^2, not a boundary.

namespace radsup {

struct FieldState {
  double t;
  Eigen::ArrayXd v;
};

struct WaveState {
  double t;
  Eigen::ArrayXd u;
  Eigen::ArrayXd ut;          // centered (u^{n+1} - u^{n-1})/(2 dt)
  double energy;              // |ut|^2 + |grad u|^2 under quadrature
  double dissipation;         // 2 int_0^t int a |ut|^2 accumulated so far
};

enum class ParabolicScheme { BackwardEuler, CrankNicolson };

struct SolverConfig {
  double dt = 1e-2;
  double horizon = 1.0;
  ParabolicScheme scheme = ParabolicScheme::CrankNicolson;
  std::vector<double> snapshots;     // must be increasing, within [0, horizon]
  double dt_ramp = 0.0;              // if > 0, dt_n = max(dt, dt_ramp * t)
  // optional time-dependent Dirichlet values; default zero. The inner one is
  // ignored on whole-space grids (r0 = 0).
  std::function<double(double)> bc_inner;
  std::function<double(double)> bc_outer;
};

// central stencil f'' + (N-1) f'/r, second order; exact on r^2 for N >= 2
Eigen::ArrayXd laplacian_radial(const RadialGrid& grid, const Eigen::ArrayXd& f);

std::vector<FieldState> solve_parabolic(const RadialGrid& grid,
                                        const CoefficientProfile& profile,
                                        const SolverConfig& cfg,
                                        const Eigen::ArrayXd& v0);

struct WaveRun {
  std::vector<WaveState> snapshots;
  double energy0;              // |u1|^2 + |grad u0|^2
  double identity_defect_max;  // staggered discrete energy identity, ~roundoff
};

WaveRun solve_damped_wave(const RadialGrid& grid,
                          const CoefficientProfile& profile,
                          const SolverConfig& cfg, const Eigen::ArrayXd& u0,
                          const Eigen::ArrayXd& u1);

enum class DataKind { GaussianBump, AnnularBump, PowerDecay };

struct InitialData {
  DataKind kind = DataKind::GaussianBump;
  double center = 0.0;   // bump center radius
  double width = 1.0;    // bump half-width
  double sigma = 1.0;    // power-decay exponent: <r>^{-2 sigma}
};

Eigen::ArrayXd initial_data(const InitialData& d, const RadialGrid& grid);

// fraction of the weighted mass int |v| a r^{N-1} dr beyond radius cut
double tail_mass_fraction(const RadialGrid& grid,
                          const CoefficientProfile& profile,
                          const Eigen::ArrayXd& v, double cut);

}  // namespace radsup
