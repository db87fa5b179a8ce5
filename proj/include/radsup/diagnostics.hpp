#pragma once

#include <Eigen/Dense>
#include <vector>

#include "radsup/pde.hpp"
#include "radsup/supersolution.hpp"

// Weighted norms and energies for the damped wave diagnostics, the Hardy-type
// inequality with its explicit constant, log-log rate fitting, and the
// wave-vs-parabolic comparison series.

namespace radsup {

struct EnergyConfig {
  double lambda = 0.5;
  double delta = 0.25;
  int k = 0;
  int j = 0;
  double nu = 1e-2;
};

// ( int |f|^2 <r>^{2 w} a(r) r^{N-1} dr )^{1/2}
double weighted_l2(const Eigen::ArrayXd& f, double weight_exponent,
                   const CoefficientProfile& profile, const RadialGrid& grid);

// central-difference radial gradient, one-sided at the ends
Eigen::ArrayXd radial_gradient(const RadialGrid& grid, const Eigen::ArrayXd& f);

// int (|grad u|^2 + |ut|^2) Psi^{lambda + alpha/(2-alpha)} dx
double energy_e1(const WaveState& ws, const EnergyConfig& cfg,
                 const SupersolutionParams& p, const PotentialTable& pt,
                 const CoefficientProfile& profile);

// int (2 u ut + a u^2) Phi^{-1+2 delta} dx (signed)
double energy_e0(const WaveState& ws, const EnergyConfig& cfg,
                 const SupersolutionParams& p, const PotentialTable& pt,
                 const CoefficientProfile& profile);

// (t0+t) int (|grad u|^2 + |ut|^2) Psi^lambda dx
double energy_e1_tilde(const WaveState& ws, const EnergyConfig& cfg,
                       const SupersolutionParams& p, const PotentialTable& pt,
                       const CoefficientProfile& profile);

// (t0+t)^j int (|grad w|^2 + |wt|^2) Psi^{lambda + (2k+1-j) alpha/(2-alpha)} dx
// where ws carries w = the k-th time derivative of u
double energy_ekj(const WaveState& ws, const EnergyConfig& cfg,
                  const SupersolutionParams& p, const PotentialTable& pt,
                  const CoefficientProfile& profile);

struct HardyResult {
  double lhs;       // int |w|^2 a Psi^{lambda-1} dx
  double rhs;       // int |grad w|^2 Psi^lambda dx
  double constant;  // 4 ((2-a)/(N-a)+eps) min{1-eps, 1-eps+(lambda-1)((2-a)/(N-a)+eps)}^{-2}
};

HardyResult hardy_check(const Eigen::ArrayXd& w, double lambda_exp, double eps,
                        const SupersolutionParams& p, const PotentialTable& pt,
                        const CoefficientProfile& profile, double t);

// both sides of int u (Delta u) Phi^{-1+2d}
//   <= -(d/(1-d)) int |grad u|^2 Phi^{-1+2d}
//      + ((1-2d)/2) int u^2 (Delta Phi) Phi^{-2+2d}
std::pair<double, double> delta_phi_check(const Eigen::ArrayXd& u,
                                          const SupersolutionParams& p,
                                          const PotentialTable& pt,
                                          const CoefficientProfile& profile,
                                          double delta, double t);

struct RateSeries {
  std::vector<double> t;
  std::vector<double> value;
};

struct RateFit {
  double slope;
  double intercept;
  double rsq;
  bool log_corrected;
};

// least squares of log(value) vs log(t) on [tmin, tmax]; if log_corrected the
// values are divided by sqrt(log(2+t)) first
RateFit fit_rate(const RateSeries& series, double tmin, double tmax,
                 bool log_corrected);

// || sqrt(a) (u - v) ||_{L^2} at shared snapshot times
RateSeries diffusion_compare(const std::vector<WaveState>& wave,
                             const std::vector<FieldState>& parabolic,
                             const CoefficientProfile& profile,
                             const RadialGrid& grid);

// seeded sum of a few random interior mollifier bumps, zero at both ends
Eigen::ArrayXd random_bump_field(const RadialGrid& grid, unsigned long seed);

}  // namespace radsup
