#pragma once

#include <Eigen/Dense>
#include <vector>

#include "radsup/potential.hpp"
#include "radsup/specfun.hpp"

// Decaying supersolutions of a(x) dt u = Delta u built from the Kummer
// family: Phi(r,t) = (t0+t)^{-beta} phi(z) with z = gamma_tilde A(r)/(t0+t).
// The residual a dt Phi - Delta Phi is assembled from the analytic bracket
//   -a (t0+t)^{-beta-1} [ beta phi + z phi' + g (lapl A/a) phi'
//                          + g ((A')^2/(a A)) z phi'' ],  g = gamma_tilde,
// never by differencing Phi, so grid error enters only through the table.

namespace radsup {

struct SupersolutionParams {
  double beta;
  double sigma;
  double lambda;
  double delta;
  double eps;
  double t0;
  StructuralConstants consts;
};

// beta = 2 sigma/(2-alpha), lambda = (1-2 delta) beta
SupersolutionParams make_supersolution_params(double alpha, int N, double sigma,
                                              double eps, double delta,
                                              double t0);

double eval_psi(const SupersolutionParams& p, const PotentialTable& pt,
                double r, double t);

Eigen::ArrayXd eval_phi_field(const SupersolutionParams& p,
                              const PotentialTable& pt, double t);

double eval_phi_at(const SupersolutionParams& p, double A_value, double t);

// a dt Phi - Delta Phi at every node
Eigen::ArrayXd supersolution_residual(const SupersolutionParams& p,
                                      const PotentialTable& pt,
                                      const CoefficientProfile& profile,
                                      double t);

// Delta Phi alone (same analytic bracket, parabolic part only)
Eigen::ArrayXd supersolution_laplacian(const SupersolutionParams& p,
                                       const PotentialTable& pt,
                                       const CoefficientProfile& profile,
                                       double t);

// exact solution of |x|^{-alpha} dt v = Delta v for the pure power profile
double exact_self_similar(double beta, double alpha, int N, double r, double t);

// N = 1 modified weight (2 - (t0+t)^{-2(1-alpha)/(2-alpha)}) Phi and its
// strengthened residual lower bound
double modified_phi_1d(const SupersolutionParams& p, const PotentialTable& pt,
                       double alpha, double r, double t);
Eigen::ArrayXd modified_residual_margin_1d(const SupersolutionParams& p,
                                           const PotentialTable& pt,
                                           const CoefficientProfile& profile,
                                           double t);

struct Certificate {
  double k_fit, K_fit;      // sandwich constants of phi against (1+s)^{-beta}
  double Ktilde;            // normalization putting Ubar(x,0) above <x>^{-2 sigma}
  double cD, CD;            // fitted two-sided constants for Ubar
  double CprimeD;           // fitted constant of the time-derivative bound
  double min_residual_margin;   // min residual / scale, want >= -1e-8
  double min_initial_margin;    // min (Ubar(x,0) - <x>^{-2 sigma}) / <x>^{-2 sigma}
  double witness_r, witness_t;  // location of the worst residual margin
  bool passed;
};

Certificate theorem11_certificate(const SupersolutionParams& p,
                                  const PotentialTable& pt,
                                  const CoefficientProfile& profile,
                                  const std::vector<double>& time_samples);

}  // namespace radsup
