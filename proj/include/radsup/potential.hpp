#pragma once

#include <Eigen/Dense>

#include "radsup/grid.hpp"

// Radial potential A solving Delta A = a(r) with A(0) = A'(0) = 0, for
// diffusion coefficients a(r) that decay like a0 r^{-alpha} at infinity.
// Verifies the three structural inequalities the weighted estimates rest on:
//   (A1)  (1-eps) a <= Delta A <= (1+eps) a
//   (A2)  c <r>^{2-alpha} <= A <= C <r>^{2-alpha}
//   (A3)  (A')^2 / (a A) <= (2-alpha)/(N-alpha) + eps

namespace radsup {

enum class ProfileKind { PurePower, JapaneseBracket, Tabulated };

struct CoefficientProfile {
  ProfileKind kind = ProfileKind::JapaneseBracket;
  double alpha = 0.0;
  double a0 = 1.0;
  int dim = 3;
  // for Tabulated: values at the nodes of the grid it was sampled on
  Eigen::ArrayXd table;
  double table_r0 = 0.0, table_dr = 0.0;

  double eval(double r) const;
  Eigen::ArrayXd eval(const RadialGrid& grid) const;
};

struct PotentialTable {
  RadialGrid grid;
  Eigen::ArrayXd A;
  Eigen::ArrayXd Aprime;
  Eigen::ArrayXd laplA;

  // linear interpolation between nodes, clamped at the ends
  double value(double r) const;
  double derivative(double r) const;
};

struct StructuralConstants {
  double gamma_tilde;
  double gamma;
  double epsilon;
};

struct PotentialReport {
  double a1_min_ratio, a1_max_ratio;  // range of laplA / a
  double a3_max_ratio;                // max of (A')^2/(a A)
  double c_fit, C_fit;                // envelope of A / <r>^{2-alpha}
  bool a1_pass, a2_pass, a3_pass;
};

// double quadrature A(r) = int_0^r s^{1-N} int_0^s tau^{N-1} a(tau) dtau ds
PotentialTable build_radial_potential(const CoefficientProfile& profile,
                                      const RadialGrid& grid);

// a0 r^{2-alpha} / ((2-alpha)(N-alpha)), the exact pure-power solution
double closed_form_potential(double alpha, double a0, int N, double r);

// exact table for pure-power profiles: closed-form A, A', and laplA = a,
// so downstream identities hold to roundoff rather than quadrature error
PotentialTable closed_form_table(double alpha, double a0, const RadialGrid& grid);

PotentialReport verify_potential(const PotentialTable& pt,
                                 const CoefficientProfile& profile, double eps);

StructuralConstants structural_constants(double alpha, int N, double eps);

}  // namespace radsup
