#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

// Uniform radial grid on [r0, rmax] with node spacing dr in ambient
// dimension N. Quadrature approximates integrals over the radial domain
// with the surface measure r^{N-1} dr (trapezoid rule, end weights halved);
// the constant angular factor |S^{N-1}| is omitted throughout since every
// quantity we form is a ratio or a rate where it cancels.

namespace radsup {

struct RadialGrid {
  double r0 = 0.0;
  double rmax = 1.0;
  double dr = 0.01;
  int dim = 3;

  RadialGrid() = default;
  RadialGrid(double r0_, double rmax_, double dr_, int dim_)
      : r0(r0_), rmax(rmax_), dr(dr_), dim(dim_) {
    if (dr <= 0.0 || dim < 1 || r0 < 0.0 || rmax - r0 < 10.0 * dr) {
      throw std::invalid_argument("RadialGrid: need r0 >= 0, dr > 0, dim >= 1, rmax - r0 >= 10 dr");
    }
  }

  int size() const { return static_cast<int>(std::llround((rmax - r0) / dr)) + 1; }

  double r(int i) const { return r0 + i * dr; }

  Eigen::ArrayXd nodes() const {
    const int n = size();
    Eigen::ArrayXd out(n);
    for (int i = 0; i < n; ++i) out[i] = r(i);
    return out;
  }

  // trapezoid weights for \int f(r) r^{N-1} dr
  Eigen::ArrayXd quad_weights() const {
    const int n = size();
    Eigen::ArrayXd w(n);
    for (int i = 0; i < n; ++i) w[i] = std::pow(r(i), dim - 1) * dr;
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    return w;
  }

  double integrate(const Eigen::ArrayXd& f) const {
    return (f * quad_weights()).sum();
  }
};

inline double japanese_bracket(double r) { return std::sqrt(1.0 + r * r); }

}  // namespace radsup
