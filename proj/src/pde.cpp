#include "radsup/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radsup {

namespace {

// Thomas algorithm; overwrites nothing, returns the solution
Eigen::ArrayXd solve_tridiagonal(const Eigen::ArrayXd& sub,
                                 const Eigen::ArrayXd& diag,
                                 const Eigen::ArrayXd& super,
                                 const Eigen::ArrayXd& rhs) {
  const int n = static_cast<int>(diag.size());
  Eigen::ArrayXd c(n), d(n);
  c[0] = super[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (int i = 1; i < n; ++i) {
    double m = diag[i] - sub[i] * c[i - 1];
    c[i] = super[i] / m;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
  }
  Eigen::ArrayXd x(n);
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

struct Stencil {
  Eigen::ArrayXd sub, diag, super;
};

// rows of the central radial Laplacian; boundary rows left zero
Stencil laplacian_stencil(const RadialGrid& g) {
  const int n = g.size();
  const double h2 = g.dr * g.dr;
  Stencil st;
  st.sub = Eigen::ArrayXd::Zero(n);
  st.diag = Eigen::ArrayXd::Zero(n);
  st.super = Eigen::ArrayXd::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    double r = g.r(i);
    st.sub[i] = 1.0 / h2 - (g.dim - 1) / (2.0 * g.dr * r);
    st.diag[i] = -2.0 / h2;
    st.super[i] = 1.0 / h2 + (g.dim - 1) / (2.0 * g.dr * r);
  }
  if (g.r0 == 0.0) {
    st.diag[0] = -2.0 * g.dim / h2;
    st.super[0] = 2.0 * g.dim / h2;
  }
  return st;
}

Eigen::ArrayXd apply_stencil(const Stencil& st, const Eigen::ArrayXd& f) {
  const int n = static_cast<int>(f.size());
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double v = st.diag[i] * f[i];
    if (i > 0) v += st.sub[i] * f[i - 1];
    if (i < n - 1) v += st.super[i] * f[i + 1];
    out[i] = v;
  }
  return out;
}

double bc_value(const std::function<double(double)>& f, double t) {
  return f ? f(t) : 0.0;
}

}  // namespace

Eigen::ArrayXd laplacian_radial(const RadialGrid& grid, const Eigen::ArrayXd& f) {
  if (f.size() != grid.size()) {
    throw std::invalid_argument("laplacian_radial: field length does not match grid");
  }
  Stencil st = laplacian_stencil(grid);
  Eigen::ArrayXd out = apply_stencil(st, f);
  const int n = grid.size();
  // one-sided closure at the ends where the centered stencil has no row
  if (grid.r0 > 0.0 && n >= 3) out[0] = out[1];
  if (n >= 3) out[n - 1] = out[n - 2];
  return out;
}

std::vector<FieldState> solve_parabolic(const RadialGrid& grid,
                                        const CoefficientProfile& profile,
                                        const SolverConfig& cfg,
                                        const Eigen::ArrayXd& v0) {
  const int n = grid.size();
  if (v0.size() != n) throw std::invalid_argument("solve_parabolic: bad v0 length");
  if (cfg.dt <= 0.0 || cfg.horizon <= 0.0) {
    throw std::invalid_argument("solve_parabolic: need dt, horizon > 0");
  }
  for (size_t k = 1; k < cfg.snapshots.size(); ++k) {
    if (cfg.snapshots[k] <= cfg.snapshots[k - 1]) {
      throw std::invalid_argument("solve_parabolic: snapshots must increase");
    }
  }

  Eigen::ArrayXd a(n);
  for (int i = 0; i < n; ++i) {
    double r = grid.r(i);
    // the singular pure-power origin is regularized within the first cell
    a[i] = (r <= 0.0 && profile.kind == ProfileKind::PurePower && profile.alpha > 0.0)
               ? profile.eval(grid.dr)
               : profile.eval(r);
    if (!(a[i] > 0.0)) throw std::invalid_argument("solve_parabolic: a must be positive");
  }

  Stencil st = laplacian_stencil(grid);
  const bool inner_dirichlet = grid.r0 > 0.0;

  Eigen::ArrayXd v = v0;
  double t = 0.0;
  v[n - 1] = bc_value(cfg.bc_outer, 0.0);
  if (inner_dirichlet) v[0] = bc_value(cfg.bc_inner, 0.0);

  std::vector<FieldState> out;
  size_t next_snap = 0;
  auto maybe_snapshot = [&]() {
    while (next_snap < cfg.snapshots.size() &&
           t >= cfg.snapshots[next_snap] - 1e-12 * (1.0 + t)) {
      out.push_back({cfg.snapshots[next_snap], v});
      ++next_snap;
    }
  };
  maybe_snapshot();

  int startup = cfg.scheme == ParabolicScheme::CrankNicolson ? 2 : 0;

  while (t < cfg.horizon - 1e-12 * (1.0 + cfg.horizon)) {
    double dt = cfg.dt;
    if (cfg.dt_ramp > 0.0) dt = std::max(dt, cfg.dt_ramp * t);
    dt = std::min(dt, cfg.horizon - t);
    if (next_snap < cfg.snapshots.size()) {
      dt = std::min(dt, cfg.snapshots[next_snap] - t);
    }

    // two backward Euler startup steps smooth CN for rough data
    double theta =
        (cfg.scheme == ParabolicScheme::BackwardEuler || startup > 0) ? 1.0 : 0.5;
    if (startup > 0) --startup;

    Eigen::ArrayXd rhs = (a / dt) * v + (1.0 - theta) * apply_stencil(st, v);
    Eigen::ArrayXd sub = -theta * st.sub;
    Eigen::ArrayXd diag = a / dt - theta * st.diag;
    Eigen::ArrayXd super = -theta * st.super;

    // Dirichlet rows
    double tnew = t + dt;
    sub[n - 1] = 0.0;
    diag[n - 1] = 1.0;
    super[n - 1] = 0.0;
    rhs[n - 1] = bc_value(cfg.bc_outer, tnew);
    if (inner_dirichlet) {
      diag[0] = 1.0;
      super[0] = 0.0;
      rhs[0] = bc_value(cfg.bc_inner, tnew);
    }
    // whole-space origin row already carries the regularized stencil

    v = solve_tridiagonal(sub, diag, super, rhs);
    t = tnew;
    maybe_snapshot();
  }
  return out;
}

WaveRun solve_damped_wave(const RadialGrid& grid,
                          const CoefficientProfile& profile,
                          const SolverConfig& cfg, const Eigen::ArrayXd& u0,
                          const Eigen::ArrayXd& u1) {
  const int n = grid.size();
  if (u0.size() != n || u1.size() != n) {
    throw std::invalid_argument("solve_damped_wave: bad initial data length");
  }
  if (cfg.dt > 0.9 * grid.dr) {
    throw std::invalid_argument("solve_damped_wave: CFL violation, need dt <= 0.9 dr");
  }

  Eigen::ArrayXd a(n);
  for (int i = 0; i < n; ++i) {
    double r = grid.r(i);
    a[i] = (r <= 0.0 && profile.kind == ProfileKind::PurePower && profile.alpha > 0.0)
               ? profile.eval(grid.dr)
               : profile.eval(r);
  }

  // conservative flux stencil r^{1-N} d/dr (r^{N-1} du/dr): self-adjoint under
  // the plain node weights, which makes summation by parts exact and the
  // staggered energy identity hold to roundoff
  const double h2 = grid.dr * grid.dr;
  Eigen::ArrayXd wplus(n), wminus(n), node_w(n);
  for (int i = 0; i < n; ++i) {
    double r = grid.r(i);
    double rp = std::pow(r + 0.5 * grid.dr, grid.dim - 1);
    double rm = r > 0.0 ? std::pow(std::max(0.0, r - 0.5 * grid.dr), grid.dim - 1) : 0.0;
    // origin cell [0, dr/2]: volume (dr/2)^N / N, so the effective node
    // weight is rp/(2N) and the flux row reduces to 2N (f1 - f0)/dr^2
    double rc = (r > 0.0) ? std::pow(r, grid.dim - 1)
                          : std::pow(0.5 * grid.dr, grid.dim - 1) / (2.0 * grid.dim);
    wplus[i] = rp / (rc * h2);
    wminus[i] = rm / (rc * h2);
    node_w[i] = rc * grid.dr;
  }
  auto lap = [&](const Eigen::ArrayXd& f) {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
      out[i] = wplus[i] * (f[i + 1] - f[i]) - wminus[i] * (f[i] - f[i - 1]);
    }
    if (grid.r0 == 0.0) out[0] = wplus[0] * (f[1] - f[0]);
    return out;
  };
  // Spectral CFL check: near the origin the flux stencil is stiffer than the
  // interior 4/dr^2 (the regularized row alone contributes 2N/dr^2), so the
  // plain dt <= 0.9 dr rule is not sufficient for N >= 2. Power iteration
  // gives the actual top eigenvalue of -L; leapfrog needs dt^2 lambda <= 4.
  {
    Eigen::ArrayXd v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(1.0 + 0.7 * i);
    v[n - 1] = 0.0;
    if (grid.r0 > 0.0) v[0] = 0.0;
    double lambda = 0.0;
    for (int it = 0; it < 120; ++it) {
      Eigen::ArrayXd w = -lap(v);
      if (grid.r0 > 0.0) w[0] = 0.0;
      w[n - 1] = 0.0;
      lambda = std::sqrt((w * w).sum() / (v * v).sum());
      v = w / lambda;
    }
    if (cfg.dt * cfg.dt * lambda > 4.0 * 0.95 * 0.95) {
      throw std::invalid_argument(
          "solve_damped_wave: CFL violation against the spectral bound, need dt <= 1.9/sqrt(lambda_max)");
    }
  }

  auto grad_energy = [&](const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) {
    double s = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      double rh = std::pow(grid.r(i) + 0.5 * grid.dr, grid.dim - 1);
      s += rh * (f[i + 1] - f[i]) * (g[i + 1] - g[i]) / grid.dr;
    }
    return s;
  };

  const double dt = cfg.dt;
  const bool inner_dirichlet = grid.r0 > 0.0;
  Eigen::ArrayXd uprev = u0;
  Eigen::ArrayXd u = u0 + dt * u1 + 0.5 * dt * dt * (lap(u0) - a * u1);
  if (inner_dirichlet) u[0] = 0.0;
  u[n - 1] = 0.0;

  WaveRun run;
  run.energy0 = (u1 * u1 * node_w).sum() + grad_energy(u0, u0);
  run.identity_defect_max = 0.0;

  const long steps = std::lround(cfg.horizon / dt);
  size_t next_snap = 0;
  double cumulative = 0.0;
  // dissipation of the first half step: ut at t=0 is u1
  cumulative += 2.0 * dt * 0.5 * (a * u1 * u1 * node_w).sum();
  double estag_prev = (((u - uprev) / dt).square() * node_w).sum() * 0.5 +
                      0.5 * grad_energy(uprev, u);
  double estag0 = estag_prev;
  double stag_cumulative = 0.0;

  for (long m = 1; m <= steps; ++m) {
    double tn = m * dt;
    Eigen::ArrayXd lu = lap(u);
    Eigen::ArrayXd unew =
        (2.0 * u - uprev + dt * dt * lu + 0.5 * dt * a * uprev) /
        (1.0 + 0.5 * dt * a);
    if (inner_dirichlet) unew[0] = 0.0;
    unew[n - 1] = 0.0;

    Eigen::ArrayXd ut = (unew - uprev) / (2.0 * dt);
    double diss = 2.0 * (a * ut * ut * node_w).sum();
    cumulative += dt * diss;
    stag_cumulative += dt * diss;

    double estag = (((unew - u) / dt).square() * node_w).sum() * 0.5 +
                   0.5 * grad_energy(u, unew);
    run.identity_defect_max = std::max(
        run.identity_defect_max,
        std::abs(2.0 * (estag - estag0) + stag_cumulative) /
            (2.0 * std::abs(estag0) + 1e-300));
    estag_prev = estag;

    while (next_snap < cfg.snapshots.size() &&
           tn >= cfg.snapshots[next_snap] - 0.5 * dt) {
      WaveState ws;
      ws.t = tn;
      ws.u = u;
      ws.ut = ut;
      ws.energy = (ut * ut * node_w).sum() + grad_energy(u, u);
      // the running sum integrates through t_n + dt/2; trim the overshoot
      ws.dissipation = cumulative - 0.5 * dt * diss;
      run.snapshots.push_back(std::move(ws));
      ++next_snap;
    }
    uprev = u;
    u = unew;
  }
  return run;
}

Eigen::ArrayXd initial_data(const InitialData& d, const RadialGrid& grid) {
  const int n = grid.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  switch (d.kind) {
    case DataKind::PowerDecay:
      for (int i = 0; i < n; ++i) {
        out[i] = std::pow(japanese_bracket(grid.r(i)), -2.0 * d.sigma);
      }
      break;
    case DataKind::GaussianBump:
    case DataKind::AnnularBump: {
      double c = d.kind == DataKind::AnnularBump ? d.center : 0.0;
      if (d.width <= 0.0 || c - d.width < grid.r0 - 1e-12 ||
          c + d.width > grid.rmax + 1e-12) {
        // whole-space centered bump may overlap the origin symmetrically
        if (!(d.kind == DataKind::GaussianBump && grid.r0 == 0.0 &&
              d.width > 0.0 && d.width <= grid.rmax)) {
          throw std::invalid_argument("initial_data: bump support exceeds domain");
        }
      }
      for (int i = 0; i < n; ++i) {
        double x = (grid.r(i) - c) / d.width;
        if (std::abs(x) < 1.0) out[i] = std::exp(-1.0 / (1.0 - x * x) + 1.0);
      }
      break;
    }
  }
  if (grid.r0 > 0.0) out[0] = 0.0;
  out[n - 1] = 0.0;
  return out;
}

double tail_mass_fraction(const RadialGrid& grid,
                          const CoefficientProfile& profile,
                          const Eigen::ArrayXd& v, double cut) {
  Eigen::ArrayXd w = grid.quad_weights();
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    double r = grid.r(i);
    double a = (r <= 0.0 && profile.kind == ProfileKind::PurePower && profile.alpha > 0.0)
                   ? profile.eval(grid.dr)
                   : profile.eval(r);
    double m = std::abs(v[i]) * a * w[i];
    total += m;
    if (r >= cut) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace radsup
