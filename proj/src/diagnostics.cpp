#include "radsup/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace radsup {

namespace {

Eigen::ArrayXd coefficient_field(const CoefficientProfile& profile,
                                 const RadialGrid& grid) {
  const int n = grid.size();
  Eigen::ArrayXd a(n);
  for (int i = 0; i < n; ++i) {
    double r = grid.r(i);
    a[i] = (r <= 0.0 && profile.kind == ProfileKind::PurePower && profile.alpha > 0.0)
               ? profile.eval(grid.dr)
               : profile.eval(r);
  }
  return a;
}

Eigen::Array<double, Eigen::Dynamic, 1> psi_field(const SupersolutionParams& p,
                                                  const PotentialTable& pt,
                                                  double t) {
  return p.t0 + t + pt.A;
}

double alpha_exponent(const CoefficientProfile& profile) {
  return profile.alpha / (2.0 - profile.alpha);
}

}  // namespace

double weighted_l2(const Eigen::ArrayXd& f, double weight_exponent,
                   const CoefficientProfile& profile, const RadialGrid& grid) {
  if (f.size() != grid.size()) {
    throw std::invalid_argument("weighted_l2: field length does not match grid");
  }
  Eigen::ArrayXd a = coefficient_field(profile, grid);
  Eigen::ArrayXd w = grid.quad_weights();
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    s += f[i] * f[i] *
         std::pow(japanese_bracket(grid.r(i)), 2.0 * weight_exponent) * a[i] * w[i];
  }
  return std::sqrt(s);
}

Eigen::ArrayXd radial_gradient(const RadialGrid& grid, const Eigen::ArrayXd& f) {
  const int n = grid.size();
  Eigen::ArrayXd g(n);
  for (int i = 1; i < n - 1; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * grid.dr);
  g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * grid.dr);
  g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * grid.dr);
  if (grid.r0 == 0.0) g[0] = 0.0;  // radial symmetry
  return g;
}

namespace {

double gradient_ut_energy(const WaveState& ws, const RadialGrid& grid,
                          const Eigen::ArrayXd& weight) {
  Eigen::ArrayXd du = radial_gradient(grid, ws.u);
  Eigen::ArrayXd q = grid.quad_weights();
  return ((du.square() + ws.ut.square()) * weight * q).sum();
}

}  // namespace

double energy_e1(const WaveState& ws, const EnergyConfig& cfg,
                 const SupersolutionParams& p, const PotentialTable& pt,
                 const CoefficientProfile& profile) {
  Eigen::ArrayXd psi = psi_field(p, pt, ws.t);
  Eigen::ArrayXd w = psi.pow(cfg.lambda + alpha_exponent(profile));
  return gradient_ut_energy(ws, pt.grid, w);
}

double energy_e0(const WaveState& ws, const EnergyConfig& cfg,
                 const SupersolutionParams& p, const PotentialTable& pt,
                 const CoefficientProfile& profile) {
  Eigen::ArrayXd phi = eval_phi_field(p, pt, ws.t);
  Eigen::ArrayXd a = coefficient_field(profile, pt.grid);
  Eigen::ArrayXd q = pt.grid.quad_weights();
  Eigen::ArrayXd w = phi.pow(-1.0 + 2.0 * cfg.delta);
  return ((2.0 * ws.u * ws.ut + a * ws.u.square()) * w * q).sum();
}

double energy_e1_tilde(const WaveState& ws, const EnergyConfig& cfg,
                       const SupersolutionParams& p, const PotentialTable& pt,
                       const CoefficientProfile& profile) {
  Eigen::ArrayXd psi = psi_field(p, pt, ws.t);
  Eigen::ArrayXd w = psi.pow(cfg.lambda);
  return (p.t0 + ws.t) * gradient_ut_energy(ws, pt.grid, w);
}

double energy_ekj(const WaveState& ws, const EnergyConfig& cfg,
                  const SupersolutionParams& p, const PotentialTable& pt,
                  const CoefficientProfile& profile) {
  if (cfg.k < 0 || cfg.k > 1 || cfg.j < 0 || cfg.j > 2 * cfg.k + 1) {
    throw std::invalid_argument("energy_ekj: need k in {0,1}, j in [0, 2k+1]");
  }
  Eigen::ArrayXd psi = psi_field(p, pt, ws.t);
  double expo = cfg.lambda + (2.0 * cfg.k + 1.0 - cfg.j) * alpha_exponent(profile);
  Eigen::ArrayXd w = psi.pow(expo);
  return std::pow(p.t0 + ws.t, cfg.j) * gradient_ut_energy(ws, pt.grid, w);
}

HardyResult hardy_check(const Eigen::ArrayXd& w, double lambda_exp, double eps,
                        const SupersolutionParams& p, const PotentialTable& pt,
                        const CoefficientProfile& profile, double t) {
  const RadialGrid& grid = pt.grid;
  const int N = grid.dim;
  const double alpha = profile.alpha;
  const double lower =
      -(N - 2.0 + 2.0 * eps * (N - alpha)) / (2.0 - alpha + eps * (N - alpha));
  if (lambda_exp <= lower) {
    throw std::invalid_argument("hardy_check: lambda below the admissible range");
  }
  const double base = (2.0 - alpha) / (N - alpha) + eps;
  const double m =
      std::min(1.0 - eps, 1.0 - eps + (lambda_exp - 1.0) * base);
  HardyResult res;
  res.constant = 4.0 * base / (m * m);

  Eigen::ArrayXd a = coefficient_field(profile, grid);
  Eigen::ArrayXd psi = psi_field(p, pt, t);
  Eigen::ArrayXd q = grid.quad_weights();
  Eigen::ArrayXd dw = radial_gradient(grid, w);
  res.lhs = (w.square() * a * psi.pow(lambda_exp - 1.0) * q).sum();
  res.rhs = (dw.square() * psi.pow(lambda_exp) * q).sum();
  return res;
}

std::pair<double, double> delta_phi_check(const Eigen::ArrayXd& u,
                                          const SupersolutionParams& p,
                                          const PotentialTable& pt,
                                          const CoefficientProfile& profile,
                                          double delta, double t) {
  if (delta <= 0.0 || delta >= 0.5) {
    throw std::invalid_argument("delta_phi_check: need delta in (0, 1/2)");
  }
  const RadialGrid& grid = pt.grid;
  Eigen::ArrayXd phi = eval_phi_field(p, pt, t);
  Eigen::ArrayXd lap_phi = supersolution_laplacian(p, pt, profile, t);
  Eigen::ArrayXd lap_u = laplacian_radial(grid, u);
  Eigen::ArrayXd du = radial_gradient(grid, u);
  Eigen::ArrayXd q = grid.quad_weights();

  double lhs = (u * lap_u * phi.pow(-1.0 + 2.0 * delta) * q).sum();
  double rhs = -(delta / (1.0 - delta)) *
                   (du.square() * phi.pow(-1.0 + 2.0 * delta) * q).sum() +
               (1.0 - 2.0 * delta) / 2.0 *
                   (u.square() * lap_phi * phi.pow(-2.0 + 2.0 * delta) * q).sum();
  return {lhs, rhs};
}

RateFit fit_rate(const RateSeries& series, double tmin, double tmax,
                 bool log_corrected) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < series.t.size(); ++i) {
    double t = series.t[i];
    if (t < tmin || t > tmax || t <= 0.0) continue;
    double v = series.value[i];
    if (log_corrected) v /= std::sqrt(std::log(2.0 + t));
    if (!(v > 0.0)) {
      throw std::invalid_argument("fit_rate: nonpositive value in the fit window");
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8) {
    throw std::invalid_argument("fit_rate: need at least 8 points in the window");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  RateFit fit;
  fit.log_corrected = log_corrected;
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0, ybar = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.rsq = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return fit;
}

RateSeries diffusion_compare(const std::vector<WaveState>& wave,
                             const std::vector<FieldState>& parabolic,
                             const CoefficientProfile& profile,
                             const RadialGrid& grid) {
  if (wave.size() != parabolic.size()) {
    throw std::invalid_argument("diffusion_compare: snapshot counts differ");
  }
  Eigen::ArrayXd a = coefficient_field(profile, grid);
  Eigen::ArrayXd q = grid.quad_weights();
  RateSeries out;
  for (size_t i = 0; i < wave.size(); ++i) {
    if (std::abs(wave[i].t - parabolic[i].t) >
        1e-6 * (1.0 + std::abs(wave[i].t))) {
      throw std::invalid_argument("diffusion_compare: snapshot times differ");
    }
    Eigen::ArrayXd d = wave[i].u - parabolic[i].v;
    out.t.push_back(wave[i].t);
    out.value.push_back(std::sqrt((a * d.square() * q).sum()));
  }
  return out;
}

Eigen::ArrayXd random_bump_field(const RadialGrid& grid, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double span = grid.rmax - grid.r0;
  const int n = grid.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  int bumps = 1 + static_cast<int>(uni(rng) * 3.0);
  for (int b = 0; b < bumps; ++b) {
    double width = span * (0.05 + 0.2 * uni(rng));
    double center = grid.r0 + width + uni(rng) * (span - 2.0 * width);
    double amp = 2.0 * uni(rng) - 1.0;
    for (int i = 0; i < n; ++i) {
      double x = (grid.r(i) - center) / width;
      if (std::abs(x) < 1.0) out[i] += amp * std::exp(-1.0 / (1.0 - x * x) + 1.0);
    }
  }
  out[0] = 0.0;
  out[n - 1] = 0.0;
  return out;
}

}  // namespace radsup
