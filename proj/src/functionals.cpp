#include "fsph/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/operators.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

namespace {

constexpr int kMaxBand = 2048;

int oversampled_band(int L) { return std::min(kMaxBand, 4 * L + 8); }

// The two rewrite routes are compared against each other at 1e-8 relative;
// the spectral route truncates e^{(n-2)w/2}, whose tail past 4L+8 can reach
// that size for band-8 data, so both routes resolve a wider band.
int rewrite_band(int L) { return std::min(kMaxBand, 4 * L + 64); }

// Samples of a function spec on an arbitrary grid: raw-sample payloads are analyzed
// on their native grid and re-synthesized; all other kinds evaluate pointwise.
Eigen::VectorXd samples_on(const FunctionSpec& spec, const SphereGrid& grid) {
  if (spec.tag != FunctionSpec::Tag::GridSamples) return materialize(spec, grid);
  auto native = build_grid(spec.n, spec.grid_L);
  auto c = analyze(materialize(spec, native), native);
  return synthesize(c, grid);
}

HarmonicCoefficients coefficients_of(const FunctionSpec& spec, const SphereGrid& base) {
  return analyze(samples_on(spec, base), base);
}

double integrate_any(const SphereGrid& grid, const Eigen::VectorXd& s) {
  return s.size() == grid.nlat() ? grid.integrate_zonal(s) : grid.integrate_full(s);
}

}  // namespace

double quadratic_energy(const HarmonicCoefficients& c,
                        const Eigen::VectorXd& factor_per_l) {
  if (factor_per_l.size() != c.L + 1)
    throw std::invalid_argument("quadratic_energy: factor table must have L+1 entries");
  double acc = 0.0;
  if (c.zonal) {
    for (int l = 0; l <= c.L; ++l) acc += factor_per_l[l] * c.values[l] * c.values[l];
  } else {
    for (int l = 0; l <= c.L; ++l)
      acc += factor_per_l[l] * c.values.segment(l * l, 2 * l + 1).squaredNorm();
  }
  return acc;
}

double gradient_energy(const HarmonicCoefficients& c) {
  Eigen::VectorXd factor(c.L + 1);
  for (int l = 0; l <= c.L; ++l) factor[l] = laplacian_eigenvalue(c.n, l);
  return quadratic_energy(c, factor);
}

double fourth_order_energy(const HarmonicCoefficients& c) {
  if (c.n != 4)
    throw std::invalid_argument("fourth_order_energy: defined on S^4 only");
  Eigen::VectorXd factor(c.L + 1);
  for (int l = 0; l <= c.L; ++l) factor[l] = paneitz_energy_multiplier(l);
  return quadratic_energy(c, factor);
}

DeficitReport sobolev_deficit(const FunctionSpec& f, int n, double gamma) {
  if (n != 2 && n != 4)
    throw std::invalid_argument("sobolev_deficit: n must be 2 or 4");
  if (!(gamma > 0.0) || !(gamma < 0.5 * n))
    throw std::invalid_argument("sobolev_deficit: require 0 < gamma < n/2");
  if (f.n != n) throw std::invalid_argument("sobolev_deficit: dimension mismatch");

  const int L = f.band_limit_hint();
  auto base = build_grid(n, L);
  auto over = build_grid(n, oversampled_band(L));
  auto c = coefficients_of(f, base);
  if (c.values.squaredNorm() <= 0.0)
    throw std::invalid_argument("sobolev_deficit: zero function");

  const double energy = quadratic_energy(c, build_multiplier(n, gamma, c.L).eigenvalues);
  const double q = 2.0 * n / (n - 2.0 * gamma);
  Eigen::VectorXd fs = samples_on(f, over);
  Eigen::VectorXd integrand = fs.array().abs().pow(q);
  const double lq = integrate_any(over, integrand);
  const double lhs = sharp_constants(n, gamma).Y * std::pow(lq, 2.0 / q);

  DeficitReport rep;
  rep.name = "fractional-sobolev";
  rep.lhs = lhs;
  rep.rhs = energy;
  rep.deficit = energy - lhs;
  rep.n = n;
  rep.gamma = gamma;
  rep.input = f.description();
  return rep;
}

DeficitReport onofri_deficit_s2(const FunctionSpec& omega) {
  if (omega.n != 2) throw std::invalid_argument("onofri_deficit_s2: requires n = 2");
  const int L = omega.band_limit_hint();
  auto base = build_grid(2, L);
  auto over = build_grid(2, oversampled_band(L));
  auto c = coefficients_of(omega, base);

  const double measure = 4.0 * M_PI;
  const double mean = c.values[0] / std::sqrt(measure);
  const double grad_avg = gradient_energy(c) / measure;
  Eigen::VectorXd ws = samples_on(omega, over);
  const double lhs = std::log(integrate_any(over, (2.0 * ws).array().exp().matrix()) / measure);

  DeficitReport rep;
  rep.name = "onofri-s2";
  rep.lhs = lhs;
  rep.rhs = grad_avg + 2.0 * mean;
  rep.deficit = rep.rhs - rep.lhs;
  rep.n = 2;
  rep.gamma = 1.0;
  rep.input = omega.description();
  return rep;
}

DeficitReport paneitz_onofri_deficit_s4(const FunctionSpec& omega) {
  if (omega.n != 4)
    throw std::invalid_argument("paneitz_onofri_deficit_s4: requires n = 4");
  const int L = omega.band_limit_hint();
  auto base = build_grid(4, L);
  auto over = build_grid(4, oversampled_band(L));
  auto c = coefficients_of(omega, base);

  const double measure = sphere_measure(4);
  const double mean = c.values[0] / std::sqrt(measure);
  const double energy_avg = fourth_order_energy(c) / measure;
  Eigen::VectorXd ws = samples_on(omega, over);
  const double lhs =
      3.0 * std::log(integrate_any(over, (4.0 * ws).array().exp().matrix()) / measure);

  DeficitReport rep;
  rep.name = "paneitz-onofri-s4";
  rep.lhs = lhs;
  rep.rhs = energy_avg + 12.0 * mean;
  rep.deficit = rep.rhs - rep.lhs;
  rep.n = 4;
  rep.gamma = 2.0;
  rep.input = omega.description();
  return rep;
}

DeficitReport branson_rewrite_gap(const FunctionSpec& omega, int n) {
  if (n != 3 && n != 4)
    throw std::invalid_argument("branson_rewrite_gap: n must be 3 or 4");
  if (omega.n != n) throw std::invalid_argument("branson_rewrite_gap: dimension mismatch");
  const int L = omega.band_limit_hint();
  auto base = build_grid(n, L);
  auto over = build_grid(n, rewrite_band(L));
  auto c = coefficients_of(omega, base);
  if (!c.zonal)
    throw std::invalid_argument("branson_rewrite_gap: zonal functions only");

  const double measure = sphere_measure(n);
  Eigen::VectorXd ws = samples_on(omega, over);
  auto grad = synthesize_gradient(c, over);
  Eigen::VectorXd weighted =
      ((n - 2.0) * ws).array().exp() * grad.dtheta.array().square();
  const double energy_avg = over.integrate_zonal(weighted) / measure;

  const double en_avg = integrate_any(over, (static_cast<double>(n) * ws).array().exp().matrix()) / measure;
  const double em1_avg =
      integrate_any(over, ((n - 2.0) * ws).array().unaryExpr([](double x) {
        return std::expm1(x);
      }).matrix()) / measure;
  const double bracket = std::pow(en_avg, (n - 2.0) / n) - 1.0 - em1_avg;

  DeficitReport rep;
  rep.name = "sobolev-exponential-rewrite";
  rep.rhs = energy_avg;
  rep.lhs = n / (n - 2.0) * bracket;
  rep.deficit = rep.rhs - rep.lhs;
  rep.n = n;
  rep.gamma = 1.0;
  rep.input = omega.description();
  return rep;
}

double branson_rewrite_direct(const FunctionSpec& omega, int n) {
  if (n != 3 && n != 4)
    throw std::invalid_argument("branson_rewrite_direct: n must be 3 or 4");
  const int L = omega.band_limit_hint();
  auto over = build_grid(n, rewrite_band(L));

  // Classical order-2 deficit of f = e^{(n-2) w / 2}, computed spectrally on
  // the oversampled grid (f is smooth but not band-limited; its coefficients
  // decay fast enough that truncation is far below the comparison tolerance).
  const double b = 0.5 * (n - 2.0);
  Eigen::VectorXd ws = samples_on(omega, over);
  Eigen::VectorXd fs = (b * ws).array().exp();
  auto cf = analyze(fs, over);
  const double cn = n * (n - 2.0) / 4.0;
  Eigen::VectorXd factor(cf.L + 1);
  for (int l = 0; l <= cf.L; ++l) factor[l] = laplacian_eigenvalue(n, l) + cn;
  const double energy = quadratic_energy(cf, factor);

  const double q = 2.0 * n / (n - 2.0);
  const double lq = integrate_any(over, fs.array().pow(q).matrix());
  const double y1 = cn * std::pow(sphere_measure(n), 2.0 / n);
  const double deficit = energy - y1 * std::pow(lq, 2.0 / q);
  return deficit / (b * b * sphere_measure(n));
}

double A0(double gamma, const FunctionSpec& omega) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("A0: require gamma in (0,1)");
  if (omega.n != 2) throw std::invalid_argument("A0: requires n = 2");
  const double eps = 1.0 - gamma;
  const int L = omega.band_limit_hint();
  auto over = build_grid(2, oversampled_band(L));
  Eigen::VectorXd ws = samples_on(omega, over);

  const double measure = 4.0 * M_PI;
  const double i2 = integrate_any(over, (2.0 * ws).array().exp().matrix());
  const double qeps =
      integrate_any(over, (2.0 * eps * ws).array().unaryExpr([](double x) {
        return std::expm1(x);
      }).matrix());
  const double bracket = measure * std::expm1(eps * std::log(i2 / measure)) - qeps;
  const double pref = std::exp(log_gamma(1.0 + gamma) - log_gamma(2.0 - gamma));
  return pref * bracket / eps;
}

double onofri_limit_target(const FunctionSpec& omega) {
  if (omega.n != 2) throw std::invalid_argument("onofri_limit_target: requires n = 2");
  const int L = omega.band_limit_hint();
  auto over = build_grid(2, oversampled_band(L));
  Eigen::VectorXd ws = samples_on(omega, over);
  const double measure = 4.0 * M_PI;
  const double i2 = integrate_any(over, (2.0 * ws).array().exp().matrix());
  const double mean = integrate_any(over, ws) / measure;
  return measure * (std::log(i2 / measure) - 2.0 * mean);
}

double A1(double gamma, const FunctionSpec& omega) {
  if (!(gamma > 1.0) || !(gamma < 2.0))
    throw std::invalid_argument("A1: require gamma in (1,2)");
  if (omega.n != 4) throw std::invalid_argument("A1: requires n = 4");
  const double eps = 2.0 - gamma;
  const int L = omega.band_limit_hint();
  auto over = build_grid(4, oversampled_band(L));
  Eigen::VectorXd ws = samples_on(omega, over);

  const double measure = sphere_measure(4);
  const double i4 = integrate_any(over, (4.0 * ws).array().exp().matrix());
  const double qeps =
      integrate_any(over, (2.0 * eps * ws).array().unaryExpr([](double x) {
        return std::expm1(x);
      }).matrix());
  const double bracket =
      measure * std::expm1(0.5 * eps * std::log(i4 / measure)) - qeps;
  const double pref = 0.5 * std::exp(log_gamma(2.0 + gamma) - log_gamma(3.0 - gamma));
  return pref * (2.0 / eps) * bracket;
}

double onofri_limit_target_s4(const FunctionSpec& omega) {
  if (omega.n != 4)
    throw std::invalid_argument("onofri_limit_target_s4: requires n = 4");
  const int L = omega.band_limit_hint();
  auto over = build_grid(4, oversampled_band(L));
  Eigen::VectorXd ws = samples_on(omega, over);
  const double measure = sphere_measure(4);
  const double i4 = integrate_any(over, (4.0 * ws).array().exp().matrix());
  const double mean = integrate_any(over, ws) / measure;
  return 3.0 * measure * (std::log(i4 / measure) - 4.0 * mean);
}

}  // namespace fsph
