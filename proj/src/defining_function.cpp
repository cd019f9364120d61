#include "fsph/defining_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsph/specfun.hpp"

namespace fsph {
namespace {

double rho_flat(double r) { return 0.5 * (1.0 - r * r); }

void check_dimension_order(int n, double s) {
  if (n < 2) throw std::invalid_argument("defining function: need n >= 2");
  if (!(s > 0.5 * (n + 1) && s < static_cast<double>(n)))
    throw std::invalid_argument("defining function: s must lie in ((n+1)/2, n), got s=" +
                                std::to_string(s));
}

// Series coefficients of F = c1 r + c3 r^3 + O(r^5) near the center.
struct CenterSeries {
  double c1;
  double c3;
  double F(double r) const { return r * (c1 + c3 * r * r); }
  double T(double r) const {
    const double r2 = r * r;
    return r2 * (0.5 * c1 + 0.25 * c3 * r2);
  }
};

CenterSeries center_series(int n, double s) {
  const double K = 2.0 * s - n - 1.0;
  CenterSeries cs;
  cs.c1 = -2.0 * K / (n + 1.0);
  cs.c3 = -((n - s) * cs.c1 * cs.c1 + 2.0 * K * cs.c1 + 2.0 * K) / (n + 3.0);
  return cs;
}

// Dormand-Prince 5(4) pair for the augmented state y = (F, T_raw).
struct OdeState {
  double F;
  double T;
};

OdeState rhs(int n, double s, double r, const OdeState& y) {
  return {defining_ode_rhs(n, s, r, y.F), y.F};
}

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 35.0 / 384.0 - 5179.0 / 57600.0;
constexpr double kE3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
constexpr double kE4 = 125.0 / 192.0 - 393.0 / 640.0;
constexpr double kE5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
constexpr double kE6 = 11.0 / 84.0 - 187.0 / 2100.0;
constexpr double kE7 = -1.0 / 40.0;

struct StepResult {
  OdeState y;
  double error;  // weighted RMS error estimate
};

StepResult dopri5_step(int n, double s, double r, const OdeState& y, double h,
                       double rtol, double atol) {
  const OdeState k1 = rhs(n, s, r, y);
  auto at = [&](double c, double f0, double t0) {
    return rhs(n, s, r + c * h, OdeState{y.F + h * f0, y.T + h * t0});
  };
  const OdeState k2 = at(0.2, kA21 * k1.F, kA21 * k1.T);
  const OdeState k3 = at(0.3, kA31 * k1.F + kA32 * k2.F, kA31 * k1.T + kA32 * k2.T);
  const OdeState k4 = at(0.8, kA41 * k1.F + kA42 * k2.F + kA43 * k3.F,
                         kA41 * k1.T + kA42 * k2.T + kA43 * k3.T);
  const OdeState k5 =
      at(8.0 / 9.0, kA51 * k1.F + kA52 * k2.F + kA53 * k3.F + kA54 * k4.F,
         kA51 * k1.T + kA52 * k2.T + kA53 * k3.T + kA54 * k4.T);
  const OdeState k6 =
      at(1.0, kA61 * k1.F + kA62 * k2.F + kA63 * k3.F + kA64 * k4.F + kA65 * k5.F,
         kA61 * k1.T + kA62 * k2.T + kA63 * k3.T + kA64 * k4.T + kA65 * k5.T);
  const OdeState y5{
      y.F + h * (kB1 * k1.F + kB3 * k3.F + kB4 * k4.F + kB5 * k5.F + kB6 * k6.F),
      y.T + h * (kB1 * k1.T + kB3 * k3.T + kB4 * k4.T + kB5 * k5.T + kB6 * k6.T)};
  const OdeState k7 = rhs(n, s, r + h, y5);
  const double errF =
      h * (kE1 * k1.F + kE3 * k3.F + kE4 * k4.F + kE5 * k5.F + kE6 * k6.F + kE7 * k7.F);
  const double errT =
      h * (kE1 * k1.T + kE3 * k3.T + kE4 * k4.T + kE5 * k5.T + kE6 * k6.T + kE7 * k7.T);
  const double scF = atol + rtol * std::max(std::abs(y.F), std::abs(y5.F));
  const double scT = atol + rtol * std::max(std::abs(y.T), std::abs(y5.T));
  const double e1 = errF / scF;
  const double e2 = errT / scT;
  return {y5, std::sqrt(0.5 * (e1 * e1 + e2 * e2))};
}

// Finite-difference weights on an arbitrary stencil (Fornberg's recursion):
// weights w with sum_j w_j f(x_j) ~ f^{(m)}(x0).
Eigen::VectorXd fd_weights(double x0, const Eigen::VectorXd& x, int m) {
  const int nn = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nn, m + 1);
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(m);
}

void require_reconstructed(const DefiningFunctionSolution& sol, const char* what) {
  if (sol.T.size() != sol.r.size())
    throw std::invalid_argument(std::string(what) + ": call reconstruct() first");
}

}  // namespace

ClosedFormDefiners closed_form_definers(double r) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::invalid_argument("closed_form_definers: r must lie in [0, 1)");
  ClosedFormDefiners d;
  d.r = r;
  d.rho = 2.0 * (1.0 - r) / (1.0 + r);
  d.rho_L = (1.0 - r * r) / (1.0 + r * r);
  d.rho_0 = rho_flat(r);
  return d;
}

Eigen::VectorXd make_radial_grid(const RadialGridSpec& spec) {
  if (spec.n_inner < 2 || spec.n_boundary < 2)
    throw std::invalid_argument("radial grid: need at least 2 nodes per region");
  if (!(spec.r_start > 0.0 && spec.r_start < spec.r_split && spec.r_split < 1.0))
    throw std::invalid_argument("radial grid: need 0 < r_start < r_split < 1");
  if (!(spec.delta > 0.0 && spec.delta < 1.0 - spec.r_split))
    throw std::invalid_argument("radial grid: need 0 < delta < 1 - r_split");
  Eigen::VectorXd r(spec.n_inner + spec.n_boundary);
  for (int i = 0; i < spec.n_inner; ++i) {
    const double x = static_cast<double>(i) / (spec.n_inner - 1);
    r[i] = spec.r_start + x * (spec.r_split - spec.r_start);
  }
  // log-graded in u = 1 - r from r_split (exclusive) to 1 - delta.
  const double lu0 = std::log(1.0 - spec.r_split);
  const double lu1 = std::log(spec.delta);
  for (int i = 0; i < spec.n_boundary; ++i) {
    const double x = static_cast<double>(i + 1) / spec.n_boundary;
    r[spec.n_inner + i] = 1.0 - std::exp(lu0 + x * (lu1 - lu0));
  }
  r[r.size() - 1] = 1.0 - spec.delta;
  return r;
}

double defining_ode_rhs(int n, double s, double r, double F) {
  const double K = 2.0 * s - n - 1.0;
  const double rho0 = rho_flat(r);
  return -((n - s) * F * F + (K * r / rho0 + n / r) * F + K / rho0);
}

DefiningFunctionSolution solve_F(int n, double s, const Eigen::VectorXd& r_nodes) {
  check_dimension_order(n, s);
  const int N = static_cast<int>(r_nodes.size());
  if (N < 1) throw std::invalid_argument("solve_F: empty radial grid");
  for (int i = 0; i < N; ++i) {
    if (!(r_nodes[i] > 0.0 && r_nodes[i] < 1.0))
      throw std::invalid_argument("solve_F: grid nodes must lie in (0, 1)");
    if (i > 0 && !(r_nodes[i] > r_nodes[i - 1]))
      throw std::invalid_argument("solve_F: grid must be strictly increasing");
  }

  DefiningFunctionSolution sol;
  sol.n = n;
  sol.s = s;
  sol.r = r_nodes;
  sol.F.resize(N);
  sol.T_raw.resize(N);

  const CenterSeries cs = center_series(n, s);
  const double r_series = 1e-3;
  int idx = 0;
  while (idx < N && r_nodes[idx] <= r_series) {
    sol.F[idx] = cs.F(r_nodes[idx]);
    sol.T_raw[idx] = cs.T(r_nodes[idx]);
    ++idx;
  }
  if (idx == N) return sol;

  const double rtol = 3e-13;
  const double atol = 1e-14;
  double r_cur = r_series;
  OdeState y{cs.F(r_series), cs.T(r_series)};
  double h = 1e-5;
  long steps = 0;
  const long max_steps = 20000000;
  while (idx < N) {
    const double r_target = r_nodes[idx];
    if (r_cur >= r_target) {
      sol.F[idx] = y.F;
      sol.T_raw[idx] = y.T;
      ++idx;
      continue;
    }
    double h_try = std::min(h, 0.05 * (1.0 - r_cur));
    bool lands = false;
    if (r_cur + h_try >= r_target) {
      h_try = r_target - r_cur;
      lands = true;
    }
    const StepResult st = dopri5_step(n, s, r_cur, y, h_try, rtol, atol);
    if (++steps > max_steps)
      throw std::runtime_error("solve_F: step budget exhausted (no convergence)");
    if (st.error <= 1.0) {
      r_cur = lands ? r_target : r_cur + h_try;
      y = st.y;
      const double grow =
          std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(st.error, 1e-10), -0.2)));
      h = h_try * grow;
    } else {
      h = h_try * std::max(0.1, 0.9 * std::pow(st.error, -0.2));
      if (h < 1e-18)
        throw std::runtime_error("solve_F: step size underflow (no convergence)");
    }
  }
  return sol;
}

void reconstruct(DefiningFunctionSolution& sol) {
  const int N = static_cast<int>(sol.r.size());
  if (N == 0 || sol.F.size() != N || sol.T_raw.size() != N)
    throw std::invalid_argument("reconstruct: solve_F output required");
  const double delta = 1.0 - sol.r[N - 1];
  // integral of F over the uncovered tail [r_max, 1], trapezoid with the
  // boundary value F(1) = -1.
  const double tail = 0.5 * delta * (sol.F[N - 1] - 1.0);
  sol.T = sol.T_raw.array() - (sol.T_raw[N - 1] + tail);
  sol.t = sol.T.array().exp();
  sol.rho_star.resize(N);
  for (int i = 0; i < N; ++i) sol.rho_star[i] = rho_flat(sol.r[i]) * sol.t[i];
  sol.J = curvature_J(sol);
  auto [prr, ptt] = schouten_components(sol);
  sol.P_rr = std::move(prr);
  sol.P_tt = std::move(ptt);
}

Eigen::VectorXd curvature_J(const DefiningFunctionSolution& sol) {
  require_reconstructed(sol, "curvature_J");
  const int N = static_cast<int>(sol.r.size());
  Eigen::VectorXd J(N);
  for (int i = 0; i < N; ++i) {
    const double r = sol.r[i];
    const double F = sol.F[i];
    J[i] = std::exp(-2.0 * sol.T[i]) *
           (2.0 * (1.0 + r * F) / rho_flat(r) - F * F);
  }
  return J;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> schouten_components(
    const DefiningFunctionSolution& sol) {
  const int N = static_cast<int>(sol.r.size());
  if (N == 0 || sol.F.size() != N)
    throw std::invalid_argument("schouten_components: solve_F output required");
  Eigen::VectorXd prr(N), ptt(N);
  for (int i = 0; i < N; ++i) {
    const double r = sol.r[i];
    const double F = sol.F[i];
    const double Fp = defining_ode_rhs(sol.n, sol.s, r, F);
    prr[i] = -Fp + 0.5 * F * F;
    ptt[i] = -F / r - 0.5 * F * F;
  }
  return {prr, ptt};
}

Eigen::VectorXd ode_residual(const DefiningFunctionSolution& sol) {
  const int N = static_cast<int>(sol.r.size());
  if (N < 7)
    throw std::invalid_argument("ode_residual: need at least 7 grid nodes");
  const double K = 2.0 * sol.s - sol.n - 1.0;
  Eigen::VectorXd res(N);
  for (int i = 0; i < N; ++i) {
    const int start = std::min(std::max(i - 3, 0), N - 7);
    const Eigen::VectorXd stencil = sol.r.segment(start, 7);
    const Eigen::VectorXd w = fd_weights(sol.r[i], stencil, 1);
    const double Fd = w.dot(sol.F.segment(start, 7));
    const double r = sol.r[i];
    const double rho0 = rho_flat(r);
    res[i] = Fd + (sol.n - sol.s) * sol.F[i] * sol.F[i] +
             (K * r / rho0 + sol.n / r) * sol.F[i] + K / rho0;
  }
  return res;
}

double boundary_second_derivative(const DefiningFunctionSolution& sol) {
  require_reconstructed(sol, "boundary_second_derivative");
  const int N = static_cast<int>(sol.r.size());
  if (N < 3)
    throw std::invalid_argument("boundary_second_derivative: need 3 nodes");
  int best = 1;
  double best_dist = std::abs((1.0 - sol.r[1]) - 1e-3);
  for (int i = 2; i < N - 1; ++i) {
    const double d = std::abs((1.0 - sol.r[i]) - 1e-3);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  const Eigen::VectorXd stencil = sol.r.segment(best - 1, 3);
  const Eigen::VectorXd w = fd_weights(sol.r[best], stencil, 2);
  return w.dot(sol.T.segment(best - 1, 3));
}

BoundReport verify_lemma_bounds(const DefiningFunctionSolution& sol) {
  require_reconstructed(sol, "verify_lemma_bounds");
  const int N = static_cast<int>(sol.r.size());
  const int n = sol.n;
  const double s = sol.s;
  const double K = 2.0 * s - n - 1.0;
  const double D = 2.0 * s - n - 2.0;

  BoundReport rep;
  rep.unit_interval_applicable = s > 0.5 * n + 1.0;
  rep.sandwich_applicable = s >= 0.5 * (n + 1.0);
  rep.ratio_bound_applicable = s > 0.5 * n + 1.0;
  rep.ratio_limit_applicable = s > 0.5 * (n + 3.0);
  rep.terminal_slope_applicable = s > 0.5 * (n + 3.0);

  double unit_margin = std::numeric_limits<double>::infinity();
  double sandwich_margin = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  double ratio_limit_max = 0.0;
  double slope_max = 0.0;
  double mono_viol = -std::numeric_limits<double>::infinity();
  double prev_logm = 0.0;
  for (int i = 0; i < N; ++i) {
    const double r = sol.r[i];
    const double F = sol.F[i];
    const double rho0 = rho_flat(r);
    const double one_rF = 1.0 + r * F;
    unit_margin = std::min(unit_margin, std::min(one_rF, 1.0 - one_rF));
    const ClosedFormDefiners cf = closed_form_definers(r);
    sandwich_margin = std::min(
        sandwich_margin,
        std::min(sol.rho_star[i] - cf.rho_0, cf.rho_L - sol.rho_star[i]));
    ratio_max = std::max(ratio_max, one_rF / rho0);
    if (r >= 1.0 / 3.0)
      ratio_limit_max = std::max(
          ratio_limit_max, std::abs(one_rF / rho0 - (s - 1.0) / D) *
                               (2.0 * s - n - 3.0) / rho0);
    slope_max = std::max(slope_max, std::abs(1.0 + F) / rho0);
    // monotone combination, compared in log magnitude (F < 0 in (0,1))
    const double logm = -K * std::log(rho0) + n * std::log(r) + (n - s) * sol.T[i] +
                        std::log(std::max(std::abs(F), 1e-300));
    if (i > 0) mono_viol = std::max(mono_viol, prev_logm - logm);
    prev_logm = logm;
  }
  rep.unit_interval_margin = unit_margin;
  rep.sandwich_margin = sandwich_margin;
  rep.ratio_bound_C = ratio_max * D;
  rep.ratio_limit_C = ratio_limit_max;
  rep.terminal_slope_C = slope_max;
  rep.monotone_violation = mono_viol;
  rep.terminal_F_deviation = std::abs(sol.F[N - 1] + 1.0);
  rep.all_pass = (!rep.unit_interval_applicable || rep.unit_interval_margin > 0.0) &&
                 (!rep.sandwich_applicable || rep.sandwich_margin > -1e-12) &&
                 rep.monotone_violation <= 1e-10;
  return rep;
}

BoundaryExpansionFit boundary_expansion_fit(const DefiningFunctionSolution& sol) {
  require_reconstructed(sol, "boundary_expansion_fit");
  if (sol.n < 4)
    throw std::invalid_argument("boundary_expansion_fit: requires n >= 4");
  const double gamma = sol.gamma();
  if (!(sol.s > 0.5 * sol.n + 1.0))
    throw std::invalid_argument("boundary_expansion_fit: requires s > n/2 + 1");

  BoundaryExpansionFit fit;
  fit.rho_window = 0.02;
  fit.degenerate = std::abs(2.0 * gamma - 2.0) < 0.05;

  const int N = static_cast<int>(sol.r.size());
  std::vector<int> rows;
  for (int i = 0; i < N; ++i) {
    const double rho = 2.0 * (1.0 - sol.r[i]) / (1.0 + sol.r[i]);
    if (rho <= fit.rho_window) rows.push_back(i);
  }
  fit.points_used = static_cast<int>(rows.size());
  if (fit.points_used < 8)
    throw std::invalid_argument(
        "boundary_expansion_fit: too few nodes inside the boundary window");

  Eigen::MatrixXd M(fit.points_used, 3);
  Eigen::VectorXd y(fit.points_used);
  for (int k = 0; k < fit.points_used; ++k) {
    const int i = rows[static_cast<size_t>(k)];
    const double rho = 2.0 * (1.0 - sol.r[i]) / (1.0 + sol.r[i]);
    M(k, 0) = 1.0;
    M(k, 1) = rho * rho;
    M(k, 2) = std::pow(rho, 2.0 * gamma);
    y[k] = sol.rho_star[i] / rho;
  }
  // column scaling keeps the normal directions comparable
  Eigen::Vector3d scale;
  for (int j = 0; j < 3; ++j) {
    scale[j] = M.col(j).norm();
    M.col(j) /= scale[j];
  }
  Eigen::Vector3d coef = M.colPivHouseholderQr().solve(y);
  for (int j = 0; j < 3; ++j) coef[j] /= scale[j];

  fit.c0 = coef[0];
  fit.c2 = coef[1];
  fit.c2gamma = coef[2];
  const double D = 2.0 * sol.s - sol.n - 2.0;
  fit.ref_c2 = -sol.n / (4.0 * D);
  fit.ref_c2gamma = gamma_ratio(0.5 * sol.n, gamma) / d_gamma(gamma);
  fit.rel_dev_c2 = (fit.c2 - fit.ref_c2) / std::abs(fit.ref_c2);
  fit.rel_dev_c2gamma = (fit.c2gamma - fit.ref_c2gamma) / std::abs(fit.ref_c2gamma);
  return fit;
}

}  // namespace fsph
