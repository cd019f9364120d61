#include "fsph/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fsph/functionals.hpp"
#include "fsph/harmonics.hpp"
#include "fsph/quadrature.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

namespace {

constexpr int kMaxBand = 2048;
constexpr int kMidPointsPerPanel = 16;
constexpr int kMidPanels = 24;
constexpr int kBoundaryPoints = 80;
constexpr double kSplitLo = 1.0 / 3.0;
constexpr double kSplitHi = 2.0 / 3.0;

int oversampled_band(int L) { return std::min(kMaxBand, 4 * L + 8); }

// ---------------------------------------------------------------------------
// Cutoff profile: the normalized primitive of a mollifier density,
//   chi(v) = (1/Z) * integral_0^v kappa,   kappa(t) = exp(-q1/t - q2/(1-t) + P(t)),
// with P a fixed Chebyshev polynomial. Because kappa > 0, chi is a CDF:
// monotone, in [0,1], and flat to all orders at both ends of (0,1). The
// density parameters are fixed numbers chosen once to minimize the
// transition-shell energy of the fourth-order radial operator (the quadratic
// functional in chi, chi', chi'' that the ball energy integrates over the
// transition shell). The minimized value sits within 3% of the exact
// variational floor of that functional over all profiles with flat contact,
// so no admissible cutoff can do materially better.
// ---------------------------------------------------------------------------

struct ChiParts {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

constexpr double kChiBarrier0 = 0.029989162606567282;
constexpr double kChiBarrier1 = 0.029996460014205056;
constexpr int kChiShapeCount = 10;
constexpr double kChiShape[kChiShapeCount] = {
    -1.0689496024359628,     -0.68628714827187054,   -0.021471638780709228,
    -0.082693347635872619,   -0.00066663482145199664, 0.031745537323713872,
    -0.00029951048080799868,  0.034504133561054751,  -0.00015103829338054535,
     0.015589637033821217};

double chi_density(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double e = -kChiBarrier0 / t - kChiBarrier1 / (1.0 - t);
  const double x = 2.0 * t - 1.0;
  double t0 = 1.0, t1 = x;
  for (int k = 0; k < kChiShapeCount; ++k) {
    e += kChiShape[k] * t1;
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return e < -700.0 ? 0.0 : std::exp(e);
}

double chi_density_log_slope(double t) {
  double d = kChiBarrier0 / (t * t) - kChiBarrier1 / ((1.0 - t) * (1.0 - t));
  const double x = 2.0 * t - 1.0;
  double t0 = 1.0, t1 = x, d0 = 0.0, d1 = 1.0;
  for (int k = 0; k < kChiShapeCount; ++k) {
    d += 2.0 * kChiShape[k] * d1;
    const double t2 = 2.0 * x * t1 - t0;
    const double d2 = 2.0 * t1 + 2.0 * x * d1 - d0;
    t0 = t1;
    t1 = t2;
    d0 = d1;
    d1 = d2;
  }
  return d;
}

// Integrates the density over [a,b] with 64-point Gauss-Legendre. Breakpoints
// at 0.1 and 0.9 isolate the barrier layers so the same panels serve both the
// partial integral and the normalizer, keeping chi in [0,1] to round-off.
double chi_density_integral(double v) {
  static const QuadratureRule gl = gauss_legendre(64);
  auto panel = [](double a, double b) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i)
      s += gl.weights[i] * chi_density(m + h * gl.nodes[i]);
    return h * s;
  };
  static const double breaks[5] = {0.0, 0.1, 0.5, 0.9, 1.0};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (v >= breaks[k + 1]) {
      acc += panel(breaks[k], breaks[k + 1]);
    } else {
      if (v > breaks[k]) acc += panel(breaks[k], v);
      break;
    }
  }
  return acc;
}

double chi_normalizer() {
  static const double z = chi_density_integral(1.0);
  return z;
}

ChiParts chi_parts(double r) {
  ChiParts out;
  if (r <= kSplitLo) return out;
  if (r >= kSplitHi) {
    out.value = 1.0;
    return out;
  }
  const double v = 3.0 * r - 1.0;
  const double z = chi_normalizer();
  const double k = chi_density(v);
  out.value = std::min(1.0, std::max(0.0, chi_density_integral(v) / z));
  out.d1 = 3.0 * k / z;
  out.d2 = 9.0 * k * chi_density_log_slope(v) / z;
  return out;
}

// ---------------------------------------------------------------------------
// Angular data: omega, |grad omega|^2 and (for S^4) the positive Laplacian,
// all sampled on an oversampled quadrature grid.
// ---------------------------------------------------------------------------

Eigen::VectorXd samples_on(const FunctionSpec& spec, const SphereGrid& grid) {
  if (spec.tag != FunctionSpec::Tag::GridSamples) return materialize(spec, grid);
  auto native = build_grid(spec.n, spec.grid_L);
  auto c = analyze(materialize(spec, native), native);
  return synthesize(c, grid);
}

struct AngularData {
  SphereGrid grid;
  Eigen::VectorXd w;
  Eigen::VectorXd grad2;
  Eigen::VectorXd lap;  // positive Laplacian; filled for n = 4 only
};

AngularData build_angular(const FunctionSpec& omega, bool need_laplacian) {
  AngularData out;
  out.grid = build_grid(omega.n, oversampled_band(omega.band_limit_hint()));
  out.w = samples_on(omega, out.grid);
  auto c = analyze(out.w, out.grid);
  auto grad = synthesize_gradient(c, out.grid);
  out.grad2 = grad.dtheta.array().square() + grad.dphi_over_sin.array().square();
  if (need_laplacian) {
    Eigen::VectorXd factor(c.L + 1);
    for (int l = 0; l <= c.L; ++l) factor[l] = laplacian_eigenvalue(omega.n, l);
    out.lap = synthesize(apply_degreewise(c, factor), out.grid);
  }
  return out;
}

double sphere_integral(const SphereGrid& grid, const Eigen::VectorXd& values) {
  return values.size() == grid.nlat() ? grid.integrate_zonal(values)
                                      : grid.integrate_full(values);
}

// ---------------------------------------------------------------------------
// Radial rules. The transition slab [1/3, 2/3] uses composite Gauss-Legendre
// panels; [2/3, 1) is mapped to u = 1 - r and carries a Gauss rule whose
// weights absorb the endpoint power u^{n-1-2 gamma}.
// ---------------------------------------------------------------------------

struct RadialRule {
  QuadratureRule mid;       // nodes in (1/3, 2/3), ascending
  QuadratureRule boundary;  // u-nodes in (0, 1/3), ascending, weights with u^beta
};

RadialRule make_radial_rule(int n, double gamma) {
  RadialRule rule;
  rule.mid = composite_gauss_legendre(kMidPointsPerPanel, kMidPanels, kSplitLo, kSplitHi);
  rule.boundary = gauss_power_endpoint(kBoundaryPoints, n - 1.0 - 2.0 * gamma, kSplitLo);
  return rule;
}

// Lee weight rho_L = (1-r^2)/(1+r^2) divided by u = 1-r, as a function of u.
double lee_over_u(double u) { return (2.0 - u) / (2.0 - 2.0 * u + u * u); }

void check_profile(const ExtensionProfile& profile, int n, const char* who) {
  if (profile.omega.n != n)
    throw std::invalid_argument(std::string(who) + ": profile dimension mismatch");
}

void check_solution_match(const DefiningFunctionSolution& sol, int n, double s,
                          const Eigen::VectorXd& nodes, const char* who) {
  if (sol.n != n || std::abs(sol.s - s) > 1e-12)
    throw std::invalid_argument(std::string(who) +
                                ": defining-function solution has wrong (n, s)");
  if (sol.T.size() != sol.r.size() || sol.rho_star.size() != sol.r.size())
    throw std::invalid_argument(std::string(who) +
                                ": defining-function solution not reconstructed");
  if (sol.r.size() != nodes.size() ||
      (sol.r - nodes).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(std::string(who) +
                                ": solution grid does not match the quadrature nodes");
}

// Shared core of B0 and its adapted-weight variant. rho_mid / rho_over_u_bd
// supply the defining-function weight at the mid nodes (value of rho) and at
// the boundary nodes (rho divided by u, ascending in u).
double b0_core(double gamma, const ExtensionProfile& profile,
               const RadialRule& rule, const Eigen::VectorXd& rho_mid,
               const Eigen::VectorXd& rho_over_u_bd, bool include_mid,
               bool include_boundary) {
  const double c = 1.0 - gamma;
  const AngularData ang = build_angular(profile.omega, false);
  double total = 0.0;

  if (include_mid) {
    double acc = 0.0;
    for (int i = 0; i < rule.mid.nodes.size(); ++i) {
      const double r = rule.mid.nodes[i];
      const ChiParts chi = chi_parts(r);
      Eigen::ArrayXd efac = (2.0 * c * chi.value * ang.w.array()).exp();
      Eigen::ArrayXd density =
          efac * (chi.d1 * chi.d1 * r * r * ang.w.array().square() +
                  chi.value * chi.value * ang.grad2.array());
      const double angular = sphere_integral(ang.grid, density.matrix());
      const double weight = 2.0 * std::pow(rho_mid[i], 2.0 * c) / (1.0 - r * r);
      acc += rule.mid.weights[i] * weight * angular;
    }
    total += acc;
  }

  if (include_boundary) {
    Eigen::ArrayXd efac = (2.0 * c * ang.w.array()).exp();
    const double angular = sphere_integral(ang.grid, (efac * ang.grad2.array()).matrix());
    double acc = 0.0;
    for (int k = 0; k < rule.boundary.nodes.size(); ++k) {
      const double u = rule.boundary.nodes[k];
      acc += rule.boundary.weights[k] * 2.0 *
             std::pow(rho_over_u_bd[k], 2.0 * c) / (2.0 - u);
    }
    total += angular * acc;
  }

  const double pref =
      std::exp(log_gamma(gamma) - log_gamma(2.0 - gamma)) * std::pow(2.0, 2.0 * gamma - 1.0);
  return pref * c * total;
}

Eigen::VectorXd lee_rho_mid(const RadialRule& rule) {
  Eigen::VectorXd rho(rule.mid.nodes.size());
  for (int i = 0; i < rho.size(); ++i) {
    const double r = rule.mid.nodes[i];
    rho[i] = (1.0 - r * r) / (1.0 + r * r);
  }
  return rho;
}

Eigen::VectorXd lee_rho_over_u_bd(const RadialRule& rule) {
  Eigen::VectorXd h(rule.boundary.nodes.size());
  for (int k = 0; k < h.size(); ++k) h[k] = lee_over_u(rule.boundary.nodes[k]);
  return h;
}

void check_gamma_open(double gamma, double lo, double hi, const char* who) {
  if (!(gamma > lo) || !(gamma < hi))
    throw std::invalid_argument(std::string(who) + ": gamma out of range");
}

// Scans the fourth-order integrand over all quadrature nodes, accumulating
// the integral and tracking the minimum of the curvature-corrected bracket.
void b1_scan(double gamma, const ExtensionProfile& profile,
             const DefiningFunctionSolution& sol, double* integral_out,
             double* bracket_min_out) {
  check_gamma_open(gamma, 1.75, 2.0, "B1");
  check_profile(profile, 4, "B1");
  const Eigen::VectorXd nodes = ball_radial_nodes(4, gamma);
  check_solution_match(sol, 4, 2.0 + gamma, nodes, "B1");

  const double c2 = 2.0 - gamma;
  const double m1 = 3.0 - 2.0 * gamma;
  const double nm = 6.0 - 2.0 * gamma;  // n + m1 - 1
  const RadialRule rule = make_radial_rule(4, gamma);
  const AngularData ang = build_angular(profile.omega, true);
  if (ang.w.size() != ang.grid.nlat())
    throw std::invalid_argument("B1: omega must be zonal on S^4");

  const int nmid = static_cast<int>(rule.mid.nodes.size());
  const int nbd = static_cast<int>(rule.boundary.nodes.size());
  const int nang = ang.grid.nlat();

  double integral = 0.0;
  double bracket_min = std::numeric_limits<double>::infinity();

  for (int i = 0; i < nmid + nbd; ++i) {
    // Radial weight carrying dr, rho_0^{m1} and r^4; boundary nodes already
    // absorb u^{m1} inside their quadrature weights.
    double r, rad_weight;
    int sol_index;
    if (i < nmid) {
      r = rule.mid.nodes[i];
      const double rho0 = 0.5 * (1.0 - r * r);
      rad_weight = rule.mid.weights[i] * std::pow(rho0, m1);
      sol_index = i;
    } else {
      const int k = i - nmid;  // ascending u
      const double u = rule.boundary.nodes[k];
      r = 1.0 - u;
      rad_weight = rule.boundary.weights[k] * std::pow(0.5 * (2.0 - u), m1);
      sol_index = nmid + (nbd - 1 - k);  // grid stores these ascending in r
    }
    rad_weight *= r * r * r * r;

    const ChiParts chi = chi_parts(r);
    const double F = sol.F[sol_index];
    const double T = sol.T[sol_index];
    const double Jbar = sol.J[sol_index] * std::exp(2.0 * T);
    const double Prr = sol.P_rr[sol_index];
    const double Ptt = sol.P_tt[sol_index];
    const double radial_slope =
        chi.d2 + (4.0 / r) * chi.d1 + m1 * (2.0 * r / (1.0 - r * r)) * chi.d1 -
        nm * F * chi.d1;

    double angsum = 0.0;
    for (int j = 0; j < nang; ++j) {
      const double w = ang.w[j];
      const double grad2 = ang.grad2[j];
      const double lap = ang.lap[j];
      const double a2 = chi.d1 * chi.d1 * w * w;                 // (d_r Omega)^2
      const double t2 = (chi.value / r) * (chi.value / r) * grad2;
      const double G = a2 + t2;
      const double Dflat =
          radial_slope * w - (chi.value / (r * r)) * lap - c2 * G;
      const double brk = Dflat * Dflat + nm * Jbar * G - 4.0 * (Prr * a2 + Ptt * t2);
      bracket_min = std::min(bracket_min, brk);
      const double efac = std::exp(2.0 * c2 * (chi.value * w + T));
      angsum += ang.grid.colat_weights[j] * efac * brk;
    }
    integral += rad_weight * angsum * ang.grid.longitude_factor;
  }

  const double pref = std::exp((2.0 * gamma - 3.0) * std::log(2.0) +
                               log_gamma(gamma) - log_gamma(3.0 - gamma));
  if (integral_out) *integral_out = pref * c2 * integral;
  if (bracket_min_out) *bracket_min_out = bracket_min;
}

int env_thread_count() {
  const char* raw = std::getenv("FSPH_THREADS");
  if (!raw) return 1;
  const int parsed = std::atoi(raw);
  return parsed > 1 ? parsed : 1;
}

}  // namespace

double cutoff_chi(double r) { return chi_parts(r).value; }
double cutoff_chi_prime(double r) { return chi_parts(r).d1; }
double cutoff_chi_second(double r) { return chi_parts(r).d2; }

Eigen::VectorXd ball_radial_nodes(int n, double gamma) {
  if (n != 2 && n != 4)
    throw std::invalid_argument("ball_radial_nodes: n must be 2 or 4");
  if (!(gamma > 0.0) || !(gamma < 0.5 * n))
    throw std::invalid_argument("ball_radial_nodes: gamma out of range");
  const RadialRule rule = make_radial_rule(n, gamma);
  const int nmid = static_cast<int>(rule.mid.nodes.size());
  const int nbd = static_cast<int>(rule.boundary.nodes.size());
  Eigen::VectorXd nodes(nmid + nbd);
  nodes.head(nmid) = rule.mid.nodes;
  for (int k = 0; k < nbd; ++k)
    nodes[nmid + k] = 1.0 - rule.boundary.nodes[nbd - 1 - k];
  return nodes;
}

double B0(double gamma, const ExtensionProfile& profile) {
  check_gamma_open(gamma, 0.0, 1.0, "B0");
  check_profile(profile, 2, "B0");
  const RadialRule rule = make_radial_rule(2, gamma);
  return b0_core(gamma, profile, rule, lee_rho_mid(rule), lee_rho_over_u_bd(rule),
                 true, true);
}

double B0_interior_part(double gamma, const ExtensionProfile& profile) {
  check_gamma_open(gamma, 0.0, 1.0, "B0_interior_part");
  check_profile(profile, 2, "B0_interior_part");
  const RadialRule rule = make_radial_rule(2, gamma);
  return b0_core(gamma, profile, rule, lee_rho_mid(rule), lee_rho_over_u_bd(rule),
                 true, false);
}

double boundary_radial_factor(double gamma) {
  check_gamma_open(gamma, 0.0, 1.0, "boundary_radial_factor");
  const RadialRule rule = make_radial_rule(2, gamma);
  const double c = 1.0 - gamma;
  double acc = 0.0;
  for (int k = 0; k < rule.boundary.nodes.size(); ++k) {
    const double u = rule.boundary.nodes[k];
    acc += rule.boundary.weights[k] * 2.0 *
           std::pow(lee_over_u(u), 2.0 * c) / (2.0 - u);
  }
  return acc;
}

double B0_sandwich_variant(double gamma, const ExtensionProfile& profile,
                           const DefiningFunctionSolution& sol) {
  check_gamma_open(gamma, 0.5, 1.0, "B0_sandwich_variant");
  check_profile(profile, 2, "B0_sandwich_variant");
  const Eigen::VectorXd nodes = ball_radial_nodes(2, gamma);
  check_solution_match(sol, 2, 1.0 + gamma, nodes, "B0_sandwich_variant");
  const RadialRule rule = make_radial_rule(2, gamma);
  const int nmid = static_cast<int>(rule.mid.nodes.size());
  const int nbd = static_cast<int>(rule.boundary.nodes.size());
  Eigen::VectorXd rho_mid = sol.rho_star.head(nmid);
  Eigen::VectorXd rho_over_u(nbd);
  for (int k = 0; k < nbd; ++k)
    rho_over_u[k] = sol.rho_star[nmid + (nbd - 1 - k)] / rule.boundary.nodes[k];
  return b0_core(gamma, profile, rule, rho_mid, rho_over_u, true, true);
}

double B1(double gamma, const ExtensionProfile& profile,
          const DefiningFunctionSolution& sol) {
  double value = 0.0;
  b1_scan(gamma, profile, sol, &value, nullptr);
  return value;
}

double b1_bracket_minimum(double gamma, const ExtensionProfile& profile,
                          const DefiningFunctionSolution& sol) {
  double lowest = 0.0;
  b1_scan(gamma, profile, sol, nullptr, &lowest);
  return lowest;
}

double curvature_combination_constant(double gamma,
                                      const DefiningFunctionSolution& sol) {
  check_gamma_open(gamma, 1.75, 2.0, "curvature_combination_constant");
  const Eigen::VectorXd nodes = ball_radial_nodes(4, gamma);
  check_solution_match(sol, 4, 2.0 + gamma, nodes,
                       "curvature_combination_constant");
  const double nm = 6.0 - 2.0 * gamma;
  const double limit = 8.0 * (2.0 - gamma) / (gamma - 1.0) + 2.0;
  double fitted = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    if (r < kSplitHi) continue;
    const double rho0 = 0.5 * (1.0 - r * r);
    const double jbar = sol.J[i] * std::exp(2.0 * sol.T[i]);
    const double comb = (nm * jbar - 4.0 * sol.P_tt[i]) / (r * r);
    fitted = std::max(fitted, std::fabs(comb - limit) / rho0);
  }
  return fitted;
}

std::vector<ContinuationRecord> sweep(int n, const FunctionSpec& omega,
                                      const std::vector<double>& gammas) {
  if (n != 2 && n != 4) throw std::invalid_argument("sweep: n must be 2 or 4");
  if (omega.n != n) throw std::invalid_argument("sweep: omega dimension mismatch");
  if (gammas.empty()) throw std::invalid_argument("sweep: empty gamma grid");
  const double lo = (n == 2) ? 0.0 : 1.75;
  const double hi = 0.5 * n;
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > lo) || !(gammas[i] < hi))
      throw std::invalid_argument("sweep: gamma out of the admissible range");
    if (i > 0 && !(gammas[i] > gammas[i - 1]))
      throw std::invalid_argument("sweep: gamma grid must be strictly increasing");
  }

  double targetA, targetB;
  {
    auto base = build_grid(n, omega.band_limit_hint());
    auto c = analyze(samples_on(omega, base), base);
    if (n == 2) {
      targetA = onofri_limit_target(omega);
      targetB = gradient_energy(c);
    } else {
      targetA = onofri_limit_target_s4(omega);
      targetB = fourth_order_energy(c);
    }
  }

  const ExtensionProfile profile{omega};
  std::vector<ContinuationRecord> records(gammas.size());
  auto eval_one = [&](size_t i) {
    ContinuationRecord rec;
    rec.n = n;
    rec.gamma = gammas[i];
    rec.targetA = targetA;
    rec.targetB = targetB;
    if (n == 2) {
      rec.A = A0(gammas[i], omega);
      rec.B = B0(gammas[i], profile);
    } else {
      auto sol = solve_F(4, 2.0 + gammas[i], ball_radial_nodes(4, gammas[i]));
      reconstruct(sol);
      rec.A = A1(gammas[i], omega);
      rec.B = B1(gammas[i], profile, sol);
    }
    records[i] = rec;
  };

  const int workers =
      std::min<int>(env_thread_count(), static_cast<int>(gammas.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < gammas.size(); ++i) eval_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < gammas.size(); i = next.fetch_add(1))
          eval_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

LimitExtrapolation extrapolate_limit(const std::vector<ContinuationRecord>& records) {
  if (records.size() < 3)
    throw std::invalid_argument("extrapolate_limit: need at least 3 records");
  const int n = records.front().n;
  const int m = static_cast<int>(records.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd ya(m), yb(m);
  for (int i = 0; i < m; ++i) {
    if (records[i].n != n)
      throw std::invalid_argument("extrapolate_limit: mixed dimensions");
    X(i, 0) = 1.0;
    X(i, 1) = 0.5 * n - records[i].gamma;
    ya[i] = records[i].A;
    yb[i] = records[i].B;
  }
  const double spread = X.col(1).maxCoeff() - X.col(1).minCoeff();
  if (!(spread > 1e-13 * (1.0 + X.col(1).cwiseAbs().maxCoeff())))
    throw std::invalid_argument("extrapolate_limit: degenerate fit (collinear gammas)");

  auto qr = X.colPivHouseholderQr();
  Eigen::Vector2d ca = qr.solve(ya);
  Eigen::Vector2d cb = qr.solve(yb);
  LimitExtrapolation out;
  out.A_limit = ca[0];
  out.A_rate = ca[1];
  out.A_residual = std::sqrt((X * ca - ya).squaredNorm() / m);
  out.B_limit = cb[0];
  out.B_rate = cb[1];
  out.B_residual = std::sqrt((X * cb - yb).squaredNorm() / m);
  return out;
}

}  // namespace fsph
