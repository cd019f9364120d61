#pragma once

#include <Eigen/Dense>
#include <utility>

namespace fsph {

// Closed-form boundary defining functions on the unit-ball model of
// hyperbolic space, expressed in the ball radius r in [0, 1).
struct ClosedFormDefiners {
  double r = 0.0;
  double rho = 0.0;    // geodesic-normal form: 2(1-r)/(1+r)
  double rho_L = 0.0;  // balanced form: (1-r^2)/(1+r^2)
  double rho_0 = 0.0;  // flat form: (1-r^2)/2
};

ClosedFormDefiners closed_form_definers(double r);

// Radial grid with a resolved boundary layer: uniform spacing on
// [r_start, r_split], then uniform in ln(1-r) on (r_split, 1-delta].
struct RadialGridSpec {
  int n_inner = 1024;
  int n_boundary = 1024;
  double r_start = 1e-3;
  double r_split = 2.0 / 3.0;
  double delta = 1e-6;
};

Eigen::VectorXd make_radial_grid(const RadialGridSpec& spec);

// Radial profile of the adapted defining function rho_* = rho_0 e^T.
// F = T' solves a singular first-order ODE with F(0) = 0 and F -> -1 at the
// boundary; s = n/2 + gamma is the spectral parameter.
struct DefiningFunctionSolution {
  int n = 0;
  double s = 0.0;
  Eigen::VectorXd r;
  Eigen::VectorXd F;
  Eigen::VectorXd T_raw;    // antiderivative of F from the center (ungauged)
  Eigen::VectorXd T;        // gauged so that T -> 0 at r = 1
  Eigen::VectorXd t;        // e^T = rho_*/rho_0
  Eigen::VectorXd rho_star; // rho_0 * t
  Eigen::VectorXd J;        // weighted scalar curvature along the foliation
  Eigen::VectorXd P_rr;     // radial Schouten component (orthonormal frame)
  Eigen::VectorXd P_tt;     // tangential Schouten component (mixed one is 0)
  double gamma() const { return s - 0.5 * n; }
};

// Right-hand side F' of the radial ODE at (r, F).
double defining_ode_rhs(int n, double s, double r, double F);

// Integrates the ODE from a series start near r = 0 with adaptive high-order
// stepping, landing exactly on the requested nodes; fills n, s, r, F, T_raw.
// Throws std::invalid_argument for s outside ((n+1)/2, n) or a bad grid,
// std::runtime_error if the step controller cannot converge.
DefiningFunctionSolution solve_F(int n, double s, const Eigen::VectorXd& r_nodes);

// Fills T (gauged by a terminal trapezoid tail using the boundary value -1),
// t, rho_star, J, P_rr, P_tt.
void reconstruct(DefiningFunctionSolution& sol);

// e^{-2T} (2(1+rF)/rho_0 - F^2); requires reconstruct().
Eigen::VectorXd curvature_J(const DefiningFunctionSolution& sol);

// Schouten components of the compactified metric in an orthonormal frame of
// the flat background: P_rr = -F' + F^2/2, P_tt = -F/r - F^2/2, with F' taken
// from the ODE rather than finite differences.  The mixed radial-tangential
// component vanishes identically for radial profiles.
std::pair<Eigen::VectorXd, Eigen::VectorXd> schouten_components(
    const DefiningFunctionSolution& sol);

// Pointwise residual of the F-equation using 5-point finite differences of
// the stored F on the (nonuniform) grid.
Eigen::VectorXd ode_residual(const DefiningFunctionSolution& sol);

// Second derivative of T by a 3-point difference at the node nearest
// 1 - r = 1e-3: close enough to the boundary to expose the limit value,
// far enough that the difference quotient is not dominated by rounding.
double boundary_second_derivative(const DefiningFunctionSolution& sol);

// Pointwise bound report for the solved profile.  Margins are data, not
// errors: a violation shows up as a negative margin / positive violation.
struct BoundReport {
  // 0 < 1 + rF <= 1 (hypothesis s > n/2 + 1)
  bool unit_interval_applicable = false;
  double unit_interval_margin = 0.0;
  // rho_0 <= rho_* <= rho_L (hypothesis s >= (n+1)/2)
  bool sandwich_applicable = false;
  double sandwich_margin = 0.0;
  // (1+rF)/rho_0 <= C/(2s-n-2): smallest such C (hypothesis s > n/2 + 1)
  bool ratio_bound_applicable = false;
  double ratio_bound_C = 0.0;
  // |(1+rF)/rho_0 - (s-1)/(2s-n-2)| <= C rho_0/(2s-n-3) on r >= 1/3:
  // smallest such C (hypothesis s > (n+3)/2)
  bool ratio_limit_applicable = false;
  double ratio_limit_C = 0.0;
  // |1 + F| <= C rho_0: smallest such C (hypothesis s > (n+3)/2)
  bool terminal_slope_applicable = false;
  double terminal_slope_C = 0.0;
  // worst increase of ln|rho_0^{-(2s-n-1)} r^n e^{(n-s)T} F| violation between
  // consecutive nodes; the combination must grow in magnitude (<= 0 passes)
  double monotone_violation = 0.0;
  double terminal_F_deviation = 0.0;  // |F(r_max) + 1|
  bool all_pass = false;
};

BoundReport verify_lemma_bounds(const DefiningFunctionSolution& sol);

struct BoundaryExpansionFit {
  double c0 = 0.0;       // fitted constant term of rho_*/rho (should be 1)
  double c2 = 0.0;       // fitted rho^2 coefficient
  double c2gamma = 0.0;  // fitted rho^{2 gamma} coefficient
  double ref_c2 = 0.0;
  double ref_c2gamma = 0.0;
  double rel_dev_c2 = 0.0;      // signed, relative to ref_c2
  double rel_dev_c2gamma = 0.0; // signed, relative to ref_c2gamma
  bool degenerate = false;      // exponent collision 2 gamma ~ 2
  int points_used = 0;
  double rho_window = 0.0;
};

// Least-squares fit of rho_*/rho against {1, rho^2, rho^{2 gamma}} in a
// boundary window; requires n >= 4, s in (n/2+1, n), and reconstruct().
BoundaryExpansionFit boundary_expansion_fit(const DefiningFunctionSolution& sol);

}  // namespace fsph
