#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsph/defining_function.hpp"
#include "fsph/function_spec.hpp"

namespace fsph {

// Radial cutoff used to extend boundary data into the ball: identically 0 on
// [0,1/3], identically 1 on [2/3,1], C-infinity across the transitions, and
// monotone with values in [0,1]. Realized as the normalized primitive of an
// exp(-1/x)-type mollifier density whose fixed shape parameters minimize the
// weighted transition energy of the fourth-order ball integrand.
double cutoff_chi(double r);
double cutoff_chi_prime(double r);
double cutoff_chi_second(double r);

// Test profile Omega(r, theta) = chi(r) * omega(theta) on the unit ball.
struct ExtensionProfile {
  FunctionSpec omega;
};

// One gamma sample of the two-sided continuation: A is the sphere-side
// quantity (A0 on S^2, A1 on S^4), B the ball-side upper bound (B0 / B1),
// targetA / targetB their respective limits as gamma -> n/2.
struct ContinuationRecord {
  int n = 2;
  double gamma = 0.0;
  double A = 0.0;
  double B = 0.0;
  double targetA = 0.0;
  double targetB = 0.0;
  double gap() const { return B - A; }
};

// Radial quadrature nodes of the ball integrals for dimension n (boundary
// S^n): Gauss-Legendre panels across the cutoff transition [1/3,2/3] plus a
// power-weight end rule on [2/3,1) absorbing the (1-r)^{n-1-2*gamma} factor.
// Strictly increasing, all inside (0,1); this is also the grid on which a
// DefiningFunctionSolution must be computed when one is required.
Eigen::VectorXd ball_radial_nodes(int n, double gamma);

// Ball energy bounding the S^2 continuation from above, gamma in (0,1):
//   (Gamma(gamma)/Gamma(2-gamma)) 2^{2 gamma - 1} (1-gamma) *
//     int_{B^3} e^{2(1-gamma) Omega} |grad Omega|^2_{g_L} rho_L^{1-2 gamma} dvol_{g_L}
// with rho_L = (1-r^2)/(1+r^2) and the metric of that defining function.
double B0(double gamma, const ExtensionProfile& profile);

// The [1/3, 2/3] radial slab of B0 (same prefactor); decays like O(1-gamma).
double B0_interior_part(double gamma, const ExtensionProfile& profile);

// int_{2/3}^1 2 rho_L^{2(1-gamma)} / (1-r^2) dr; multiplied by 2(1-gamma)
// this tends to 1 as gamma -> 1.
double boundary_radial_factor(double gamma);

// Variant of B0 with the weight built from the adapted defining function:
// the integrand acquires (rho_*/rho_L)^{2(1-gamma)} <= 1, so the result never
// exceeds B0. Requires gamma in (1/2, 1) and sol solved for (n=2, s=1+gamma)
// on ball_radial_nodes(2, gamma).
double B0_sandwich_variant(double gamma, const ExtensionProfile& profile,
                           const DefiningFunctionSolution& sol);

// Ball energy bounding the S^4 continuation from above, gamma in (7/4, 2):
//   (2^{2 gamma - 3} Gamma(gamma)/Gamma(3-gamma)) (2-gamma) *
//     int_{B^5} e^{2(2-gamma) Omega} ( [D Omega - (2-gamma)|grad Omega|^2]^2
//       + (6-2 gamma) J |grad Omega|^2 - 4 P_ij grad^i Omega grad^j Omega )
//       rho_*^{3-2 gamma} dvol_{g*}
// where D is the weighted Laplacian and J, P the weighted curvature data of
// the adapted metric, all reduced to (r, colatitude) by zonality. sol must be
// solved for (n=4, s=2+gamma) on ball_radial_nodes(4, gamma) and reconstructed.
double B1(double gamma, const ExtensionProfile& profile,
          const DefiningFunctionSolution& sol);

// Minimum over all quadrature nodes of the curvature-corrected square bracket
// inside B1 (before the positive weights); nonnegative for admissible input.
double b1_bracket_minimum(double gamma, const ExtensionProfile& profile,
                          const DefiningFunctionSolution& sol);

// Smallest constant C such that on the outer shell r >= 2/3 the curvature
// combination entering B1 deviates from its boundary value by at most
// C * rho_0(r) per unit |grad_theta omega|^2:
//   | ((6-2 gamma) e^{2T} J - 4 P_tt) / r^2 - (8(2-gamma)/(gamma-1) + 2) |
//     <= C * (1 - r^2)/2.
// sol as for B1. A bounded, gamma-stable C certifies the pointwise curvature
// estimate behind the upper-bound limit.
double curvature_combination_constant(double gamma,
                                      const DefiningFunctionSolution& sol);

// Evaluates the full two-sided family over a strictly increasing gamma grid:
// n = 2 pairs A0/B0 (gamma in (0,1)), n = 4 pairs A1/B1 (gamma in (7/4,2)).
// Fans out over gamma when the FSPH_THREADS environment variable asks for
// more than one worker; results are deterministic either way.
std::vector<ContinuationRecord> sweep(int n, const FunctionSpec& omega,
                                      const std::vector<double>& gammas);

// Linear-in-(n/2 - gamma) least-squares fit of A and B across >= 3 records:
// value at gamma = n/2, the fitted rate, and the RMS fit residual for each.
struct LimitExtrapolation {
  double A_limit = 0.0;
  double A_rate = 0.0;
  double A_residual = 0.0;
  double B_limit = 0.0;
  double B_rate = 0.0;
  double B_residual = 0.0;
};
LimitExtrapolation extrapolate_limit(const std::vector<ContinuationRecord>& records);

}  // namespace fsph
