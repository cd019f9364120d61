#pragma once

#include <Eigen/Dense>

#include "fsph/harmonics.hpp"

namespace fsph {

// Eigenvalue of the order-2gamma conformally covariant operator on degree-l
// spherical harmonics of S^n: Gamma(l + n/2 + gamma) / Gamma(l + n/2 - gamma).
// Requires 0 < gamma < n/2 and l >= 0.
double multiplier_p2gamma(int n, double gamma, int l);

// Per-degree coefficient of the S^4 fourth-order energy
// integral(|Delta w|^2 + 2|grad w|^2): (l(l+3))^2 + 2 l(l+3), which equals
// l(l+1)(l+2)(l+3).
double paneitz_energy_multiplier(int l);

// Table of multiplier eigenvalues for degrees 0..L.
struct SpectralMultiplier {
  int n = 0;
  double gamma = 0.0;
  Eigen::VectorXd eigenvalues;  // entry l = eigenvalue on degree-l harmonics
};
SpectralMultiplier build_multiplier(int n, double gamma, int L);

// Diagonal action in the harmonic basis: multiplies each degree-l block by
// the multiplier eigenvalue. Requires matching dimension and c.L within the
// multiplier's table.
HarmonicCoefficients apply_operator(const HarmonicCoefficients& c,
                                    const SpectralMultiplier& m);

// Sharp Sobolev constant Y and Q-curvature constant Q of order 2gamma:
//   Y = Gamma(n/2+gamma)/Gamma(n/2-gamma) * |S^n|^{2gamma/n},
//   Q = (2/(n-2gamma)) * Gamma(n/2+gamma)/Gamma(n/2-gamma),
// linked by Y = ((n-2gamma)/2) * Q * |S^n|^{2gamma/n}.
struct SharpConstant {
  int n = 0;
  double gamma = 0.0;
  double Y = 0.0;
  double Q = 0.0;
};
SharpConstant sharp_constants(int n, double gamma);

}  // namespace fsph
