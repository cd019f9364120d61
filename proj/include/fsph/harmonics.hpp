#pragma once

#include <Eigen/Dense>

#include "fsph/grid.hpp"

namespace fsph {

// Spectral representation of a real function on S^n in the basis that is
// orthonormal with respect to the unnormalized surface measure dtheta.
//
// zonal = true  : values[l], 0 <= l <= L, coefficients of the normalized
//                 zonal (Gegenbauer-type) harmonics; available for n in {2,3,4}.
// zonal = false : full S^2 table packed degree-major, (L+1)^2 entries:
//                 index(l,0) = l^2, cosine harmonic (l,m) at l^2 + 2m - 1,
//                 sine harmonic (l,m) at l^2 + 2m.
//
// Parseval: sum of squared values = integral of f^2 over S^n.
struct HarmonicCoefficients {
  int n = 0;
  bool zonal = true;
  int L = 0;
  Eigen::VectorXd values;

  static int index(int l, int m, bool sine) {
    return m == 0 ? l * l : l * l + 2 * m - (sine ? 0 : 1);
  }
};

// Eigenvalue l(l+n-1) of the positive (geometer's) Laplacian on degree-l
// spherical harmonics of S^n.
double laplacian_eigenvalue(int n, int l);

// Forward transform: coefficients of the samples' harmonic expansion, exact
// for band-limited input up to the grid's exactness degree. Pass L to truncate
// below grid.L (default L = grid.L). On S^2 the sample count selects zonal
// (nlat values) vs full (nlat*nlon values) analysis; S^3/S^4 are zonal only.
HarmonicCoefficients analyze(const Eigen::VectorXd& samples, const SphereGrid& grid,
                             int L = -1);

// Pointwise evaluation of the expansion on the grid (zonal -> colatitude
// samples; full -> row-major (theta,phi) samples). The target grid may differ
// from the analysis grid; requires c.L <= grid.L.
Eigen::VectorXd synthesize(const HarmonicCoefficients& c, const SphereGrid& grid);

// Colatitude derivative d/dtheta and longitude derivative (1/sin theta) d/dphi
// evaluated on the grid. For zonal coefficients dphi_over_sin is identically 0
// and dtheta has one value per colatitude node.
struct GradientSamples {
  Eigen::VectorXd dtheta;
  Eigen::VectorXd dphi_over_sin;
};
GradientSamples synthesize_gradient(const HarmonicCoefficients& c,
                                    const SphereGrid& grid);

// Coefficient-wise multiplication by a per-degree factor (factor_per_l has
// L+1 entries); the block structure in l is preserved.
HarmonicCoefficients apply_degreewise(const HarmonicCoefficients& c,
                                      const Eigen::VectorXd& factor_per_l);

}  // namespace fsph
