#pragma once

#include <Eigen/Dense>

namespace fsph {

// Surface measure |S^n| of the unit n-sphere: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_measure(int n);

// Quadrature grid on the round sphere S^n, n in {2,3,4}.
//
// Colatitude nodes theta_i in (0,pi) carry weights that already include the
// measure factor sin^{n-1}(theta), so that for a zonal (colatitude-only)
// function f:
//
//   integral_{S^n} f dtheta = longitude_factor * sum_i colat_weights[i] * f(theta_i)
//
// where longitude_factor = |S^{n-1}|. The rule integrates polynomials in
// cos(theta) exactly up to degree 2L+1. On S^2 the grid additionally carries
// 2L+2 equispaced longitudes for full (non-zonal) functions; full samples are
// stored row-major as samples[i_theta * nlon + i_phi].
struct SphereGrid {
  int n = 0;
  int L = 0;  // exactness degree: polynomials in cos(theta) up to 2L+1
  Eigen::VectorXd colat_nodes;    // theta values, ascending
  Eigen::VectorXd colat_weights;  // positive, includes sin^{n-1}(theta)
  Eigen::VectorXd cos_colat;      // cos(theta_i), cached
  Eigen::VectorXd lon_nodes;      // S^2 only: phi values, ascending
  double lon_weight = 0.0;        // S^2 only: 2*pi / nlon
  double longitude_factor = 0.0;  // |S^{n-1}|

  int nlat() const { return static_cast<int>(colat_nodes.size()); }
  int nlon() const { return static_cast<int>(lon_nodes.size()); }
  int nsamples_full() const { return nlat() * nlon(); }

  // Integral over S^n of a zonal function given by its colatitude samples.
  double integrate_zonal(const Eigen::VectorXd& colat_values) const;
  // Integral over S^2 of a full function given by row-major (theta,phi) samples.
  double integrate_full(const Eigen::VectorXd& samples) const;
};

// Builds the grid described above. Requires n in {2,3,4} and 1 <= L <= 2048.
SphereGrid build_grid(int n, int L);

}  // namespace fsph
