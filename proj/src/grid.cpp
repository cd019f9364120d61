#include "fsph/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/quadrature.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

double sphere_measure(int n) {
  if (n < 1) throw std::invalid_argument("sphere_measure: n must be >= 1");
  return 2.0 * std::exp(0.5 * (n + 1) * std::log(M_PI) - log_gamma(0.5 * (n + 1)));
}

double SphereGrid::integrate_zonal(const Eigen::VectorXd& colat_values) const {
  if (colat_values.size() != colat_nodes.size())
    throw std::invalid_argument("integrate_zonal: sample count mismatch");
  return longitude_factor * colat_weights.dot(colat_values);
}

double SphereGrid::integrate_full(const Eigen::VectorXd& samples) const {
  if (n != 2) throw std::logic_error("integrate_full: full grids exist on S^2 only");
  if (samples.size() != nsamples_full())
    throw std::invalid_argument("integrate_full: sample count mismatch");
  const int nphi = nlon();
  double total = 0.0;
  for (int i = 0; i < nlat(); ++i)
    total += colat_weights[i] * samples.segment(i * nphi, nphi).sum();
  return total * lon_weight;
}

SphereGrid build_grid(int n, int L) {
  if (n < 2 || n > 4) throw std::invalid_argument("build_grid: n must be 2, 3, or 4");
  if (L < 1 || L > 2048) throw std::invalid_argument("build_grid: L out of [1,2048]");

  SphereGrid grid;
  grid.n = n;
  grid.L = L;
  grid.longitude_factor = sphere_measure(n - 1);

  // Colatitude rule in x = cos(theta): weight (1-x^2)^{(n-2)/2} with L+1 nodes
  // is exact for polynomial degree <= 2L+1.
  const double expo = 0.5 * (n - 2);
  const QuadratureRule rule = gauss_jacobi(L + 1, expo, expo);
  const int m = static_cast<int>(rule.nodes.size());
  grid.colat_nodes.resize(m);
  grid.colat_weights.resize(m);
  grid.cos_colat.resize(m);
  // x ascending corresponds to theta descending; store theta ascending.
  for (int i = 0; i < m; ++i) {
    const double x = rule.nodes[m - 1 - i];
    grid.colat_nodes[i] = std::acos(x);
    grid.cos_colat[i] = x;
    grid.colat_weights[i] = rule.weights[m - 1 - i];
  }

  if (n == 2) {
    const int nphi = 2 * L + 2;
    grid.lon_nodes.resize(nphi);
    for (int j = 0; j < nphi; ++j) grid.lon_nodes[j] = 2.0 * M_PI * j / nphi;
    grid.lon_weight = 2.0 * M_PI / nphi;
  }
  return grid;
}

}  // namespace fsph
