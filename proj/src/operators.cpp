#include "fsph/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/grid.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

namespace {

void check_order(int n, double gamma) {
  if (!(gamma > 0.0) || !(gamma < 0.5 * n))
    throw std::invalid_argument("operator order must satisfy 0 < gamma < n/2");
}

// Multipliers extend continuously to gamma = n/2 (integer-order
// specializations such as the laplacian on S^2): the denominator Gamma factor
// then has a pole at degree 0 and the ratio's exact value is 0.
void check_order_closed(int n, double gamma) {
  if (!(gamma > 0.0) || !(gamma <= 0.5 * n))
    throw std::invalid_argument("operator order must satisfy 0 < gamma <= n/2");
}

double multiplier_value(int n, double gamma, int l) {
  const double x = l + 0.5 * n;
  const double lower = x - gamma;
  if (lower < 0.5 && std::abs(lower - std::round(lower)) < 1e-12 &&
      std::round(lower) <= 0.0)
    return 0.0;  // reciprocal of a Gamma pole
  return gamma_ratio(x, gamma);
}

}  // namespace

double multiplier_p2gamma(int n, double gamma, int l) {
  check_order_closed(n, gamma);
  if (l < 0) throw std::invalid_argument("multiplier degree must be >= 0");
  return multiplier_value(n, gamma, l);
}

double paneitz_energy_multiplier(int l) {
  if (l < 0) throw std::invalid_argument("multiplier degree must be >= 0");
  const double x = static_cast<double>(l) * (l + 3);
  return x * x + 2.0 * x;
}

SpectralMultiplier build_multiplier(int n, double gamma, int L) {
  check_order_closed(n, gamma);
  if (L < 0) throw std::invalid_argument("multiplier band limit must be >= 0");
  SpectralMultiplier m;
  m.n = n;
  m.gamma = gamma;
  m.eigenvalues.resize(L + 1);
  for (int l = 0; l <= L; ++l) m.eigenvalues[l] = multiplier_value(n, gamma, l);
  return m;
}

HarmonicCoefficients apply_operator(const HarmonicCoefficients& c,
                                    const SpectralMultiplier& m) {
  if (c.n != m.n)
    throw std::invalid_argument("apply_operator: dimension mismatch");
  if (c.L + 1 > m.eigenvalues.size())
    throw std::invalid_argument("apply_operator: multiplier table too short");
  return apply_degreewise(c, m.eigenvalues.head(c.L + 1));
}

SharpConstant sharp_constants(int n, double gamma) {
  check_order(n, gamma);
  SharpConstant sc;
  sc.n = n;
  sc.gamma = gamma;
  const double ratio = gamma_ratio(0.5 * n, gamma);
  sc.Y = ratio * std::pow(sphere_measure(n), 2.0 * gamma / n);
  sc.Q = 2.0 / (n - 2.0 * gamma) * ratio;
  return sc;
}

}  // namespace fsph
