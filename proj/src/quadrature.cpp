#include "fsph/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/specfun.hpp"

namespace fsph {

// The b_1 formula below is the k=1 specialization written to avoid the
// (alpha+beta)(alpha+beta+2) cancellation of the generic expression.
double jacobi_recurrence_a(int k, double alpha, double beta) {
  const double ab = alpha + beta;
  if (k == 0) return (beta - alpha) / (ab + 2.0);
  const double denom = 2.0 * k + ab;
  return (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
}

double jacobi_recurrence_b(int k, double alpha, double beta) {
  const double ab = alpha + beta;
  if (k == 1)
    return 4.0 * (1.0 + alpha) * (1.0 + beta) /
           ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
  const double denom = 2.0 * k + ab;
  return 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
         (denom * denom * (denom + 1.0) * (denom - 1.0));
}

// Total mass of the weight: integral_{-1}^{1} (1-x)^alpha (1+x)^beta dx.
double jacobi_weight_mass(double alpha, double beta) {
  return std::exp((alpha + beta + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) +
                  log_gamma(beta + 1.0) - log_gamma(alpha + beta + 2.0));
}

QuadratureRule gauss_jacobi(int npoints, double alpha, double beta) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi: npoints must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

  Eigen::VectorXd diag(npoints), subdiag(npoints == 1 ? 1 : npoints - 1);
  for (int k = 0; k < npoints; ++k) diag[k] = jacobi_recurrence_a(k, alpha, beta);
  for (int k = 1; k < npoints; ++k)
    subdiag[k - 1] = std::sqrt(jacobi_recurrence_b(k, alpha, beta));

  QuadratureRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  if (npoints == 1) {
    rule.nodes[0] = diag[0];
    rule.weights[0] = jacobi_weight_mass(alpha, beta);
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_jacobi: tridiagonal eigensolve failed");

  const double mass = jacobi_weight_mass(alpha, beta);
  rule.nodes = solver.eigenvalues();
  for (int i = 0; i < npoints; ++i) {
    const double first = solver.eigenvectors()(0, i);
    rule.weights[i] = mass * first * first;
  }
  return rule;
}

QuadratureRule gauss_legendre(int npoints) { return gauss_jacobi(npoints, 0.0, 0.0); }

QuadratureRule map_to_interval(const QuadratureRule& rule, double lo, double hi) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  QuadratureRule out;
  out.nodes = (rule.nodes.array() * half + mid).matrix();
  out.weights = rule.weights * half;
  return out;
}

QuadratureRule gauss_power_endpoint(int npoints, double beta, double upper) {
  if (!(upper > 0.0))
    throw std::invalid_argument("gauss_power_endpoint: upper must be positive");
  // Map u = upper*(1+x)/2 takes the Jacobi weight (1+x)^beta on (-1,1) to
  // u^beta on (0,upper):  du = (upper/2) dx and (1+x)^beta = (2u/upper)^beta,
  // so each weight picks up the factor (upper/2)^(beta+1).
  const QuadratureRule base = gauss_jacobi(npoints, 0.0, beta);
  const double half = 0.5 * upper;
  QuadratureRule out;
  out.nodes = ((base.nodes.array() + 1.0) * half).matrix();
  out.weights = base.weights * std::pow(half, beta + 1.0);
  return out;
}

QuadratureRule composite_gauss_legendre(int points_per_panel, int npanels,
                                        double lo, double hi) {
  if (npanels < 1)
    throw std::invalid_argument("composite_gauss_legendre: npanels must be >= 1");
  const QuadratureRule base = gauss_legendre(points_per_panel);
  QuadratureRule out;
  out.nodes.resize(points_per_panel * npanels);
  out.weights.resize(points_per_panel * npanels);
  const double width = (hi - lo) / npanels;
  for (int p = 0; p < npanels; ++p) {
    const QuadratureRule panel =
        map_to_interval(base, lo + p * width, lo + (p + 1) * width);
    out.nodes.segment(p * points_per_panel, points_per_panel) = panel.nodes;
    out.weights.segment(p * points_per_panel, points_per_panel) = panel.weights;
  }
  return out;
}

}  // namespace fsph
