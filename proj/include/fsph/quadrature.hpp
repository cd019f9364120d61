#pragma once

#include <Eigen/Dense>

namespace fsph {

// Nodes and weights of a quadrature rule: integral(f) ~= sum_i weights[i] * f(nodes[i]).
// Nodes are sorted ascending; weights are strictly positive.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Jacobi rule with npoints nodes for the weight (1-x)^alpha (1+x)^beta
// on (-1,1); exact for polynomials of degree <= 2*npoints-1 against that weight.
// Requires npoints >= 1 and alpha, beta > -1. Built by the Golub-Welsch method
// (eigendecomposition of the symmetric Jacobi matrix).
QuadratureRule gauss_jacobi(int npoints, double alpha, double beta);

// Gauss-Legendre rule on (-1,1): gauss_jacobi with alpha = beta = 0.
QuadratureRule gauss_legendre(int npoints);

// Affine image of a rule from (-1,1) onto (lo,hi), weights rescaled accordingly.
QuadratureRule map_to_interval(const QuadratureRule& rule, double lo, double hi);

// Rule for integrals of the form  integral_0^upper g(u) * u^beta du  with
// beta > -1 (g smooth): the power factor u^beta is folded into the weights, so
// sum_i weights[i] * g(nodes[i]) is exact when g is a polynomial of degree
// <= 2*npoints-1. Nodes lie in (0, upper).
QuadratureRule gauss_power_endpoint(int npoints, double beta, double upper);

// Composite Gauss-Legendre rule: npanels equal panels on (lo,hi), each carrying
// a points_per_panel-node Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(int points_per_panel, int npanels,
                                        double lo, double hi);

// Three-term recurrence data of the monic orthogonal polynomials for the
// Jacobi weight (1-x)^alpha (1+x)^beta on (-1,1):
//   p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x),  p_0 = 1, p_{-1} = 0,
// with b_0 := integral of the weight (the total mass).
double jacobi_recurrence_a(int k, double alpha, double beta);
double jacobi_recurrence_b(int k, double alpha, double beta);
double jacobi_weight_mass(double alpha, double beta);

}  // namespace fsph
