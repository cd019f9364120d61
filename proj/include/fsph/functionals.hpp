#pragma once

#include <string>

#include "fsph/function_spec.hpp"
#include "fsph/harmonics.hpp"

namespace fsph {

// One evaluated inequality: deficit = rhs - lhs with the orientation chosen so
// that the sharp inequality asserts deficit >= 0.
struct DeficitReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  int n = 0;
  double gamma = 0.0;
  std::string input;
};

// Quadratic-form energies of a coefficient table under a per-degree factor.
double quadratic_energy(const HarmonicCoefficients& c, const Eigen::VectorXd& factor_per_l);
// integral |grad f|^2 = sum_l l(l+n-1) c_l^2.
double gradient_energy(const HarmonicCoefficients& c);
// S^4 fourth-order energy integral(|Delta w|^2 + 2|grad w|^2) via its
// per-degree factor l(l+1)(l+2)(l+3).
double fourth_order_energy(const HarmonicCoefficients& c);

// Sharp fractional Sobolev deficit on S^n, n in {2,4} (zonal on S^4):
//   deficit = sum mu_l c_l^2 - Y * (integral |f|^q)^{2/q},  q = 2n/(n-2gamma).
DeficitReport sobolev_deficit(const FunctionSpec& f, int n, double gamma);

// Exponential-class deficit on S^2:
//   deficit = avg|grad w|^2 + 2 avg(w) - ln avg(e^{2w}).
DeficitReport onofri_deficit_s2(const FunctionSpec& omega);

// Fourth-order exponential-class deficit on S^4 (zonal):
//   deficit = avg(|Delta w|^2 + 2|grad w|^2) + 12 avg(w) - 3 ln avg(e^{4w}).
DeficitReport paneitz_onofri_deficit_s4(const FunctionSpec& omega);

// Exponential rewrite of the classical Sobolev deficit on S^n, n in {3,4}:
//   deficit = avg(e^{(n-2)w}|grad w|^2)
//           - (n/(n-2)) [ (avg e^{nw})^{(n-2)/n} - 1 - avg(e^{(n-2)w} - 1) ].
DeficitReport branson_rewrite_gap(const FunctionSpec& omega, int n);

// The same gap computed along the independent route: the order-2 Sobolev
// deficit of f = e^{(n-2)w/2}, divided by ((n-2)/2)^2 |S^n|.
double branson_rewrite_direct(const FunctionSpec& omega, int n);

// Continuation quantity on S^2 for gamma in (0,1):
//   (Gamma(1+gamma)/Gamma(2-gamma)) (1/(1-gamma))
//     [ (4 pi)^gamma (int e^{2w})^{1-gamma} - int e^{2(1-gamma) w} ],
// evaluated in a cancellation-safe expm1 form.
double A0(double gamma, const FunctionSpec& omega);

// Limit of A0 as gamma -> 1: 4 pi ln( avg e^{2(w - wbar)} ).
double onofri_limit_target(const FunctionSpec& omega);

// Continuation quantity on S^4 (zonal) for gamma in (1,2):
//   (Gamma(2+gamma)/(2 Gamma(3-gamma))) (2/(2-gamma))
//     [ |S^4|^{gamma/2} (int e^{4w})^{(2-gamma)/2} - int e^{2(2-gamma) w} ].
double A1(double gamma, const FunctionSpec& omega);

// Limit of A1 as gamma -> 2: 3 |S^4| ln( avg e^{4(w - wbar)} ).
double onofri_limit_target_s4(const FunctionSpec& omega);

}  // namespace fsph
