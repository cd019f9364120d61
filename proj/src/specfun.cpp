#include "fsph/specfun.hpp"

#include <cmath>

namespace fsph {

namespace {

constexpr double kPoleTol = 1e-12;

bool near_nonpositive_integer(double x) {
  const double n = std::round(x);
  return n <= 0.0 && std::abs(x - n) < kPoleTol;
}

// Gamma(x) = sign * exp(logabs) for non-pole x of either sign.
struct SignedLogGamma {
  double logabs;
  int sign;
};

SignedLogGamma signed_log_gamma(double x) {
  if (x > 0.0) return {log_gamma(x), +1};
  // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)) for x < 0 non-integer.
  const double s = sin_pi(x);
  return {std::log(M_PI) - std::log(std::abs(s)) - log_gamma(1.0 - x),
          s > 0.0 ? +1 : -1};
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0))
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  return std::lgamma(x);  // positive arguments only, so the sign is +1
}

double sin_pi(double x) {
  const double n = std::round(x);
  const double f = x - n;  // |f| <= 0.5 and the subtraction is exact
  const double s = std::sin(M_PI * f);
  return static_cast<long long>(n) % 2 == 0 ? s : -s;
}

double gamma_ratio(double x, double gamma) {
  const double a = x + gamma;
  const double b = x - gamma;
  if (near_nonpositive_integer(a) || near_nonpositive_integer(b))
    throw pole_error("gamma_ratio: Gamma pole at x=" + std::to_string(x) +
                     ", gamma=" + std::to_string(gamma));
  if (a == b) return 1.0;
  const SignedLogGamma ga = signed_log_gamma(a);
  const SignedLogGamma gb = signed_log_gamma(b);
  return ga.sign * gb.sign * std::exp(ga.logabs - gb.logabs);
}

double d_gamma(double gamma) {
  for (double pole : {0.0, 1.0, 2.0})
    if (std::abs(gamma - pole) < kPoleTol)
      throw pole_error("d_gamma: pole at gamma=" + std::to_string(gamma));
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::domain_error("d_gamma: gamma must lie in (0,2), got " +
                            std::to_string(gamma));
  // Eliminate Gamma(-gamma) by reflection:
  //   d_gamma = -2^{2g} Gamma(g) Gamma(1+g) sin(pi g) / pi.
  const double mag = std::exp(2.0 * gamma * std::log(2.0) + log_gamma(gamma) +
                              log_gamma(1.0 + gamma));
  return -mag * sin_pi(gamma) / M_PI;
}

}  // namespace fsph
