#pragma once
// Gamma-function utilities: log-Gamma, the two-sided ratio
// Gamma(x+g)/Gamma(x-g) (valid across negative non-integer arguments), and
// the renormalization constant d_g = 2^{2g} Gamma(g)/Gamma(-g).

#include <stdexcept>
#include <string>

namespace fsph {

// Thrown when a Gamma argument lands on a pole (a nonpositive integer).
class pole_error : public std::domain_error {
 public:
  explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

// ln Gamma(x) for x > 0.  Throws std::domain_error for x <= 0.
double log_gamma(double x);

// sin(pi*x) with argument reduction; exact zeros at integers.
double sin_pi(double x);

// Gamma(x+gamma) / Gamma(x-gamma).  Either argument may be negative and
// non-integer (handled by the reflection formula).  Arguments within 1e-12 of
// a nonpositive integer raise pole_error.
double gamma_ratio(double x, double gamma);

// d_gamma = 2^{2 gamma} Gamma(gamma)/Gamma(-gamma), gamma in (0,2) \ {1}.
// Strictly negative on (0,1) and strictly positive on (1,2); the scaled forms
// -d_gamma/(2 gamma) and d_gamma/(8 gamma (gamma-1)) are positive on their
// respective ranges.  Throws pole_error within 1e-12 of {0, 1, 2}.
double d_gamma(double gamma);

}  // namespace fsph
