#pragma once

#include "fsph/function_spec.hpp"

namespace fsph {

// Logarithmic Moebius weight omega_a = ln u_a on S^n with the pole on the
// polar axis, u_a(theta) = (1-a^2)/(1 - 2a cos(theta) + a^2). e^{n omega_a} is
// the Jacobian of the Moebius pullback, so integral of e^{n omega_a} = |S^n|.
// Requires |a| < 1 and n in {2,3,4}.
FunctionSpec conformal_weight(int n, double a);

// Power-law extremizer f_a = u_a^{(n-2gamma)/2} of the order-2gamma sharp
// Sobolev inequality. Requires |a| < 1 and 0 < gamma < n/2.
FunctionSpec fractional_extremizer(int n, double gamma, double a);

}  // namespace fsph
