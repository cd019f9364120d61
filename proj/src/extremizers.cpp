#include "fsph/extremizers.hpp"

#include <cmath>
#include <stdexcept>

namespace fsph {

namespace {

void check_params(int n, double a) {
  if (n < 2 || n > 4)
    throw std::invalid_argument("extremizer: dimension must be in {2,3,4}");
  if (!(std::abs(a) < 1.0))
    throw std::invalid_argument("extremizer: require |a| < 1");
}

}  // namespace

FunctionSpec conformal_weight(int n, double a) {
  check_params(n, a);
  FunctionSpec spec;
  spec.tag = FunctionSpec::Tag::ConformalFamily;
  spec.n = n;
  spec.a = a;
  spec.power = 0.0;
  return spec;
}

FunctionSpec fractional_extremizer(int n, double gamma, double a) {
  check_params(n, a);
  if (!(gamma > 0.0) || !(gamma < 0.5 * n))
    throw std::invalid_argument("extremizer: require 0 < gamma < n/2");
  FunctionSpec spec;
  spec.tag = FunctionSpec::Tag::ConformalFamily;
  spec.n = n;
  spec.a = a;
  spec.power = 0.5 * (n - 2.0 * gamma);
  return spec;
}

}  // namespace fsph
