#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fsph/quadrature.hpp"

using namespace fsph;

namespace {

double integrate_monomial(const QuadratureRule& rule, int k) {
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * std::pow(rule.nodes[i], k);
  return acc;
}

struct MomentCase {
  double alpha, beta;
  int k;
  double value;  // integral_{-1}^{1} (1-x)^a (1+x)^b x^k dx
};

// Reference moments computed independently at 40-digit precision and frozen.
const MomentCase kMoments[] = {
    {0.0, 0.0, 0, 2.0},
    {0.0, 0.0, 1, 0.0},
    {0.0, 0.0, 2, 0.666666666666666666667},
    {0.0, 0.0, 5, 0.0},
    {0.0, 0.0, 8, 0.222222222222222222222},
    {0.5, 0.5, 0, 1.57079632679489661923},
    {0.5, 0.5, 1, 0.0},
    {0.5, 0.5, 2, 0.392699081698724154808},
    {0.5, 0.5, 5, 0.0},
    {0.5, 0.5, 8, 0.0859029241215959088642},
    {1.0, 1.0, 0, 1.33333333333333333333},
    {1.0, 1.0, 1, 0.0},
    {1.0, 1.0, 2, 0.266666666666666666667},
    {1.0, 1.0, 5, 0.0},
    {1.0, 1.0, 8, 0.0404040404040404040404},
    {0.0, -0.5, 0, 2.8284271247461900976},
    {0.0, -0.5, 1, -0.942809041582063365868},
    {0.0, -0.5, 2, 1.31993265821488871221},
    {0.0, -0.5, 5, -0.616295087787409386346},
    {0.0, -0.5, 8, 0.679758467358673466393},
    {-0.3, 0.7, 0, 2.50579557634067875191},
    {-0.3, 0.7, 1, 1.04408149014194943649},
    {-0.3, 0.7, 2, 1.04408149014194946036},
    {-0.3, 0.7, 5, 0.556151361936407722196},
    {-0.3, 0.7, 8, 0.463459468280339773107},
};

}  // namespace

TEST_CASE("gauss-jacobi reproduces frozen weighted moments") {
  for (const auto& mc : kMoments) {
    CAPTURE(mc.alpha);
    CAPTURE(mc.beta);
    CAPTURE(mc.k);
    auto rule = gauss_jacobi(12, mc.alpha, mc.beta);
    const double got = integrate_monomial(rule, mc.k);
    if (mc.value == 0.0)
      CHECK(std::abs(got) < 1e-14 * integrate_monomial(rule, 0));
    else
      CHECK(got == doctest::Approx(mc.value).epsilon(1e-13));
  }
}

TEST_CASE("gauss-jacobi node and weight structure") {
  for (auto [alpha, beta] : std::vector<std::pair<double, double>>{
           {0.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}, {0.0, -0.5}, {-0.3, 0.7}, {0.0, -0.98}}) {
    CAPTURE(alpha);
    CAPTURE(beta);
    auto rule = gauss_jacobi(25, alpha, beta);
    REQUIRE(rule.nodes.size() == 25);
    REQUIRE(rule.weights.size() == 25);
    for (int i = 0; i < 25; ++i) {
      CHECK(rule.nodes[i] > -1.0);
      CHECK(rule.nodes[i] < 1.0);
      CHECK(rule.weights[i] > 0.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    if (alpha == beta) {
      // Symmetric weight: nodes mirror around 0 and weights match.
      for (int i = 0; i < 25; ++i) {
        CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[24 - i]).epsilon(1e-13));
        CHECK(rule.weights[i] == doctest::Approx(rule.weights[24 - i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gauss-jacobi rejects invalid arguments") {
  CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_jacobi(4, 0.0, -1.5), std::invalid_argument);
}

TEST_CASE("single-node rule carries full mass at the weight barycenter") {
  auto rule = gauss_jacobi(1, 0.0, 0.0);
  CHECK(rule.nodes[0] == doctest::Approx(0.0));
  CHECK(rule.weights[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("gauss-legendre is exact through degree 2n-1 and not beyond") {
  for (int n : {2, 5, 9, 16}) {
    CAPTURE(n);
    auto rule = gauss_legendre(n);
    // Highest exactly integrated even degree is 2n-2.
    const int k = 2 * n - 2;
    CHECK(integrate_monomial(rule, k) == doctest::Approx(2.0 / (k + 1)).epsilon(1e-13));
    // Odd degrees vanish by symmetry, including 2n-1.
    CHECK(std::abs(integrate_monomial(rule, 2 * n - 1)) < 1e-14);
    // Degree 2n must fail: the rule is not a 2n-degree formula.
    CHECK(std::abs(integrate_monomial(rule, 2 * n) - 2.0 / (2 * n + 1)) > 1e-10);
  }
}

TEST_CASE("interval mapping preserves polynomial integrals") {
  auto rule = map_to_interval(gauss_legendre(8), 2.0, 5.0);
  // integral_2^5 x^2 dx = 39.
  CHECK(integrate_monomial(rule, 2) == doctest::Approx(39.0).epsilon(1e-14));
  // integral_2^5 1 dx = 3.
  CHECK(integrate_monomial(rule, 0) == doctest::Approx(3.0).epsilon(1e-14));
  for (int i = 0; i < rule.nodes.size(); ++i) {
    CHECK(rule.nodes[i] > 2.0);
    CHECK(rule.nodes[i] < 5.0);
  }
}

TEST_CASE("power-endpoint rule integrates u^beta times polynomials on (0,U)") {
  // integral_0^{0.4} u^beta (u^3 + 2u + 1) du, frozen from 40-digit evaluation.
  struct Case {
    double beta, expect;
  } cases[] = {{-0.7, 3.01440711903179182843}, {1.3, 0.0837789900894764572182}};
  for (const auto& c : cases) {
    CAPTURE(c.beta);
    auto rule = gauss_power_endpoint(8, c.beta, 0.4);
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double u = rule.nodes[i];
      CHECK(u > 0.0);
      CHECK(u < 0.4);
      CHECK(rule.weights[i] > 0.0);
      acc += rule.weights[i] * (u * u * u + 2.0 * u + 1.0);
    }
    CHECK(acc == doctest::Approx(c.expect).epsilon(1e-13));
  }
}

TEST_CASE("composite legendre rule converges on smooth integrands") {
  auto rule = composite_gauss_legendre(6, 10, 0.0, 1.0);
  REQUIRE(rule.nodes.size() == 60);
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * std::exp(rule.nodes[i]);
  CHECK(acc == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  // Panels tile the interval in order.
  for (int i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
}

TEST_CASE("recurrence helpers agree with rule construction") {
  // b_1 via the cancellation-safe branch must match the generic formula
  // evaluated at parameters where no cancellation occurs.
  const double direct = jacobi_recurrence_b(1, 0.3, 0.9);
  const double generic = 4.0 * 1.0 * (1.0 + 0.3) * (1.0 + 0.9) * (1.0 + 1.2) /
                         ((2.0 + 1.2) * (2.0 + 1.2) * (3.0 + 1.2) * (1.0 + 1.2));
  CHECK(direct == doctest::Approx(generic).epsilon(1e-15));
  // Mass equals the k=0 moment.
  CHECK(jacobi_weight_mass(0.5, 0.5) == doctest::Approx(1.57079632679489661923).epsilon(1e-14));
}
