#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "fsph/continuation.hpp"
#include "fsph/defining_function.hpp"
#include "fsph/function_spec.hpp"
#include "fsph/functionals.hpp"
#include "fsph/harmonics.hpp"

using namespace fsph;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Limits of the two-sided family for the standard test profiles.
constexpr double kLogTargetS2 = 0.745135830451388316021;   // 0.3*cos on S^2
constexpr double kGradTargetS2 = 0.753982236861550377231;  // 0.3*cos on S^2
constexpr double kLogTargetS4 = 5.00789282082993502371;    // 0.2*cos on S^4
constexpr double kEnergyTargetS4 = 5.05323745335775161284; // 0.2*cos on S^4
constexpr double kEnergyTargetS4Cos = 126.330936333943;    // cos on S^4

FunctionSpec zonal_cos(int n, double amplitude) {
  FunctionSpec f;
  f.n = n;
  f.amplitude = amplitude;
  return f;
}

DefiningFunctionSolution solved_ball(int n, double gamma) {
  auto sol = solve_F(n, 0.5 * n + gamma, ball_radial_nodes(n, gamma));
  reconstruct(sol);
  return sol;
}

}  // namespace

TEST_CASE("cutoff is a monotone [0,1] ramp with exact plateaus") {
  // plateau values and derivatives are exactly zero / one
  for (double r : {0.0, 0.1, 0.25, 1.0 / 3.0}) {
    CHECK(cutoff_chi(r) == 0.0);
    CHECK(cutoff_chi_prime(r) == 0.0);
    CHECK(cutoff_chi_second(r) == 0.0);
  }
  for (double r : {2.0 / 3.0, 0.75, 0.9, 1.0}) {
    CHECK(cutoff_chi(r) == 1.0);
    CHECK(cutoff_chi_prime(r) == 0.0);
    CHECK(cutoff_chi_second(r) == 0.0);
  }
  // range and monotonicity across the transition
  double prev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double r = 1.0 / 3.0 + k / 3000.0;
    const double c = cutoff_chi(r);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    CHECK(c >= prev - 1e-15);
    prev = c;
  }
  CHECK(cutoff_chi(0.5) > 0.01);
  CHECK(cutoff_chi(0.5) < 0.99);
}

TEST_CASE("cutoff derivatives agree with finite differences") {
  const double h = 1e-5;
  for (double r : {0.40, 0.45, 0.50, 0.55, 0.60}) {
    const double fd1 = (cutoff_chi(r + h) - cutoff_chi(r - h)) / (2.0 * h);
    const double d1 = cutoff_chi_prime(r);
    CHECK(std::fabs(fd1 - d1) <= 1e-6 * (1.0 + std::fabs(d1)));
    const double fd2 =
        (cutoff_chi_prime(r + h) - cutoff_chi_prime(r - h)) / (2.0 * h);
    const double d2 = cutoff_chi_second(r);
    CHECK(std::fabs(fd2 - d2) <= 1e-5 * (1.0 + std::fabs(d2)));
  }
}

TEST_CASE("cutoff vanishes to all tested orders at the plateau junctions") {
  // left junction: value/slope crushed far below any low power of epsilon
  const double eps = 1e-4;
  const double cl = cutoff_chi(1.0 / 3.0 + eps);
  CHECK(cl >= 0.0);
  CHECK(cl <= 1e-40);  // <= eps^10
  CHECK(cutoff_chi_prime(1.0 / 3.0 + eps) <= 1e-35);
  CHECK(cutoff_chi(1.0 / 3.0 + 1e-3) <= 2e-8);
  // right junction: the ramp has already saturated
  CHECK(1.0 - cutoff_chi(2.0 / 3.0 - eps) <= 1e-9);
  CHECK(cutoff_chi_prime(2.0 / 3.0 - eps) <= 1e-30);
}

TEST_CASE("ball radial nodes: layout and validation") {
  for (int n : {2, 4}) {
    const double gamma = (n == 2) ? 0.9 : 1.9;
    const Eigen::VectorXd nodes = ball_radial_nodes(n, gamma);
    REQUIRE(nodes.size() == 464);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
      CHECK(nodes[i] > 1.0 / 3.0);
      CHECK(nodes[i] < 1.0);
      if (i > 0) CHECK(nodes[i] > nodes[i - 1]);
    }
    CHECK(nodes[383] < 2.0 / 3.0);  // transition-shell block
    CHECK(nodes[384] > 2.0 / 3.0);  // boundary-shell block
  }
  CHECK_THROWS_AS(ball_radial_nodes(3, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(ball_radial_nodes(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_radial_nodes(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_radial_nodes(4, 2.0), std::invalid_argument);
}

TEST_CASE("first ball energy: zero data gives zero") {
  ExtensionProfile zero{zonal_cos(2, 0.0)};
  for (double gamma : {0.3, 0.7, 0.999}) {
    CHECK(std::fabs(B0(gamma, zero)) <= 1e-15);
  }
}

TEST_CASE("first ball energy approaches the gradient energy") {
  ExtensionProfile cosprof{zonal_cos(2, 1.0)};
  const double b = B0(0.999, cosprof);
  CHECK(b == doctest::Approx(8.385895559876).epsilon(1e-7));
  CHECK(std::fabs(b * 3.0 / (8.0 * kPi) - 1.0) <= 0.01);

  ExtensionProfile prof{zonal_cos(2, 0.3)};
  const double b9 = B0(0.9, prof);
  const double b99 = B0(0.99, prof);
  const double b999 = B0(0.999, prof);
  CHECK(b999 == doctest::Approx(0.754730325694).epsilon(1e-7));
  CHECK(std::fabs(b999 / kGradTargetS2 - 1.0) <= 0.01);
  const double d9 = std::fabs(b9 - kGradTargetS2);
  const double d99 = std::fabs(b99 - kGradTargetS2);
  const double d999 = std::fabs(b999 - kGradTargetS2);
  CHECK(d9 > d99);
  CHECK(d99 > d999);

  CHECK_THROWS_AS(B0(0.0, prof), std::invalid_argument);
  CHECK_THROWS_AS(B0(1.0, prof), std::invalid_argument);
  ExtensionProfile wrong{zonal_cos(4, 0.3)};
  CHECK_THROWS_AS(B0(0.9, wrong), std::invalid_argument);
}

TEST_CASE("boundary radial factor tends to one") {
  const double f9 = 2.0 * (1.0 - 0.9) * boundary_radial_factor(0.9);
  const double f99 = 2.0 * (1.0 - 0.99) * boundary_radial_factor(0.99);
  const double f999 = 2.0 * (1.0 - 0.999) * boundary_radial_factor(0.999);
  CHECK(f9 == doctest::Approx(0.831955178).epsilon(1e-6));
  CHECK(f99 == doctest::Approx(0.981833383).epsilon(1e-6));
  CHECK(f999 == doctest::Approx(0.998169018).epsilon(1e-6));
  CHECK(f9 < f99);
  CHECK(f99 < f999);
  CHECK(std::fabs(f999 - 1.0) <= 2e-3);
  CHECK_THROWS_AS(boundary_radial_factor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(boundary_radial_factor(1.0), std::invalid_argument);
}

TEST_CASE("transition shell of the first ball energy decays linearly") {
  ExtensionProfile prof{zonal_cos(2, 0.3)};
  double previous = 1e300;
  for (double gamma : {0.9, 0.99, 0.999}) {
    const double interior = B0_interior_part(gamma, prof);
    CHECK(interior > 0.0);
    CHECK(interior < previous);
    previous = interior;
    const double ratio = interior / (1.0 - gamma);
    CHECK(ratio > 1.5);
    CHECK(ratio < 3.0);
  }
}

TEST_CASE("adapted-weight variant never exceeds the Lee-weight energy") {
  ExtensionProfile prof{zonal_cos(2, 0.3)};
  for (double gamma : {0.8, 0.9, 0.99}) {
    auto sol = solved_ball(2, gamma);
    const double base = B0(gamma, prof);
    const double variant = B0_sandwich_variant(gamma, prof, sol);
    CHECK(variant <= base * (1.0 + 1e-12));
    CHECK(variant >= 0.9 * base);
  }
  auto sol = solved_ball(2, 0.9);
  CHECK_THROWS_AS(B0_sandwich_variant(0.45, prof, sol), std::invalid_argument);
  CHECK_THROWS_AS(B0_sandwich_variant(0.99, prof, sol), std::invalid_argument);
}

TEST_CASE("second ball energy: zero data gives zero") {
  ExtensionProfile zero{zonal_cos(4, 0.0)};
  auto sol = solved_ball(4, 1.9);
  CHECK(std::fabs(B1(1.9, zero, sol)) <= 1e-15);
  CHECK(std::fabs(b1_bracket_minimum(1.9, zero, sol)) <= 1e-15);
}

TEST_CASE("second ball energy approaches the fourth-order energy") {
  ExtensionProfile prof{zonal_cos(4, 0.2)};
  auto sol199 = solved_ball(4, 1.99);
  const double b199 = B1(1.99, prof, sol199);
  CHECK(b199 == doctest::Approx(5.283535806558).epsilon(1e-7));
  // The transition shell keeps the total 4.6% above the spectral energy at
  // this order; the variational floor of any admissible cutoff is 4.4%.
  CHECK(std::fabs(b199 / kEnergyTargetS4 - 1.0) <= 0.06);

  auto sol19 = solved_ball(4, 1.9);
  const double b19 = B1(1.9, prof, sol19);
  CHECK(std::fabs(b19 / kEnergyTargetS4 - 1.0) >
        std::fabs(b199 / kEnergyTargetS4 - 1.0));

  // closer to the endpoint the full-amplitude profile passes 2%
  ExtensionProfile cosprof{zonal_cos(4, 1.0)};
  auto sol1997 = solved_ball(4, 1.997);
  const double b1997 = B1(1.997, cosprof, sol1997);
  CHECK(std::fabs(b1997 / kEnergyTargetS4Cos - 1.0) <= 0.02);

  CHECK_THROWS_AS(B1(1.75, prof, sol199), std::invalid_argument);
  CHECK_THROWS_AS(B1(2.0, prof, sol199), std::invalid_argument);
  ExtensionProfile wrong{zonal_cos(2, 0.2)};
  CHECK_THROWS_AS(B1(1.99, wrong, sol199), std::invalid_argument);
  // solution solved at a different order
  CHECK_THROWS_AS(B1(1.9, prof, sol199), std::invalid_argument);
  // solution not reconstructed
  auto bare = solve_F(4, 2.0 + 1.99, ball_radial_nodes(4, 1.99));
  CHECK_THROWS_AS(B1(1.99, prof, bare), std::invalid_argument);
}

TEST_CASE("second ball integrand is nonnegative at every node") {
  ExtensionProfile small{zonal_cos(4, 0.2)};
  ExtensionProfile full{zonal_cos(4, 1.0)};
  for (double gamma : {1.76, 1.8, 1.9, 1.99}) {
    auto sol = solved_ball(4, gamma);
    CHECK(b1_bracket_minimum(gamma, small, sol) >= -1e-12);
    if (gamma == 1.9) CHECK(b1_bracket_minimum(gamma, full, sol) >= -1e-12);
  }
}

TEST_CASE("curvature combination stays within a stable multiple of rho_0") {
  double cmin = 1e300, cmax = 0.0;
  const double expected[3] = {26.11497567, 20.57705861, 15.66695777};
  const double gammas[3] = {1.8, 1.9, 1.99};
  for (int k = 0; k < 3; ++k) {
    auto sol = solved_ball(4, gammas[k]);
    const double c = curvature_combination_constant(gammas[k], sol);
    CHECK(c == doctest::Approx(expected[k]).epsilon(1e-6));
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  CHECK(cmax / cmin <= 2.0);  // no blow-up toward the endpoint
  auto sol = solved_ball(4, 1.9);
  CHECK_THROWS_AS(curvature_combination_constant(1.99, sol),
                  std::invalid_argument);
}

TEST_CASE("sweep on the two-sphere brackets the logarithmic limit") {
  auto recs = sweep(2, zonal_cos(2, 0.3), {0.9, 0.99, 0.999});
  REQUIRE(recs.size() == 3);
  const double a_expected[3] = {0.679293728887507040908,
                                0.738920654021396528578,
                                0.744518536690620263525};
  const double b_expected[3] = {0.816179332317, 0.761333742517,
                                0.754730325694};
  for (int k = 0; k < 3; ++k) {
    CHECK(recs[k].n == 2);
    CHECK(recs[k].gamma == doctest::Approx(k == 0 ? 0.9 : (k == 1 ? 0.99 : 0.999))
                               .epsilon(1e-15));
    CHECK(recs[k].A == doctest::Approx(a_expected[k]).epsilon(1e-9));
    CHECK(recs[k].B == doctest::Approx(b_expected[k]).epsilon(1e-7));
    CHECK(recs[k].targetA == doctest::Approx(kLogTargetS2).epsilon(1e-10));
    CHECK(recs[k].targetB == doctest::Approx(kGradTargetS2).epsilon(1e-10));
    CHECK(recs[k].A <= recs[k].B + 1e-6 * std::max(1.0, std::fabs(recs[k].B)));
    CHECK(recs[k].gap() > 0.0);
    if (k > 0) {
      CHECK(recs[k].A > recs[k - 1].A);        // ascending toward the limit
      CHECK(recs[k].B < recs[k - 1].B);        // descending toward the limit
      CHECK(recs[k].gap() < recs[k - 1].gap());
    }
  }
  CHECK(std::fabs(recs[2].A / kLogTargetS2 - 1.0) <= 1e-3);
}

TEST_CASE("sweep with constant data has zero sphere side") {
  // The ramped extension of a constant still carries gradient energy, so only
  // the sphere-side quantity and its target vanish; the ball side decays.
  auto recs = sweep(2, parse_builtin("const:0.7", 2), {0.8, 0.9, 0.99});
  double prev = 1e300;
  for (const auto& r : recs) {
    CHECK(std::fabs(r.A) <= 1e-12);
    CHECK(std::fabs(r.targetA) <= 1e-12);
    CHECK(std::fabs(r.targetB) <= 1e-12);
    CHECK(r.B >= 0.0);
    CHECK(r.B < prev);
    prev = r.B;
    CHECK(r.A <= r.B + 1e-6);
  }
}

TEST_CASE("sweep on the four-sphere brackets the logarithmic limit") {
  auto recs = sweep(4, zonal_cos(4, 0.2), {1.9, 1.99});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].A == doctest::Approx(4.42206073306627888308).epsilon(1e-9));
  CHECK(recs[1].A == doctest::Approx(4.94936801050208746979).epsilon(1e-9));
  CHECK(recs[0].B == doctest::Approx(6.773436775584).epsilon(1e-7));
  CHECK(recs[1].B == doctest::Approx(5.283535806558).epsilon(1e-7));
  for (const auto& r : recs) {
    CHECK(r.n == 4);
    CHECK(r.targetA == doctest::Approx(kLogTargetS4).epsilon(1e-10));
    CHECK(r.targetB == doctest::Approx(kEnergyTargetS4).epsilon(1e-10));
    CHECK(r.A <= r.B + 1e-6 * std::max(1.0, std::fabs(r.B)));
    // linear-in-(2-gamma) approach to the logarithmic limit
    CHECK(std::fabs(r.A - r.targetA) <= 10.0 * (2.0 - r.gamma));
  }
  CHECK(std::fabs(recs[1].A / kLogTargetS4 - 1.0) <= 2e-2);
}

TEST_CASE("sweep validates its inputs") {
  const std::vector<double> ok2 = {0.9, 0.99};
  CHECK_THROWS_AS(sweep(3, zonal_cos(2, 0.3), ok2), std::invalid_argument);
  CHECK_THROWS_AS(sweep(2, zonal_cos(4, 0.3), ok2), std::invalid_argument);
  CHECK_THROWS_AS(sweep(2, zonal_cos(2, 0.3), {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(2, zonal_cos(2, 0.3), {0.9, 0.9}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep(2, zonal_cos(2, 0.3), {0.9, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep(4, zonal_cos(4, 0.2), {1.75, 1.9}),
                  std::invalid_argument);
}

TEST_CASE("limit extrapolation recovers the endpoint values") {
  auto recs2 = sweep(2, zonal_cos(2, 0.3), {0.9, 0.99, 0.999});
  auto ex2 = extrapolate_limit(recs2);
  CHECK(ex2.A_limit == doctest::Approx(0.745343195790).epsilon(1e-6));
  CHECK(std::fabs(ex2.A_limit / kLogTargetS2 - 1.0) <= 1e-3);
  CHECK(ex2.A_residual <= 1e-3);
  CHECK(std::fabs(ex2.B_limit / kGradTargetS2 - 1.0) <= 5e-3);

  auto cosrecs = sweep(2, zonal_cos(2, 1.0), {0.9, 0.99, 0.999});
  auto excos = extrapolate_limit(cosrecs);
  CHECK(std::fabs(excos.B_limit * 3.0 / (8.0 * kPi) - 1.0) <= 1e-2);

  auto recs4 = sweep(4, zonal_cos(4, 0.2), {1.8, 1.9, 1.99});
  auto ex4 = extrapolate_limit(recs4);
  CHECK(std::fabs(ex4.A_limit / kLogTargetS4 - 1.0) <= 1e-2);
  CHECK(ex4.B_limit > 0.0);

  auto zeros = sweep(2, zonal_cos(2, 0.0), {0.9, 0.99, 0.999});
  auto exz = extrapolate_limit(zeros);
  CHECK(std::fabs(exz.A_limit) <= 1e-12);
  CHECK(std::fabs(exz.B_limit) <= 1e-12);
}

TEST_CASE("limit extrapolation validates its inputs") {
  auto recs = sweep(2, zonal_cos(2, 0.3), {0.9, 0.99, 0.999});
  std::vector<ContinuationRecord> two(recs.begin(), recs.begin() + 2);
  CHECK_THROWS_AS(extrapolate_limit(two), std::invalid_argument);

  std::vector<ContinuationRecord> collinear(3, recs[0]);
  CHECK_THROWS_AS(extrapolate_limit(collinear), std::invalid_argument);

  std::vector<ContinuationRecord> mixed = recs;
  mixed[1].n = 4;
  CHECK_THROWS_AS(extrapolate_limit(mixed), std::invalid_argument);
}

TEST_CASE("sweep results do not depend on the worker count") {
  setenv("FSPH_THREADS", "4", 1);
  auto par = sweep(2, zonal_cos(2, 0.3), {0.9, 0.99, 0.999});
  setenv("FSPH_THREADS", "1", 1);
  auto ser = sweep(2, zonal_cos(2, 0.3), {0.9, 0.99, 0.999});
  unsetenv("FSPH_THREADS");
  REQUIRE(par.size() == ser.size());
  for (size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].A == ser[i].A);
    CHECK(par[i].B == ser[i].B);
    CHECK(par[i].targetA == ser[i].targetA);
    CHECK(par[i].targetB == ser[i].targetB);
  }
}
