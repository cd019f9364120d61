#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fsph/grid.hpp"
#include "fsph/harmonics.hpp"
#include "fsph/specfun.hpp"

using namespace fsph;

namespace {

// Analytic value of integral_{S^n} cos^k(theta) dtheta via the Beta function:
// |S^{n-1}| * B((k+1)/2, n/2) for even k, zero for odd k.
double cos_power_integral(int n, int k) {
  if (k % 2 == 1) return 0.0;
  const double log_beta =
      log_gamma(0.5 * (k + 1)) + log_gamma(0.5 * n) - log_gamma(0.5 * (k + n + 1));
  return sphere_measure(n - 1) * std::exp(log_beta);
}

Eigen::VectorXd random_coeffs(int count, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(count);
  for (int i = 0; i < count; ++i) v[i] = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("grid total weight reproduces sphere measures") {
  CHECK(build_grid(2, 8).integrate_zonal(Eigen::VectorXd::Ones(9)) ==
        doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  CHECK(build_grid(3, 8).integrate_zonal(Eigen::VectorXd::Ones(9)) ==
        doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
  CHECK(build_grid(4, 8).integrate_zonal(Eigen::VectorXd::Ones(9)) ==
        doctest::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("zonal quadrature integrates cos^2 on S^2") {
  auto grid = build_grid(2, 4);
  Eigen::VectorXd f = grid.cos_colat.array().square();
  CHECK(grid.integrate_zonal(f) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
}

TEST_CASE("zonal quadrature is exact for cos powers up to 2L") {
  const int L = 16;
  for (int n : {2, 3, 4}) {
    CAPTURE(n);
    auto grid = build_grid(n, L);
    const double scale = sphere_measure(n);
    for (int k = 0; k <= 2 * L; ++k) {
      CAPTURE(k);
      Eigen::VectorXd f(grid.nlat());
      for (int i = 0; i < grid.nlat(); ++i) f[i] = std::pow(grid.cos_colat[i], k);
      const double got = grid.integrate_zonal(f);
      const double expect = cos_power_integral(n, k);
      CHECK(std::abs(got - expect) <= 1e-11 * std::max(std::abs(expect), scale));
    }
  }
}

TEST_CASE("square-root shift identity for the laplacian spectrum") {
  for (int n : {2, 3, 4}) {
    const double half_shift = 0.5 * (n - 1);
    for (int l = 0; l <= 256; ++l) {
      const double lhs = std::sqrt(laplacian_eigenvalue(n, l) + half_shift * half_shift);
      const double rhs = l + half_shift;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("laplacian eigenvalues at small degrees") {
  CHECK(laplacian_eigenvalue(2, 1) == doctest::Approx(2.0));
  CHECK(laplacian_eigenvalue(4, 0) == doctest::Approx(0.0));
  CHECK(laplacian_eigenvalue(4, 2) == doctest::Approx(10.0));
  CHECK_THROWS_AS(laplacian_eigenvalue(2, -1), std::invalid_argument);
}

TEST_CASE("analyzing the constant function on full S^2 grid") {
  auto grid = build_grid(2, 6);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.nsamples_full());
  auto c = analyze(ones, grid);
  REQUIRE_FALSE(c.zonal);
  const double expect = std::sqrt(4.0 * M_PI);
  CHECK(c.values[0] == doctest::Approx(expect).epsilon(1e-13));
  for (int i = 1; i < c.values.size(); ++i)
    CHECK(std::abs(c.values[i]) <= 1e-12 * expect);
}

TEST_CASE("zonal degree-1 function on S^4 occupies only l = 1") {
  auto grid = build_grid(4, 8);
  Eigen::VectorXd f = grid.cos_colat;
  auto c = analyze(f, grid);
  REQUIRE(c.zonal);
  for (int l = 0; l <= 8; ++l) {
    if (l == 1) {
      CHECK(std::abs(c.values[l]) > 0.1);
    } else {
      CHECK(std::abs(c.values[l]) <= 1e-12);
    }
  }
  // A unit l=1 coefficient synthesizes to a multiple of cos(theta) with unit
  // L^2 norm over the sphere's surface measure.
  HarmonicCoefficients unit;
  unit.n = 4;
  unit.zonal = true;
  unit.L = 8;
  unit.values = Eigen::VectorXd::Zero(9);
  unit.values[1] = 1.0;
  Eigen::VectorXd samples = synthesize(unit, grid);
  const double ratio0 = samples[0] / grid.cos_colat[0];
  for (int i = 0; i < grid.nlat(); ++i)
    CHECK(samples[i] == doctest::Approx(ratio0 * grid.cos_colat[i]).epsilon(1e-12));
  CHECK(grid.integrate_zonal(samples.array().square().matrix()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single (l=1,m=0) coefficient on S^2 synthesizes a unit-norm cos(theta) profile") {
  auto grid = build_grid(2, 5);
  HarmonicCoefficients c;
  c.n = 2;
  c.zonal = false;
  c.L = 5;
  c.values = Eigen::VectorXd::Zero(36);
  c.values[HarmonicCoefficients::index(1, 0, false)] = 1.0;
  Eigen::VectorXd samples = synthesize(c, grid);
  const double amp = std::sqrt(3.0 / (4.0 * M_PI));
  for (int i = 0; i < grid.nlat(); ++i)
    for (int j = 0; j < grid.nlon(); ++j)
      CHECK(samples[i * grid.nlon() + j] ==
            doctest::Approx(amp * grid.cos_colat[i]).epsilon(1e-12));
  CHECK(grid.integrate_full(samples.array().square().matrix()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero coefficients synthesize to zero samples") {
  auto grid = build_grid(3, 4);
  HarmonicCoefficients c;
  c.n = 3;
  c.zonal = true;
  c.L = 4;
  c.values = Eigen::VectorXd::Zero(5);
  CHECK(synthesize(c, grid).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zonal roundtrip and Parseval for random band-limited functions") {
  struct Case {
    int n, L;
  } cases[] = {{2, 16}, {3, 16}, {4, 16}, {2, 64}, {4, 512}};
  unsigned seed = 11;
  for (const auto& cs : cases) {
    CAPTURE(cs.n);
    CAPTURE(cs.L);
    auto grid = build_grid(cs.n, cs.L);
    HarmonicCoefficients c;
    c.n = cs.n;
    c.zonal = true;
    c.L = cs.L;
    c.values = random_coeffs(cs.L + 1, seed++);
    Eigen::VectorXd f = synthesize(c, grid);
    auto back = analyze(f, grid);
    REQUIRE(back.zonal);
    CHECK((back.values - c.values).cwiseAbs().maxCoeff() <= 1e-10);
    // f^2 has cos(theta)-degree 2L, inside the rule's exactness window, so the
    // quadrature L^2 norm is exact and must match the coefficient sum.
    const double quad = grid.integrate_zonal(f.array().square().matrix());
    const double parseval = c.values.squaredNorm();
    CHECK(quad == doctest::Approx(parseval).epsilon(1e-10));
  }
}

TEST_CASE("full S^2 roundtrip and Parseval for random band-limited functions") {
  for (int L : {8, 16, 64, 256}) {
    CAPTURE(L);
    auto grid = build_grid(2, L);
    HarmonicCoefficients c;
    c.n = 2;
    c.zonal = false;
    c.L = L;
    c.values = random_coeffs((L + 1) * (L + 1), 101 + L);
    // Keep sample magnitudes O(1) so the absolute roundtrip bound is meaningful.
    c.values /= std::sqrt(static_cast<double>(L + 1));
    Eigen::VectorXd f = synthesize(c, grid);
    auto back = analyze(f, grid);
    REQUIRE_FALSE(back.zonal);
    CHECK((back.values - c.values).cwiseAbs().maxCoeff() <= 1e-10);
    const double quad = grid.integrate_full(f.array().square().matrix());
    CHECK(quad == doctest::Approx(c.values.squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("analysis onto a coarser band limit matches truncation") {
  auto grid = build_grid(2, 12);
  HarmonicCoefficients c;
  c.n = 2;
  c.zonal = true;
  c.L = 5;
  c.values = random_coeffs(6, 7);
  Eigen::VectorXd f = synthesize(c, grid);
  auto back = analyze(f, grid, 5);
  REQUIRE(back.L == 5);
  CHECK((back.values - c.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gradient of explicit first and second degree harmonics on S^2") {
  auto grid = build_grid(2, 6);
  const int nlat = grid.nlat(), nlon = grid.nlon();

  // f = sin(theta) cos(phi): d/dtheta = cos(theta) cos(phi),
  // (1/sin) d/dphi = -sin(phi).
  Eigen::VectorXd f1(grid.nsamples_full());
  for (int i = 0; i < nlat; ++i)
    for (int j = 0; j < nlon; ++j)
      f1[i * nlon + j] = std::sin(grid.colat_nodes[i]) * std::cos(grid.lon_nodes[j]);
  auto g1 = synthesize_gradient(analyze(f1, grid), grid);
  for (int i = 0; i < nlat; ++i)
    for (int j = 0; j < nlon; ++j) {
      const double ct = grid.cos_colat[i], cp = std::cos(grid.lon_nodes[j]);
      const double sp = std::sin(grid.lon_nodes[j]);
      CHECK(g1.dtheta[i * nlon + j] == doctest::Approx(ct * cp).epsilon(1e-11));
      CHECK(g1.dphi_over_sin[i * nlon + j] == doctest::Approx(-sp).epsilon(1e-11));
    }

  // f = sin^2(theta) sin(2phi): d/dtheta = 2 sin cos sin2phi,
  // (1/sin) d/dphi = 2 sin(theta) cos(2phi).
  Eigen::VectorXd f2(grid.nsamples_full());
  for (int i = 0; i < nlat; ++i)
    for (int j = 0; j < nlon; ++j) {
      const double st = std::sin(grid.colat_nodes[i]);
      f2[i * nlon + j] = st * st * std::sin(2.0 * grid.lon_nodes[j]);
    }
  auto g2 = synthesize_gradient(analyze(f2, grid), grid);
  for (int i = 0; i < nlat; ++i)
    for (int j = 0; j < nlon; ++j) {
      const double st = std::sin(grid.colat_nodes[i]), ct = grid.cos_colat[i];
      const double s2p = std::sin(2.0 * grid.lon_nodes[j]);
      const double c2p = std::cos(2.0 * grid.lon_nodes[j]);
      CHECK(g2.dtheta[i * nlon + j] == doctest::Approx(2.0 * st * ct * s2p).epsilon(1e-11));
      CHECK(g2.dphi_over_sin[i * nlon + j] ==
            doctest::Approx(2.0 * st * c2p).epsilon(1e-11));
    }
}

TEST_CASE("gradient energy matches the laplacian spectrum") {
  // integral |grad f|^2 = sum_l l(l+n-1) c_l^2 for band-limited f; the grid
  // integral of the squared gradient is exact at this band limit.
  SUBCASE("full S^2") {
    for (int L : {8, 24}) {
      CAPTURE(L);
      auto grid = build_grid(2, L);
      HarmonicCoefficients c;
      c.n = 2;
      c.zonal = false;
      c.L = L;
      c.values = random_coeffs((L + 1) * (L + 1), 53 + L);
      c.values /= L + 1.0;
      auto g = synthesize_gradient(c, grid);
      const double quad = grid.integrate_full(
          (g.dtheta.array().square() + g.dphi_over_sin.array().square()).matrix());
      double expect = 0.0;
      for (int l = 0; l <= L; ++l)
        expect += laplacian_eigenvalue(2, l) *
                  c.values.segment(l * l, 2 * l + 1).squaredNorm();
      CHECK(quad == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  SUBCASE("zonal") {
    for (int n : {2, 3, 4}) {
      CAPTURE(n);
      const int L = 20;
      auto grid = build_grid(n, L);
      HarmonicCoefficients c;
      c.n = n;
      c.zonal = true;
      c.L = L;
      c.values = random_coeffs(L + 1, 211 + n);
      auto g = synthesize_gradient(c, grid);
      const double quad = grid.integrate_zonal(g.dtheta.array().square().matrix());
      double expect = 0.0;
      for (int l = 0; l <= L; ++l)
        expect += laplacian_eigenvalue(n, l) * c.values[l] * c.values[l];
      CHECK(quad == doctest::Approx(expect).epsilon(1e-10));
      CHECK(g.dphi_over_sin.cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("degreewise multipliers act block-diagonally") {
  const int L = 4;
  Eigen::VectorXd factor(L + 1);
  for (int l = 0; l <= L; ++l) factor[l] = 1.0 + l * l;
  SUBCASE("zonal") {
    HarmonicCoefficients c;
    c.n = 3;
    c.zonal = true;
    c.L = L;
    c.values = random_coeffs(L + 1, 3);
    auto out = apply_degreewise(c, factor);
    for (int l = 0; l <= L; ++l)
      CHECK(out.values[l] == doctest::Approx(factor[l] * c.values[l]));
  }
  SUBCASE("full") {
    HarmonicCoefficients c;
    c.n = 2;
    c.zonal = false;
    c.L = L;
    c.values = random_coeffs((L + 1) * (L + 1), 4);
    auto out = apply_degreewise(c, factor);
    for (int l = 0; l <= L; ++l)
      for (int m = 0; m <= l; ++m) {
        const int ic = HarmonicCoefficients::index(l, m, false);
        CHECK(out.values[ic] == doctest::Approx(factor[l] * c.values[ic]));
        if (m > 0) {
          const int is = HarmonicCoefficients::index(l, m, true);
          CHECK(out.values[is] == doctest::Approx(factor[l] * c.values[is]));
        }
      }
  }
}

TEST_CASE("shape and band-limit violations are rejected") {
  auto grid = build_grid(2, 4);
  CHECK_THROWS_AS(analyze(Eigen::VectorXd::Ones(7), grid), std::invalid_argument);
  HarmonicCoefficients c;
  c.n = 2;
  c.zonal = true;
  c.L = 9;
  c.values = Eigen::VectorXd::Zero(10);
  CHECK_THROWS_AS(synthesize(c, grid), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2, 0), std::invalid_argument);
}
