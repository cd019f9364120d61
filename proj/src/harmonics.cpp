#include "fsph/harmonics.hpp"

#include <cmath>
#include <stdexcept>

#include "fsph/quadrature.hpp"
#include "fsph/specfun.hpp"

namespace fsph {

namespace {

constexpr double kRescale = 1e280;
constexpr double kRescaleInv = 1e-280;
constexpr double kLogRescale = 644.703310452936013;  // ln(1e280)

// One column family of scaled associated-Legendre values at a single point:
// actual value = p * (1e-280)^boosts. The upward recurrence in l keeps the
// mantissa within range by re-boosting whenever it drifts too small; values
// whose true magnitude is below ~1e-280 underflow to zero on emission, which
// is the correct rounding.
struct ScaledPair {
  double prev = 0.0, cur = 0.0;
  int boosts = 0;

  void maybe_rescale() {
    if (std::abs(prev) < kRescaleInv && std::abs(cur) < kRescaleInv &&
        (prev != 0.0 || cur != 0.0)) {
      prev *= kRescale;
      cur *= kRescale;
      ++boosts;
    }
  }
  double emit() const {
    double v = cur;
    for (int b = 0; b < boosts; ++b) v *= kRescaleInv;
    return v;
  }
};

// Orthonormal associated Legendre seed: pbar_{m,m}(x) = c_m sin^m(theta) with
// integral_{-1}^{1} pbar^2 dx = 1. Computed in log form to survive large m at
// small sin(theta); returns mantissa/boost count.
void seed_pmm(int m, double log_sin_theta, double& mantissa, int& boosts) {
  double log_c = 0.5 * std::log(0.5 * (2.0 * m + 1.0));
  if (m > 0)
    log_c += 0.5 * log_gamma(2.0 * m + 1.0) - m * std::log(2.0) - log_gamma(m + 1.0);
  double lv = log_c + m * log_sin_theta;
  boosts = 0;
  while (lv < -kLogRescale) {
    lv += kLogRescale;
    ++boosts;
  }
  mantissa = std::exp(lv);
}

double rec_a(int l, int m) {
  return std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
}
double rec_b(int l, int m) {
  return -std::sqrt((2.0 * l + 1.0) / (2.0 * l - 3.0) *
                    ((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                     (static_cast<double>(l) * l - static_cast<double>(m) * m)));
}

// Walks pbar_{l,m}(x) upward in l at a single point, invoking
// visit(l, pbar_lm) for l = m..L. When with_derivatives is true also maintains
// dpbar/dtheta and pbar/sin(theta), delivered through visit3.
template <typename Visit>
void walk_legendre(int L, int m, double x, double sin_theta, Visit&& visit) {
  ScaledPair p;
  seed_pmm(m, std::log(sin_theta), p.cur, p.boosts);
  visit(m, p.emit());
  if (m + 1 > L) return;
  double pm = p.cur;
  p.prev = pm;
  p.cur = std::sqrt(2.0 * m + 3.0) * x * pm;
  visit(m + 1, p.emit());
  for (int l = m + 2; l <= L; ++l) {
    const double next = rec_a(l, m) * x * p.cur + rec_b(l, m) * p.prev;
    p.prev = p.cur;
    p.cur = next;
    p.maybe_rescale();
    visit(l, p.emit());
  }
}

// As walk_legendre, but also tracks q = d(pbar)/dtheta and s = pbar/sin(theta)
// through the same recurrence (both satisfy it with adjusted seeds; q gains the
// inhomogeneous -sin(theta)*pbar term from differentiating x = cos(theta)).
template <typename Visit>
void walk_legendre_deriv(int L, int m, double x, double sin_theta, Visit&& visit) {
  ScaledPair p, q, s;
  seed_pmm(m, std::log(sin_theta), p.cur, p.boosts);
  // pbar_mm / sin = c_m sin^{m-1}; for m = 0 the over-sin family is unused.
  if (m > 0) {
    s.boosts = p.boosts;
    s.cur = p.cur / sin_theta;
    s.maybe_rescale();
  }
  // d/dtheta [c_m sin^m] = m c_m sin^{m-1} cos.
  q.boosts = p.boosts;
  q.cur = m > 0 ? m * (p.cur / sin_theta) * x : 0.0;
  visit(m, p.emit(), q.emit(), m > 0 ? s.emit() : 0.0);
  if (m + 1 > L) return;
  const double a1 = std::sqrt(2.0 * m + 3.0);
  // Scales of q and s follow p's boost count at each step; to keep the three
  // recurrences independent each carries its own pair, but q couples to p, so
  // p and q must share a common scale. Track them jointly.
  double p_prev = p.cur, q_prev = q.cur * std::pow(kRescale, p.boosts - q.boosts);
  int pq_boosts = p.boosts;
  double p_cur = a1 * x * p_prev;
  double q_cur = a1 * (-sin_theta * p_prev + x * q_prev);
  s.prev = s.cur;
  s.cur = a1 * x * s.prev;
  {
    ScaledPair tmp{p_prev, p_cur, pq_boosts};
    ScaledPair tmq{q_prev, q_cur, pq_boosts};
    visit(m + 1, tmp.emit(), tmq.emit(), m > 0 ? s.emit() : 0.0);
  }
  double pp = p_prev, pc = p_cur, qp = q_prev, qc = q_cur;
  for (int l = m + 2; l <= L; ++l) {
    const double a = rec_a(l, m), b = rec_b(l, m);
    const double pn = a * x * pc + b * pp;
    const double qn = a * (-sin_theta * pc + x * qc) + b * qp;
    pp = pc;
    pc = pn;
    qp = qc;
    qc = qn;
    const double mag = std::max(std::max(std::abs(pp), std::abs(pc)),
                                std::max(std::abs(qp), std::abs(qc)));
    if (mag < kRescaleInv && mag > 0.0) {
      pp *= kRescale;
      pc *= kRescale;
      qp *= kRescale;
      qc *= kRescale;
      ++pq_boosts;
    }
    double sn = 0.0;
    if (m > 0) {
      sn = a * x * s.cur + b * s.prev;
      s.prev = s.cur;
      s.cur = sn;
      s.maybe_rescale();
    }
    ScaledPair tmp{pp, pc, pq_boosts};
    ScaledPair tmq{qp, qc, pq_boosts};
    visit(l, tmp.emit(), tmq.emit(), m > 0 ? s.emit() : 0.0);
  }
}

// Orthonormal-polynomial block for the zonal basis: column l holds
// ptilde_l(x_i) for the weight (1-x^2)^{(n-2)/2}, plus optionally the
// x-derivative block. ptilde are orthonormal: integral ptilde_k ptilde_l w = delta.
void zonal_poly_blocks(const SphereGrid& grid, int L, Eigen::MatrixXd* P,
                       Eigen::MatrixXd* dPdx) {
  const double expo = 0.5 * (grid.n - 2);
  const int npts = grid.nlat();
  Eigen::VectorXd sqrt_b(L + 1);
  for (int k = 1; k <= L; ++k)
    sqrt_b[k] = std::sqrt(jacobi_recurrence_b(k, expo, expo));
  const double p0 = 1.0 / std::sqrt(jacobi_weight_mass(expo, expo));

  P->resize(npts, L + 1);
  if (dPdx) dPdx->resize(npts, L + 1);
  for (int i = 0; i < npts; ++i) {
    const double x = grid.cos_colat[i];
    double pm1 = 0.0, p = p0, qm1 = 0.0, q = 0.0;
    (*P)(i, 0) = p;
    if (dPdx) (*dPdx)(i, 0) = 0.0;
    for (int l = 1; l <= L; ++l) {
      // Symmetric weight: recurrence a_k = 0.
      const double pn = (x * p - (l >= 2 ? sqrt_b[l - 1] * pm1 : 0.0)) / sqrt_b[l];
      const double qn = (p + x * q - (l >= 2 ? sqrt_b[l - 1] * qm1 : 0.0)) / sqrt_b[l];
      pm1 = p;
      p = pn;
      qm1 = q;
      q = qn;
      (*P)(i, l) = p;
      if (dPdx) (*dPdx)(i, l) = q;
    }
  }
}

void check_dims(const HarmonicCoefficients& c) {
  const int expect = c.zonal ? c.L + 1 : (c.L + 1) * (c.L + 1);
  if (c.values.size() != expect)
    throw std::invalid_argument("harmonic coefficients: value count inconsistent with L");
}

// Longitude Fourier analysis: g_c(i,m) = lon_weight * sum_j f(i,j) cos(m phi_j),
// likewise g_s with sine. Matrices sized nlat x (L+1); column m=0 of g_s is 0.
void fourier_analyze(const Eigen::VectorXd& samples, const SphereGrid& grid, int L,
                     Eigen::MatrixXd& g_c, Eigen::MatrixXd& g_s) {
  const int nlat = grid.nlat(), nphi = grid.nlon();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      F(samples.data(), nlat, nphi);
  Eigen::MatrixXd C(nphi, L + 1), S(nphi, L + 1);
  for (int j = 0; j < nphi; ++j)
    for (int m = 0; m <= L; ++m) {
      C(j, m) = std::cos(m * grid.lon_nodes[j]);
      S(j, m) = std::sin(m * grid.lon_nodes[j]);
    }
  g_c.noalias() = F * C;
  g_s.noalias() = F * S;
  g_c *= grid.lon_weight;
  g_s *= grid.lon_weight;
}

}  // namespace

double laplacian_eigenvalue(int n, int l) {
  if (l < 0) throw std::invalid_argument("laplacian_eigenvalue: l must be >= 0");
  return static_cast<double>(l) * (l + n - 1);
}

HarmonicCoefficients analyze(const Eigen::VectorXd& samples, const SphereGrid& grid,
                             int L) {
  if (L < 0) L = grid.L;
  if (L > grid.L)
    throw std::invalid_argument("analyze: requested band limit exceeds grid exactness");

  HarmonicCoefficients c;
  c.n = grid.n;
  c.L = L;

  if (samples.size() == grid.nlat()) {
    c.zonal = true;
    Eigen::MatrixXd P;
    zonal_poly_blocks(grid, L, &P, nullptr);
    const double norm = std::sqrt(grid.longitude_factor);
    c.values = norm * (P.transpose() * grid.colat_weights.cwiseProduct(samples));
    return c;
  }

  if (grid.n != 2 || samples.size() != grid.nsamples_full())
    throw std::invalid_argument("analyze: sample layout matches neither zonal nor full grid");

  c.zonal = false;
  c.values.setZero((L + 1) * (L + 1));
  Eigen::MatrixXd g_c, g_s;
  fourier_analyze(samples, grid, L, g_c, g_s);
  const double norm0 = 1.0 / std::sqrt(2.0 * M_PI);
  const double normm = 1.0 / std::sqrt(M_PI);
  const int nlat = grid.nlat();
  for (int m = 0; m <= L; ++m) {
    const double nm = (m == 0) ? norm0 : normm;
    for (int i = 0; i < nlat; ++i) {
      const double wc = grid.colat_weights[i] * g_c(i, m) * nm;
      const double ws = grid.colat_weights[i] * g_s(i, m) * nm;
      const double x = grid.cos_colat[i];
      const double st = std::sin(grid.colat_nodes[i]);
      walk_legendre(L, m, x, st, [&](int l, double p) {
        c.values[HarmonicCoefficients::index(l, m, false)] += wc * p;
        if (m > 0) c.values[HarmonicCoefficients::index(l, m, true)] += ws * p;
      });
    }
  }
  return c;
}

Eigen::VectorXd synthesize(const HarmonicCoefficients& c, const SphereGrid& grid) {
  check_dims(c);
  if (c.n != grid.n) throw std::invalid_argument("synthesize: dimension mismatch");
  if (c.L > grid.L)
    throw std::invalid_argument("synthesize: coefficient band limit exceeds grid");

  if (c.zonal) {
    Eigen::MatrixXd P;
    zonal_poly_blocks(grid, c.L, &P, nullptr);
    return (P * c.values) / std::sqrt(grid.longitude_factor);
  }

  const int L = c.L, nlat = grid.nlat(), nphi = grid.nlon();
  Eigen::MatrixXd h_c = Eigen::MatrixXd::Zero(nlat, L + 1);
  Eigen::MatrixXd h_s = Eigen::MatrixXd::Zero(nlat, L + 1);
  for (int m = 0; m <= L; ++m)
    for (int i = 0; i < nlat; ++i) {
      const double x = grid.cos_colat[i];
      const double st = std::sin(grid.colat_nodes[i]);
      double acc_c = 0.0, acc_s = 0.0;
      walk_legendre(L, m, x, st, [&](int l, double p) {
        acc_c += c.values[HarmonicCoefficients::index(l, m, false)] * p;
        if (m > 0) acc_s += c.values[HarmonicCoefficients::index(l, m, true)] * p;
      });
      h_c(i, m) = acc_c;
      h_s(i, m) = acc_s;
    }
  const double norm0 = 1.0 / std::sqrt(2.0 * M_PI);
  const double normm = 1.0 / std::sqrt(M_PI);
  h_c.col(0) *= norm0;
  if (L >= 1) {
    h_c.rightCols(L) *= normm;
    h_s.rightCols(L) *= normm;
  }
  Eigen::MatrixXd C(L + 1, nphi), S(L + 1, nphi);
  for (int j = 0; j < nphi; ++j)
    for (int m = 0; m <= L; ++m) {
      C(m, j) = std::cos(m * grid.lon_nodes[j]);
      S(m, j) = std::sin(m * grid.lon_nodes[j]);
    }
  Eigen::MatrixXd F = h_c * C + h_s * S;  // nlat x nphi
  Eigen::VectorXd out(nlat * nphi);
  for (int i = 0; i < nlat; ++i) out.segment(i * nphi, nphi) = F.row(i);
  return out;
}

GradientSamples synthesize_gradient(const HarmonicCoefficients& c,
                                    const SphereGrid& grid) {
  check_dims(c);
  if (c.n != grid.n) throw std::invalid_argument("synthesize_gradient: dimension mismatch");
  if (c.L > grid.L)
    throw std::invalid_argument("synthesize_gradient: coefficient band limit exceeds grid");

  GradientSamples out;
  if (c.zonal) {
    Eigen::MatrixXd P, dPdx;
    zonal_poly_blocks(grid, c.L, &P, &dPdx);
    // d/dtheta f(cos theta) = -sin(theta) * (df/dx).
    Eigen::VectorXd dx = (dPdx * c.values) / std::sqrt(grid.longitude_factor);
    out.dtheta = -grid.colat_nodes.array().sin() * dx.array();
    out.dphi_over_sin = Eigen::VectorXd::Zero(grid.nlat());
    return out;
  }

  const int L = c.L, nlat = grid.nlat(), nphi = grid.nlon();
  Eigen::MatrixXd hq_c = Eigen::MatrixXd::Zero(nlat, L + 1);
  Eigen::MatrixXd hq_s = Eigen::MatrixXd::Zero(nlat, L + 1);
  Eigen::MatrixXd ho_c = Eigen::MatrixXd::Zero(nlat, L + 1);
  Eigen::MatrixXd ho_s = Eigen::MatrixXd::Zero(nlat, L + 1);
  for (int m = 0; m <= L; ++m)
    for (int i = 0; i < nlat; ++i) {
      const double x = grid.cos_colat[i];
      const double st = std::sin(grid.colat_nodes[i]);
      double aqc = 0.0, aqs = 0.0, aoc = 0.0, aos = 0.0;
      walk_legendre_deriv(L, m, x, st, [&](int l, double, double q, double s) {
        const double vc = c.values[HarmonicCoefficients::index(l, m, false)];
        aqc += vc * q;
        if (m > 0) {
          const double vs = c.values[HarmonicCoefficients::index(l, m, true)];
          aqs += vs * q;
          aoc += vc * s;
          aos += vs * s;
        }
      });
      hq_c(i, m) = aqc;
      hq_s(i, m) = aqs;
      ho_c(i, m) = aoc;
      ho_s(i, m) = aos;
    }
  const double norm0 = 1.0 / std::sqrt(2.0 * M_PI);
  const double normm = 1.0 / std::sqrt(M_PI);
  hq_c.col(0) *= norm0;
  if (L >= 1) {
    hq_c.rightCols(L) *= normm;
    hq_s.rightCols(L) *= normm;
    ho_c.rightCols(L) *= normm;
    ho_s.rightCols(L) *= normm;
  }
  Eigen::MatrixXd C(L + 1, nphi), S(L + 1, nphi);
  for (int j = 0; j < nphi; ++j)
    for (int m = 0; m <= L; ++m) {
      C(m, j) = std::cos(m * grid.lon_nodes[j]);
      S(m, j) = std::sin(m * grid.lon_nodes[j]);
    }
  Eigen::MatrixXd Ft = hq_c * C + hq_s * S;
  // (1/sin)d/dphi: cos(m phi) -> -m sin(m phi), sin(m phi) -> m cos(m phi).
  Eigen::MatrixXd mj_sin(L + 1, nphi), mj_cos(L + 1, nphi);
  for (int j = 0; j < nphi; ++j)
    for (int m = 0; m <= L; ++m) {
      mj_sin(m, j) = -m * S(m, j);
      mj_cos(m, j) = m * C(m, j);
    }
  Eigen::MatrixXd Fp = ho_c * mj_sin + ho_s * mj_cos;
  out.dtheta.resize(nlat * nphi);
  out.dphi_over_sin.resize(nlat * nphi);
  for (int i = 0; i < nlat; ++i) {
    out.dtheta.segment(i * nphi, nphi) = Ft.row(i);
    out.dphi_over_sin.segment(i * nphi, nphi) = Fp.row(i);
  }
  return out;
}

HarmonicCoefficients apply_degreewise(const HarmonicCoefficients& c,
                                      const Eigen::VectorXd& factor_per_l) {
  check_dims(c);
  if (factor_per_l.size() != c.L + 1)
    throw std::invalid_argument("apply_degreewise: factor table must have L+1 entries");
  HarmonicCoefficients out = c;
  if (c.zonal) {
    out.values = c.values.cwiseProduct(factor_per_l);
    return out;
  }
  for (int l = 0; l <= c.L; ++l)
    out.values.segment(l * l, 2 * l + 1) *= factor_per_l[l];
  return out;
}

}  // namespace fsph
