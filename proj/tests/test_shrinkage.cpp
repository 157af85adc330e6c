#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "tvpsv/distributions.hpp"
#include "tvpsv/shrinkage.hpp"
#include "tvpsv/rng.hpp"

using namespace tvpsv;

namespace {

// The coefficient draw is an affine map of the normals it consumes:
// d = m + A z with m the posterior mean and A A' the posterior covariance.
// Replaying the generator stream makes z observable, so k + 1 calls recover
// m and A exactly by solving the difference system. This checks the sampler
// itself, not just its first two MC moments.
struct RecoveredGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

RecoveredGaussian recover_affine(const WeightedRegression& reg,
                                 const Eigen::VectorXd& prior_var,
                                 std::uint64_t seed_base) {
  const Eigen::Index k = prior_var.size();
  Eigen::MatrixXd D(k, k), Z(k, k);
  Eigen::VectorXd d0, z0(k);
  for (Eigen::Index i = 0; i <= k; ++i) {
    RngStream probe(seed_base, static_cast<std::uint64_t>(i));
    Eigen::VectorXd z(k);
    for (Eigen::Index j = 0; j < k; ++j) z(j) = probe.normal();
    RngStream rng(seed_base, static_cast<std::uint64_t>(i));
    const Eigen::VectorXd d = draw_alpha(reg, prior_var, rng);
    if (i == 0) {
      d0 = d;
      z0 = z;
    } else {
      D.col(i - 1) = d - d0;
      Z.col(i - 1) = z - z0;
    }
  }
  const Eigen::MatrixXd A = D * Z.inverse();
  RecoveredGaussian out;
  out.mean = d0 - A * z0;
  out.cov = A * A.transpose();
  return out;
}

// normal-equations statement of the same conditional
RecoveredGaussian normal_equations(const WeightedRegression& reg,
                                   const Eigen::VectorXd& prior_var) {
  const Eigen::Index k = prior_var.size();
  Eigen::MatrixXd prec = prior_var.cwiseInverse().asDiagonal();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  for (Eigen::Index t = 0; t < reg.response.size(); ++t) {
    const Eigen::VectorXd x = reg.design.row(t).transpose();
    prec.noalias() += x * x.transpose() / reg.noise_var(t);
    rhs.noalias() += x * reg.response(t) / reg.noise_var(t);
  }
  RecoveredGaussian out;
  out.cov = prec.inverse();
  out.mean = out.cov * rhs;
  return out;
}

WeightedRegression random_regression(RngStream& rng, Eigen::Index T, Eigen::Index k) {
  WeightedRegression reg;
  reg.response.resize(T);
  reg.design.resize(T, k);
  reg.noise_var.resize(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    reg.response(t) = 2.0 * rng.normal();
    reg.noise_var(t) = std::exp(rng.normal());
    for (Eigen::Index j = 0; j < k; ++j) reg.design(t, j) = rng.normal();
  }
  return reg;
}

double gig_moment(double p, double a, double b, int k) {
  const double w = std::sqrt(a * b);
  return std::pow(std::sqrt(b / a), k) *
         std::cyl_bessel_k(std::abs(p + k), w) / std::cyl_bessel_k(std::abs(p), w);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double invgauss_cdf(double x, double mean, double shape) {
  if (x <= 0.0) return 0.0;
  const double r = std::sqrt(shape / x);
  return norm_cdf(r * (x / mean - 1.0)) +
         std::exp(2.0 * shape / mean) * norm_cdf(-r * (x / mean + 1.0));
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; i += 97) {
    const double c = cdf(sample[i]);
    d = std::max(d, std::max(std::abs(c - double(i) / n), std::abs(double(i + 1) / n - c)));
  }
  return d;
}

// tabulated inverse-CDF sampler for one GIG law, independent of the library
// sampler in both algorithm and generator
struct GridSampler {
  std::vector<double> s;    // log points
  std::vector<double> cum;  // normalized CDF at s
  double draw(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(eng);
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const std::size_t i = std::min<std::size_t>(cum.size() - 1,
                          std::max<std::ptrdiff_t>(1, it - cum.begin()));
    const double w = (u - cum[i - 1]) / std::max(cum[i] - cum[i - 1], 1e-300);
    return std::exp(s[i - 1] + w * (s[i] - s[i - 1]));
  }
};

GridSampler tabulate_gig(double p, double a, double b) {
  const auto lg = [&](double u) {
    return p * u - 0.5 * (a * std::exp(u) + b * std::exp(-u));
  };
  const int n = 8000;
  double lo = -45.0, hi = 45.0, peak = -1e308;
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i] = lg(lo + (hi - lo) * i / n);
    peak = std::max(peak, vals[i]);
  }
  int ia = 0, ib = n;
  while (ia < n && vals[ia] < peak - 60.0) ++ia;
  while (ib > 0 && vals[ib] < peak - 60.0) --ib;
  const double wlo = lo + (hi - lo) * ia / n, whi = lo + (hi - lo) * ib / n;

  GridSampler g;
  g.s.resize(n + 1);
  g.cum.assign(n + 1, 0.0);
  double prev = 0.0;
  for (int i = 0; i <= n; ++i) {
    g.s[i] = wlo + (whi - wlo) * i / n;
    const double f = std::exp(lg(g.s[i]) - peak);
    if (i > 0) g.cum[i] = g.cum[i - 1] + 0.5 * (prev + f) * (g.s[i] - g.s[i - 1]);
    prev = f;
  }
  for (double& c : g.cum) c /= g.cum[n];
  return g;
}

double rep_z(const std::vector<double>& marginal, const std::vector<double>& rep_means) {
  const int nm = static_cast<int>(marginal.size());
  const int R = static_cast<int>(rep_means.size());
  double m1 = 0, m2 = 0;
  for (double v : marginal) {
    m1 += v;
    m2 += v * v;
  }
  m1 /= nm;
  m2 = m2 / nm - m1 * m1;
  double c1 = 0, c2 = 0;
  for (double v : rep_means) {
    c1 += v;
    c2 += v * v;
  }
  c1 /= R;
  c2 = (c2 - R * c1 * c1) / (R - 1);
  return (m1 - c1) / std::sqrt(m2 / nm + (double(R - 1) / (R - 3)) * c2 / R);
}

}  // namespace

TEST_CASE("coefficient draw is the exact conjugate gaussian") {
  RngStream gen(701);
  for (int inst = 0; inst < 8; ++inst) {
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(gen.uniform() * 6);
    const Eigen::Index T = k + static_cast<Eigen::Index>(gen.uniform() * 15);
    WeightedRegression reg = random_regression(gen, T, k);
    Eigen::VectorXd pv(k);
    const double spread[] = {1e-9, 3e-3, 1.0, 250.0, 1e4, 40.0, 0.5};
    for (Eigen::Index j = 0; j < k; ++j) pv(j) = spread[(inst + j) % 7];

    const RecoveredGaussian got = recover_affine(reg, pv, 9000 + inst);
    const RecoveredGaussian want = normal_equations(reg, pv);
    const double scale = std::max(1.0, want.mean.lpNorm<Eigen::Infinity>());
    CHECK((got.mean - want.mean).lpNorm<Eigen::Infinity>() < 1e-8 * scale);
    CHECK((got.cov - want.cov).lpNorm<Eigen::Infinity>() <
          1e-8 * std::max(1.0, want.cov.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("scalar conjugate case by hand") {
  // one observation y = x b + e: posterior mean v x y / (v x^2 + s2)
  const double v = 0.8, x = 1.7, s2 = 0.3, y = 1.1;
  WeightedRegression reg;
  reg.response = Eigen::VectorXd::Constant(1, y);
  reg.design = Eigen::MatrixXd::Constant(1, 1, x);
  reg.noise_var = Eigen::VectorXd::Constant(1, s2);
  const RecoveredGaussian got =
      recover_affine(reg, Eigen::VectorXd::Constant(1, v), 31);
  CHECK(got.mean(0) == doctest::Approx(v * x * y / (v * x * x + s2)).epsilon(1e-10));
  CHECK(got.cov(0, 0) == doctest::Approx(v * s2 / (v * x * x + s2)).epsilon(1e-10));
}

TEST_CASE("diffuse prior approaches generalized least squares") {
  RngStream gen(702);
  WeightedRegression reg = random_regression(gen, 10, 3);
  const Eigen::VectorXd pv = Eigen::VectorXd::Constant(3, 1e8);
  const RecoveredGaussian got = recover_affine(reg, pv, 41);

  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(3, 3);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(3);
  for (Eigen::Index t = 0; t < 10; ++t) {
    const Eigen::VectorXd x = reg.design.row(t).transpose();
    xtx += x * x.transpose() / reg.noise_var(t);
    xty += x * reg.response(t) / reg.noise_var(t);
  }
  const Eigen::VectorXd gls = xtx.llt().solve(xty);
  CHECK((got.mean - gls).lpNorm<Eigen::Infinity>() < 1e-5 * gls.lpNorm<Eigen::Infinity>());
}

TEST_CASE("a vanishing prior variance pins its coordinate") {
  RngStream gen(703);
  WeightedRegression reg = random_regression(gen, 12, 3);
  Eigen::VectorXd pv(3);
  pv << 1.0, 1e-12, 1.0;
  RngStream rng(704);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd d = draw_alpha(reg, pv, rng);
    CHECK(std::abs(d(1)) < 1e-4);
  }
  CHECK_THROWS(draw_alpha(reg, Eigen::VectorXd::Zero(3), rng));
}

TEST_CASE("draw distribution matches the recovered gaussian") {
  RngStream gen(705);
  WeightedRegression reg = random_regression(gen, 15, 4);
  Eigen::VectorXd pv(4);
  pv << 2.0, 0.5, 10.0, 0.05;
  const RecoveredGaussian want = normal_equations(reg, pv);

  RngStream rng(706);
  const int n = 100000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd d = draw_alpha(reg, pv, rng);
    mean += d;
    scatter += d * d.transpose();
  }
  mean /= n;
  scatter = scatter / n - mean * mean.transpose();
  for (Eigen::Index j = 0; j < 4; ++j) {
    CHECK(std::abs(mean(j) - want.mean(j)) < 4.0 * std::sqrt(want.cov(j, j) / n));
  }
  CHECK((scatter - want.cov).norm() < 0.05 * want.cov.norm());
}

TEST_CASE("local scale conditional") {
  // 1/psi is inverse gaussian with mean phi lambda / |alpha| and shape 1
  const double cases[][3] = {{0.5, 2.0, 1.0}, {0.1, 1.0, 0.3}, {0.9, 5.0, 2.0}};
  std::uint64_t seed = 707;
  for (const auto& c : cases) {
    const double phi = c[0], lambda = c[1], alpha = c[2];
    const double m = phi * lambda / alpha;
    RngStream rng(seed++);
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd psi = draw_local_scales(
          Eigen::VectorXd::Constant(1, alpha), Eigen::VectorXd::Constant(1, phi),
          lambda, rng);
      acc += 1.0 / psi(0);
    }
    acc /= n;
    CHECK(std::abs(acc - m) < 4.0 * std::sqrt(m * m * m / n));
  }

  // the conditional depends on alpha only through its magnitude
  Eigen::VectorXd alpha(3), phi(3);
  alpha << 0.4, -1.2, 0.03;
  phi << 0.2, 0.5, 0.3;
  RngStream r1(708), r2(708);
  const Eigen::VectorXd p1 = draw_local_scales(alpha, phi, 2.0, r1);
  const Eigen::VectorXd p2 = draw_local_scales(-alpha, phi, 2.0, r2);
  CHECK((p1 - p2).lpNorm<Eigen::Infinity>() == 0.0);

  // full law at phi = 0.5, lambda = 2, alpha = 1
  RngStream rng(709);
  std::vector<double> recip(100000);
  for (double& x : recip) {
    x = 1.0 / draw_local_scales(Eigen::VectorXd::Ones(1),
                                Eigen::VectorXd::Constant(1, 0.5), 2.0, rng)(0);
  }
  CHECK(ks_distance(recip, [](double x) { return invgauss_cdf(x, 1.0, 1.0); }) < 0.01);

  // zero coefficients hit the magnitude floor without leaving the support
  const Eigen::VectorXd at_zero =
      draw_local_scales(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Constant(2, 0.5),
                        1.0, rng);
  CHECK(at_zero.allFinite());
  CHECK(at_zero.minCoeff() > 0.0);
}

TEST_CASE("global scale conditional") {
  Eigen::VectorXd alpha(4), phi(4);
  alpha << 0.3, -0.8, 0.05, 1.4;
  phi << 0.1, 0.4, 0.2, 0.3;
  double s = 0.0;
  for (int j = 0; j < 4; ++j) s += std::abs(alpha(j)) / phi(j);

  for (const double a : {0.25, 1.0}) {
    const double p = 4.0 * (a - 1.0);
    RngStream rng(a < 1.0 ? 710 : 711);
    const int n = 200000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      const double l = draw_global_scale(alpha, phi, a, rng);
      m1 += l;
      m2 += l * l;
    }
    m1 /= n;
    m2 /= n;
    const double e1 = gig_moment(p, 1.0, 2.0 * s, 1);
    const double e2 = gig_moment(p, 1.0, 2.0 * s, 2);
    const double e4 = gig_moment(p, 1.0, 2.0 * s, 4);
    CHECK(std::abs(m1 - e1) < 4.0 * std::sqrt((e2 - e1 * e1) / n));
    CHECK(std::abs(m2 - e2) < 4.0 * std::sqrt((e4 - e2 * e2) / n));
  }

  RngStream rng(712);
  const double at_zero = draw_global_scale(Eigen::VectorXd::Zero(3),
                                           Eigen::VectorXd::Constant(3, 1.0 / 3), 0.5,
                                           rng);
  CHECK(std::isfinite(at_zero));
  CHECK(at_zero > 0.0);
}

TEST_CASE("weight conditional stays on the simplex and is exchangeable") {
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(5, 0.7);
  alpha(2) = -0.7;
  RngStream rng(713);
  const int n = 100000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd phi = draw_phi(alpha, 0.3, rng);
    REQUIRE(std::abs(phi.sum() - 1.0) < 1e-12);
    REQUIRE(phi.minCoeff() >= 0.0);
    mean += phi;
  }
  mean /= n;
  for (int j = 0; j < 5; ++j) CHECK(std::abs(mean(j) - 0.2) < 4.0 * std::sqrt(0.04 / n));
}

TEST_CASE("weight conditional against an independent tabulated sampler") {
  Eigen::VectorXd alpha(4);
  alpha << 0.1, 0.1, 0.2, 0.2;
  const double a = 0.25;

  RngStream rng(714);
  const int n = 100000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd phi = draw_phi(alpha, a, rng);
    mean += phi;
    m2 += phi.cwiseProduct(phi);
  }
  mean /= n;
  m2 /= n;

  GridSampler tab[4];
  for (int j = 0; j < 4; ++j) tab[j] = tabulate_gig(a - 1.0, 1.0, 2.0 * alpha(j));
  std::mt19937_64 eng(715);
  Eigen::VectorXd omean = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd ovar = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < n; ++i) {
    double t[4], sum = 0.0;
    for (int j = 0; j < 4; ++j) {
      t[j] = tab[j].draw(eng);
      sum += t[j];
    }
    for (int j = 0; j < 4; ++j) {
      const double f = t[j] / sum;
      omean(j) += f;
      ovar(j) += f * f;
    }
  }
  omean /= n;
  ovar = ovar / n - omean.cwiseProduct(omean);
  for (int j = 0; j < 4; ++j) {
    const double v = m2(j) - mean(j) * mean(j);
    const double se = std::sqrt((v + ovar(j)) / n);
    CHECK(std::abs(mean(j) - omean(j)) < 4.0 * se + 1e-9);
  }
}

TEST_CASE("prior mass at zero grows with dimension") {
  // ancestral simulation of the full shrinkage prior at a = 1 / dim
  const int dims[] = {2, 8, 28};
  double prev = -1.0;
  std::uint64_t seed = 716;
  for (const int k : dims) {
    const double a = 1.0 / k;
    RngStream rng(seed++);
    const int n = 200000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      const double lambda = draw_gamma(k * a, 0.5, rng);
      const std::vector<double> phi = draw_dirichlet(std::vector<double>(k, a), rng);
      const double psi = draw_exponential(0.5, rng);
      const double alpha1 = std::sqrt(psi) * phi[0] * lambda * rng.normal();
      if (std::abs(alpha1) < 0.01) ++hits;
    }
    const double p = static_cast<double>(hits) / n;
    CHECK(p > prev + 0.02);
    prev = p;
  }
}

TEST_CASE("scale trio leaves the shrinkage prior invariant") {
  // prior-only successive conditionals at a = 0.25, dim 4: resimulate alpha
  // from N(0, psi phi^2 lambda^2) after each scale sweep. Analytic prior
  // moments: E[lambda] = 2, E[lambda^2] = 8, E[psi] = 2, E[phi^2] = 5/32,
  // and E|alpha| = E[phi] E[lambda] = 1/2.
  const int k = 4;
  const double a = 0.25;
  const int cycles = 3000, R = 10, n_marg = 30000;

  const auto track = [](const Eigen::VectorXd& alpha, const DlState& dl,
                        double* out) {
    out[0] = dl.lambda;
    out[1] = dl.lambda * dl.lambda;
    out[2] = dl.psi(0);
    out[3] = dl.phi(0) * dl.phi(0);
    out[4] = std::abs(alpha(0));
    out[5] = std::log(alpha(0) * alpha(0) + 1e-300);
  };

  std::vector<double> marg[6], reps[6];
  {
    RngStream rng(717);
    for (int i = 0; i < n_marg; ++i) {
      DlState dl;
      dl.lambda = draw_gamma(k * a, 0.5, rng);
      const std::vector<double> phiv = draw_dirichlet(std::vector<double>(k, a), rng);
      dl.phi.resize(k);
      dl.psi.resize(k);
      Eigen::VectorXd alpha(k);
      for (int j = 0; j < k; ++j) {
        dl.phi(j) = phiv[j];
        dl.psi(j) = draw_exponential(0.5, rng);
        alpha(j) = std::sqrt(dl.psi(j)) * dl.phi(j) * dl.lambda * rng.normal();
      }
      double f[6];
      track(alpha, dl, f);
      for (int j = 0; j < 6; ++j) marg[j].push_back(f[j]);
    }
  }
  for (int r = 0; r < R; ++r) {
    RngStream rng(7200 + r);
    DlState dl;
    dl.a = a;
    dl.lambda = draw_gamma(k * a, 0.5, rng);
    const std::vector<double> phiv = draw_dirichlet(std::vector<double>(k, a), rng);
    dl.phi.resize(k);
    dl.psi.resize(k);
    Eigen::VectorXd alpha(k);
    for (int j = 0; j < k; ++j) {
      dl.phi(j) = phiv[j];
      dl.psi(j) = draw_exponential(0.5, rng);
      alpha(j) = std::sqrt(dl.psi(j)) * dl.phi(j) * dl.lambda * rng.normal();
    }
    double acc[6] = {0, 0, 0, 0, 0, 0};
    for (int c = 0; c < cycles; ++c) {
      dl.phi = draw_phi(alpha, a, rng);
      dl.lambda = draw_global_scale(alpha, dl.phi, a, rng);
      dl.psi = draw_local_scales(alpha, dl.phi, dl.lambda, rng);
      for (int j = 0; j < k; ++j) {
        alpha(j) = std::sqrt(dl.psi(j)) * dl.phi(j) * dl.lambda * rng.normal();
      }
      double f[6];
      track(alpha, dl, f);
      for (int j = 0; j < 6; ++j) acc[j] += f[j];
    }
    for (int j = 0; j < 6; ++j) reps[j].push_back(acc[j] / cycles);
  }
  for (int j = 0; j < 6; ++j) CHECK(std::abs(rep_z(marg[j], reps[j])) < 3.29);

  // analytic anchors on the marginal side confirm the simulation itself
  double lam = 0, psi = 0, phi2 = 0, absa = 0;
  for (std::size_t i = 0; i < marg[0].size(); ++i) {
    lam += marg[0][i];
    psi += marg[2][i];
    phi2 += marg[3][i];
    absa += marg[4][i];
  }
  const double nm = static_cast<double>(marg[0].size());
  CHECK(std::abs(lam / nm - 2.0) < 0.05);
  CHECK(std::abs(psi / nm - 2.0) < 0.06);
  CHECK(std::abs(phi2 / nm - 5.0 / 32.0) < 0.01);
  CHECK(std::abs(absa / nm - 0.5) < 0.02);
}
