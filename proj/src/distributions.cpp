#include "tvpsv/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

constexpr int kMaxRejectIter = 10'000'000;

// Two-parameter GIG kernel y^(lam-1) exp(-(omega/2)(y + 1/y)) with lam >= 0.
// The general draw reduces to this via y = sqrt(b/a) x and inversion for
// negative index.

double gig2_mode(double lam, double omega) {
  if (lam >= 1.0) {
    return ((lam - 1.0) + std::sqrt((lam - 1.0) * (lam - 1.0) + omega * omega)) / omega;
  }
  // rearranged to avoid cancellation when lam < 1 and omega is small
  return omega / (std::sqrt((1.0 - lam) * (1.0 - lam) + omega * omega) + (1.0 - lam));
}

double gig2_logkernel(double x, double lam, double omega) {
  return (lam - 1.0) * std::log(x) - 0.5 * omega * (x + 1.0 / x);
}

// Ratio of uniforms without mode shift. Solid for moderate lam and omega.
double gig2_rou_noshift(double lam, double omega, RngStream& rng) {
  const double m = gig2_mode(lam, omega);
  const double nc = gig2_logkernel(m, lam, omega);
  const double xplus =
      ((lam + 1.0) + std::sqrt((lam + 1.0) * (lam + 1.0) + omega * omega)) / omega;
  const double um = std::exp(
      0.5 * ((lam + 1.0) * std::log(xplus) - 0.5 * omega * (xplus + 1.0 / xplus) - nc));
  for (int it = 0; it < kMaxRejectIter; ++it) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (2.0 * std::log(v) <= gig2_logkernel(x, lam, omega) - nc) return x;
  }
  throw numerical_error("gig sampler: rejection loop failed to terminate");
}

// Ratio of uniforms with the region recentered at the mode; the u bounds come
// from the two positive roots of a cubic. Used when lam or omega is large,
// where the unshifted region gets thin.
double gig2_rou_shift(double lam, double omega, RngStream& rng) {
  const double m = gig2_mode(lam, omega);
  const double nc = gig2_logkernel(m, lam, omega);
  const double ca = -(2.0 * (lam + 1.0) / omega + m);
  const double cb = 2.0 * (lam - 1.0) * m / omega - 1.0;
  const double cc = m;
  // depressed cubic t^3 + p t + q, roots via the trigonometric form
  const double p = cb - ca * ca / 3.0;
  const double q = 2.0 * ca * ca * ca / 27.0 - ca * cb / 3.0 + cc;
  if (!(p < 0.0)) return gig2_rou_noshift(lam, omega, rng);
  const double cos_arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double phi = std::acos(cos_arg);
  constexpr double two_thirds_pi = 2.0943951023931954923;
  double y_lo = -1.0;
  double y_hi = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double root = r * std::cos(phi / 3.0 - two_thirds_pi * k) - ca / 3.0;
    if (root > 0.0 && root < m) y_lo = root;
    if (root > m) y_hi = root;
  }
  if (y_lo <= 0.0 || y_hi <= 0.0) return gig2_rou_noshift(lam, omega, rng);
  const double u_lo = (y_lo - m) * std::exp(0.5 * (gig2_logkernel(y_lo, lam, omega) - nc));
  const double u_hi = (y_hi - m) * std::exp(0.5 * (gig2_logkernel(y_hi, lam, omega) - nc));
  for (int it = 0; it < kMaxRejectIter; ++it) {
    const double u = u_lo + rng.uniform() * (u_hi - u_lo);
    const double v = rng.uniform();
    const double x = u / v + m;
    if (x <= 0.0) continue;
    if (2.0 * std::log(v) <= gig2_logkernel(x, lam, omega) - nc) return x;
  }
  throw numerical_error("gig sampler: rejection loop failed to terminate");
}

// Piecewise hat for 0 <= lam < 1 with small omega, where the density has an
// integrable spike at zero and neither ratio-of-uniforms region works. The
// hat has a power segment on (0, x0], a power segment on (x0, x1], and an
// exponential tail beyond x1. For lam = 0 the first piece is handled in the
// reciprocal, where the kernel has the same form.
double gig2_hat(double lam, double omega, RngStream& rng) {
  const double x0 = (lam > 0.0) ? omega / (1.0 - lam) : omega;
  const double x1 = std::max(2.0 / omega, 2.0 * x0);
  double a1, a2;
  if (lam > 0.0) {
    a1 = std::exp(-omega) * std::pow(x0, lam) / lam;
    a2 = std::exp(-omega) * (std::pow(x1, lam) - std::pow(x0, lam)) / lam;
  } else {
    a1 = x0 * (2.0 / omega) * std::exp(-0.5 * omega / x0);
    a2 = std::exp(-omega) * std::log(x1 / x0);
  }
  const double a3 = std::pow(x1, lam - 1.0) * (2.0 / omega) * std::exp(-0.5 * omega * x1);
  const double total = a1 + a2 + a3;

  // exponential tail piece beyond xb, in log-ratio form
  const auto tail_draw = [&](double xb) {
    const double z = xb - (2.0 / omega) * std::log(rng.uniform());
    const double logratio = (lam - 1.0) * std::log(z / xb) - 0.5 * omega / z;
    return std::pair<double, double>(z, logratio);
  };

  for (int it = 0; it < kMaxRejectIter; ++it) {
    const double slot = rng.uniform() * total;
    double x, logratio;
    if (slot < a1) {
      if (lam > 0.0) {
        x = x0 * std::pow(rng.uniform(), 1.0 / lam);
        logratio = omega - 0.5 * omega * (x + 1.0 / x);
      } else {
        const auto [z, lr] = tail_draw(1.0 / x0);
        x = 1.0 / z;
        logratio = lr;
      }
    } else if (slot < a1 + a2) {
      if (lam > 0.0) {
        const double lo = std::pow(x0, lam);
        const double hi = std::pow(x1, lam);
        x = std::pow(lo + rng.uniform() * (hi - lo), 1.0 / lam);
      } else {
        x = x0 * std::exp(rng.uniform() * std::log(x1 / x0));
      }
      logratio = omega - 0.5 * omega * (x + 1.0 / x);
    } else {
      const auto [z, lr] = tail_draw(x1);
      x = z;
      logratio = lr;
    }
    if (std::log(rng.uniform()) <= logratio) return x;
  }
  throw numerical_error("gig sampler: rejection loop failed to terminate");
}

}  // namespace

double draw_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma: shape and rate must be positive and finite");
  }
  if (shape < 1.0) {
    const double g = draw_gamma(shape + 1.0, 1.0, rng);
    const double boosted = g * std::pow(rng.uniform(), 1.0 / shape) / rate;
    return boosted > 0.0 ? boosted : 1e-300;
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double draw_inverse_gamma(double shape, double rate, RngStream& rng) {
  return 1.0 / draw_gamma(shape, rate, rng);
}

double draw_gig(const GigParams& params, RngStream& rng) {
  const double p = params.p;
  const double a = params.a;
  const double b = params.b;
  if (!std::isfinite(p) || !std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw std::invalid_argument("gig: parameters must be finite with a >= 0, b >= 0");
  }
  if (b == 0.0) {
    if (!(p > 0.0) || !(a > 0.0)) {
      throw std::invalid_argument("gig: b = 0 requires p > 0 and a > 0");
    }
    return draw_gamma(p, 0.5 * a, rng);
  }
  if (a == 0.0) {
    if (!(p < 0.0)) {
      throw std::invalid_argument("gig: a = 0 requires p < 0 and b > 0");
    }
    return draw_inverse_gamma(-p, 0.5 * b, rng);
  }
  const double lam = std::abs(p);
  const double omega = std::sqrt(a) * std::sqrt(b);
  double y;
  if (lam > 2.0 || omega > 3.0) {
    y = gig2_rou_shift(lam, omega, rng);
  } else if (lam >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    y = gig2_rou_noshift(lam, omega, rng);
  } else {
    y = gig2_hat(lam, omega, rng);
  }
  if (p < 0.0) y = 1.0 / y;
  return std::sqrt(b) / std::sqrt(a) * y;
}

double draw_inverse_gaussian(double mean, double shape, RngStream& rng) {
  if (!(mean > 0.0) || !(shape > 0.0)) {
    throw std::invalid_argument("inverse gaussian: mean and shape must be positive");
  }
  return draw_gig({-0.5, shape / (mean * mean), shape}, rng);
}

double draw_exponential(double rate, RngStream& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(rng.uniform()) / rate;
}

double draw_beta(double a, double b, RngStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta: both shapes must be positive");
  const double x = draw_gamma(a, 1.0, rng);
  const double y = draw_gamma(b, 1.0, rng);
  return x / (x + y);
}

std::vector<double> draw_dirichlet(const std::vector<double>& conc, RngStream& rng) {
  if (conc.empty()) throw std::invalid_argument("dirichlet: empty concentration vector");
  std::vector<double> out(conc.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < conc.size(); ++j) {
    out[j] = draw_gamma(conc[j], 1.0, rng);
    sum += out[j];
  }
  for (double& v : out) v /= sum;
  return out;
}

double student_t_logpdf(double x, double dof, double location, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("student t: dof and scale must be positive");
  }
  const double z = (x - location) / scale;
  constexpr double log_pi = 1.1447298858494001741;
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
         0.5 * (std::log(dof) + log_pi) - std::log(scale) -
         0.5 * (dof + 1.0) * std::log1p(z * z / dof);
}

double gaussian_logpdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw std::invalid_argument("gaussian: variance must be positive");
  constexpr double log_two_pi = 1.8378770664093454836;
  const double d = x - mean;
  return -0.5 * (log_two_pi + std::log(var) + d * d / var);
}

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: argument must be positive");
  double r = 0.0;
  while (x < 10.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + std::log(x) - 0.5 / x -
         f * (1.0 / 12.0 -
              f * (1.0 / 120.0 -
                   f * (1.0 / 252.0 - f * (1.0 / 240.0 - f * (1.0 / 132.0)))));
}

double trigamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("trigamma: argument must be positive");
  double r = 0.0;
  while (x < 10.0) {
    r += 1.0 / (x * x);
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + 1.0 / x + 0.5 * f +
         f / x * (1.0 / 6.0 - f * (1.0 / 30.0 - f * (1.0 / 42.0 - f / 30.0)));
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace tvpsv
