#include "tvpsv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tvpsv {

namespace {

double autocov(const Eigen::VectorXd& x, double mean, int lag) {
  const Eigen::Index n = x.size();
  double s = 0.0;
  for (Eigen::Index t = lag; t < n; ++t) s += (x(t) - mean) * (x(t - lag) - mean);
  return s / static_cast<double>(n);
}

}  // namespace

double ess(const Eigen::VectorXd& draws) {
  const Eigen::Index n = draws.size();
  if (n < 4) return static_cast<double>(n);
  const double mean = draws.mean();
  const double g0 = autocov(draws, mean, 0);
  if (!(g0 > 0.0) || !std::isfinite(g0)) return static_cast<double>(n);

  // sum paired autocovariances while they stay positive, clipping each pair
  // sum at the previous one to enforce monotonicity
  double sigma2 = -g0;
  double prev = std::numeric_limits<double>::infinity();
  const int max_pairs = static_cast<int>(n / 2);
  for (int m = 0; m < max_pairs; ++m) {
    double pair = autocov(draws, mean, 2 * m) + autocov(draws, mean, 2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev);
    prev = pair;
    sigma2 += 2.0 * pair;
  }
  if (!(sigma2 > 0.0)) return static_cast<double>(n);
  const double out = static_cast<double>(n) * g0 / sigma2;
  return std::clamp(out, 1.0, static_cast<double>(n));
}

}  // namespace tvpsv
