#include "tvpsv/shrinkage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tvpsv/distributions.hpp"
#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

// keeps |alpha_j| away from zero in the scale conditionals, where an exact
// zero would push a GIG parameter onto an invalid boundary
constexpr double kAbsFloor = 1e-10;
constexpr double kPhiFloor = 1e-300;

}  // namespace

Eigen::VectorXd draw_alpha(const WeightedRegression& reg,
                           const Eigen::VectorXd& prior_var, RngStream& rng) {
  const Eigen::Index n = reg.response.size();
  const Eigen::Index k = reg.design.cols();
  if (reg.design.rows() != n || reg.noise_var.size() != n || prior_var.size() != k) {
    throw std::invalid_argument("draw_alpha: dimensions disagree");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(prior_var(j) > 0.0)) throw std::invalid_argument("draw_alpha: prior variance must be positive");
  }
  // solve in prior-standardized coordinates alpha = S gamma, S = sqrt prior
  // variances: the gamma precision is I plus a Gram matrix, so its smallest
  // eigenvalue is at least 1 and the factorization cannot lose definiteness
  // however extreme the shrinkage scales or design columns get
  const Eigen::VectorXd s = prior_var.cwiseSqrt();
  Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd xs(k);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double iv = 1.0 / reg.noise_var(t);
    if (!(iv > 0.0) || !std::isfinite(iv)) {
      throw numerical_error("draw_alpha: bad noise variance at row " + std::to_string(t));
    }
    xs = reg.design.row(t).transpose().cwiseProduct(s);
    prec.noalias() += iv * xs * xs.transpose();
    rhs.noalias() += (iv * reg.response(t)) * xs;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("draw_alpha: posterior precision factorization failed");
  }
  const Eigen::VectorXd mean = llt.solve(rhs);
  Eigen::VectorXd z(k);
  for (Eigen::Index j = 0; j < k; ++j) z(j) = rng.normal();
  return s.cwiseProduct(mean + llt.matrixU().solve(z));
}

Eigen::VectorXd draw_local_scales(const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& phi, double lambda,
                                  RngStream& rng) {
  const Eigen::Index k = alpha.size();
  if (phi.size() != k) throw std::invalid_argument("draw_local_scales: dimensions disagree");
  if (!(lambda > 0.0)) throw std::invalid_argument("draw_local_scales: lambda must be positive");
  Eigen::VectorXd psi(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mean = std::max(phi(j), kPhiFloor) * lambda /
                        std::max(std::abs(alpha(j)), kAbsFloor);
    const double r = draw_inverse_gaussian(mean, 1.0, rng);
    psi(j) = std::min(1.0 / r, 1e300);
  }
  return psi;
}

double draw_global_scale(const Eigen::VectorXd& alpha, const Eigen::VectorXd& phi,
                         double a, RngStream& rng) {
  const Eigen::Index k = alpha.size();
  if (phi.size() != k || k == 0) throw std::invalid_argument("draw_global_scale: bad inputs");
  if (!(a > 0.0)) throw std::invalid_argument("draw_global_scale: a must be positive");
  double s = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    s += std::max(std::abs(alpha(j)), kAbsFloor) / std::max(phi(j), kPhiFloor);
  }
  return draw_gig({static_cast<double>(k) * (a - 1.0), 1.0, 2.0 * s}, rng);
}

Eigen::VectorXd draw_phi(const Eigen::VectorXd& alpha, double a, RngStream& rng) {
  const Eigen::Index k = alpha.size();
  if (k == 0) throw std::invalid_argument("draw_phi: empty alpha");
  if (!(a > 0.0)) throw std::invalid_argument("draw_phi: a must be positive");
  Eigen::VectorXd t(k);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double abs_a = std::max(std::abs(alpha(j)), kAbsFloor);
    t(j) = std::max(draw_gig({a - 1.0, 1.0, 2.0 * abs_a}, rng), kPhiFloor);
    sum += t(j);
  }
  return t / sum;
}

}  // namespace tvpsv
