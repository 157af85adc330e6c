#include "tvpsv/state_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

void check_inputs(const SsmInputs& in) {
  const auto T = in.obs.size();
  const auto K = in.loadings.cols();
  if (T < 1) throw std::invalid_argument("state space: need at least one observation");
  if (in.loadings.rows() != T || in.obs_var.size() != T || in.state_var.rows() != T ||
      in.state_var.cols() != K) {
    throw std::invalid_argument("state space: input dimensions disagree");
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    if (!(in.obs_var(t) > 0.0) || !std::isfinite(in.obs_var(t))) {
      throw numerical_error("state space: bad observation variance at time " +
                            std::to_string(t + 1));
    }
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!(in.state_var(t, j) > 0.0) || !std::isfinite(in.state_var(t, j))) {
        throw numerical_error("state space: bad state variance at time " +
                              std::to_string(t + 1));
      }
    }
  }
}

// Draw from N(mean, cov) for a small symmetric PSD cov. Cholesky first, with
// an eigenvalue fallback that clips tiny negative directions, since filtered
// covariances can brush rank deficiency.
Eigen::VectorXd mvn_draw(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                         RngStream& rng) {
  const Eigen::Index k = mean.size();
  Eigen::VectorXd z(k);
  for (Eigen::Index i = 0; i < k; ++i) z(i) = rng.normal();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    return mean + llt.matrixL() * z;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw numerical_error("state space: covariance factorization failed");
  }
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return mean + es.eigenvectors() * root.asDiagonal() * z;
}

struct FilterOutput {
  std::vector<Eigen::VectorXd> mean;  // index t: E[b_t | y_1..y_t], t = 0..T
  std::vector<Eigen::MatrixXd> cov;
  double loglik = 0.0;
};

FilterOutput forward_filter(const SsmInputs& in) {
  const Eigen::Index T = in.obs.size();
  const Eigen::Index K = in.loadings.cols();
  FilterOutput out;
  out.mean.resize(T + 1);
  out.cov.resize(T + 1);
  out.mean[0] = Eigen::VectorXd::Zero(K);
  out.cov[0] = Eigen::MatrixXd::Zero(K, K);
  constexpr double log_two_pi = 1.8378770664093454836;
  for (Eigen::Index t = 1; t <= T; ++t) {
    Eigen::MatrixXd pred = out.cov[t - 1];
    pred.diagonal() += in.state_var.row(t - 1);
    const Eigen::VectorXd load = in.loadings.row(t - 1).transpose();
    const Eigen::VectorXd pl = pred * load;
    const double s = load.dot(pl) + in.obs_var(t - 1);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw numerical_error("state space: nonpositive innovation variance at time " +
                            std::to_string(t));
    }
    const double innov = in.obs(t - 1) - load.dot(out.mean[t - 1]);
    out.loglik += -0.5 * (log_two_pi + std::log(s) + innov * innov / s);
    const Eigen::VectorXd k_gain = pl / s;
    out.mean[t] = out.mean[t - 1] + k_gain * innov;
    // Joseph form: a sum of PSD terms, stable even when the observation is
    // many orders of magnitude more informative than the prediction, where
    // the plain pred - pl pl'/s update cancels to noise
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(K, K) - k_gain * load.transpose();
    Eigen::MatrixXd post = a * pred * a.transpose() +
                           (in.obs_var(t - 1)) * (k_gain * k_gain.transpose());
    out.cov[t] = 0.5 * (post + post.transpose());
  }
  return out;
}

}  // namespace

Eigen::MatrixXd ffbs_draw(const SsmInputs& in, RngStream& rng) {
  check_inputs(in);
  const Eigen::Index T = in.obs.size();
  const Eigen::Index K = in.loadings.cols();
  const FilterOutput filt = forward_filter(in);

  Eigen::MatrixXd path(T, K);
  Eigen::VectorXd draw = mvn_draw(filt.mean[T], filt.cov[T], rng);
  path.row(T - 1) = draw;
  for (Eigen::Index t = T - 1; t >= 1; --t) {
    // condition b_t on the sampled b_{t+1}; the one-step transition has
    // variance diag(state_var row t), which is row index t here
    Eigen::MatrixXd pred = filt.cov[t];
    pred.diagonal() += in.state_var.row(t);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(pred);
    if (ldlt.info() != Eigen::Success) {
      throw numerical_error("state space: backward step factorization failed at time " +
                            std::to_string(t));
    }
    // gain' = pred^{-1} P_t, so gain = P_t pred^{-1} by symmetry
    const Eigen::MatrixXd gain = ldlt.solve(filt.cov[t]).transpose();
    const Eigen::VectorXd mean = filt.mean[t] + gain * (draw - filt.mean[t]);
    // Joseph form of P - G P, stable when the transition noise is tiny and
    // the gain approaches the identity
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(K, K) - gain;
    Eigen::MatrixXd cov = a * filt.cov[t] * a.transpose() +
                          gain * in.state_var.row(t).asDiagonal() * gain.transpose();
    cov = 0.5 * (cov + cov.transpose());
    draw = mvn_draw(mean, cov, rng);
    path.row(t - 1) = draw;
  }
  return path;
}

double marginal_loglik(const SsmInputs& in) {
  check_inputs(in);
  return forward_filter(in).loglik;
}

}  // namespace tvpsv
