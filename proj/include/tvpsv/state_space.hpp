#ifndef TVPSV_STATE_SPACE_HPP
#define TVPSV_STATE_SPACE_HPP

#include <Eigen/Dense>

#include "tvpsv/rng.hpp"

namespace tvpsv {

// Conditionally Gaussian local-level system with a scalar observation:
//   y_t = loadings_t' b_t + e_t,        e_t ~ N(0, obs_var_t)
//   b_t = b_{t-1} + w_t,                w_t ~ N(0, diag(state_var row t))
//   b_0 = 0 exactly.
// Rows are t = 1..T in order; row t-1 of each member belongs to time t.
struct SsmInputs {
  Eigen::VectorXd obs;        // T
  Eigen::MatrixXd loadings;   // T x K
  Eigen::VectorXd obs_var;    // T, strictly positive
  Eigen::MatrixXd state_var;  // T x K, strictly positive
};

// One joint draw of b_1..b_T from the smoothing distribution, via a forward
// covariance filter and backward sampling pass. Row t-1 holds b_t.
Eigen::MatrixXd ffbs_draw(const SsmInputs& in, RngStream& rng);

// Log of the marginal likelihood p(y_1..y_T) with the states integrated out,
// from the prediction error decomposition of the same forward filter.
double marginal_loglik(const SsmInputs& in);

}  // namespace tvpsv

#endif
