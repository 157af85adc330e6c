#ifndef TVPSV_HEAVY_TAILS_HPP
#define TVPSV_HEAVY_TAILS_HPP

#include <Eigen/Dense>

#include "tvpsv/rng.hpp"

namespace tvpsv {

// Prior and support for a degrees-of-freedom parameter: gamma(shape, rate)
// truncated to [lower, upper].
struct DofPrior {
  double shape = 1.0;
  double rate = 0.1;
  double lower = 2.0;
  double upper = 50.0;
};

// Per-observation variance inflators tau_t given residuals standardized by
// the log-variance path: each is inverse gamma with shape (nu + 1)/2 and
// rate (nu + resid_t^2 exp(-h_t))/2.
Eigen::VectorXd draw_obs_scales(const Eigen::VectorXd& resid, const Eigen::VectorXd& h,
                                double nu, RngStream& rng);

// Same conditional for state increment inflators, with unit reference scale.
Eigen::VectorXd draw_state_scales(const Eigen::VectorXd& increments, double kappa,
                                  RngStream& rng);

// Log of the conditional density of the degrees of freedom given the mixing
// scales, prior included, up to a constant.
double dof_logdensity(const Eigen::VectorXd& scales, double nu, const DofPrior& prior);

struct DofUpdate {
  double value = 0.0;
  bool accepted = false;
  bool proposal_ok = true;
};

// Independence Metropolis-Hastings step: the proposal is a normal matched to
// the conditional's interior maximum and curvature, truncated to the support.
// If the maximizer search fails the current value is kept and proposal_ok is
// cleared; the chain stays valid either way.
DofUpdate update_dof(const Eigen::VectorXd& scales, double current,
                     const DofPrior& prior, RngStream& rng);

}  // namespace tvpsv

#endif
