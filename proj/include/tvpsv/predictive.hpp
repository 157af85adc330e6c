#ifndef TVPSV_PREDICTIVE_HPP
#define TVPSV_PREDICTIVE_HPP

#include <Eigen/Dense>

#include "tvpsv/rng.hpp"
#include "tvpsv/sampler.hpp"

namespace tvpsv {

// One-step-ahead predictive mixture: per retained draw, a location, a scale,
// and a tail index. Infinite dof marks a gaussian component; finite dof is a
// Student-t component with the observation scale mixing integrated out.
struct PredictiveDensity {
  Eigen::VectorXd location;
  Eigen::VectorXd scale;
  Eigen::VectorXd dof;
};

// Simulates the latent pieces one step past the sample end for every
// retained draw: the log variance, and for time-varying models the state
// increment with its own mixing scale. x_next is the design row of the
// target month.
PredictiveDensity one_step_predictive(const DrawStore& store,
                                      const Eigen::VectorXd& x_next, RngStream& rng);

// Log of the equally weighted mixture density at the realized value.
double log_predictive_score(const PredictiveDensity& pred, double realized);

// Posterior mean point forecast.
double predictive_mean(const PredictiveDensity& pred);

}  // namespace tvpsv

#endif
