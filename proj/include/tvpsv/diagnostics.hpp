#ifndef TVPSV_DIAGNOSTICS_HPP
#define TVPSV_DIAGNOSTICS_HPP

#include <Eigen/Dense>

namespace tvpsv {

// Effective sample size of a correlated scalar draw sequence, via the initial
// monotone positive sequence estimator on paired autocovariances. Constant
// sequences report their length.
double ess(const Eigen::VectorXd& draws);

}  // namespace tvpsv

#endif
