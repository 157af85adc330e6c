#ifndef TVPSV_SHRINKAGE_HPP
#define TVPSV_SHRINKAGE_HPP

#include <Eigen/Dense>

#include "tvpsv/rng.hpp"

namespace tvpsv {

// Heteroscedastic Gaussian regression pieces for one conditional draw of the
// coefficient vector: response(t) = design.row(t) * coef + noise with
// variance noise_var(t).
struct WeightedRegression {
  Eigen::VectorXd response;
  Eigen::MatrixXd design;
  Eigen::VectorXd noise_var;
};

// Dirichlet-Laplace scale hierarchy for a coefficient vector alpha:
// alpha_j ~ N(0, psi_j phi_j^2 lambda^2) with psi_j ~ Exp(1/2), phi on the
// simplex with concentration a, and lambda ~ gamma(dim * a, rate 1/2).
struct DlState {
  Eigen::VectorXd psi;
  Eigen::VectorXd phi;
  double lambda = 1.0;
  double a = 0.0;
};

// Draw the coefficient vector from its Gaussian conditional under independent
// N(0, prior_var_j) priors centered at zero.
Eigen::VectorXd draw_alpha(const WeightedRegression& reg,
                           const Eigen::VectorXd& prior_var, RngStream& rng);

// psi_j refresh: reciprocal of an inverse Gaussian with mean
// phi_j lambda / |alpha_j|.
Eigen::VectorXd draw_local_scales(const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& phi, double lambda,
                                  RngStream& rng);

// lambda refresh from its GIG conditional.
double draw_global_scale(const Eigen::VectorXd& alpha, const Eigen::VectorXd& phi,
                         double a, RngStream& rng);

// phi refresh: normalized independent GIG draws.
Eigen::VectorXd draw_phi(const Eigen::VectorXd& alpha, double a, RngStream& rng);

}  // namespace tvpsv

#endif
