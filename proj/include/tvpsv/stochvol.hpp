#ifndef TVPSV_STOCHVOL_HPP
#define TVPSV_STOCHVOL_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "tvpsv/rng.hpp"

namespace tvpsv {

// AR(1) log-variance parameters:
//   h_t = mu + rho (h_{t-1} - mu) + eta_t,  eta_t ~ N(0, sigma2),
// with h_0 drawn from the stationary law N(mu, sigma2 / (1 - rho^2)).
struct SvParams {
  double mu = 0.0;
  double rho = 0.9;
  double sigma2 = 0.1;
};

struct SvPriors {
  double mu_mean = 0.0;
  double mu_var = 100.0;
  // prior on (rho + 1) / 2
  double rho_beta_a = 25.0;
  double rho_beta_b = 5.0;
  // gamma rate for sigma2; the shape is pinned at 1/2, which is what lets the
  // interweaved scale step treat +/- sigma as standard normal
  double sigma2_rate = 0.5;
};

// Latent log-variance path h_0..h_T (length T+1), mixture indicators for
// t = 1..T, and the AR parameters.
struct SvState {
  Eigen::VectorXd h;
  std::vector<int> indicators;
  SvParams params;
};

struct SvDiag {
  bool rho_accepted = false;
};

// Ten-component normal mixture matched to the log chi-square(1) law.
struct LogChisqMixture {
  std::array<double, 10> weight;
  std::array<double, 10> mean;
  std::array<double, 10> var;  // component variances
};

const LogChisqMixture& logchisq_mixture();

// One full refresh of the volatility block given residuals that are already
// standardized by any observation scale mixing: indicators, the h path as a
// Gaussian tridiagonal system, sigma2, an MH move on (mu, rho) through the
// regression parameterization, then a reparameterized redraw of (mu, sigma)
// against the standardized path. T must be at least 1.
SvDiag draw_sv_block(const Eigen::VectorXd& scaled_resid, SvState& state,
                     const SvPriors& priors, RngStream& rng);

// Simulate h_{T+1} given h_T.
double sv_forecast(double h_last, const SvParams& params, RngStream& rng);

// Pieces exposed for direct verification.
void draw_indicators(const Eigen::VectorXd& y_star, const Eigen::VectorXd& h,
                     std::vector<int>& indicators, RngStream& rng);
void draw_h(const Eigen::VectorXd& y_star, const std::vector<int>& indicators,
            const SvParams& params, Eigen::VectorXd& h, RngStream& rng);
Eigen::VectorXd h_posterior_mean(const Eigen::VectorXd& y_star,
                                 const std::vector<int>& indicators,
                                 const SvParams& params);

}  // namespace tvpsv

#endif
