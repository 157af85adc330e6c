#include "tvpsv/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "tvpsv/distributions.hpp"
#include "tvpsv/rng.hpp"

namespace tvpsv {

DgpTruth simulate_dgp(const DgpParams& params, std::uint64_t seed) {
  const int T = params.T;
  const int K = params.K;
  if (T < 1 || K < 0) throw std::invalid_argument("simulate: bad dimensions");
  if (params.beta0.size() != K || params.sqrt_v.size() != K) {
    throw std::invalid_argument("simulate: coefficient vectors must have length K");
  }
  RngStream rng(seed, 7001);

  DgpTruth truth;
  truth.params = params;
  truth.data.dates.resize(T);
  for (int t = 0; t < T; ++t) truth.data.dates[t] = add_months(params.first_month, t);
  truth.data.recession.assign(T, 0);

  truth.data.X.resize(T, K);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < K; ++j) truth.data.X(t, j) = rng.normal();
  }
  truth.data.predictor_names.resize(K);
  for (int j = 0; j < K; ++j) truth.data.predictor_names[j] = "x" + std::to_string(j + 1);

  truth.h.resize(T + 1);
  truth.h(0) = params.sv.mu +
               std::sqrt(params.sv.sigma2 / (1.0 - params.sv.rho * params.sv.rho)) *
                   rng.normal();
  for (int t = 1; t <= T; ++t) {
    truth.h(t) = params.sv.mu + params.sv.rho * (truth.h(t - 1) - params.sv.mu) +
                 std::sqrt(params.sv.sigma2) * rng.normal();
  }

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(T, K);
  if (params.flags.tvp) {
    for (int j = 0; j < K; ++j) {
      double prev = 0.0;
      for (int t = 0; t < T; ++t) {
        double xi = 1.0;
        if (params.flags.t_state) {
          xi = draw_inverse_gamma(0.5 * params.kappa, 0.5 * params.kappa, rng);
        }
        prev += std::sqrt(xi) * rng.normal();
        b(t, j) = prev;
      }
    }
  }
  truth.beta_path.resize(T, K);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < K; ++j) {
      truth.beta_path(t, j) = params.beta0(j) + params.sqrt_v(j) * b(t, j);
    }
  }

  truth.data.y.resize(T);
  for (int t = 0; t < T; ++t) {
    double tau = 1.0;
    if (params.flags.t_obs) {
      tau = draw_inverse_gamma(0.5 * params.nu, 0.5 * params.nu, rng);
    }
    const double loc = truth.data.X.row(t).dot(truth.beta_path.row(t));
    truth.data.y(t) = loc + std::sqrt(tau) * std::exp(0.5 * truth.h(t + 1)) * rng.normal();
  }
  return truth;
}

}  // namespace tvpsv
