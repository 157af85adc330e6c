#include "tvpsv/predictive.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tvpsv/distributions.hpp"
#include "tvpsv/errors.hpp"

namespace tvpsv {

PredictiveDensity one_step_predictive(const DrawStore& store,
                                      const Eigen::VectorXd& x_next, RngStream& rng) {
  const int m_total = store.draws();
  const int kd = store.k_design;
  const int kt = store.k_tvp;
  if (x_next.size() != kd) {
    throw std::invalid_argument("predictive: design row has wrong length");
  }
  PredictiveDensity out;
  out.location.resize(m_total);
  out.scale.resize(m_total);
  out.dof.resize(m_total);
  for (int m = 0; m < m_total; ++m) {
    SvParams sv{store.sv_mu(m), store.sv_rho(m), store.sv_sigma2(m)};
    const double h_next = sv_forecast(store.h_last(m), sv, rng);
    double loc = 0.0;
    if (kd > 0) loc += x_next.dot(store.alpha.row(m).head(kd));
    for (int j = 0; j < kt; ++j) {
      double xi_next = 1.0;
      if (store.flags.t_state) {
        const double kap = store.kappa(m, j);
        xi_next = draw_inverse_gamma(0.5 * kap, 0.5 * kap, rng);
      }
      const double b_next = store.b_last(m, j) + std::sqrt(xi_next) * rng.normal();
      loc += store.alpha(m, kd + j) * b_next * x_next(j);
    }
    out.location(m) = loc;
    out.scale(m) = std::exp(0.5 * h_next);
    out.dof(m) = store.nu(m);
  }
  return out;
}

double log_predictive_score(const PredictiveDensity& pred, double realized) {
  const Eigen::Index m_total = pred.location.size();
  if (m_total == 0) throw std::invalid_argument("predictive: no draws");
  std::vector<double> logs(static_cast<std::size_t>(m_total));
  for (Eigen::Index m = 0; m < m_total; ++m) {
    if (std::isfinite(pred.dof(m))) {
      logs[m] = student_t_logpdf(realized, pred.dof(m), pred.location(m), pred.scale(m));
    } else {
      logs[m] = gaussian_logpdf(realized, pred.location(m),
                                pred.scale(m) * pred.scale(m));
    }
  }
  return log_sum_exp(logs) - std::log(static_cast<double>(m_total));
}

double predictive_mean(const PredictiveDensity& pred) {
  if (pred.location.size() == 0) throw std::invalid_argument("predictive: no draws");
  return pred.location.mean();
}

}  // namespace tvpsv
