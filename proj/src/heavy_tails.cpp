#include "tvpsv/heavy_tails.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvpsv/distributions.hpp"
#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

double scale_stat(const Eigen::VectorXd& scales) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < scales.size(); ++t) {
    if (!(scales(t) > 0.0)) throw std::invalid_argument("dof update: scales must be positive");
    s += std::log(scales(t)) + 1.0 / scales(t);
  }
  return s;
}

double dof_logdensity_stat(double n, double s, double nu, const DofPrior& prior) {
  return 0.5 * n * nu * std::log(0.5 * nu) - n * std::lgamma(0.5 * nu) -
         0.5 * nu * s + (prior.shape - 1.0) * std::log(nu) - prior.rate * nu;
}

double dof_grad(double n, double s, double nu, const DofPrior& prior) {
  return 0.5 * n * (std::log(0.5 * nu) + 1.0) - 0.5 * n * digamma(0.5 * nu) -
         0.5 * s + (prior.shape - 1.0) / nu - prior.rate;
}

double dof_hess(double n, double nu, const DofPrior& prior) {
  return 0.5 * n / nu - 0.25 * n * trigamma(0.5 * nu) -
         (prior.shape - 1.0) / (nu * nu);
}

}  // namespace

Eigen::VectorXd draw_obs_scales(const Eigen::VectorXd& resid, const Eigen::VectorXd& h,
                                double nu, RngStream& rng) {
  if (resid.size() != h.size()) throw std::invalid_argument("obs scales: dimensions disagree");
  if (!(nu > 0.0)) throw std::invalid_argument("obs scales: nu must be positive");
  Eigen::VectorXd tau(resid.size());
  for (Eigen::Index t = 0; t < resid.size(); ++t) {
    const double z2 = resid(t) * resid(t) * std::exp(-h(t));
    tau(t) = draw_inverse_gamma(0.5 * (nu + 1.0), 0.5 * (nu + z2), rng);
  }
  return tau;
}

Eigen::VectorXd draw_state_scales(const Eigen::VectorXd& increments, double kappa,
                                  RngStream& rng) {
  if (!(kappa > 0.0)) throw std::invalid_argument("state scales: kappa must be positive");
  Eigen::VectorXd xi(increments.size());
  for (Eigen::Index t = 0; t < increments.size(); ++t) {
    const double e2 = increments(t) * increments(t);
    xi(t) = draw_inverse_gamma(0.5 * (kappa + 1.0), 0.5 * (kappa + e2), rng);
  }
  return xi;
}

double dof_logdensity(const Eigen::VectorXd& scales, double nu, const DofPrior& prior) {
  if (nu < prior.lower || nu > prior.upper) {
    return -std::numeric_limits<double>::infinity();
  }
  return dof_logdensity_stat(static_cast<double>(scales.size()), scale_stat(scales), nu,
                             prior);
}

DofUpdate update_dof(const Eigen::VectorXd& scales, double current,
                     const DofPrior& prior, RngStream& rng) {
  if (scales.size() == 0) throw std::invalid_argument("dof update: no scales");
  if (!(current >= prior.lower && current <= prior.upper)) {
    throw std::invalid_argument("dof update: current value outside support");
  }
  const double n = static_cast<double>(scales.size());
  const double s = scale_stat(scales);
  DofUpdate out;
  out.value = current;

  // interior maximizer of the conditional, or the nearer bound when the
  // gradient does not change sign on the support
  double mode;
  const double glo = dof_grad(n, s, prior.lower, prior);
  const double ghi = dof_grad(n, s, prior.upper, prior);
  if (glo <= 0.0) {
    mode = prior.lower;
  } else if (ghi >= 0.0) {
    mode = prior.upper;
  } else {
    double lo = prior.lower, hi = prior.upper;
    double x = current;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double g = dof_grad(n, s, x, prior);
      if (std::abs(g) < 1e-8) {
        converged = true;
        break;
      }
      if (g > 0.0) lo = x; else hi = x;
      const double hess = dof_hess(n, x, prior);
      double next = (hess < 0.0) ? x - g / hess : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      x = next;
      if (hi - lo < 1e-13 * (1.0 + hi)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      out.proposal_ok = false;
      return out;
    }
    mode = x;
  }

  const double hess = dof_hess(n, mode, prior);
  if (!(hess < 0.0) || !std::isfinite(hess)) {
    out.proposal_ok = false;
    return out;
  }
  const double sd = 1.0 / std::sqrt(-hess);

  double prop = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 10000; ++it) {
    const double cand = mode + sd * rng.normal();
    if (cand >= prior.lower && cand <= prior.upper) {
      prop = cand;
      break;
    }
  }
  if (!std::isfinite(prop)) {
    out.proposal_ok = false;
    return out;
  }

  // independence proposal: the truncation normalizer is shared by both
  // directions, so only the normal kernels enter the ratio
  const auto kern = [&](double x) {
    const double d = x - mode;
    return -0.5 * d * d / (sd * sd);
  };
  const double logr = dof_logdensity_stat(n, s, prop, prior) -
                      dof_logdensity_stat(n, s, current, prior) + kern(current) -
                      kern(prop);
  if (std::log(rng.uniform()) < logr) {
    out.value = prop;
    out.accepted = true;
  }
  return out;
}

}  // namespace tvpsv
