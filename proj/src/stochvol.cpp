#include "tvpsv/stochvol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tvpsv/distributions.hpp"
#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

void check_params(const SvParams& p) {
  if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2)) {
    throw std::invalid_argument("stochvol: sigma2 must be positive");
  }
  if (!(p.rho > -1.0 && p.rho < 1.0)) {
    throw std::invalid_argument("stochvol: rho must lie in (-1, 1)");
  }
  if (!std::isfinite(p.mu)) throw std::invalid_argument("stochvol: mu must be finite");
}

// Solve the symmetric tridiagonal system Omega x = c with constant
// off-diagonal, returning the mean, and optionally add a N(0, Omega^{-1})
// draw on top. diag and c have length n; off couples i and i+1.
Eigen::VectorXd tridiag_gaussian(const Eigen::VectorXd& diag, double off,
                                 const Eigen::VectorXd& c, RngStream* rng) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd ell(n), sub(n);
  ell(0) = std::sqrt(diag(0));
  sub(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    sub(i) = off / ell(i - 1);
    const double d = diag(i) - sub(i) * sub(i);
    if (!(d > 0.0)) {
      throw numerical_error("stochvol: tridiagonal factorization failed at index " +
                            std::to_string(i));
    }
    ell(i) = std::sqrt(d);
  }
  Eigen::VectorXd a(n);
  a(0) = c(0) / ell(0);
  for (Eigen::Index i = 1; i < n; ++i) a(i) = (c(i) - sub(i) * a(i - 1)) / ell(i);
  Eigen::VectorXd x(n);
  x(n - 1) = a(n - 1);
  if (rng != nullptr) x(n - 1) += rng->normal();
  x(n - 1) /= ell(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    double v = a(i);
    if (rng != nullptr) v += rng->normal();
    x(i) = (v - sub(i + 1) * x(i + 1)) / ell(i);
  }
  return x;
}

void build_h_system(const Eigen::VectorXd& y_star, const std::vector<int>& ind,
                    const SvParams& p, Eigen::VectorXd& diag, double& off,
                    Eigen::VectorXd& c) {
  const LogChisqMixture& mix = logchisq_mixture();
  const Eigen::Index T = y_star.size();
  const double is2 = 1.0 / p.sigma2;
  const double gamma = p.mu * (1.0 - p.rho);
  diag.resize(T + 1);
  c.resize(T + 1);
  off = -p.rho * is2;
  diag(0) = is2;
  c(0) = gamma * is2;
  for (Eigen::Index t = 1; t <= T; ++t) {
    const int r = ind[t - 1];
    const double iv = 1.0 / mix.var[r];
    diag(t) = is2 + 1.0 / mix.var[r];
    if (t < T) diag(t) += p.rho * p.rho * is2;
    c(t) = (y_star(t - 1) - mix.mean[r]) * iv;
    c(t) += (t < T) ? gamma * (1.0 - p.rho) * is2 : gamma * is2;
  }
}

double sv_sse(const Eigen::VectorXd& h, double mu, double rho) {
  const Eigen::Index T = h.size() - 1;
  double sse = (1.0 - rho * rho) * (h(0) - mu) * (h(0) - mu);
  for (Eigen::Index t = 1; t <= T; ++t) {
    const double e = h(t) - mu - rho * (h(t - 1) - mu);
    sse += e * e;
  }
  return sse;
}

double log_rho_prior(double rho, const SvPriors& pr) {
  // Beta(a, b) on (rho + 1) / 2, written directly in rho
  return (pr.rho_beta_a - 1.0) * std::log(0.5 * (1.0 + rho)) +
         (pr.rho_beta_b - 1.0) * std::log(0.5 * (1.0 - rho)) -
         log_beta(pr.rho_beta_a, pr.rho_beta_b) - std::log(2.0);
}

// Draw from N(mean, prec^{-1}) for a 2x2 precision matrix.
Eigen::Vector2d bivariate_draw(const Eigen::Vector2d& mean, const Eigen::Matrix2d& prec,
                               RngStream& rng) {
  Eigen::LLT<Eigen::Matrix2d> llt(prec);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("stochvol: bivariate precision not positive definite");
  }
  Eigen::Vector2d z(rng.normal(), rng.normal());
  return mean + llt.matrixU().solve(z);
}

}  // namespace

const LogChisqMixture& logchisq_mixture() {
  static const LogChisqMixture mix = {
      {0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591,
       0.01575, 0.00115},
      {1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246,
       -8.68384, -14.65000},
      {0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498,
       4.16591, 7.33342}};
  return mix;
}

void draw_indicators(const Eigen::VectorXd& y_star, const Eigen::VectorXd& h,
                     std::vector<int>& indicators, RngStream& rng) {
  const LogChisqMixture& mix = logchisq_mixture();
  const Eigen::Index T = y_star.size();
  if (h.size() != T + 1) throw std::invalid_argument("stochvol: h must have length T + 1");
  indicators.resize(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    std::array<double, 10> logp;
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < 10; ++r) {
      const double d = y_star(t) - h(t + 1) - mix.mean[r];
      logp[r] = std::log(mix.weight[r]) - 0.5 * std::log(mix.var[r]) -
                0.5 * d * d / mix.var[r];
      best = std::max(best, logp[r]);
    }
    double total = 0.0;
    std::array<double, 10> prob;
    for (int r = 0; r < 10; ++r) {
      prob[r] = std::exp(logp[r] - best);
      total += prob[r];
    }
    const double u = rng.uniform() * total;
    double cum = 0.0;
    int pick = 9;
    for (int r = 0; r < 10; ++r) {
      cum += prob[r];
      if (u <= cum) {
        pick = r;
        break;
      }
    }
    indicators[t] = pick;
  }
}

void draw_h(const Eigen::VectorXd& y_star, const std::vector<int>& indicators,
            const SvParams& params, Eigen::VectorXd& h, RngStream& rng) {
  check_params(params);
  Eigen::VectorXd diag, c;
  double off;
  build_h_system(y_star, indicators, params, diag, off, c);
  h = tridiag_gaussian(diag, off, c, &rng);
}

Eigen::VectorXd h_posterior_mean(const Eigen::VectorXd& y_star,
                                 const std::vector<int>& indicators,
                                 const SvParams& params) {
  check_params(params);
  Eigen::VectorXd diag, c;
  double off;
  build_h_system(y_star, indicators, params, diag, off, c);
  return tridiag_gaussian(diag, off, c, nullptr);
}

SvDiag draw_sv_block(const Eigen::VectorXd& scaled_resid, SvState& state,
                     const SvPriors& priors, RngStream& rng) {
  const Eigen::Index T = scaled_resid.size();
  if (T < 1) throw std::invalid_argument("stochvol: need at least one residual");
  if (state.h.size() != T + 1) {
    throw std::invalid_argument("stochvol: state path length must be T + 1");
  }
  check_params(state.params);
  SvDiag diag_out;

  Eigen::VectorXd y_star(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    y_star(t) = std::log(scaled_resid(t) * scaled_resid(t) + 1e-8);
  }

  draw_indicators(y_star, state.h, state.indicators, rng);
  draw_h(y_star, state.indicators, state.params, state.h, rng);

  // scale: the T + 1 innovations (stationary start included) give a GIG
  // conditional under the gamma(1/2, rate) prior
  {
    const double sse = sv_sse(state.h, state.params.mu, state.params.rho);
    if (!(sse > 0.0)) throw numerical_error("stochvol: degenerate innovation sum");
    state.params.sigma2 = draw_gig(
        {-0.5 * static_cast<double>(T), 2.0 * priors.sigma2_rate, sse}, rng);
  }

  // level and persistence: propose from the Gaussian regression of h_t on
  // (1, h_{t-1}); the transition likelihood cancels against the proposal, so
  // the ratio involves only the stationary start, the priors, and the
  // change of variables from the regression intercept to mu
  {
    const double s2 = state.params.sigma2;
    double sw = 0.0, sww = 0.0, swy = 0.0, sy = 0.0;
    for (Eigen::Index t = 1; t <= T; ++t) {
      const double w = state.h(t - 1);
      sw += w;
      sww += w * w;
      swy += w * state.h(t);
      sy += state.h(t);
    }
    Eigen::Matrix2d xtx;
    xtx << static_cast<double>(T), sw, sw, sww;
    const double det = xtx.determinant();
    if (det > 1e-12 * (1.0 + sww)) {
      Eigen::Vector2d xty(sy, swy);
      const Eigen::Vector2d betahat = xtx.inverse() * xty;
      const Eigen::Vector2d prop = bivariate_draw(betahat, xtx / s2, rng);
      const double rho_new = prop(1);
      if (rho_new > -1.0 && rho_new < 1.0) {
        const double mu_new = prop(0) / (1.0 - rho_new);
        const double mu_cur = state.params.mu;
        const double rho_cur = state.params.rho;
        const auto target = [&](double mu, double rho) {
          return gaussian_logpdf(state.h(0), mu, s2 / (1.0 - rho * rho)) +
                 gaussian_logpdf(mu, priors.mu_mean, priors.mu_var) +
                 log_rho_prior(rho, priors) - std::log(1.0 - rho);
        };
        const double logr = target(mu_new, rho_new) - target(mu_cur, rho_cur);
        if (std::log(rng.uniform()) < logr) {
          state.params.mu = mu_new;
          state.params.rho = rho_new;
          diag_out.rho_accepted = true;
        }
      }
    }
  }

  // interweaved redraw of (mu, sigma) holding the standardized path fixed;
  // the prior gamma(1/2, rate) on sigma2 is exactly +/- sigma ~ N(0, 1/(2 rate))
  {
    const LogChisqMixture& mix = logchisq_mixture();
    const double sigma = std::sqrt(state.params.sigma2);
    const Eigen::VectorXd htilde =
        ((state.h.array() - state.params.mu) / sigma).matrix();
    Eigen::Matrix2d prec;
    prec << 1.0 / priors.mu_var, 0.0, 0.0, 2.0 * priors.sigma2_rate;
    Eigen::Vector2d rhs(priors.mu_mean / priors.mu_var, 0.0);
    for (Eigen::Index t = 1; t <= T; ++t) {
      const int r = state.indicators[t - 1];
      const double iv = 1.0 / mix.var[r];
      const double resp = y_star(t - 1) - mix.mean[r];
      const double ht = htilde(t);
      prec(0, 0) += iv;
      prec(0, 1) += ht * iv;
      prec(1, 1) += ht * ht * iv;
      rhs(0) += resp * iv;
      rhs(1) += ht * resp * iv;
    }
    prec(1, 0) = prec(0, 1);
    Eigen::LLT<Eigen::Matrix2d> llt(prec);
    if (llt.info() != Eigen::Success) {
      throw numerical_error("stochvol: interweaving step factorization failed");
    }
    const Eigen::Vector2d mean = llt.solve(rhs);
    const Eigen::Vector2d draw = bivariate_draw(mean, prec, rng);
    const double sigma_new = draw(1);
    if (sigma_new * sigma_new == 0.0) {
      throw numerical_error("stochvol: interweaving step collapsed the scale");
    }
    state.params.mu = draw(0);
    state.params.sigma2 = sigma_new * sigma_new;
    state.h = (state.params.mu + sigma_new * htilde.array()).matrix();
  }

  return diag_out;
}

double sv_forecast(double h_last, const SvParams& params, RngStream& rng) {
  check_params(params);
  return params.mu + params.rho * (h_last - params.mu) +
         std::sqrt(params.sigma2) * rng.normal();
}

}  // namespace tvpsv
