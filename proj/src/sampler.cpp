#include "tvpsv/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "tvpsv/diagnostics.hpp"
#include "tvpsv/distributions.hpp"
#include "tvpsv/errors.hpp"
#include "tvpsv/state_space.hpp"

namespace tvpsv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// floor for the composed shrinkage prior variance; far below anything the
// likelihood can distinguish but keeps the precision finite
constexpr double kPriorVarFloor = 1e-280;

double sample_log_var(const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  if (n < 2) return std::log(1e-4);
  const double mean = y.mean();
  const double var = (y.array() - mean).square().sum() / static_cast<double>(n - 1);
  return std::log(std::max(var, 1e-4));
}

Eigen::VectorXd residuals(const ChainState& st, const ModelData& data, int kd, int kt) {
  Eigen::VectorXd r = data.y;
  if (kd > 0) r -= data.X * st.alpha.head(kd);
  if (kt > 0) {
    const Eigen::VectorXd sqrt_v = st.alpha.tail(kt);
    r -= data.X.cwiseProduct(st.b) * sqrt_v;
  }
  return r;
}

template <typename Fn>
auto run_block(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const numerical_error& e) {
    throw numerical_error(std::string(name) + " block: " + e.what());
  }
}

void append_double(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g|", v);
  s += buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

ChainState init_chain(const ModelData& data, const ModelFlags& flags,
                      const PriorConfig& priors) {
  const Eigen::Index T = data.y.size();
  const Eigen::Index kd = data.X.cols();
  const Eigen::Index kt = flags.tvp ? kd : 0;
  const Eigen::Index a_dim = kd + kt;
  if (T < 1) throw std::invalid_argument("init_chain: empty sample");

  ChainState st;
  st.alpha = Eigen::VectorXd::Zero(a_dim);
  st.b = Eigen::MatrixXd::Zero(T, kt);
  st.tau = Eigen::VectorXd::Ones(T);
  st.xi = Eigen::MatrixXd::Ones(T, kt);
  st.nu = flags.t_obs ? 10.0 : kInf;
  st.kappa = Eigen::VectorXd::Constant(kt, flags.t_state ? 10.0 : kInf);

  st.dl.psi = Eigen::VectorXd::Ones(a_dim);
  st.dl.phi = Eigen::VectorXd::Constant(
      a_dim, a_dim > 0 ? 1.0 / static_cast<double>(a_dim) : 0.0);
  st.dl.lambda = 1.0;
  st.dl.a = priors.dl_a > 0.0 ? priors.dl_a
                              : (a_dim > 0 ? 1.0 / static_cast<double>(a_dim) : 0.5);

  const double h0 = sample_log_var(data.y);
  st.sv.h = Eigen::VectorXd::Constant(T + 1, h0);
  st.sv.indicators.assign(T, 4);
  st.sv.params.mu = h0;
  st.sv.params.rho = 0.9;
  st.sv.params.sigma2 = 0.1;
  return st;
}

SweepDiag gibbs_sweep(ChainState& st, const ModelData& data, const ModelFlags& flags,
                      const PriorConfig& priors, RngStream& rng,
                      unsigned blocks) {
  const Eigen::Index T = data.y.size();
  const Eigen::Index kd = data.X.cols();
  const Eigen::Index kt = flags.tvp ? kd : 0;
  const Eigen::Index a_dim = kd + kt;
  SweepDiag diag;

  const Eigen::VectorXd h_tail = st.sv.h.tail(T);
  const Eigen::VectorXd obs_var =
      (st.tau.array() * h_tail.array().exp()).matrix();

  if (kt > 0 && (blocks & kBlockStatePath)) {
    run_block("state path", [&] {
      SsmInputs in;
      in.obs = data.y - data.X * st.alpha.head(kd);
      in.loadings = data.X * st.alpha.tail(kt).asDiagonal();
      in.obs_var = obs_var;
      in.state_var = st.xi;
      st.b = ffbs_draw(in, rng);
      return 0;
    });
  }

  if (a_dim > 0 && (blocks & kBlockAlpha)) {
    run_block("static coefficients", [&] {
      WeightedRegression reg;
      reg.response = data.y;
      reg.design.resize(T, a_dim);
      if (kd > 0) reg.design.leftCols(kd) = data.X;
      if (kt > 0) reg.design.rightCols(kt) = data.X.cwiseProduct(st.b);
      reg.noise_var = obs_var;
      Eigen::VectorXd prior_var(a_dim);
      if (flags.dl) {
        prior_var = (st.dl.psi.array() * st.dl.phi.array().square() *
                     (st.dl.lambda * st.dl.lambda))
                        .cwiseMax(kPriorVarFloor)
                        .matrix();
      } else {
        prior_var.setConstant(priors.fixed_alpha_var);
      }
      st.alpha = draw_alpha(reg, prior_var, rng);
      return 0;
    });
  }

  if (flags.dl && a_dim > 0 && (blocks & kBlockShrinkage)) {
    run_block("shrinkage scales", [&] {
      // exact joint draw of (phi, lambda, psi) | alpha through its
      // factorization: phi's conditional marginalizes the other two scales,
      // lambda's marginalizes psi, psi closes the chain. Any other order
      // leaves a stale scale behind and the sweep loses invariance.
      st.dl.phi = draw_phi(st.alpha, st.dl.a, rng);
      st.dl.lambda = draw_global_scale(st.alpha, st.dl.phi, st.dl.a, rng);
      st.dl.psi = draw_local_scales(st.alpha, st.dl.phi, st.dl.lambda, rng);
      return 0;
    });
  }

  const Eigen::VectorXd resid = residuals(st, data, kd, kt);

  if (flags.t_obs && (blocks & kBlockObsScales)) {
    run_block("observation scales", [&] {
      st.tau = draw_obs_scales(resid, h_tail, st.nu, rng);
      return 0;
    });
  }

  if (flags.t_state && kt > 0 && (blocks & kBlockStateScales)) {
    run_block("state scales", [&] {
      for (Eigen::Index j = 0; j < kt; ++j) {
        Eigen::VectorXd inc(T);
        inc(0) = st.b(0, j);
        for (Eigen::Index t = 1; t < T; ++t) inc(t) = st.b(t, j) - st.b(t - 1, j);
        st.xi.col(j) = draw_state_scales(inc, st.kappa(j), rng);
      }
      return 0;
    });
  }

  if (flags.t_obs && (blocks & kBlockObsDof)) {
    run_block("observation dof", [&] {
      const DofUpdate u = update_dof(st.tau, st.nu, priors.dof, rng);
      st.nu = u.value;
      diag.nu_accepted = u.accepted;
      return 0;
    });
  }

  if (flags.t_state && kt > 0 && (blocks & kBlockStateDof)) {
    run_block("state dof", [&] {
      for (Eigen::Index j = 0; j < kt; ++j) {
        const DofUpdate u = update_dof(st.xi.col(j), st.kappa(j), priors.dof, rng);
        st.kappa(j) = u.value;
        if (u.accepted) ++diag.kappa_accepted;
      }
      return 0;
    });
  }

  if (blocks & kBlockVolatility)
  run_block("volatility", [&] {
    const Eigen::VectorXd scaled =
        (resid.array() / st.tau.array().sqrt()).matrix();
    const SvDiag sd = draw_sv_block(scaled, st.sv, priors.sv, rng);
    diag.rho_accepted = sd.rho_accepted;
    return 0;
  });

  return diag;
}

std::uint64_t config_fingerprint(const ModelSpec& spec, const SamplerConfig& cfg) {
  std::string s = spec.id + "|";
  s += std::to_string(static_cast<int>(spec.design)) + "|";
  s += std::to_string(spec.flags.tvp) + std::to_string(spec.flags.t_obs) +
       std::to_string(spec.flags.t_state) + std::to_string(spec.flags.dl) + "|";
  s += std::to_string(cfg.n_iter) + "|" + std::to_string(cfg.n_burn) + "|" +
       std::to_string(cfg.thin) + "|" + std::to_string(cfg.seed) + "|";
  append_double(s, cfg.priors.dl_a);
  append_double(s, cfg.priors.fixed_alpha_var);
  append_double(s, cfg.priors.sv.mu_mean);
  append_double(s, cfg.priors.sv.mu_var);
  append_double(s, cfg.priors.sv.rho_beta_a);
  append_double(s, cfg.priors.sv.rho_beta_b);
  append_double(s, cfg.priors.sv.sigma2_rate);
  append_double(s, cfg.priors.dof.shape);
  append_double(s, cfg.priors.dof.rate);
  append_double(s, cfg.priors.dof.lower);
  append_double(s, cfg.priors.dof.upper);
  return fnv1a64(s);
}

DrawStore run_chain(const ModelData& data, const ModelSpec& spec,
                    const SamplerConfig& cfg, RngStream& rng) {
  if (cfg.n_iter < 1 || cfg.n_burn < 0 || cfg.n_burn >= cfg.n_iter || cfg.thin < 1) {
    throw std::invalid_argument("run_chain: bad iteration plan");
  }
  const int m_total = (cfg.n_iter - cfg.n_burn) / cfg.thin;
  if (m_total < 1) throw std::invalid_argument("run_chain: no retained draws");

  const Eigen::Index T = data.y.size();
  const Eigen::Index kd = data.X.cols();
  const Eigen::Index kt = spec.flags.tvp ? kd : 0;
  const Eigen::Index a_dim = kd + kt;

  ChainState st = init_chain(data, spec.flags, cfg.priors);

  DrawStore store;
  store.model_id = spec.id;
  store.flags = spec.flags;
  store.seed = cfg.seed;
  store.config_hash = config_fingerprint(spec, cfg);
  store.t_obs_count = static_cast<int>(T);
  store.k_design = static_cast<int>(kd);
  store.k_tvp = static_cast<int>(kt);
  store.n_iter = cfg.n_iter;
  store.n_burn = cfg.n_burn;
  store.thin = cfg.thin;
  store.alpha.resize(m_total, a_dim);
  store.b_last.resize(m_total, kt);
  store.h_last.resize(m_total);
  store.sv_mu.resize(m_total);
  store.sv_rho.resize(m_total);
  store.sv_sigma2.resize(m_total);
  store.nu.resize(m_total);
  store.kappa.resize(m_total, kt);
  store.lambda.resize(m_total);

  int m = 0;
  long post_iters = 0, rho_acc = 0, nu_acc = 0, kappa_acc = 0;
  for (int it = 1; it <= cfg.n_iter; ++it) {
    SweepDiag diag;
    try {
      diag = gibbs_sweep(st, data, spec.flags, cfg.priors, rng);
    } catch (const numerical_error& e) {
      throw numerical_error("iteration " + std::to_string(it) + ", " + e.what());
    }
    if (it > cfg.n_burn) {
      ++post_iters;
      rho_acc += diag.rho_accepted ? 1 : 0;
      nu_acc += diag.nu_accepted ? 1 : 0;
      kappa_acc += diag.kappa_accepted;
      if ((it - cfg.n_burn) % cfg.thin == 0 && m < m_total) {
        store.alpha.row(m) = st.alpha;
        if (kt > 0) store.b_last.row(m) = st.b.row(T - 1);
        store.h_last(m) = st.sv.h(T);
        store.sv_mu(m) = st.sv.params.mu;
        store.sv_rho(m) = st.sv.params.rho;
        store.sv_sigma2(m) = st.sv.params.sigma2;
        store.nu(m) = st.nu;
        if (kt > 0) store.kappa.row(m) = st.kappa;
        store.lambda(m) = spec.flags.dl ? st.dl.lambda : 0.0;
        ++m;
      }
    }
  }

  store.accept_rho = post_iters > 0 ? static_cast<double>(rho_acc) / post_iters : 0.0;
  store.accept_nu = post_iters > 0 ? static_cast<double>(nu_acc) / post_iters : 0.0;
  store.accept_kappa =
      (post_iters > 0 && kt > 0)
          ? static_cast<double>(kappa_acc) / (post_iters * static_cast<double>(kt))
          : 0.0;

  for (Eigen::Index j = 0; j < kd; ++j) {
    store.ess.emplace_back("coef_" + std::to_string(j), ess(store.alpha.col(j)));
  }
  for (Eigen::Index j = 0; j < kt; ++j) {
    store.ess.emplace_back("scale_" + std::to_string(j), ess(store.alpha.col(kd + j)));
  }
  store.ess.emplace_back("sv_mu", ess(store.sv_mu));
  store.ess.emplace_back("sv_rho", ess(store.sv_rho));
  store.ess.emplace_back("sv_sigma2", ess(store.sv_sigma2));
  if (spec.flags.t_obs) store.ess.emplace_back("nu", ess(store.nu));
  if (spec.flags.t_state) {
    for (Eigen::Index j = 0; j < kt; ++j) {
      store.ess.emplace_back("kappa_" + std::to_string(j), ess(store.kappa.col(j)));
    }
  }
  if (spec.flags.dl) store.ess.emplace_back("lambda", ess(store.lambda));
  return store;
}

}  // namespace tvpsv
