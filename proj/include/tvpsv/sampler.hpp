#ifndef TVPSV_SAMPLER_HPP
#define TVPSV_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tvpsv/heavy_tails.hpp"
#include "tvpsv/model.hpp"
#include "tvpsv/rng.hpp"
#include "tvpsv/shrinkage.hpp"
#include "tvpsv/stochvol.hpp"

namespace tvpsv {

struct PriorConfig {
  // Dirichlet-Laplace intensity; nonpositive means 1 / dim(alpha)
  double dl_a = 0.0;
  // static coefficient prior variance when the shrinkage prior is off
  double fixed_alpha_var = 100.0;
  SvPriors sv;
  DofPrior dof;
};

struct SamplerConfig {
  int n_iter = 30000;
  int n_burn = 15000;
  int thin = 1;
  std::uint64_t seed = 1;
  PriorConfig priors;
};

// Everything one Gibbs sweep reads and writes. alpha stacks the static
// coefficients first and the state loading scales second; b, xi and kappa
// are empty unless coefficients are time varying. Disabled mixing blocks
// stay pinned at their degenerate values (tau = xi = 1, dof infinite).
struct ChainState {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd b;
  DlState dl;
  SvState sv;
  Eigen::VectorXd tau;
  Eigen::MatrixXd xi;
  double nu = 0.0;
  Eigen::VectorXd kappa;
};

struct SweepDiag {
  bool rho_accepted = false;
  bool nu_accepted = false;
  int kappa_accepted = 0;
};

ChainState init_chain(const ModelData& data, const ModelFlags& flags,
                      const PriorConfig& priors);

// Selection mask for gibbs_sweep, used by joint-distribution tests that
// exercise one update at a time. Production callers leave the default.
enum SweepBlocks : unsigned {
  kBlockStatePath = 1u << 0,
  kBlockAlpha = 1u << 1,
  kBlockShrinkage = 1u << 2,
  kBlockObsScales = 1u << 3,
  kBlockStateScales = 1u << 4,
  kBlockObsDof = 1u << 5,
  kBlockStateDof = 1u << 6,
  kBlockVolatility = 1u << 7,
  kAllBlocks = ~0u,
};

// One full pass over the blocks in a fixed order: coefficient paths, static
// coefficients, shrinkage scales, observation scales, state scales, degrees
// of freedom, then the volatility block. Blocks whose feature flag is off are
// skipped entirely and consume no randomness.
SweepDiag gibbs_sweep(ChainState& state, const ModelData& data, const ModelFlags& flags,
                      const PriorConfig& priors, RngStream& rng,
                      unsigned blocks = kAllBlocks);

// Retained posterior draws of everything the predictive and the reports
// need, plus mixing diagnostics.
struct DrawStore {
  std::string model_id;
  ModelFlags flags;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  int t_obs_count = 0;  // fitted sample length
  int k_design = 0;
  int k_tvp = 0;
  int n_iter = 0;
  int n_burn = 0;
  int thin = 0;

  Eigen::MatrixXd alpha;      // draws x (k_design + k_tvp)
  Eigen::MatrixXd b_last;     // draws x k_tvp
  Eigen::VectorXd h_last;     // draws
  Eigen::VectorXd sv_mu;
  Eigen::VectorXd sv_rho;
  Eigen::VectorXd sv_sigma2;
  Eigen::VectorXd nu;         // infinite entries when tails are gaussian
  Eigen::MatrixXd kappa;      // draws x k_tvp
  Eigen::VectorXd lambda;     // global shrinkage scale, 0 when off

  double accept_rho = 0.0;
  double accept_nu = 0.0;
  double accept_kappa = 0.0;
  std::vector<std::pair<std::string, double>> ess;

  int draws() const { return static_cast<int>(h_last.size()); }
};

// Run a full chain on the given data. The provided stream drives the whole
// run, so reusing the stream afterwards (for the predictive simulation)
// stays reproducible.
DrawStore run_chain(const ModelData& data, const ModelSpec& spec,
                    const SamplerConfig& cfg, RngStream& rng);

// Stable fingerprint of the model and sampler settings, kept with persisted
// draws so a reload against a different configuration is detectable.
std::uint64_t config_fingerprint(const ModelSpec& spec, const SamplerConfig& cfg);

}  // namespace tvpsv

#endif
