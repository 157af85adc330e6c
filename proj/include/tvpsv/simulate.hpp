#ifndef TVPSV_SIMULATE_HPP
#define TVPSV_SIMULATE_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "tvpsv/model.hpp"
#include "tvpsv/stochvol.hpp"

namespace tvpsv {

// Ground truth generator for the time-varying specification; the flags pick
// which mixing layers are active. Predictors are independent standard
// normals.
struct DgpParams {
  int T = 400;
  int K = 3;
  ModelFlags flags{true, true, true, true};
  Eigen::VectorXd beta0;    // static coefficients, length K
  Eigen::VectorXd sqrt_v;   // loading scales, length K
  double nu = 5.0;
  double kappa = 4.0;
  SvParams sv{-1.0, 0.9, 0.05};
  int first_month = 197001;
};

struct DgpTruth {
  Dataset data;
  DgpParams params;
  Eigen::MatrixXd beta_path;  // T x K realized coefficients
  Eigen::VectorXd h;          // T + 1 log variance path
};

DgpTruth simulate_dgp(const DgpParams& params, std::uint64_t seed);

}  // namespace tvpsv

#endif
