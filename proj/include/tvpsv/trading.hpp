#ifndef TVPSV_TRADING_HPP
#define TVPSV_TRADING_HPP

#include <vector>

#include <Eigen/Dense>

namespace tvpsv {

enum class Position { Long, Bonds, Short };

// Threshold rule on the forecast premium: strictly above the upper threshold
// goes long, strictly below the lower goes short, anything else sits in
// bonds (zero excess return).
Position trade_signal(double predicted, double lower, double upper);

struct StrategyPerf {
  double mean_annual = 0.0;
  double sd_annual = 0.0;
  double sharpe = 0.0;
  int n_obs = 0;
};

// Realized excess return of the position path: +y long, -y short, 0 in
// bonds. Monthly mean and standard deviation (n-1 normalization) are
// annualized by 12 and sqrt(12). A dispersion of exactly zero makes the
// ratio undefined and raises numerical_error.
StrategyPerf strategy_performance(const std::vector<Position>& positions,
                                  const Eigen::VectorXd& realized);

struct PosteriorPerf {
  double mean_annual = 0.0;
  double sd_annual = 0.0;
  double sharpe = 0.0;
  int n_draws_used = 0;
  int n_draws_excluded = 0;
};

// Draw-wise evaluation: each retained draw's forecast path (a column of
// locations) generates its own position path and stats, and the stats are
// averaged across draws. Draws with zero return dispersion are excluded and
// counted; all draws degenerate is an error. subset picks the origin rows to
// evaluate (a regime), in order.
PosteriorPerf posterior_performance(const Eigen::MatrixXd& locations,
                                    const Eigen::VectorXd& realized, double lower,
                                    double upper, const std::vector<int>& subset);

// Point-forecast variant of the same strategy.
StrategyPerf point_performance(const Eigen::VectorXd& point_forecasts,
                               const Eigen::VectorXd& realized, double lower,
                               double upper, const std::vector<int>& subset);

}  // namespace tvpsv

#endif
