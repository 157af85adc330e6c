#include "tvpsv/trading.hpp"

#include <cmath>
#include <stdexcept>

#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

constexpr double kMonthsPerYear = 12.0;

void check_thresholds(double lower, double upper) {
  if (!(lower <= upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw std::invalid_argument("trading: thresholds must be finite with lower <= upper");
  }
}

double position_return(Position p, double realized) {
  switch (p) {
    case Position::Long:
      return realized;
    case Position::Short:
      return -realized;
    case Position::Bonds:
      return 0.0;
  }
  return 0.0;
}

struct MonthlyStats {
  double mean = 0.0;
  double sd = 0.0;
};

// returns false when the dispersion is exactly zero
bool monthly_stats(const Eigen::VectorXd& returns, MonthlyStats& out) {
  const Eigen::Index n = returns.size();
  if (n < 2) throw std::invalid_argument("trading: need at least two months");
  out.mean = returns.mean();
  const double ss = (returns.array() - out.mean).square().sum();
  if (!(ss > 0.0)) return false;
  out.sd = std::sqrt(ss / static_cast<double>(n - 1));
  return true;
}

StrategyPerf annualize(const MonthlyStats& m, int n) {
  StrategyPerf perf;
  perf.mean_annual = kMonthsPerYear * m.mean;
  perf.sd_annual = std::sqrt(kMonthsPerYear) * m.sd;
  perf.sharpe = std::sqrt(kMonthsPerYear) * m.mean / m.sd;
  perf.n_obs = n;
  return perf;
}

}  // namespace

Position trade_signal(double predicted, double lower, double upper) {
  check_thresholds(lower, upper);
  if (predicted > upper) return Position::Long;
  if (predicted < lower) return Position::Short;
  return Position::Bonds;
}

StrategyPerf strategy_performance(const std::vector<Position>& positions,
                                  const Eigen::VectorXd& realized) {
  if (static_cast<Eigen::Index>(positions.size()) != realized.size()) {
    throw std::invalid_argument("trading: positions and returns must align");
  }
  Eigen::VectorXd r(realized.size());
  for (Eigen::Index i = 0; i < realized.size(); ++i) {
    r(i) = position_return(positions[static_cast<std::size_t>(i)], realized(i));
  }
  MonthlyStats m;
  if (!monthly_stats(r, m)) {
    throw numerical_error("trading: strategy returns have zero dispersion, ratio undefined");
  }
  return annualize(m, static_cast<int>(realized.size()));
}

PosteriorPerf posterior_performance(const Eigen::MatrixXd& locations,
                                    const Eigen::VectorXd& realized, double lower,
                                    double upper, const std::vector<int>& subset) {
  check_thresholds(lower, upper);
  if (locations.rows() != realized.size()) {
    throw std::invalid_argument("trading: locations and returns must align");
  }
  if (subset.size() < 2) throw std::invalid_argument("trading: need at least two months");
  for (int idx : subset) {
    if (idx < 0 || idx >= locations.rows()) {
      throw std::invalid_argument("trading: subset index out of range");
    }
  }
  const Eigen::Index m_total = locations.cols();
  if (m_total < 1) throw std::invalid_argument("trading: no draws");

  PosteriorPerf out;
  double sum_mean = 0.0, sum_sd = 0.0, sum_sharpe = 0.0;
  Eigen::VectorXd r(static_cast<Eigen::Index>(subset.size()));
  for (Eigen::Index m = 0; m < m_total; ++m) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const int idx = subset[i];
      const Position p = trade_signal(locations(idx, m), lower, upper);
      r(static_cast<Eigen::Index>(i)) = position_return(p, realized(idx));
    }
    MonthlyStats stats;
    if (!monthly_stats(r, stats)) {
      ++out.n_draws_excluded;
      continue;
    }
    const StrategyPerf perf = annualize(stats, static_cast<int>(subset.size()));
    sum_mean += perf.mean_annual;
    sum_sd += perf.sd_annual;
    sum_sharpe += perf.sharpe;
    ++out.n_draws_used;
  }
  if (out.n_draws_used == 0) {
    throw numerical_error("trading: every draw produced zero-dispersion returns");
  }
  out.mean_annual = sum_mean / out.n_draws_used;
  out.sd_annual = sum_sd / out.n_draws_used;
  out.sharpe = sum_sharpe / out.n_draws_used;
  return out;
}

StrategyPerf point_performance(const Eigen::VectorXd& point_forecasts,
                               const Eigen::VectorXd& realized, double lower,
                               double upper, const std::vector<int>& subset) {
  check_thresholds(lower, upper);
  if (point_forecasts.size() != realized.size()) {
    throw std::invalid_argument("trading: forecasts and returns must align");
  }
  if (subset.size() < 2) throw std::invalid_argument("trading: need at least two months");
  std::vector<Position> pos;
  Eigen::VectorXd r(static_cast<Eigen::Index>(subset.size()));
  pos.reserve(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const int idx = subset[i];
    if (idx < 0 || idx >= point_forecasts.size()) {
      throw std::invalid_argument("trading: subset index out of range");
    }
    pos.push_back(trade_signal(point_forecasts(idx), lower, upper));
    r(static_cast<Eigen::Index>(i)) = realized(idx);
  }
  return strategy_performance(pos, r);
}

}  // namespace tvpsv
