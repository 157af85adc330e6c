#ifndef TVPSV_BACKTEST_HPP
#define TVPSV_BACKTEST_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tvpsv/model.hpp"
#include "tvpsv/sampler.hpp"

namespace tvpsv {

// Expanding-window forecast schedule. Estimation always starts at
// sample_start; the first fit ends at initial_end and each later fit extends
// by one month. Every origin forecasts the following month, and the last
// forecast target is the month before final_month.
struct BacktestSchedule {
  int sample_start = 192612;
  int initial_end = 195612;
  int final_month = 201012;

  std::vector<int> origins() const;
};

struct BacktestRecord {
  int origin = 0;
  double realized = 0.0;
  double point = 0.0;
  double lps = 0.0;
  bool recession = false;  // regime of the forecast target month
};

struct BacktestOutput {
  std::string model_id;
  std::vector<BacktestRecord> records;
  // per-draw predictive locations, one row per origin; feeds the draw-wise
  // strategy evaluation
  Eigen::MatrixXd locations;
};

// Refit the model at every origin and score the one-step forecast. Origins
// are independent given (seed, origin index), so worker threads change
// nothing in the output.
BacktestOutput recursive_backtest(const Dataset& data, const ModelSpec& spec,
                                  const BacktestSchedule& sched,
                                  const SamplerConfig& cfg, int threads = 1);

struct RegimeMetrics {
  std::string regime;
  int count = 0;
  double rel_rmse = 0.0;
  double log_bf = 0.0;
};

// Relative accuracy against a benchmark run over the same origins: RMSE
// ratios and cumulative log predictive score differences, overall and split
// by the recession marker. Sums are formed per regime so the full-sample row
// is exactly the merge of the two regime rows.
std::vector<RegimeMetrics> relative_metrics(const BacktestOutput& model,
                                            const BacktestOutput& benchmark);

struct CumulativeSeries {
  std::vector<int> origin;
  std::vector<double> cum_sq_gain;  // benchmark squared error minus model's, summed
  std::vector<double> cum_log_bf;   // model lps minus benchmark's, summed
};

CumulativeSeries cumulative_series(const BacktestOutput& model,
                                   const BacktestOutput& benchmark);

}  // namespace tvpsv

#endif
