#ifndef TVPSV_RUN_CONFIG_HPP
#define TVPSV_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include "tvpsv/backtest.hpp"
#include "tvpsv/dataset_io.hpp"
#include "tvpsv/sampler.hpp"

namespace tvpsv {

struct TradingConfig {
  double lower = -0.01;
  double upper = 0.01;
};

// Everything a command run needs, read from a JSON file. Unknown keys are
// rejected so typos fail loudly. Defaults follow the monthly equity premium
// study design.
struct RunConfig {
  std::string dataset_path;
  ColumnMap columns;
  bool lag_predictors = true;
  std::string recession_path;
  std::vector<std::string> models{"mean-sv", "tvp-sv-dl"};
  std::string benchmark = "mean-sv";
  BacktestSchedule schedule;
  SamplerConfig sampler;
  TradingConfig trading;
  int threads = 1;
  std::string out_dir = "out";
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// "paper" restores the full-study sampler plan and schedule; "desk" switches
// to the short plan (3000 iterations, 1000 burn) over the last 60 origins.
void apply_profile(RunConfig& cfg, const std::string& profile);

// Resolved configuration as canonical JSON, for the run manifest.
std::string run_config_to_json(const RunConfig& cfg);

// Load the dataset named by the config, recession markers included.
Dataset load_config_dataset(const RunConfig& cfg);

}  // namespace tvpsv

#endif
