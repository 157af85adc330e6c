#ifndef TVPSV_REPORTS_HPP
#define TVPSV_REPORTS_HPP

#include <string>
#include <vector>

#include "tvpsv/backtest.hpp"
#include "tvpsv/trading.hpp"

namespace tvpsv {

// Plain-text report writers. Numbers are printed with six significant digits.
std::string format_number(double v);

// one row per (model, regime): model,regime,count,rel_rmse,log_bf
std::string metrics_csv(const std::vector<std::pair<std::string, std::vector<RegimeMetrics>>>& rows);

// forecast records for one model: origin,realized,point,lps,recession
std::string records_csv(const BacktestOutput& out);

// cumulative comparison paths: origin,cum_sq_gain,cum_log_bf
std::string series_csv(const CumulativeSeries& series);

struct TradingRow {
  std::string model;
  std::string regime;
  double mean_annual = 0.0;
  double sd_annual = 0.0;
  double sharpe = 0.0;
};

// model,regime,mu,sigma,sharpe
std::string trading_csv(const std::vector<TradingRow>& rows);

// JSON renderings of the same reports: arrays of objects keyed like the CSV
// columns, numbers rounded the same way so both formats parse to identical
// values.
std::string metrics_json(const std::vector<std::pair<std::string, std::vector<RegimeMetrics>>>& rows);
std::string records_json(const BacktestOutput& out);
std::string series_json(const CumulativeSeries& series);
std::string trading_json(const std::vector<TradingRow>& rows);

void write_text_file(const std::string& path, const std::string& text);

// Run manifest: what produced the files in an output directory.
struct ManifestEntry {
  std::string key;
  std::string value;
};

std::string manifest_json(const std::vector<ManifestEntry>& entries);

}  // namespace tvpsv

#endif
