#ifndef TVPSV_DATASET_IO_HPP
#define TVPSV_DATASET_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "tvpsv/model.hpp"

namespace tvpsv {

// Names of the CSV columns to consume. Either y names the modeled series
// directly, or index_return and risk_free are both set and the series is
// their difference.
struct ColumnMap {
  std::string date = "yyyymm";
  std::string y;
  std::string index_return;
  std::string risk_free;
  std::vector<std::string> predictors;
};

// Load a monthly CSV with a header row. Dates must be consecutive yyyymm
// months; rows with unreadable or missing cells in the mapped columns are
// reported by row number. With lag_predictors the predictor columns are
// shifted forward one month (so each y row sees last month's predictors) and
// the first row drops out.
Dataset load_dataset(const std::string& path, const ColumnMap& map, bool lag_predictors);

void save_dataset(const Dataset& data, const std::string& path);

// Two-column CSV of inclusive yyyymm ranges (start, end).
std::vector<std::pair<int, int>> load_recession_ranges(const std::string& path);

void apply_recessions(Dataset& data, const std::vector<std::pair<int, int>>& ranges);

}  // namespace tvpsv

#endif
