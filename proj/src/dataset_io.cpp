#include "tvpsv/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const std::string upper = [&] {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), ::toupper);
    return u;
  }();
  if (upper == "NA" || upper == "NAN" || upper == "NULL" || upper == ".") return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != nullptr && *end == '\0';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file: " + path);
  table.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    table.rows.push_back(split_csv_line(line));
  }
  if (table.rows.empty()) throw data_error("no data rows in file: " + path);
  return table;
}

int find_column(const CsvTable& table, const std::string& name, const std::string& path) {
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == name) return static_cast<int>(j);
  }
  throw data_error("column '" + name + "' not found in header of " + path);
}

std::string row_list(const std::vector<int>& rows) {
  std::string s;
  const std::size_t shown = std::min<std::size_t>(rows.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(rows[i]);
  }
  if (rows.size() > shown) {
    s += " and " + std::to_string(rows.size() - shown) + " more";
  }
  return s;
}

}  // namespace

Dataset load_dataset(const std::string& path, const ColumnMap& map, bool lag_predictors) {
  const CsvTable table = read_csv(path);
  const int date_col = find_column(table, map.date, path);
  const bool direct_y = !map.y.empty();
  if (!direct_y && (map.index_return.empty() || map.risk_free.empty())) {
    throw data_error("column map needs either y or both index_return and risk_free");
  }
  const int y_col = direct_y ? find_column(table, map.y, path) : -1;
  const int idx_col = direct_y ? -1 : find_column(table, map.index_return, path);
  const int rf_col = direct_y ? -1 : find_column(table, map.risk_free, path);
  std::vector<int> pred_cols;
  for (const std::string& name : map.predictors) {
    pred_cols.push_back(find_column(table, name, path));
  }

  const int n = static_cast<int>(table.rows.size());
  const int k = static_cast<int>(pred_cols.size());
  Dataset data;
  data.dates.resize(n);
  data.y.resize(n);
  data.X.resize(n, k);
  data.predictor_names = map.predictors;
  data.recession.assign(n, 0);

  std::vector<int> bad_rows;
  const auto cell = [&](int i, int j, double& out) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    if (j >= static_cast<int>(row.size())) return false;
    return parse_double(row[static_cast<std::size_t>(j)], out);
  };

  for (int i = 0; i < n; ++i) {
    bool ok = true;
    double d;
    if (!cell(i, date_col, d)) {
      ok = false;
    } else {
      data.dates[i] = static_cast<int>(d);
      if (static_cast<double>(data.dates[i]) != d) ok = false;
    }
    if (ok) {
      if (direct_y) {
        ok = cell(i, y_col, data.y(i));
      } else {
        double a, b;
        ok = cell(i, idx_col, a) && cell(i, rf_col, b);
        if (ok) data.y(i) = a - b;
      }
    }
    for (int j = 0; ok && j < k; ++j) ok = cell(i, pred_cols[j], data.X(i, j));
    if (!ok) bad_rows.push_back(i + 2);  // 1-based, counting the header
  }
  if (!bad_rows.empty()) {
    throw data_error("unreadable or missing cells in " + path + " at rows " +
                     row_list(bad_rows));
  }

  for (int i = 0; i < n; ++i) {
    month_index(data.dates[i]);  // validates the format
    if (i > 0) {
      const int gap = months_between(data.dates[i], data.dates[i - 1]);
      if (gap == 0) {
        throw data_error("duplicate date " + std::to_string(data.dates[i]) + " in " + path);
      }
      if (gap != 1) {
        throw data_error("dates must advance one month per row in " + path +
                         "; found " + std::to_string(data.dates[i - 1]) + " followed by " +
                         std::to_string(data.dates[i]));
      }
    }
  }

  if (lag_predictors && k > 0) {
    if (n < 2) throw data_error("lagging predictors needs at least two rows in " + path);
    Dataset lagged;
    lagged.dates.assign(data.dates.begin() + 1, data.dates.end());
    lagged.y = data.y.tail(n - 1);
    lagged.X = data.X.topRows(n - 1);
    lagged.predictor_names = data.predictor_names;
    lagged.recession.assign(n - 1, 0);
    return lagged;
  }
  return data;
}

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path);
  out << "yyyymm,y";
  for (const std::string& name : data.predictor_names) out << "," << name;
  out << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out << data.dates[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof(buf), ",%.12g", data.y(i));
    out << buf;
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.12g", data.X(i, j));
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw data_error("write failed: " + path);
}

std::vector<std::pair<int, int>> load_recession_ranges(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int start_col = find_column(table, "start", path);
  const int end_col = find_column(table, "end", path);
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    double a, b;
    const auto& row = table.rows[i];
    if (start_col >= static_cast<int>(row.size()) ||
        end_col >= static_cast<int>(row.size()) ||
        !parse_double(row[static_cast<std::size_t>(start_col)], a) ||
        !parse_double(row[static_cast<std::size_t>(end_col)], b)) {
      throw data_error("unreadable recession range in " + path + " at row " +
                       std::to_string(i + 2));
    }
    const int lo = static_cast<int>(a), hi = static_cast<int>(b);
    if (month_index(hi) < month_index(lo)) {
      throw data_error("recession range ends before it starts at row " +
                       std::to_string(i + 2) + " of " + path);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

void apply_recessions(Dataset& data, const std::vector<std::pair<int, int>>& ranges) {
  for (const auto& [lo, hi] : ranges) {
    const int a = month_index(lo), b = month_index(hi);
    for (std::size_t i = 0; i < data.dates.size(); ++i) {
      const int m = month_index(data.dates[i]);
      if (m >= a && m <= b) data.recession[i] = 1;
    }
  }
}

}  // namespace tvpsv
