#include "tvpsv/reports.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tvpsv/errors.hpp"

namespace tvpsv {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string metrics_csv(
    const std::vector<std::pair<std::string, std::vector<RegimeMetrics>>>& rows) {
  std::ostringstream out;
  out << "model,regime,count,rel_rmse,log_bf\n";
  for (const auto& [model, metrics] : rows) {
    for (const RegimeMetrics& m : metrics) {
      out << model << ',' << m.regime << ',' << m.count << ','
          << format_number(m.rel_rmse) << ',' << format_number(m.log_bf) << '\n';
    }
  }
  return out.str();
}

std::string records_csv(const BacktestOutput& out) {
  std::ostringstream s;
  s << "origin,realized,point,lps,recession\n";
  for (const BacktestRecord& r : out.records) {
    s << r.origin << ',' << format_number(r.realized) << ','
      << format_number(r.point) << ',' << format_number(r.lps) << ','
      << (r.recession ? 1 : 0) << '\n';
  }
  return s.str();
}

std::string series_csv(const CumulativeSeries& series) {
  std::ostringstream s;
  s << "origin,cum_sq_gain,cum_log_bf\n";
  for (std::size_t i = 0; i < series.origin.size(); ++i) {
    s << series.origin[i] << ',' << format_number(series.cum_sq_gain[i]) << ','
      << format_number(series.cum_log_bf[i]) << '\n';
  }
  return s.str();
}

std::string trading_csv(const std::vector<TradingRow>& rows) {
  std::ostringstream s;
  s << "model,regime,mu,sigma,sharpe\n";
  for (const TradingRow& r : rows) {
    s << r.model << ',' << r.regime << ',' << format_number(r.mean_annual) << ','
      << format_number(r.sd_annual) << ',' << format_number(r.sharpe) << '\n';
  }
  return s.str();
}

namespace {

// reparse the 6-digit rendering so json and csv carry the same value
double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

}  // namespace

std::string metrics_json(
    const std::vector<std::pair<std::string, std::vector<RegimeMetrics>>>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [model, metrics] : rows) {
    for (const RegimeMetrics& m : metrics) {
      arr.push_back({{"model", model},
                     {"regime", m.regime},
                     {"count", m.count},
                     {"rel_rmse", rounded(m.rel_rmse)},
                     {"log_bf", rounded(m.log_bf)}});
    }
  }
  return arr.dump(2) + "\n";
}

std::string records_json(const BacktestOutput& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BacktestRecord& r : out.records) {
    arr.push_back({{"origin", r.origin},
                   {"realized", rounded(r.realized)},
                   {"point", rounded(r.point)},
                   {"lps", rounded(r.lps)},
                   {"recession", r.recession ? 1 : 0}});
  }
  return arr.dump(2) + "\n";
}

std::string series_json(const CumulativeSeries& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < series.origin.size(); ++i) {
    arr.push_back({{"origin", series.origin[i]},
                   {"cum_sq_gain", rounded(series.cum_sq_gain[i])},
                   {"cum_log_bf", rounded(series.cum_log_bf[i])}});
  }
  return arr.dump(2) + "\n";
}

std::string trading_json(const std::vector<TradingRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TradingRow& r : rows) {
    arr.push_back({{"model", r.model},
                   {"regime", r.regime},
                   {"mu", rounded(r.mean_annual)},
                   {"sigma", rounded(r.sd_annual)},
                   {"sharpe", rounded(r.sharpe)}});
  }
  return arr.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw data_error("write failed: " + path);
}

std::string manifest_json(const std::vector<ManifestEntry>& entries) {
  nlohmann::json root;
  for (const ManifestEntry& e : entries) root[e.key] = e.value;
  return root.dump(2) + "\n";
}

}  // namespace tvpsv
