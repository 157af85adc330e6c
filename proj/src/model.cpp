#include "tvpsv/model.hpp"

#include <stdexcept>

#include "tvpsv/errors.hpp"

namespace tvpsv {

int month_index(int yyyymm) {
  const int y = yyyymm / 100;
  const int m = yyyymm % 100;
  if (m < 1 || m > 12 || y < 1) {
    throw data_error("bad yyyymm month value: " + std::to_string(yyyymm));
  }
  return y * 12 + (m - 1);
}

int month_from_index(int index) {
  return (index / 12) * 100 + (index % 12) + 1;
}

int add_months(int yyyymm, int k) { return month_from_index(month_index(yyyymm) + k); }

int months_between(int later, int earlier) {
  return month_index(later) - month_index(earlier);
}

int Dataset::row_of(int yyyymm) const {
  if (dates.empty()) return -1;
  const int offset = month_index(yyyymm) - month_index(dates.front());
  if (offset < 0 || offset >= static_cast<int>(dates.size())) return -1;
  return offset;
}

const std::vector<std::string>& known_model_ids() {
  static const std::vector<std::string> ids = {
      "mean-sv",     "reg-sv",       "ar1-sv",       "rw-sv",
      "tvp-sv-dl",   "t-tvp-sv-dl1", "t-tvp-sv-dl2", "t-tvp-sv-dl3"};
  return ids;
}

ModelSpec model_spec(const std::string& id) {
  ModelSpec spec;
  spec.id = id;
  if (id == "mean-sv") {
    spec.design = DesignKind::InterceptOnly;
  } else if (id == "reg-sv") {
    spec.design = DesignKind::InterceptAndPredictors;
  } else if (id == "ar1-sv") {
    spec.design = DesignKind::InterceptAndLaggedY;
  } else if (id == "rw-sv") {
    spec.design = DesignKind::Empty;
  } else if (id == "tvp-sv-dl") {
    spec.design = DesignKind::PredictorsOnly;
    spec.flags = {true, false, false, true};
  } else if (id == "t-tvp-sv-dl1") {
    spec.design = DesignKind::PredictorsOnly;
    spec.flags = {true, true, false, true};
  } else if (id == "t-tvp-sv-dl2") {
    spec.design = DesignKind::PredictorsOnly;
    spec.flags = {true, false, true, true};
  } else if (id == "t-tvp-sv-dl3") {
    spec.design = DesignKind::PredictorsOnly;
    spec.flags = {true, true, true, true};
  } else {
    throw data_error("unknown model id: " + id);
  }
  return spec;
}

ModelData build_model_data(const Dataset& data, int lo, int hi, const ModelSpec& spec) {
  if (lo < 0 || hi >= data.rows() || lo > hi) {
    throw data_error("model data: row range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "] outside the dataset");
  }
  int start = lo;
  if (spec.design == DesignKind::InterceptAndLaggedY && start == 0) start = 1;
  if (start > hi) throw data_error("model data: empty sample after lag adjustment");
  const int n = hi - start + 1;

  ModelData out;
  out.first_row = start;
  out.y = data.y.segment(start, n);
  switch (spec.design) {
    case DesignKind::Empty:
      out.X.resize(n, 0);
      break;
    case DesignKind::InterceptOnly:
      out.X = Eigen::MatrixXd::Ones(n, 1);
      break;
    case DesignKind::InterceptAndPredictors:
      out.X.resize(n, 1 + data.X.cols());
      out.X.col(0).setOnes();
      out.X.rightCols(data.X.cols()) = data.X.middleRows(start, n);
      break;
    case DesignKind::InterceptAndLaggedY:
      out.X.resize(n, 2);
      out.X.col(0).setOnes();
      out.X.col(1) = data.y.segment(start - 1, n);
      break;
    case DesignKind::PredictorsOnly:
      if (data.X.cols() == 0) {
        throw data_error("model data: specification needs predictor columns");
      }
      out.X = data.X.middleRows(start, n);
      break;
  }
  return out;
}

Eigen::VectorXd predict_design_row(const Dataset& data, int row, const ModelSpec& spec) {
  if (row < 0 || row >= data.rows()) {
    throw data_error("predict row " + std::to_string(row) + " outside the dataset");
  }
  switch (spec.design) {
    case DesignKind::Empty:
      return Eigen::VectorXd(0);
    case DesignKind::InterceptOnly:
      return Eigen::VectorXd::Ones(1);
    case DesignKind::InterceptAndPredictors: {
      Eigen::VectorXd x(1 + data.X.cols());
      x(0) = 1.0;
      x.tail(data.X.cols()) = data.X.row(row);
      return x;
    }
    case DesignKind::InterceptAndLaggedY: {
      if (row < 1) throw data_error("predict row needs a preceding observation");
      Eigen::VectorXd x(2);
      x(0) = 1.0;
      x(1) = data.y(row - 1);
      return x;
    }
    case DesignKind::PredictorsOnly:
      return data.X.row(row);
  }
  throw data_error("predict row: unhandled design");
}

}  // namespace tvpsv
