#ifndef TVPSV_MODEL_HPP
#define TVPSV_MODEL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tvpsv {

// Calendar months are carried as yyyymm integers (e.g. 195612).
int month_index(int yyyymm);
int month_from_index(int index);
int add_months(int yyyymm, int k);
int months_between(int later, int earlier);

// A monthly dataset: the modeled series y, aligned predictor columns, and a
// recession marker per row. Rows are consecutive months.
struct Dataset {
  std::vector<int> dates;
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> predictor_names;
  std::vector<unsigned char> recession;

  Eigen::Index rows() const { return y.size(); }
  // dataset row holding the given month, or -1
  int row_of(int yyyymm) const;
};

struct ModelFlags {
  bool tvp = false;      // random walk coefficient paths
  bool t_obs = false;    // scale mixing on observation noise
  bool t_state = false;  // scale mixing on state increments
  bool dl = false;       // Dirichlet-Laplace prior on the static block
};

enum class DesignKind {
  Empty,                  // pure volatility model, zero conditional mean
  InterceptOnly,
  InterceptAndPredictors,
  InterceptAndLaggedY,
  PredictorsOnly,         // the time-varying specifications
};

struct ModelSpec {
  std::string id;
  DesignKind design = DesignKind::InterceptOnly;
  ModelFlags flags;
};

// Look up one of the built-in specifications by id. Throws data_error on an
// unknown id; known_model_ids lists what is available.
ModelSpec model_spec(const std::string& id);
const std::vector<std::string>& known_model_ids();

// Response and design rows for a fit on dataset rows lo..hi inclusive.
// Designs with a lagged response need the preceding row, so the first usable
// row moves up by one when lo is 0.
struct ModelData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  int first_row = 0;
};

ModelData build_model_data(const Dataset& data, int lo, int hi, const ModelSpec& spec);

// Design row for predicting the y at dataset row `row` (the predictors in
// that row are already information dated before it).
Eigen::VectorXd predict_design_row(const Dataset& data, int row, const ModelSpec& spec);

}  // namespace tvpsv

#endif
