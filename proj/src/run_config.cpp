#include "tvpsv/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tvpsv/errors.hpp"

namespace tvpsv {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end()) {
      throw data_error("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw data_error("config: key '" + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw data_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw data_error("config: top level must be an object");
  reject_unknown(root,
                 {"dataset", "models", "benchmark", "schedule", "sampler", "trading",
                  "threads", "out_dir"},
                 "top level");

  RunConfig cfg;

  if (root.contains("dataset")) {
    const json& d = root.at("dataset");
    reject_unknown(d, {"path", "columns", "lag_predictors", "recessions"}, "dataset");
    cfg.dataset_path = get_or<std::string>(d, "path", "");
    cfg.lag_predictors = get_or<bool>(d, "lag_predictors", true);
    cfg.recession_path = get_or<std::string>(d, "recessions", "");
    if (d.contains("columns")) {
      const json& c = d.at("columns");
      reject_unknown(c, {"date", "y", "index_return", "risk_free", "predictors"},
                     "dataset.columns");
      cfg.columns.date = get_or<std::string>(c, "date", "yyyymm");
      cfg.columns.y = get_or<std::string>(c, "y", "");
      cfg.columns.index_return = get_or<std::string>(c, "index_return", "");
      cfg.columns.risk_free = get_or<std::string>(c, "risk_free", "");
      cfg.columns.predictors =
          get_or<std::vector<std::string>>(c, "predictors", {});
    }
  }

  cfg.models = get_or<std::vector<std::string>>(root, "models", cfg.models);
  cfg.benchmark = get_or<std::string>(root, "benchmark", cfg.benchmark);
  if (cfg.models.empty()) throw data_error("config: models list is empty");
  for (const std::string& id : cfg.models) model_spec(id);
  model_spec(cfg.benchmark);

  if (root.contains("schedule")) {
    const json& s = root.at("schedule");
    reject_unknown(s, {"sample_start", "initial_end", "final"}, "schedule");
    cfg.schedule.sample_start = get_or<int>(s, "sample_start", cfg.schedule.sample_start);
    cfg.schedule.initial_end = get_or<int>(s, "initial_end", cfg.schedule.initial_end);
    cfg.schedule.final_month = get_or<int>(s, "final", cfg.schedule.final_month);
    month_index(cfg.schedule.sample_start);
    month_index(cfg.schedule.initial_end);
    month_index(cfg.schedule.final_month);
  }

  if (root.contains("sampler")) {
    const json& s = root.at("sampler");
    reject_unknown(s,
                   {"n_iter", "n_burn", "thin", "seed", "dl_a", "fixed_alpha_var",
                    "dof_lower", "dof_upper", "dof_rate"},
                   "sampler");
    cfg.sampler.n_iter = get_or<int>(s, "n_iter", cfg.sampler.n_iter);
    cfg.sampler.n_burn = get_or<int>(s, "n_burn", cfg.sampler.n_burn);
    cfg.sampler.thin = get_or<int>(s, "thin", cfg.sampler.thin);
    cfg.sampler.seed = get_or<std::uint64_t>(s, "seed", cfg.sampler.seed);
    cfg.sampler.priors.dl_a = get_or<double>(s, "dl_a", cfg.sampler.priors.dl_a);
    cfg.sampler.priors.fixed_alpha_var =
        get_or<double>(s, "fixed_alpha_var", cfg.sampler.priors.fixed_alpha_var);
    cfg.sampler.priors.dof.lower =
        get_or<double>(s, "dof_lower", cfg.sampler.priors.dof.lower);
    cfg.sampler.priors.dof.upper =
        get_or<double>(s, "dof_upper", cfg.sampler.priors.dof.upper);
    cfg.sampler.priors.dof.rate =
        get_or<double>(s, "dof_rate", cfg.sampler.priors.dof.rate);
  }
  if (cfg.sampler.n_iter < 1 || cfg.sampler.n_burn < 0 ||
      cfg.sampler.n_burn >= cfg.sampler.n_iter || cfg.sampler.thin < 1) {
    throw data_error("config: sampler plan must satisfy 0 <= n_burn < n_iter, thin >= 1");
  }

  if (root.contains("trading")) {
    const json& t = root.at("trading");
    reject_unknown(t, {"lower", "upper"}, "trading");
    cfg.trading.lower = get_or<double>(t, "lower", cfg.trading.lower);
    cfg.trading.upper = get_or<double>(t, "upper", cfg.trading.upper);
    if (!(cfg.trading.lower <= cfg.trading.upper)) {
      throw data_error("config: trading.lower must not exceed trading.upper");
    }
  }

  cfg.threads = get_or<int>(root, "threads", cfg.threads);
  if (cfg.threads < 1) throw data_error("config: threads must be at least 1");
  cfg.out_dir = get_or<std::string>(root, "out_dir", cfg.out_dir);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void apply_profile(RunConfig& cfg, const std::string& profile) {
  if (profile.empty()) return;
  if (profile == "paper") {
    cfg.sampler.n_iter = 30000;
    cfg.sampler.n_burn = 15000;
    cfg.sampler.thin = 1;
    return;
  }
  if (profile == "desk") {
    cfg.sampler.n_iter = 3000;
    cfg.sampler.n_burn = 1000;
    cfg.sampler.thin = 1;
    cfg.schedule.initial_end = add_months(cfg.schedule.final_month, -61);
    return;
  }
  throw data_error("unknown profile '" + profile + "'; expected paper or desk");
}

std::string run_config_to_json(const RunConfig& cfg) {
  json root;
  root["dataset"]["path"] = cfg.dataset_path;
  root["dataset"]["lag_predictors"] = cfg.lag_predictors;
  root["dataset"]["recessions"] = cfg.recession_path;
  root["dataset"]["columns"]["date"] = cfg.columns.date;
  root["dataset"]["columns"]["y"] = cfg.columns.y;
  root["dataset"]["columns"]["index_return"] = cfg.columns.index_return;
  root["dataset"]["columns"]["risk_free"] = cfg.columns.risk_free;
  root["dataset"]["columns"]["predictors"] = cfg.columns.predictors;
  root["models"] = cfg.models;
  root["benchmark"] = cfg.benchmark;
  root["schedule"]["sample_start"] = cfg.schedule.sample_start;
  root["schedule"]["initial_end"] = cfg.schedule.initial_end;
  root["schedule"]["final"] = cfg.schedule.final_month;
  root["sampler"]["n_iter"] = cfg.sampler.n_iter;
  root["sampler"]["n_burn"] = cfg.sampler.n_burn;
  root["sampler"]["thin"] = cfg.sampler.thin;
  root["sampler"]["seed"] = cfg.sampler.seed;
  root["sampler"]["dl_a"] = cfg.sampler.priors.dl_a;
  root["sampler"]["fixed_alpha_var"] = cfg.sampler.priors.fixed_alpha_var;
  root["sampler"]["dof_lower"] = cfg.sampler.priors.dof.lower;
  root["sampler"]["dof_upper"] = cfg.sampler.priors.dof.upper;
  root["sampler"]["dof_rate"] = cfg.sampler.priors.dof.rate;
  root["trading"]["lower"] = cfg.trading.lower;
  root["trading"]["upper"] = cfg.trading.upper;
  root["threads"] = cfg.threads;
  root["out_dir"] = cfg.out_dir;
  return root.dump(2);
}

Dataset load_config_dataset(const RunConfig& cfg) {
  if (cfg.dataset_path.empty()) throw data_error("config: dataset.path is required");
  Dataset data = load_dataset(cfg.dataset_path, cfg.columns, cfg.lag_predictors);
  if (!cfg.recession_path.empty()) {
    apply_recessions(data, load_recession_ranges(cfg.recession_path));
  }
  return data;
}

}  // namespace tvpsv
