// Command line front end: fit, backtest, trade, simulate, validate.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvpsv/backtest.hpp"
#include "tvpsv/dataset_io.hpp"
#include "tvpsv/draw_store_io.hpp"
#include "tvpsv/errors.hpp"
#include "tvpsv/geweke.hpp"
#include "tvpsv/predictive.hpp"
#include "tvpsv/reports.hpp"
#include "tvpsv/run_config.hpp"
#include "tvpsv/sampler.hpp"
#include "tvpsv/simulate.hpp"
#include "tvpsv/trading.hpp"

namespace fs = std::filesystem;
using namespace tvpsv;

namespace {

constexpr const char* kVersion = "tvpsv 1.0.0";

struct CommonOpts {
  std::string config_path;
  std::string profile;
  std::string model;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts.config_path, "run configuration JSON file");
  if (config_required) c->required();
  cmd->add_option("--profile", opts.profile, "settings profile: paper or desk");
  cmd->add_option("--model", opts.model, "model id override");
  cmd->add_option("--out-dir", opts.out_dir, "output directory override");
  cmd->add_option("--seed", opts.seed, "rng seed override");
  cmd->add_option("--threads", opts.threads, "worker thread override");
}

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg = load_run_config(opts.config_path);
  apply_profile(cfg, opts.profile);
  if (!opts.model.empty()) {
    model_spec(opts.model);
    cfg.models = {opts.model};
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed >= 0) cfg.sampler.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.threads > 0) cfg.threads = opts.threads;
  return cfg;
}

void write_manifest(const RunConfig& cfg, const std::string& command) {
  std::vector<ManifestEntry> entries;
  entries.push_back({"version", kVersion});
  entries.push_back({"command", command});
  entries.push_back({"seed", std::to_string(cfg.sampler.seed)});
  entries.push_back({"config", run_config_to_json(cfg)});
  write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(),
                  manifest_json(entries));
}

ModelData full_sample_data(const Dataset& data, const RunConfig& cfg,
                           const ModelSpec& spec) {
  const int lo = data.row_of(cfg.schedule.sample_start);
  const int hi = data.row_of(cfg.schedule.final_month);
  if (lo < 0 || hi < 0 || lo > hi) {
    throw data_error("dataset does not cover the configured sample window");
  }
  return build_model_data(data, lo, hi, spec);
}

int cmd_fit(const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  Dataset data = load_config_dataset(cfg);
  fs::create_directories(cfg.out_dir);
  for (const std::string& id : cfg.models) {
    const ModelSpec spec = model_spec(id);
    ModelData md = full_sample_data(data, cfg, spec);
    RngStream rng(cfg.sampler.seed, 0);
    DrawStore store = run_chain(md, spec, cfg.sampler, rng);
    const std::string path = (fs::path(cfg.out_dir) / ("draws_" + id + ".bin")).string();
    save_draw_store(store, path);
    std::cout << id << ": " << store.draws() << " retained draws -> " << path << "\n";
    for (const auto& [name, value] : store.ess) {
      std::cout << "  ess " << name << " = " << format_number(value) << "\n";
    }
  }
  write_manifest(cfg, "fit");
  return 0;
}

int cmd_backtest(const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  Dataset data = load_config_dataset(cfg);
  fs::create_directories(cfg.out_dir);

  std::vector<std::string> ids = cfg.models;
  if (std::find(ids.begin(), ids.end(), cfg.benchmark) == ids.end()) {
    ids.push_back(cfg.benchmark);
  }
  std::map<std::string, BacktestOutput> outputs;
  for (const std::string& id : ids) {
    const ModelSpec spec = model_spec(id);
    std::cout << "backtesting " << id << " over "
              << cfg.schedule.origins().size() << " origins\n";
    BacktestOutput out =
        recursive_backtest(data, spec, cfg.schedule, cfg.sampler, cfg.threads);
    write_text_file((fs::path(cfg.out_dir) / ("records_" + id + ".csv")).string(),
                    records_csv(out));
    save_matrix(out.locations,
                (fs::path(cfg.out_dir) / ("locations_" + id + ".bin")).string());
    outputs.emplace(id, std::move(out));
  }

  const BacktestOutput& bench = outputs.at(cfg.benchmark);
  std::vector<std::pair<std::string, std::vector<RegimeMetrics>>> rows;
  for (const std::string& id : cfg.models) {
    if (id == cfg.benchmark) continue;
    rows.emplace_back(id, relative_metrics(outputs.at(id), bench));
    write_text_file((fs::path(cfg.out_dir) / ("series_" + id + ".csv")).string(),
                    series_csv(cumulative_series(outputs.at(id), bench)));
  }
  write_text_file((fs::path(cfg.out_dir) / "metrics.csv").string(), metrics_csv(rows));
  write_text_file((fs::path(cfg.out_dir) / "metrics.json").string(), metrics_json(rows));
  write_manifest(cfg, "backtest");
  std::cout << metrics_csv(rows);
  return 0;
}

// minimal reader for the records files the backtest writes
std::vector<BacktestRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open records file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("records file is empty: " + path);
  std::vector<BacktestRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    BacktestRecord r;
    std::getline(row, cell, ',');
    r.origin = std::stoi(cell);
    std::getline(row, cell, ',');
    r.realized = std::stod(cell);
    std::getline(row, cell, ',');
    r.point = std::stod(cell);
    std::getline(row, cell, ',');
    r.lps = std::stod(cell);
    if (!std::getline(row, cell, ',')) {
      throw data_error("records file has a short row: " + path);
    }
    r.recession = (std::stoi(cell) != 0);
    records.push_back(r);
  }
  return records;
}

int cmd_trade(const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  fs::create_directories(cfg.out_dir);

  std::vector<TradingRow> draw_rows;
  std::vector<TradingRow> point_rows;
  for (const std::string& id : cfg.models) {
    const std::string rec_path =
        (fs::path(cfg.out_dir) / ("records_" + id + ".csv")).string();
    const std::string loc_path =
        (fs::path(cfg.out_dir) / ("locations_" + id + ".bin")).string();
    std::vector<BacktestRecord> records = read_records_csv(rec_path);
    Eigen::MatrixXd locations = load_matrix(loc_path);
    if (locations.rows() != static_cast<Eigen::Index>(records.size())) {
      throw data_error("records and locations disagree on origin count for " + id);
    }

    const auto n = static_cast<int>(records.size());
    Eigen::VectorXd realized(n), point(n);
    std::vector<int> full_idx, recession_idx, expansion_idx;
    for (int i = 0; i < n; ++i) {
      realized[i] = records[i].realized;
      point[i] = records[i].point;
      full_idx.push_back(i);
      (records[i].recession ? recession_idx : expansion_idx).push_back(i);
    }

    auto evaluate = [&](const std::string& regime, const std::vector<int>& subset) {
      if (subset.empty()) return;
      PosteriorPerf pp = posterior_performance(locations, realized, cfg.trading.lower,
                                               cfg.trading.upper, subset);
      draw_rows.push_back({id, regime, pp.mean_annual, pp.sd_annual, pp.sharpe});
      StrategyPerf sp = point_performance(point, realized, cfg.trading.lower,
                                          cfg.trading.upper, subset);
      point_rows.push_back({id, regime, sp.mean_annual, sp.sd_annual, sp.sharpe});
    };
    evaluate("full", full_idx);
    evaluate("recession", recession_idx);
    evaluate("expansion", expansion_idx);
  }

  write_text_file((fs::path(cfg.out_dir) / "trading_draw.csv").string(),
                  trading_csv(draw_rows));
  write_text_file((fs::path(cfg.out_dir) / "trading_draw.json").string(),
                  trading_json(draw_rows));
  write_text_file((fs::path(cfg.out_dir) / "trading_point.csv").string(),
                  trading_csv(point_rows));
  write_text_file((fs::path(cfg.out_dir) / "trading_point.json").string(),
                  trading_json(point_rows));
  write_manifest(cfg, "trade");
  std::cout << trading_csv(draw_rows);
  return 0;
}

int cmd_simulate(int t_obs, int k, std::uint64_t seed, const std::string& out_dir) {
  DgpParams params;
  params.T = t_obs;
  params.K = k;
  params.beta0.resize(k);
  params.sqrt_v.resize(k);
  const double beta_cycle[3] = {0.5, -0.25, 0.1};
  const double v_cycle[3] = {0.2, 0.0, 0.05};
  for (int j = 0; j < k; ++j) {
    params.beta0[j] = beta_cycle[j % 3];
    params.sqrt_v[j] = v_cycle[j % 3];
  }
  DgpTruth truth = simulate_dgp(params, seed);
  fs::create_directories(out_dir);
  const std::string csv_path = (fs::path(out_dir) / "simulated.csv").string();
  save_dataset(truth.data, csv_path);

  std::ostringstream js;
  js << "{\n  \"seed\": " << seed << ",\n  \"nu\": " << params.nu
     << ",\n  \"kappa\": " << params.kappa << ",\n  \"sv_mu\": " << params.sv.mu
     << ",\n  \"sv_rho\": " << params.sv.rho
     << ",\n  \"sv_sigma2\": " << params.sv.sigma2 << ",\n  \"beta0\": [";
  for (int j = 0; j < k; ++j) js << (j ? ", " : "") << params.beta0[j];
  js << "],\n  \"sqrt_v\": [";
  for (int j = 0; j < k; ++j) js << (j ? ", " : "") << params.sqrt_v[j];
  js << "]\n}\n";
  write_text_file((fs::path(out_dir) / "truth.json").string(), js.str());
  std::cout << "wrote " << csv_path << " (" << truth.data.rows() << " months, " << k
            << " predictors)\n";
  return 0;
}

int cmd_validate(const std::string& model_id, int cycles, int t_obs, int k,
                 std::uint64_t seed) {
  GewekeConfig gcfg;
  gcfg.flags = model_spec(model_id).flags;
  gcfg.cycles = cycles;
  gcfg.T = t_obs;
  gcfg.K = k;
  gcfg.seed = seed;
  std::cout << "sampler self-check: " << model_id << ", T=" << t_obs << ", K=" << k
            << ", " << cycles << " cycles\n";
  GewekeResult res = run_geweke(gcfg);
  bool ok = true;
  std::cout << "parameter        z_mean   z_2nd    ess\n";
  for (const GewekeCheck& c : res.checks) {
    const bool pass = std::abs(c.z_mean) < 3.0 && std::abs(c.z_second) < 3.0;
    ok = ok && pass;
    std::printf("%-16s %7.3f  %7.3f  %6.0f  %s\n", c.name.c_str(), c.z_mean,
                c.z_second, c.ess_chain, pass ? "pass" : "FAIL");
  }
  std::cout << (ok ? "all checks passed\n" : "self-check FAILED\n");
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian time-varying regression with stochastic volatility"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts fit_opts, backtest_opts, trade_opts;
  auto* fit = app.add_subcommand("fit", "estimate models on the full sample");
  add_common(fit, fit_opts, true);
  auto* backtest =
      app.add_subcommand("backtest", "recursive out-of-sample forecast evaluation");
  add_common(backtest, backtest_opts, true);
  auto* trade =
      app.add_subcommand("trade", "trading strategy evaluation from backtest output");
  add_common(trade, trade_opts, true);

  int sim_T = 400, sim_K = 3;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "out";
  auto* simulate = app.add_subcommand("simulate", "write a synthetic dataset");
  simulate->add_option("-T,--months", sim_T, "number of months")
      ->check(CLI::PositiveNumber);
  simulate->add_option("-K,--predictors", sim_K, "number of predictors")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "rng seed");
  simulate->add_option("--out-dir", sim_out, "output directory");

  std::string val_model = "tvp-sv-dl";
  int val_cycles = 10000, val_T = 25, val_K = 2;
  std::uint64_t val_seed = 42;
  auto* validate = app.add_subcommand("validate", "run the sampler self-check suite");
  validate->add_option("--model", val_model, "model id to check");
  validate->add_option("--cycles", val_cycles, "chain length")->check(CLI::PositiveNumber);
  validate->add_option("-T,--months", val_T, "sample length")->check(CLI::PositiveNumber);
  validate->add_option("-K,--predictors", val_K, "predictor count")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", val_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version succeed, anything else is usage
  }

  try {
    if (*fit) return cmd_fit(fit_opts);
    if (*backtest) return cmd_backtest(backtest_opts);
    if (*trade) return cmd_trade(trade_opts);
    if (*simulate) return cmd_simulate(sim_T, sim_K, sim_seed, sim_out);
    if (*validate) return cmd_validate(val_model, val_cycles, val_T, val_K, val_seed);
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
