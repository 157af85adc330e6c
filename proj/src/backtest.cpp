#include "tvpsv/backtest.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "tvpsv/errors.hpp"
#include "tvpsv/predictive.hpp"

namespace tvpsv {

std::vector<int> BacktestSchedule::origins() const {
  const int first = month_index(initial_end);
  const int last = month_index(final_month) - 2;
  if (month_index(sample_start) >= first) {
    throw data_error("backtest schedule: sample start must precede the first origin");
  }
  if (last < first) {
    throw data_error("backtest schedule: final month leaves no forecast origins");
  }
  std::vector<int> out;
  out.reserve(last - first + 1);
  for (int i = first; i <= last; ++i) out.push_back(month_from_index(i));
  return out;
}

BacktestOutput recursive_backtest(const Dataset& data, const ModelSpec& spec,
                                  const BacktestSchedule& sched,
                                  const SamplerConfig& cfg, int threads) {
  const std::vector<int> origins = sched.origins();
  const int lo = data.row_of(sched.sample_start);
  if (lo < 0) {
    throw data_error("backtest: sample start " + std::to_string(sched.sample_start) +
                     " not in the dataset");
  }
  if (data.row_of(origins.back()) + 1 >= data.rows()) {
    throw data_error("backtest: dataset ends before the last forecast target");
  }
  const int n = static_cast<int>(origins.size());
  const int m_total = (cfg.n_iter - cfg.n_burn) / cfg.thin;

  BacktestOutput out;
  out.model_id = spec.id;
  out.records.resize(n);
  out.locations.resize(n, m_total);

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  int first_error_k = n;

  const auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= n) return;
      try {
        const int origin_row = data.row_of(origins[k]);
        if (origin_row < 0) throw data_error("backtest: origin month missing from dataset");
        const ModelData md = build_model_data(data, lo, origin_row, spec);
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(k));
        const DrawStore store = run_chain(md, spec, cfg, rng);
        const Eigen::VectorXd x_next = predict_design_row(data, origin_row + 1, spec);
        const PredictiveDensity pred = one_step_predictive(store, x_next, rng);
        BacktestRecord rec;
        rec.origin = origins[k];
        rec.realized = data.y(origin_row + 1);
        rec.point = predictive_mean(pred);
        rec.lps = log_predictive_score(pred, rec.realized);
        rec.recession = data.recession[static_cast<std::size_t>(origin_row + 1)] != 0;
        out.records[k] = rec;
        out.locations.row(k) = pred.location;
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (k < first_error_k) {
          first_error = std::current_exception();
          first_error_k = k;
        }
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min(threads, n));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

namespace {

struct RegimeSums {
  int count = 0;
  double sse_model = 0.0;
  double sse_bench = 0.0;
  double lps_model = 0.0;
  double lps_bench = 0.0;
};

RegimeMetrics finish(const std::string& name, const RegimeSums& s) {
  RegimeMetrics m;
  m.regime = name;
  m.count = s.count;
  m.log_bf = s.lps_model - s.lps_bench;
  if (s.count > 0) {
    if (!(s.sse_bench > 0.0)) {
      throw numerical_error("relative metrics: benchmark squared error is zero in " +
                            name + " months, ratio undefined");
    }
    m.rel_rmse = std::sqrt(s.sse_model / s.sse_bench);
  }
  return m;
}

void check_aligned(const BacktestOutput& model, const BacktestOutput& benchmark) {
  if (model.records.size() != benchmark.records.size()) {
    throw data_error("relative metrics: origin counts differ");
  }
  for (std::size_t i = 0; i < model.records.size(); ++i) {
    if (model.records[i].origin != benchmark.records[i].origin) {
      throw data_error("relative metrics: origin mismatch at position " +
                       std::to_string(i));
    }
    if (model.records[i].realized != benchmark.records[i].realized) {
      throw data_error("relative metrics: realized values disagree at origin " +
                       std::to_string(model.records[i].origin));
    }
  }
}

}  // namespace

std::vector<RegimeMetrics> relative_metrics(const BacktestOutput& model,
                                            const BacktestOutput& benchmark) {
  check_aligned(model, benchmark);
  RegimeSums full, rec, exp_;
  for (std::size_t i = 0; i < model.records.size(); ++i) {
    const BacktestRecord& rm = model.records[i];
    const BacktestRecord& rb = benchmark.records[i];
    const double em = rm.realized - rm.point;
    const double eb = rb.realized - rb.point;
    RegimeSums& bucket = rm.recession ? rec : exp_;
    for (RegimeSums* s : {&full, &bucket}) {
      s->count += 1;
      s->sse_model += em * em;
      s->sse_bench += eb * eb;
      s->lps_model += rm.lps;
      s->lps_bench += rb.lps;
    }
  }
  std::vector<RegimeMetrics> out;
  out.push_back(finish("full", full));
  if (rec.count > 0) out.push_back(finish("recession", rec));
  if (exp_.count > 0) out.push_back(finish("expansion", exp_));
  return out;
}

CumulativeSeries cumulative_series(const BacktestOutput& model,
                                   const BacktestOutput& benchmark) {
  check_aligned(model, benchmark);
  CumulativeSeries out;
  double sq = 0.0, bf = 0.0;
  for (std::size_t i = 0; i < model.records.size(); ++i) {
    const BacktestRecord& rm = model.records[i];
    const BacktestRecord& rb = benchmark.records[i];
    const double em = rm.realized - rm.point;
    const double eb = rb.realized - rb.point;
    sq += eb * eb - em * em;
    bf += rm.lps - rb.lps;
    out.origin.push_back(rm.origin);
    out.cum_sq_gain.push_back(sq);
    out.cum_log_bf.push_back(bf);
  }
  return out;
}

}  // namespace tvpsv
