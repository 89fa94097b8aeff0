#include "regimecast.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "backtest.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "evaluate.hpp"
#include "forecast.hpp"
#include "garch.hpp"
#include "market_data.hpp"
#include "mrs.hpp"
#include "simlab.hpp"

using namespace regimecast;

struct rc_returns {
  std::shared_ptr<ReturnSeries> series;
};

struct rc_fit {
  FitResult fit;
  std::shared_ptr<ReturnSeries> series;
  SampleSplit split;
  FitOptions options;
};

struct rc_forecast {
  ForecastTable table;
};

struct rc_evaluation {
  LossReport report;
};

struct rc_backtest {
  BacktestResult result;
};

struct rc_simulation {
  SimOutput sim;
  ModelKind kind = ModelKind::garch;
};

namespace {

thread_local std::string t_last_error;

void set_error(const char* what) { t_last_error = what == nullptr ? "" : what; }

template <typename F>
rc_status guarded(F&& body) noexcept {
  try {
    body();
    return RC_OK;
  } catch (const UsageError& e) {
    set_error(e.what());
    return RC_ERR_USAGE;
  } catch (const DataError& e) {
    set_error(e.what());
    return RC_ERR_DATA;
  } catch (const NumericError& e) {
    set_error(e.what());
    return RC_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RC_ERR_NUMERIC;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw UsageError(std::string("null argument: ") + name);
}

template <typename C>
std::size_t checked_index(const C& container, long i) {
  if (i < 0 || static_cast<std::size_t>(i) >= container.size())
    throw UsageError("index out of range");
  return static_cast<std::size_t>(i);
}

std::vector<std::string> comment_vector(const char* const* comments, int n) {
  if (n < 0) throw UsageError("negative comment count");
  if (n > 0) require(comments, "comments");
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    require(comments[i], "comment line");
    out.emplace_back(comments[i]);
  }
  return out;
}

std::ofstream open_output(const char* path) {
  require(path, "path");
  std::ofstream os(path);
  if (!os.good()) throw DataError(std::string("cannot open output file: ") + path);
  return os;
}

void finish_output_stream(std::ofstream& os, const char* path) {
  os.flush();
  if (!os.good()) throw DataError(std::string("write failed: ") + path);
}

void write_comment_lines(std::ofstream& os, const std::vector<std::string>& lines) {
  for (const std::string& line : lines) os << "# " << line << "\n";
}

GarchParams garch_from_flat(const double* v) {
  return GarchParams{v[0], v[1], v[2], v[3], v[4]};
}

}  // namespace

extern "C" {

const char* rc_last_error(void) { return t_last_error.c_str(); }

const char* rc_version(void) { return "0.1.0"; }

/* ---- return series ---------------------------------------------------- */

rc_status rc_returns_load_csv(const char* path, const char* frequency,
                              const char* date_column, const char* price_column,
                              rc_returns** out) {
  return guarded([&] {
    require(path, "path");
    require(frequency, "frequency");
    require(date_column, "date_column");
    require(price_column, "price_column");
    require(out, "out");
    PriceSeries prices =
        load_prices(path, frequency_from_string(frequency), date_column, price_column);
    auto series = std::make_shared<ReturnSeries>(to_returns(prices));
    *out = new rc_returns{std::move(series)};
  });
}

void rc_returns_free(rc_returns* h) { delete h; }

long rc_returns_size(const rc_returns* h) {
  return h == nullptr ? 0 : static_cast<long>(h->series->size());
}

rc_status rc_returns_value(const rc_returns* h, long i, double* out) {
  return guarded([&] {
    require(h, "returns");
    require(out, "out");
    *out = h->series->values[checked_index(h->series->values, i)];
  });
}

rc_status rc_returns_date(const rc_returns* h, long i, int* year, int* month,
                          int* day) {
  return guarded([&] {
    require(h, "returns");
    require(year, "year");
    require(month, "month");
    require(day, "day");
    const Date& d = h->series->dates[checked_index(h->series->dates, i)];
    *year = d.year;
    *month = d.month;
    *day = d.day;
  });
}

rc_status rc_returns_checksum(const rc_returns* h, unsigned long long* out) {
  return guarded([&] {
    require(h, "returns");
    require(out, "out");
    *out = h->series->source_checksum;
  });
}

/* ---- estimation ------------------------------------------------------- */

void rc_fit_options_init(rc_fit_options* opts) {
  if (opts == nullptr) return;
  FitOptions d;
  opts->restarts = d.restarts;
  opts->seed = d.seed;
  opts->tol = d.tol;
  opts->max_evals = d.max_evals;
  opts->threads = d.threads;
}

rc_status rc_fit_model(const rc_returns* returns, const char* model,
                       const char* in_sample_end, const rc_fit_options* opts,
                       rc_fit** out) {
  return guarded([&] {
    require(returns, "returns");
    require(model, "model");
    require(out, "out");
    ModelKind kind = model_kind_from_string(model);
    const ReturnSeries& series = *returns->series;
    SampleSplit sp;
    if (in_sample_end != nullptr) {
      sp = split(series, Date::parse(in_sample_end));
    } else {
      if (series.size() == 0) throw DataError("empty return series");
      sp.in_sample_end = series.dates.back();
      sp.n_in = series.size();
      sp.n_total = series.size();
    }
    FitOptions fopts;
    if (opts != nullptr) {
      fopts.restarts = opts->restarts;
      fopts.seed = opts->seed;
      fopts.tol = opts->tol;
      fopts.max_evals = opts->max_evals;
      fopts.threads = opts->threads;
    }
    std::vector<double> in_sample(series.values.begin(),
                                  series.values.begin() + static_cast<long>(sp.n_in));
    FitResult fr = fit(kind, in_sample, fopts);
    *out = new rc_fit{std::move(fr), returns->series, sp, fopts};
  });
}

void rc_fit_free(rc_fit* h) { delete h; }

const char* rc_fit_model_name(const rc_fit* h) {
  return h == nullptr ? nullptr : to_string(h->fit.kind);
}

int rc_fit_n_params(const rc_fit* h) {
  return h == nullptr ? 0 : static_cast<int>(h->fit.estimates.size());
}

const char* rc_fit_param_name(const rc_fit* h, int i) {
  if (h == nullptr || i < 0 || static_cast<std::size_t>(i) >= h->fit.names.size()) {
    set_error("index out of range");
    return nullptr;
  }
  return h->fit.names[static_cast<std::size_t>(i)].c_str();
}

rc_status rc_fit_estimate(const rc_fit* h, int i, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    *out = h->fit.estimates[checked_index(h->fit.estimates, i)];
  });
}

rc_status rc_fit_std_error(const rc_fit* h, int i, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    *out = h->fit.std_errors[checked_index(h->fit.std_errors, i)];
  });
}

rc_status rc_fit_t_value(const rc_fit* h, int i, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    *out = h->fit.t_values[checked_index(h->fit.t_values, i)];
  });
}

rc_status rc_fit_loglik(const rc_fit* h, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    *out = h->fit.loglik;
  });
}

rc_status rc_fit_aic(const rc_fit* h, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    *out = h->fit.aic;
  });
}

int rc_fit_converged(const rc_fit* h) {
  return h != nullptr && h->fit.converged ? 1 : 0;
}

long rc_fit_n_obs(const rc_fit* h) {
  return h == nullptr ? 0 : static_cast<long>(h->fit.n_obs);
}

long rc_fit_n_regime_probs(const rc_fit* h) {
  if (h == nullptr || h->fit.kind != ModelKind::mrs) return 0;
  return static_cast<long>(h->fit.regime_path.filt.size());
}

rc_status rc_fit_regime_prob(const rc_fit* h, long i, double* out) {
  return guarded([&] {
    require(h, "fit");
    require(out, "out");
    if (h->fit.kind != ModelKind::mrs)
      throw UsageError("regime probabilities exist only for mrs fits");
    *out = h->fit.regime_path.filt[checked_index(h->fit.regime_path.filt, i)][1];
  });
}

/* ---- forecasting ------------------------------------------------------ */

void rc_forecast_options_init(rc_forecast_options* opts) {
  if (opts == nullptr) return;
  ForecastOptions d;
  opts->mc_paths = d.mc_paths;
  opts->seed = d.seed;
  opts->reestimate_every = d.reestimate_every;
  opts->threads = d.threads;
}

rc_status rc_default_horizons(const char* frequency, int* out, int* n_inout) {
  return guarded([&] {
    require(frequency, "frequency");
    require(out, "out");
    require(n_inout, "n_inout");
    std::vector<int> ks = default_horizons(frequency_from_string(frequency));
    if (*n_inout < static_cast<int>(ks.size()))
      throw UsageError("horizon buffer too small");
    for (std::size_t i = 0; i < ks.size(); ++i) out[i] = ks[i];
    *n_inout = static_cast<int>(ks.size());
  });
}

rc_status rc_forecast_run(const rc_fit* fit_h, const int* horizons, int n_horizons,
                          const rc_forecast_options* opts, rc_forecast** out) {
  return guarded([&] {
    require(fit_h, "fit");
    require(horizons, "horizons");
    require(out, "out");
    if (n_horizons < 1) throw UsageError("need at least one horizon");
    std::vector<int> ks(horizons, horizons + n_horizons);
    ForecastOptions fopts;
    if (opts != nullptr) {
      fopts.mc_paths = opts->mc_paths;
      fopts.seed = opts->seed;
      fopts.reestimate_every = opts->reestimate_every;
      fopts.threads = opts->threads;
    }
    if (fopts.reestimate_every > 0) {
      ModelKind kind = fit_h->fit.kind;
      FitOptions refit_opts = fit_h->options;
      fopts.refit = [kind, refit_opts](const std::vector<double>& prefix) {
        return fit(kind, prefix, refit_opts);
      };
    }
    ForecastTable table =
        rolling_forecast(fit_h->fit, *fit_h->series, fit_h->split, ks, fopts);
    *out = new rc_forecast{std::move(table)};
  });
}

rc_status rc_forecast_read_csv(const char* path, rc_forecast** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rc_forecast{read_forecast_csv_file(path)};
  });
}

void rc_forecast_free(rc_forecast* h) { delete h; }

const char* rc_forecast_model(const rc_forecast* h) {
  return h == nullptr ? nullptr : to_string(h->table.model);
}

const char* rc_forecast_frequency(const rc_forecast* h) {
  return h == nullptr ? nullptr : to_string(h->table.frequency);
}

long rc_forecast_n_rows(const rc_forecast* h) {
  return h == nullptr ? 0 : static_cast<long>(h->table.rows.size());
}

rc_status rc_forecast_k(const rc_forecast* h, long i, int* out) {
  return guarded([&] {
    require(h, "forecast");
    require(out, "out");
    *out = h->table.rows[checked_index(h->table.rows, i)].k;
  });
}

rc_status rc_forecast_value(const rc_forecast* h, long i, double* out) {
  return guarded([&] {
    require(h, "forecast");
    require(out, "out");
    *out = h->table.rows[checked_index(h->table.rows, i)].forecast;
  });
}

rc_status rc_forecast_realized(const rc_forecast* h, long i, double* out) {
  return guarded([&] {
    require(h, "forecast");
    require(out, "out");
    *out = h->table.rows[checked_index(h->table.rows, i)].realized;
  });
}

rc_status rc_forecast_origin_date(const rc_forecast* h, long i, int* year,
                                  int* month, int* day) {
  return guarded([&] {
    require(h, "forecast");
    require(year, "year");
    require(month, "month");
    require(day, "day");
    const Date& d = h->table.rows[checked_index(h->table.rows, i)].origin_date;
    *year = d.year;
    *month = d.month;
    *day = d.day;
  });
}

rc_status rc_forecast_filter_k(const rc_forecast* h, int k, rc_forecast** out) {
  return guarded([&] {
    require(h, "forecast");
    require(out, "out");
    ForecastTable sub;
    sub.model = h->table.model;
    sub.frequency = h->table.frequency;
    sub.seed = h->table.seed;
    sub.param_snapshot = h->table.param_snapshot;
    for (const ForecastRow& row : h->table.rows)
      if (row.k == k) sub.rows.push_back(row);
    if (sub.rows.empty())
      throw UsageError("no rows at horizon " + std::to_string(k));
    *out = new rc_forecast{std::move(sub)};
  });
}

rc_status rc_forecast_write_csv(const rc_forecast* h, const char* path,
                                const char* const* comments, int n_comments) {
  return guarded([&] {
    require(h, "forecast");
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_forecast_csv(h->table, os, lines);
    finish_output_stream(os, path);
  });
}

/* ---- evaluation ------------------------------------------------------- */

rc_status rc_evaluate(const rc_forecast* const* tables, int n_tables,
                      rc_evaluation** out) {
  return guarded([&] {
    require(tables, "tables");
    require(out, "out");
    if (n_tables < 1) throw UsageError("need at least one forecast table");
    std::vector<ForecastTable> copies;
    copies.reserve(static_cast<std::size_t>(n_tables));
    for (int i = 0; i < n_tables; ++i) {
      require(tables[i], "forecast table");
      copies.push_back(tables[i]->table);
    }
    *out = new rc_evaluation{evaluate_models(copies)};
  });
}

void rc_evaluation_free(rc_evaluation* h) { delete h; }

int rc_evaluation_n_models(const rc_evaluation* h) {
  return h == nullptr ? 0 : static_cast<int>(h->report.model_names.size());
}

const char* rc_evaluation_model(const rc_evaluation* h, int i) {
  if (h == nullptr || i < 0 ||
      static_cast<std::size_t>(i) >= h->report.model_names.size()) {
    set_error("index out of range");
    return nullptr;
  }
  return h->report.model_names[static_cast<std::size_t>(i)].c_str();
}

long rc_evaluation_n_rows(const rc_evaluation* h) {
  return h == nullptr ? 0 : static_cast<long>(h->report.n_rows);
}

rc_status rc_evaluation_loss(const rc_evaluation* h, int i, const char* criterion,
                             double* value, int* rank) {
  return guarded([&] {
    require(h, "evaluation");
    require(criterion, "criterion");
    require(value, "value");
    require(rank, "rank");
    std::size_t m = checked_index(h->report.model_losses, i);
    const LossValues& lv = h->report.model_losses[m];
    int which;
    if (std::strcmp(criterion, "mse") == 0) {
      which = 0;
      *value = lv.mse;
    } else if (std::strcmp(criterion, "mad") == 0) {
      which = 1;
      *value = lv.mad;
    } else if (std::strcmp(criterion, "qlike") == 0) {
      which = 2;
      *value = lv.qlike;
    } else if (std::strcmp(criterion, "r2log") == 0) {
      which = 3;
      *value = lv.r2log;
    } else {
      throw UsageError(std::string("unknown criterion: ") + criterion +
                       " (expected mse|mad|qlike|r2log)");
    }
    *rank = h->report.ranks[static_cast<std::size_t>(which)][m];
  });
}

rc_status rc_evaluation_n_skipped(const rc_evaluation* h, int i, long* out) {
  return guarded([&] {
    require(h, "evaluation");
    require(out, "out");
    std::size_t m = checked_index(h->report.model_losses, i);
    *out = static_cast<long>(h->report.model_losses[m].n_skipped);
  });
}

rc_status rc_evaluation_sr(const rc_evaluation* h, int i, double* out) {
  return guarded([&] {
    require(h, "evaluation");
    require(out, "out");
    *out = h->report.sr[checked_index(h->report.sr, i)];
  });
}

rc_status rc_evaluation_da(const rc_evaluation* h, int i, int* defined,
                           double* statistic, int* significant) {
  return guarded([&] {
    require(h, "evaluation");
    require(defined, "defined");
    require(statistic, "statistic");
    require(significant, "significant");
    const DaResult& da = h->report.da[checked_index(h->report.da, i)];
    *defined = da.defined ? 1 : 0;
    *statistic = da.statistic;
    *significant = da.significant ? 1 : 0;
  });
}

rc_status rc_evaluation_write_csv(const rc_evaluation* h, const char* path,
                                  const char* const* comments, int n_comments) {
  return guarded([&] {
    require(h, "evaluation");
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_loss_report_csv(h->report, os, lines);
    finish_output_stream(os, path);
  });
}

rc_status rc_evaluation_write_text(const rc_evaluation* h, const char* path,
                                   const char* const* comments, int n_comments) {
  return guarded([&] {
    require(h, "evaluation");
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_comment_lines(os, lines);
    write_loss_report_text(h->report, os);
    finish_output_stream(os, path);
  });
}

/* ---- VaR backtesting -------------------------------------------------- */

rc_status rc_backtest_run(const rc_forecast* table, const rc_fit* fit_h,
                          double alpha, rc_backtest** out) {
  return guarded([&] {
    require(table, "forecast");
    require(fit_h, "fit");
    require(out, "out");
    *out = new rc_backtest{backtest(table->table, fit_h->fit, alpha)};
  });
}

void rc_backtest_free(rc_backtest* h) { delete h; }

const char* rc_backtest_model(const rc_backtest* h) {
  return h == nullptr ? nullptr : to_string(h->result.var.model);
}

long rc_backtest_n_points(const rc_backtest* h) {
  return h == nullptr ? 0 : static_cast<long>(h->result.var.points.size());
}

long rc_backtest_n_violations(const rc_backtest* h) {
  return h == nullptr ? 0 : static_cast<long>(h->result.report.n1);
}

rc_status rc_backtest_alpha(const rc_backtest* h, double* out) {
  return guarded([&] {
    require(h, "backtest");
    require(out, "out");
    *out = h->result.report.alpha;
  });
}

rc_status rc_backtest_stats(const rc_backtest* h, double* lruc, double* lrind,
                            double* lrcc) {
  return guarded([&] {
    require(h, "backtest");
    require(lruc, "lruc");
    require(lrind, "lrind");
    require(lrcc, "lrcc");
    *lruc = h->result.report.lruc;
    *lrind = h->result.report.lrind;
    *lrcc = h->result.report.lrcc;
  });
}

rc_status rc_backtest_rejects(const rc_backtest* h, int* uc, int* ind, int* cc) {
  return guarded([&] {
    require(h, "backtest");
    require(uc, "uc");
    require(ind, "ind");
    require(cc, "cc");
    *uc = h->result.report.reject_uc ? 1 : 0;
    *ind = h->result.report.reject_ind ? 1 : 0;
    *cc = h->result.report.reject_cc ? 1 : 0;
  });
}

rc_status rc_backtest_point(const rc_backtest* h, long i, int* year, int* month,
                            int* day, double* threshold, double* realized_return,
                            int* violation) {
  return guarded([&] {
    require(h, "backtest");
    require(year, "year");
    require(month, "month");
    require(day, "day");
    require(threshold, "threshold");
    require(realized_return, "realized_return");
    require(violation, "violation");
    const VarPoint& pt = h->result.var.points[checked_index(h->result.var.points, i)];
    *year = pt.origin_date.year;
    *month = pt.origin_date.month;
    *day = pt.origin_date.day;
    *threshold = pt.threshold;
    *realized_return = pt.realized_return;
    *violation = pt.violation ? 1 : 0;
  });
}

rc_status rc_backtest_write_var_csv(const rc_backtest* h, const char* path,
                                    const char* const* comments, int n_comments) {
  return guarded([&] {
    require(h, "backtest");
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_var_series_csv(h->result.var, os, lines);
    finish_output_stream(os, path);
  });
}

namespace {

void collect_reports(const rc_backtest* const* hs, int n,
                     std::vector<std::string>& names, std::vector<LrReport>& reports) {
  require(hs, "backtests");
  if (n < 1) throw UsageError("need at least one backtest");
  for (int i = 0; i < n; ++i) {
    require(hs[i], "backtest");
    names.emplace_back(to_string(hs[i]->result.var.model));
    reports.push_back(hs[i]->result.report);
  }
}

}  // namespace

rc_status rc_backtests_write_csv(const rc_backtest* const* hs, int n,
                                 const char* path, const char* const* comments,
                                 int n_comments) {
  return guarded([&] {
    std::vector<std::string> names;
    std::vector<LrReport> reports;
    collect_reports(hs, n, names, reports);
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_lr_reports_csv(names, reports, os, lines);
    finish_output_stream(os, path);
  });
}

rc_status rc_backtests_write_text(const rc_backtest* const* hs, int n,
                                  const char* path, const char* const* comments,
                                  int n_comments) {
  return guarded([&] {
    std::vector<std::string> names;
    std::vector<LrReport> reports;
    collect_reports(hs, n, names, reports);
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_comment_lines(os, lines);
    write_lr_reports_text(names, reports, os);
    finish_output_stream(os, path);
  });
}

/* ---- simulation ------------------------------------------------------- */

rc_status rc_simulate(const char* model, const double* params, int n_params,
                      long n, long burn_in, unsigned long long seed,
                      rc_simulation** out) {
  return guarded([&] {
    require(model, "model");
    require(params, "params");
    require(out, "out");
    if (n < 0 || burn_in < 0) throw UsageError("n and burn_in must be nonnegative");
    ModelKind kind = model_kind_from_string(model);
    int expected = kind == ModelKind::garch ? 5 : kind == ModelKind::mrs ? 12 : 6;
    if (n_params != expected)
      throw UsageError("model " + std::string(model) + " takes " +
                       std::to_string(expected) + " parameters, got " +
                       std::to_string(n_params));
    auto nn = static_cast<std::size_t>(n);
    auto burn = static_cast<std::size_t>(burn_in);
    SimOutput sim;
    switch (kind) {
      case ModelKind::garch:
        sim = simulate_garch(garch_from_flat(params), nn, burn, seed);
        break;
      case ModelKind::gjr:
        sim = simulate_gjr(
            GjrParams{params[0], params[1], params[2], params[3], params[4], params[5]},
            nn, burn, seed);
        break;
      case ModelKind::egarch:
        sim = simulate_egarch(
            EgarchParams{params[0], params[1], params[2], params[3], params[4],
                         params[5]},
            nn, burn, seed);
        break;
      case ModelKind::mrs: {
        MrsParams mp;
        mp.regime[0] = garch_from_flat(params);
        mp.regime[1] = garch_from_flat(params + 5);
        mp.p = params[10];
        mp.q = params[11];
        sim = simulate_mrs(mp, nn, burn, seed);
        break;
      }
    }
    *out = new rc_simulation{std::move(sim), kind};
  });
}

void rc_simulation_free(rc_simulation* h) { delete h; }

long rc_simulation_size(const rc_simulation* h) {
  return h == nullptr ? 0 : static_cast<long>(h->sim.returns.size());
}

rc_status rc_simulation_return(const rc_simulation* h, long i, double* out) {
  return guarded([&] {
    require(h, "simulation");
    require(out, "out");
    *out = h->sim.returns.values[checked_index(h->sim.returns.values, i)];
  });
}

rc_status rc_simulation_variance(const rc_simulation* h, long i, double* out) {
  return guarded([&] {
    require(h, "simulation");
    require(out, "out");
    *out = h->sim.true_variance[checked_index(h->sim.true_variance, i)];
  });
}

rc_status rc_simulation_regime(const rc_simulation* h, long i, int* out) {
  return guarded([&] {
    require(h, "simulation");
    require(out, "out");
    if (h->sim.true_regime.empty()) {
      checked_index(h->sim.returns.values, i);
      *out = -1;
    } else {
      *out = h->sim.true_regime[checked_index(h->sim.true_regime, i)];
    }
  });
}

rc_status rc_simulation_to_returns(const rc_simulation* h, rc_returns** out) {
  return guarded([&] {
    require(h, "simulation");
    require(out, "out");
    *out = new rc_returns{std::make_shared<ReturnSeries>(h->sim.returns)};
  });
}

rc_status rc_simulation_write_prices_csv(const rc_simulation* h, const char* path,
                                         const char* const* comments,
                                         int n_comments) {
  return guarded([&] {
    require(h, "simulation");
    std::vector<std::string> lines = comment_vector(comments, n_comments);
    std::ofstream os = open_output(path);
    write_sim_prices_csv(h->sim, os, lines);
    finish_output_stream(os, path);
  });
}

}  // extern "C"
