#ifndef REGIMECAST_H
#define REGIMECAST_H

/* C interface to the regimecast volatility toolkit. All functions returning
 * rc_status report failure through the code and a thread-local message
 * (rc_last_error). Handles are opaque; every rc_*_free accepts NULL. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RC_OK = 0,
  RC_ERR_USAGE = 1,   /* bad arguments or configuration */
  RC_ERR_DATA = 2,    /* unreadable or malformed input */
  RC_ERR_NUMERIC = 3  /* numerical failure */
} rc_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* rc_last_error(void);
const char* rc_version(void);

typedef struct rc_returns rc_returns;
typedef struct rc_fit rc_fit;
typedef struct rc_forecast rc_forecast;
typedef struct rc_evaluation rc_evaluation;
typedef struct rc_backtest rc_backtest;
typedef struct rc_simulation rc_simulation;

/* ---- return series ---------------------------------------------------- */

/* Loads a price CSV (header row, '#' comments skipped) and converts it to
 * percent log returns. frequency is daily|weekly|monthly. */
rc_status rc_returns_load_csv(const char* path, const char* frequency,
                              const char* date_column, const char* price_column,
                              rc_returns** out);
void rc_returns_free(rc_returns* h);
long rc_returns_size(const rc_returns* h); /* 0 on NULL */
rc_status rc_returns_value(const rc_returns* h, long i, double* out);
rc_status rc_returns_date(const rc_returns* h, long i, int* year, int* month,
                          int* day);
rc_status rc_returns_checksum(const rc_returns* h, unsigned long long* out);

/* ---- estimation ------------------------------------------------------- */

typedef struct {
  int restarts;
  unsigned long long seed;
  double tol;
  int max_evals;
  int threads; /* 0: REGIMECAST_THREADS env var, else hardware count */
} rc_fit_options;

void rc_fit_options_init(rc_fit_options* opts);

/* Fits model garch|gjr|egarch|mrs by maximum likelihood on the observations
 * up to and including in_sample_end (YYYY-MM-DD; NULL fits the full series).
 * The boundary date must exist in the series. */
rc_status rc_fit_model(const rc_returns* returns, const char* model,
                       const char* in_sample_end, const rc_fit_options* opts,
                       rc_fit** out);
void rc_fit_free(rc_fit* h);
const char* rc_fit_model_name(const rc_fit* h); /* NULL on NULL handle */
int rc_fit_n_params(const rc_fit* h);
const char* rc_fit_param_name(const rc_fit* h, int i);
rc_status rc_fit_estimate(const rc_fit* h, int i, double* out);
rc_status rc_fit_std_error(const rc_fit* h, int i, double* out); /* NaN if unusable */
rc_status rc_fit_t_value(const rc_fit* h, int i, double* out);
rc_status rc_fit_loglik(const rc_fit* h, double* out);
rc_status rc_fit_aic(const rc_fit* h, double* out);
int rc_fit_converged(const rc_fit* h);
long rc_fit_n_obs(const rc_fit* h);
/* Filtered probability of the high-variance regime per in-sample observation;
 * length 0 for single-regime models. */
long rc_fit_n_regime_probs(const rc_fit* h);
rc_status rc_fit_regime_prob(const rc_fit* h, long i, double* out);

/* ---- forecasting ------------------------------------------------------ */

typedef struct {
  int mc_paths;         /* EGARCH Monte Carlo paths per origin */
  unsigned long long seed;
  int reestimate_every; /* 0: parameters fixed at the in-sample estimates */
  int threads;
} rc_forecast_options;

void rc_forecast_options_init(rc_forecast_options* opts);

/* Preset horizons for a frequency (daily {1,5,10,22}, weekly {1,2,3,4},
 * monthly {1}). On entry *n_inout is the capacity of out; on exit the count. */
rc_status rc_default_horizons(const char* frequency, int* out, int* n_inout);

/* Rolling out-of-sample forecasts of cumulative k-period variance at each
 * requested horizon, using the split the model was fitted on. */
rc_status rc_forecast_run(const rc_fit* fit, const int* horizons, int n_horizons,
                          const rc_forecast_options* opts, rc_forecast** out);
/* Reads a table written by rc_forecast_write_csv. Realized returns are not
 * serialized, so a reloaded table cannot feed rc_backtest_run. */
rc_status rc_forecast_read_csv(const char* path, rc_forecast** out);
void rc_forecast_free(rc_forecast* h);
const char* rc_forecast_model(const rc_forecast* h);
const char* rc_forecast_frequency(const rc_forecast* h);
long rc_forecast_n_rows(const rc_forecast* h);
rc_status rc_forecast_k(const rc_forecast* h, long i, int* out);
rc_status rc_forecast_value(const rc_forecast* h, long i, double* out);
rc_status rc_forecast_realized(const rc_forecast* h, long i, double* out);
rc_status rc_forecast_origin_date(const rc_forecast* h, long i, int* year,
                                  int* month, int* day);
/* New table holding only the rows at horizon k. */
rc_status rc_forecast_filter_k(const rc_forecast* h, int k, rc_forecast** out);
rc_status rc_forecast_write_csv(const rc_forecast* h, const char* path,
                                const char* const* comments, int n_comments);

/* ---- evaluation ------------------------------------------------------- */

/* Joint evaluation of models over identical rows (same origins, horizons,
 * and realized values). */
rc_status rc_evaluate(const rc_forecast* const* tables, int n_tables,
                      rc_evaluation** out);
void rc_evaluation_free(rc_evaluation* h);
int rc_evaluation_n_models(const rc_evaluation* h);
const char* rc_evaluation_model(const rc_evaluation* h, int i);
long rc_evaluation_n_rows(const rc_evaluation* h);
/* criterion is mse|mad|qlike|r2log; rank 1 is best (competition ranking). */
rc_status rc_evaluation_loss(const rc_evaluation* h, int i, const char* criterion,
                             double* value, int* rank);
rc_status rc_evaluation_n_skipped(const rc_evaluation* h, int i, long* out);
rc_status rc_evaluation_sr(const rc_evaluation* h, int i, double* out);
/* defined=0 when a direction marginal is degenerate; significant at 5%. */
rc_status rc_evaluation_da(const rc_evaluation* h, int i, int* defined,
                           double* statistic, int* significant);
rc_status rc_evaluation_write_csv(const rc_evaluation* h, const char* path,
                                  const char* const* comments, int n_comments);
rc_status rc_evaluation_write_text(const rc_evaluation* h, const char* path,
                                   const char* const* comments, int n_comments);

/* ---- VaR backtesting -------------------------------------------------- */

/* Runs the alpha-level VaR backtest on a single-horizon table produced by
 * rc_forecast_run with the same fitted model. */
rc_status rc_backtest_run(const rc_forecast* table, const rc_fit* fit,
                          double alpha, rc_backtest** out);
void rc_backtest_free(rc_backtest* h);
const char* rc_backtest_model(const rc_backtest* h);
long rc_backtest_n_points(const rc_backtest* h);
long rc_backtest_n_violations(const rc_backtest* h);
rc_status rc_backtest_alpha(const rc_backtest* h, double* out);
rc_status rc_backtest_stats(const rc_backtest* h, double* lruc, double* lrind,
                            double* lrcc);
rc_status rc_backtest_rejects(const rc_backtest* h, int* uc, int* ind, int* cc);
rc_status rc_backtest_point(const rc_backtest* h, long i, int* year, int* month,
                            int* day, double* threshold, double* realized_return,
                            int* violation);
rc_status rc_backtest_write_var_csv(const rc_backtest* h, const char* path,
                                    const char* const* comments, int n_comments);
/* Side-by-side LRuc/LRind/LRcc panel for several backtests at one alpha. */
rc_status rc_backtests_write_csv(const rc_backtest* const* hs, int n,
                                 const char* path, const char* const* comments,
                                 int n_comments);
rc_status rc_backtests_write_text(const rc_backtest* const* hs, int n,
                                  const char* path, const char* const* comments,
                                  int n_comments);

/* ---- simulation ------------------------------------------------------- */

/* Simulates n observations after burn_in discarded ones. params is the flat
 * parameter vector in estimation order:
 *   garch:       delta, alpha0, alpha1, beta, nu            (5)
 *   gjr, egarch: delta, alpha0, alpha1, xi, beta, nu        (6)
 *   mrs:         regime-1 delta..nu, regime-2 delta..nu, p, q (12) */
rc_status rc_simulate(const char* model, const double* params, int n_params,
                      long n, long burn_in, unsigned long long seed,
                      rc_simulation** out);
void rc_simulation_free(rc_simulation* h);
long rc_simulation_size(const rc_simulation* h);
rc_status rc_simulation_return(const rc_simulation* h, long i, double* out);
rc_status rc_simulation_variance(const rc_simulation* h, long i, double* out);
/* Realized regime (0 or 1) for mrs; -1 for single-regime models. */
rc_status rc_simulation_regime(const rc_simulation* h, long i, int* out);
/* Wraps the simulated returns as a series usable by rc_fit_model. */
rc_status rc_simulation_to_returns(const rc_simulation* h, rc_returns** out);
/* Base-100 price path in the CSV format rc_returns_load_csv reads. */
rc_status rc_simulation_write_prices_csv(const rc_simulation* h, const char* path,
                                         const char* const* comments,
                                         int n_comments);

#ifdef __cplusplus
}
#endif

#endif /* REGIMECAST_H */
