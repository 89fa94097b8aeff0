#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "estimate.hpp"
#include "garch.hpp"
#include "market_data.hpp"
#include "mrs.hpp"

namespace regimecast {

// Multi-step variance forecasts. Step tau = 1 conditions on information at the
// forecast origin; cumulative k-step forecasts are plain sums of the per-step
// values, summed in step order.

// steps[0] = h_next, steps[tau] = alpha0 + (alpha1 + beta) * steps[tau - 1].
std::vector<double> garch_multistep(const GarchParams& params, double h_next, int k);

// Same recursion with effective persistence (alpha1 + xi)/2 + beta; the
// positive-shock branch fires with probability one half under symmetric
// innovations.
std::vector<double> gjr_multistep(const GjrParams& params, double h_next, int k);

struct EgarchForecast {
  std::vector<double> steps;
  std::size_t paths_used = 0;
  std::size_t paths_discarded = 0;
};

// Monte Carlo: simulate innovation paths, roll the log-variance recursion,
// average h per step. Step 1 is exp(logh_next) with no randomness. Paths that
// overflow exp are discarded and counted; more than 1% discarded is an error.
EgarchForecast egarch_multistep(const EgarchParams& params, double logh_next, int k,
                                int mc_paths, std::uint64_t seed);

// Filter state at a forecast origin t: filtered regime probabilities given
// info through t and the per-regime variances for t+1.
struct MrsOriginState {
  Vec2 filt{};
  Vec2 h_next{};
};

struct MrsForecast {
  std::vector<double> steps;         // sum_i regime_probs[tau][i] * regime_steps[tau][i]
  std::vector<Vec2> regime_steps;    // per-regime variance forecasts
  std::vector<Vec2> regime_probs;    // Pr(s_{t+tau} = i | info at origin)
};

// Regime probabilities advance through the transition matrix; each regime's
// lagged variance is recombined across source regimes (Klaassen) before the
// per-regime recursion h = alpha0 + (alpha1 + beta) * recombined.
MrsForecast mrs_multistep(const MrsParams& params, const MrsOriginState& state, int k);

struct ForecastRow {
  std::size_t origin_index = 0;  // index into the return series
  Date origin_date;
  int k = 0;
  double forecast = 0.0;         // cumulative variance, sum of steps
  double realized = 0.0;         // sum of future squared returns over (t, t+k]
  double realized_return = 0.0;  // sum of future returns over (t, t+k]; NaN when read from CSV
  std::vector<double> steps;
  Vec2 regime_probs{};       // MRS only: Pr(s_{t+1} = i | info at origin)
  Vec2 regime_cumulative{};  // MRS only: per-regime cumulative variance
};

struct ForecastTable {
  ModelKind model = ModelKind::garch;
  Frequency frequency = Frequency::daily;
  std::uint64_t seed = 0;
  std::uint64_t param_snapshot = 0;  // hash of the parameter estimates used
  std::vector<ForecastRow> rows;
};

struct ForecastOptions {
  int mc_paths = 10000;  // EGARCH Monte Carlo paths per origin
  std::uint64_t seed = 1;
  int reestimate_every = 0;  // 0 = parameters fixed at the in-sample estimates
  int threads = 0;           // 0 = resolve from environment / hardware
  // Required when reestimate_every > 0: refit on the given data prefix.
  std::function<FitResult(const std::vector<double>&)> refit;
};

// Rolling-origin out-of-sample forecasts: origins run from the last in-sample
// observation forward with stride 1; a row is emitted for every (origin, k)
// whose realized window lies inside the sample. Rows are ordered by origin,
// then horizon.
ForecastTable rolling_forecast(const FitResult& fit, const ReturnSeries& returns,
                               const SampleSplit& split, const std::vector<int>& horizons,
                               const ForecastOptions& options = {});

// Reporting horizon presets: daily {1,5,10,22}, weekly {1,2,3,4}, monthly {1}.
std::vector<int> default_horizons(Frequency f);

// CSV with columns (model, frequency, origin_date, k, forecast, realized,
// seed). Doubles round-trip bit-exactly; per-step components and regime
// details are in-memory only.
void write_forecast_csv(const ForecastTable& table, std::ostream& os,
                        const std::vector<std::string>& comment_lines = {});
ForecastTable read_forecast_csv(std::istream& is);
ForecastTable read_forecast_csv_file(const std::string& path);

}  // namespace regimecast
