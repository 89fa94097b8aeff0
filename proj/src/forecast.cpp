#include "forecast.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <utility>

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "student_t.hpp"

namespace regimecast {

static void check_horizon(int k) {
  if (k < 1) throw UsageError("forecast horizon must be at least 1");
}

static void check_h_next(double h_next) {
  if (!(h_next > 0.0) || !std::isfinite(h_next))
    throw NumericError("one-step variance must be positive and finite");
}

static std::vector<double> linear_multistep(double alpha0, double persistence,
                                            double h_next, int k) {
  std::vector<double> steps(static_cast<std::size_t>(k));
  steps[0] = h_next;
  for (int tau = 1; tau < k; ++tau) {
    steps[tau] = alpha0 + persistence * steps[tau - 1];
    if (!(steps[tau] > 0.0) || !std::isfinite(steps[tau]))
      throw NumericError("variance forecast left (0, inf)");
  }
  return steps;
}

std::vector<double> garch_multistep(const GarchParams& params, double h_next, int k) {
  check_horizon(k);
  check_h_next(h_next);
  if (!(params.alpha0 > 0.0) || params.alpha1 < 0.0 || params.beta < 0.0)
    throw NumericError("variance parameters violate positivity constraints");
  return linear_multistep(params.alpha0, params.alpha1 + params.beta, h_next, k);
}

std::vector<double> gjr_multistep(const GjrParams& params, double h_next, int k) {
  check_horizon(k);
  check_h_next(h_next);
  if (!(params.alpha0 > 0.0) || params.alpha1 < 0.0 || params.xi < 0.0 || params.beta < 0.0)
    throw NumericError("variance parameters violate positivity constraints");
  double persistence = (params.alpha1 + params.xi) / 2.0 + params.beta;
  return linear_multistep(params.alpha0, persistence, h_next, k);
}

EgarchForecast egarch_multistep(const EgarchParams& params, double logh_next, int k,
                                int mc_paths, std::uint64_t seed) {
  check_horizon(k);
  if (mc_paths < 1000) throw UsageError("egarch forecasting needs at least 1000 paths");
  if (!std::isfinite(logh_next)) throw NumericError("log variance must be finite");
  double h1 = std::exp(logh_next);
  if (!(h1 > 0.0) || !std::isfinite(h1))
    throw NumericError("one-step variance must be positive and finite");

  EgarchForecast out;
  out.steps.assign(static_cast<std::size_t>(k), 0.0);
  out.steps[0] = h1;
  out.paths_used = static_cast<std::size_t>(mc_paths);
  if (k == 1) return out;

  const StudentT dist(params.nu);
  const double eabs = abs_moment(dist);
  Rng rng(seed);
  std::vector<double> acc(static_cast<std::size_t>(k - 1), 0.0);
  std::vector<double> path(static_cast<std::size_t>(k - 1), 0.0);
  std::size_t discarded = 0;

  for (int pth = 0; pth < mc_paths; ++pth) {
    double logh = logh_next;
    bool ok = true;
    for (int tau = 1; tau < k; ++tau) {
      double z = sample_one(dist, rng);
      logh = params.alpha0 + params.alpha1 * (std::fabs(z) - eabs) + params.xi * z +
             params.beta * logh;
      double h = std::exp(logh);
      if (!std::isfinite(logh) || !std::isfinite(h)) {
        ok = false;
        break;
      }
      path[static_cast<std::size_t>(tau - 1)] = h;
    }
    if (!ok) {
      ++discarded;
      continue;
    }
    for (int tau = 1; tau < k; ++tau)
      acc[static_cast<std::size_t>(tau - 1)] += path[static_cast<std::size_t>(tau - 1)];
  }

  out.paths_discarded = discarded;
  out.paths_used = static_cast<std::size_t>(mc_paths) - discarded;
  if (static_cast<double>(discarded) > 0.01 * static_cast<double>(mc_paths))
    throw NumericError("more than 1% of simulated variance paths overflowed");
  for (int tau = 1; tau < k; ++tau)
    out.steps[static_cast<std::size_t>(tau)] =
        acc[static_cast<std::size_t>(tau - 1)] / static_cast<double>(out.paths_used);
  return out;
}

MrsForecast mrs_multistep(const MrsParams& params, const MrsOriginState& state, int k) {
  check_horizon(k);
  for (const GarchParams& g : params.regime) {
    if (!(g.alpha0 > 0.0) || g.alpha1 < 0.0 || g.beta < 0.0)
      throw NumericError("regime parameters violate positivity constraints");
  }
  const Mat2 P = transition_matrix(params.p, params.q);
  for (int i = 0; i < 2; ++i) {
    if (!(state.filt[i] >= 0.0 && state.filt[i] <= 1.0))
      throw UsageError("filtered regime probabilities must lie in [0, 1]");
    check_h_next(state.h_next[i]);
  }
  if (std::fabs(state.filt[0] + state.filt[1] - 1.0) > 1e-8)
    throw UsageError("filtered regime probabilities must sum to 1");

  const Vec2 mu = {params.regime[0].delta, params.regime[1].delta};

  MrsForecast out;
  out.steps.reserve(static_cast<std::size_t>(k));
  out.regime_steps.reserve(static_cast<std::size_t>(k));
  out.regime_probs.reserve(static_cast<std::size_t>(k));

  // Same arithmetic as the filter's one-step prediction so a k=1 forecast
  // matches it exactly.
  Vec2 pi = {P[0][0] * state.filt[0] + P[1][0] * state.filt[1],
             P[0][1] * state.filt[0] + P[1][1] * state.filt[1]};
  Vec2 hbar = state.h_next;
  out.regime_probs.push_back(pi);
  out.regime_steps.push_back(hbar);
  out.steps.push_back(pi[0] * hbar[0] + pi[1] * hbar[1]);

  for (int tau = 2; tau <= k; ++tau) {
    Vec2 pi_next = {P[0][0] * pi[0] + P[1][0] * pi[1],
                    P[0][1] * pi[0] + P[1][1] * pi[1]};
    Mat2 cond = conditional_regime_probs(P, pi, pi_next);
    Vec2 hbar_next;
    for (int i = 0; i < 2; ++i) {
      double base = klaassen_recombine(Vec2{cond[0][i], cond[1][i]}, mu, hbar);
      hbar_next[i] = params.regime[i].alpha0 +
                     (params.regime[i].alpha1 + params.regime[i].beta) * base;
      if (!(hbar_next[i] > 0.0) || !std::isfinite(hbar_next[i]))
        throw NumericError("regime variance forecast left (0, inf)");
    }
    pi = pi_next;
    hbar = hbar_next;
    out.regime_probs.push_back(pi);
    out.regime_steps.push_back(hbar);
    out.steps.push_back(pi[0] * hbar[0] + pi[1] * hbar[1]);
  }
  return out;
}

std::vector<int> default_horizons(Frequency f) {
  switch (f) {
    case Frequency::daily: return {1, 5, 10, 22};
    case Frequency::weekly: return {1, 2, 3, 4};
    case Frequency::monthly: return {1};
  }
  throw UsageError("unknown frequency");
}

static double variance_at(const VariancePath& vp, std::size_t t) {
  return t < vp.h.size() ? vp.h[t] : vp.h_next;
}

static MrsOriginState mrs_state_at(const RegimeProbPath& rp, std::size_t origin) {
  MrsOriginState st;
  st.filt = rp.filt[origin];
  st.h_next = origin + 1 < rp.h.size() ? rp.h[origin + 1] : rp.h_next;
  return st;
}

static std::uint64_t snapshot_hash(const FitResult& fit) {
  const char* kind = to_string(fit.kind);
  std::uint64_t h = fnv1a(kind, std::strlen(kind));
  for (double e : fit.estimates) h = fnv1a(&e, sizeof e, h);
  return h;
}

static std::uint64_t origin_seed(std::uint64_t base, std::size_t origin) {
  std::uint64_t o = static_cast<std::uint64_t>(origin);
  return fnv1a(&o, sizeof o, base);
}

namespace {

struct OriginTask {
  std::size_t origin = 0;
  std::size_t row_base = 0;
  int ksup = 0;                // largest admissible horizon at this origin
  const std::vector<int>* ks;  // admissible horizons, ascending
};

struct ModelState {
  GarchParams garch;
  GjrParams gjr;
  EgarchParams egarch;
  MrsParams mrs;
  VariancePath vp;    // single-regime models
  RegimeProbPath rp;  // mrs
};

}  // namespace

static ModelState run_filter(const FitResult& fit, const std::vector<double>& values) {
  ModelState ms;
  switch (fit.kind) {
    case ModelKind::garch:
      ms.garch = fit.garch();
      ms.vp = garch_filter(ms.garch, values, fit.h_init);
      break;
    case ModelKind::gjr:
      ms.gjr = fit.gjr();
      ms.vp = gjr_filter(ms.gjr, values, fit.h_init);
      break;
    case ModelKind::egarch:
      ms.egarch = fit.egarch();
      ms.vp = egarch_filter(ms.egarch, values, std::log(fit.h_init));
      break;
    case ModelKind::mrs:
      ms.mrs = fit.mrs();
      ms.rp = hamilton_filter(ms.mrs, values, fit.h_init).path;
      break;
  }
  return ms;
}

static void forecast_origin(const OriginTask& task, ModelKind kind, const ModelState& ms,
                            const ReturnSeries& returns, const RealizedVolSeries& vol,
                            const ForecastOptions& options, std::vector<ForecastRow>& rows) {
  std::size_t o = task.origin;
  std::vector<double> steps;
  MrsForecast mrsf;
  switch (kind) {
    case ModelKind::garch:
      steps = garch_multistep(ms.garch, variance_at(ms.vp, o + 1), task.ksup);
      break;
    case ModelKind::gjr:
      steps = gjr_multistep(ms.gjr, variance_at(ms.vp, o + 1), task.ksup);
      break;
    case ModelKind::egarch:
      steps = egarch_multistep(ms.egarch, std::log(variance_at(ms.vp, o + 1)), task.ksup,
                               options.mc_paths, origin_seed(options.seed, o))
                  .steps;
      break;
    case ModelKind::mrs:
      mrsf = mrs_multistep(ms.mrs, mrs_state_at(ms.rp, o), task.ksup);
      steps = std::move(mrsf.steps);
      break;
  }

  std::size_t slot = task.row_base;
  for (int k : *task.ks) {
    ForecastRow& row = rows[slot++];
    row.origin_index = o;
    row.origin_date = returns.dates[o];
    row.k = k;
    row.steps.assign(steps.begin(), steps.begin() + k);
    double cum = 0.0;
    for (double s : row.steps) cum += s;
    row.forecast = cum;
    row.realized = realized_k_period(vol, o, k);
    double rr = 0.0;
    for (int tau = 1; tau <= k; ++tau) rr += returns.values[o + static_cast<std::size_t>(tau)];
    row.realized_return = rr;
    if (kind == ModelKind::mrs) {
      row.regime_probs = mrsf.regime_probs[0];
      Vec2 rc = {0.0, 0.0};
      for (int tau = 0; tau < k; ++tau) {
        rc[0] += mrsf.regime_steps[static_cast<std::size_t>(tau)][0];
        rc[1] += mrsf.regime_steps[static_cast<std::size_t>(tau)][1];
      }
      row.regime_cumulative = rc;
    }
  }
}

ForecastTable rolling_forecast(const FitResult& fit, const ReturnSeries& returns,
                               const SampleSplit& split, const std::vector<int>& horizons,
                               const ForecastOptions& options) {
  if (returns.size() != split.n_total)
    throw UsageError("split does not describe this return series");
  if (fit.n_obs != split.n_in)
    throw UsageError("fit was not produced on the in-sample range of this split");
  if (horizons.empty()) throw UsageError("at least one forecast horizon is required");

  std::vector<int> ks = horizons;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 1) throw UsageError("forecast horizon must be at least 1");
  if (static_cast<std::size_t>(ks.back()) > split.n_out())
    throw UsageError("horizon exceeds the out-of-sample length");
  if (options.reestimate_every > 0 && !options.refit)
    throw UsageError("re-estimation requested without a refit callback");

  const RealizedVolSeries vol = to_realized_vol(returns);
  const std::size_t n = split.n_total;
  const std::size_t first_origin = split.n_in - 1;
  const std::size_t last_origin = n - 1 - static_cast<std::size_t>(ks.front());

  // Admissible horizons shrink near the end of the sample; precompute the
  // distinct suffixes so tasks can share them.
  std::vector<std::vector<int>> ks_by_count(ks.size() + 1);
  for (std::size_t c = 1; c <= ks.size(); ++c)
    ks_by_count[c].assign(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(c));

  std::vector<OriginTask> tasks;
  std::size_t row_count = 0;
  for (std::size_t o = first_origin; o <= last_origin; ++o) {
    int room = static_cast<int>(n - 1 - o);
    std::size_t c = static_cast<std::size_t>(
        std::upper_bound(ks.begin(), ks.end(), room) - ks.begin());
    if (c == 0) continue;
    OriginTask t;
    t.origin = o;
    t.row_base = row_count;
    t.ksup = ks_by_count[c].back();
    t.ks = &ks_by_count[c];
    tasks.push_back(t);
    row_count += c;
  }

  ForecastTable table;
  table.model = fit.kind;
  table.frequency = returns.frequency;
  table.seed = options.seed;
  table.param_snapshot = snapshot_hash(fit);
  table.rows.resize(row_count);

  const std::size_t block =
      options.reestimate_every > 0 ? static_cast<std::size_t>(options.reestimate_every)
                                   : tasks.size();
  FitResult current = fit;

  for (std::size_t bstart = 0; bstart < tasks.size(); bstart += block) {
    if (bstart > 0 && options.reestimate_every > 0) {
      std::size_t o = tasks[bstart].origin;
      std::vector<double> prefix(returns.values.begin(),
                                 returns.values.begin() + static_cast<std::ptrdiff_t>(o + 1));
      current = options.refit(prefix);
      if (current.kind != fit.kind)
        throw UsageError("refit callback changed the model kind");
    }
    const ModelState ms = run_filter(current, returns.values);
    const std::size_t bend = std::min(bstart + block, tasks.size());

    int nthreads = resolve_thread_count(options.threads);
    if (nthreads <= 1 || bend - bstart <= 1) {
      for (std::size_t i = bstart; i < bend; ++i)
        forecast_origin(tasks[i], fit.kind, ms, returns, vol, options, table.rows);
    } else {
      std::atomic<std::size_t> cursor{bstart};
      std::mutex err_mutex;
      std::exception_ptr first_error;
      auto worker = [&]() {
        for (;;) {
          std::size_t i = cursor.fetch_add(1);
          if (i >= bend) return;
          try {
            forecast_origin(tasks[i], fit.kind, ms, returns, vol, options, table.rows);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(nthreads),
                                               bend - bstart);
      for (std::size_t i = 0; i < want; ++i) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
      if (first_error) std::rethrow_exception(first_error);
    }
  }
  return table;
}

void write_forecast_csv(const ForecastTable& table, std::ostream& os,
                        const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) os << "# " << c << '\n';
  os << "model,frequency,origin_date,k,forecast,realized,seed\n";
  const char* model = to_string(table.model);
  const char* freq = to_string(table.frequency);
  for (const ForecastRow& row : table.rows) {
    os << model << ',' << freq << ',' << row.origin_date.str() << ',' << row.k << ','
       << format_double(row.forecast) << ',' << format_double(row.realized) << ','
       << table.seed << '\n';
  }
}

static double parse_double_field(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw DataError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

static long parse_int_field(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw DataError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

static std::uint64_t parse_u64_field(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
    throw DataError("line " + std::to_string(line) + ": bad seed '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

ForecastTable read_forecast_csv(std::istream& is) {
  CsvTable csv = read_csv(is, "forecast table");
  const char* names[] = {"model", "frequency", "origin_date", "k",
                         "forecast", "realized", "seed"};
  std::size_t col[7];
  for (int i = 0; i < 7; ++i) {
    col[i] = csv.column(names[i]);
    if (col[i] == static_cast<std::size_t>(-1))
      throw DataError(std::string("missing column '") + names[i] + "'");
  }
  if (csv.rows.empty()) throw DataError("forecast table has no rows");

  ForecastTable table;
  std::set<std::pair<std::string, int>> seen;
  bool first = true;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::vector<std::string>& row = csv.rows[r];
    std::size_t line = csv.row_numbers[r];
    if (row.size() != csv.header.size())
      throw DataError("line " + std::to_string(line) + ": wrong field count");

    ModelKind model = model_kind_from_string(row[col[0]]);
    Frequency freq = frequency_from_string(row[col[1]]);
    std::uint64_t seed = parse_u64_field(row[col[6]], line);
    if (first) {
      table.model = model;
      table.frequency = freq;
      table.seed = seed;
      first = false;
    } else if (model != table.model || freq != table.frequency || seed != table.seed) {
      throw DataError("line " + std::to_string(line) +
                      ": mixed model, frequency, or seed in one table");
    }

    ForecastRow fr;
    // Only the serialized columns survive a round trip; mark the rest unset.
    fr.realized_return = std::numeric_limits<double>::quiet_NaN();
    fr.origin_date = Date::parse(row[col[2]]);
    long k = parse_int_field(row[col[3]], line);
    if (k < 1 || k > 100000)
      throw DataError("line " + std::to_string(line) + ": horizon out of range");
    fr.k = static_cast<int>(k);
    fr.forecast = parse_double_field(row[col[4]], line);
    fr.realized = parse_double_field(row[col[5]], line);
    if (!(fr.forecast > 0.0) || !std::isfinite(fr.forecast))
      throw DataError("line " + std::to_string(line) + ": forecast must be positive");
    if (!(fr.realized >= 0.0) || !std::isfinite(fr.realized))
      throw DataError("line " + std::to_string(line) + ": realized must be nonnegative");
    if (!seen.insert({row[col[2]], fr.k}).second)
      throw DataError("line " + std::to_string(line) + ": duplicate (origin, horizon) row");
    table.rows.push_back(std::move(fr));
  }
  return table;
}

ForecastTable read_forecast_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return read_forecast_csv(in);
}

}  // namespace regimecast
