// Command-line front end for the regimecast shared library. Everything goes
// through the C API in regimecast.h; this file owns flag parsing, file
// naming, provenance headers, and the human-readable report tables.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regimecast.h"

namespace {

struct CliError {
  int code;            // 1 usage, 2 data, 3 numeric
  std::string message;
};

struct Options {
  std::string input;
  std::string frequency = "daily";
  std::string date_column = "date";
  std::string price_column = "price";
  std::string in_sample_end;
  std::string models = "garch,gjr,egarch,mrs";
  std::string horizons;
  std::string tables;
  double alpha = 0.05;
  unsigned long long seed = 1;
  int restarts = 5;
  int mc_paths = 10000;
  int reestimate = 0;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string sim_model = "garch";
  std::string sim_params;
  long sim_n = 2000;
  long sim_burn = 1000;
  bool recover = false;
};

struct Context {
  Options opt;
  std::string command;
  std::uint64_t config_hash = 0;
  unsigned long long input_checksum = 0;
  bool have_checksum = false;
  std::vector<std::string> written;
};

// RAII wrapper so stage failures cannot leak C handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    std::swap(p, o.p);
    return *this;
  }
  ~Handle() { Free(p); }
  T** slot() { return &p; }
  operator T*() const { return p; }
};

using ReturnsH = Handle<rc_returns, rc_returns_free>;
using FitH = Handle<rc_fit, rc_fit_free>;
using ForecastH = Handle<rc_forecast, rc_forecast_free>;
using EvaluationH = Handle<rc_evaluation, rc_evaluation_free>;
using BacktestH = Handle<rc_backtest, rc_backtest_free>;
using SimulationH = Handle<rc_simulation, rc_simulation_free>;

void check(rc_status st, const std::string& stage) {
  if (st != RC_OK) throw CliError{static_cast<int>(st), stage + ": " + rc_last_error()};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> parse_horizons(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split_list(s)) {
    std::size_t pos = 0;
    int k = 0;
    try {
      k = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw CliError{1, "bad horizon: " + tok};
    }
    if (pos != tok.size() || k < 1) throw CliError{1, "bad horizon: " + tok};
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_params(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split_list(s)) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw CliError{1, "bad parameter value: " + tok};
    }
    if (pos != tok.size()) throw CliError{1, "bad parameter value: " + tok};
    out.push_back(v);
  }
  return out;
}

std::string fmt(double v, const char* spec = "%.10g") {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_text(double v, const char* spec = "%12.6g") {
  if (std::isnan(v)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%12s", "n/a");
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const char* stars(double t) {
  if (std::isnan(t)) return "";
  double a = std::fabs(t);
  if (a > 2.576) return "***";
  if (a > 1.96) return "**";
  if (a > 1.645) return "*";
  return "";
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t hash_config(const Options& o, const std::string& command) {
  std::string canon;
  canon += "command=" + command + "\n";
  canon += "alpha=" + fmt(o.alpha, "%.17g") + "\n";
  canon += "date-column=" + o.date_column + "\n";
  canon += "format=" + o.format + "\n";
  canon += "frequency=" + o.frequency + "\n";
  canon += "horizons=" + o.horizons + "\n";
  canon += "in-sample-end=" + o.in_sample_end + "\n";
  canon += "input=" + o.input + "\n";
  canon += "mc-paths=" + std::to_string(o.mc_paths) + "\n";
  canon += "models=" + o.models + "\n";
  canon += "price-column=" + o.price_column + "\n";
  canon += "recover=" + std::to_string(o.recover ? 1 : 0) + "\n";
  canon += "reestimate=" + std::to_string(o.reestimate) + "\n";
  canon += "restarts=" + std::to_string(o.restarts) + "\n";
  canon += "seed=" + std::to_string(o.seed) + "\n";
  canon += "sim-burn-in=" + std::to_string(o.sim_burn) + "\n";
  canon += "sim-model=" + o.sim_model + "\n";
  canon += "sim-n=" + std::to_string(o.sim_n) + "\n";
  canon += "sim-params=" + o.sim_params + "\n";
  canon += "tables=" + o.tables + "\n";
  return fnv1a(canon);
}

std::vector<std::string> provenance(const Context& ctx) {
  std::vector<std::string> lines;
  lines.push_back(std::string("regimecast ") + rc_version());
  lines.push_back("command: " + ctx.command);
  lines.push_back("config_hash: " + hex64(ctx.config_hash));
  if (ctx.have_checksum)
    lines.push_back("input_checksum: " + hex64(ctx.input_checksum));
  lines.push_back("seed: " + std::to_string(ctx.opt.seed));
  return lines;
}

std::vector<const char*> c_lines(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const std::string& s : v) out.push_back(s.c_str());
  return out;
}

std::string out_path(Context& ctx, const std::string& name) {
  std::filesystem::path p = std::filesystem::path(ctx.opt.out_dir) / name;
  return p.string();
}

// Registers the file for cleanup-on-failure before it is created.
std::string claim_output(Context& ctx, const std::string& name) {
  std::string path = out_path(ctx, name);
  ctx.written.push_back(path);
  return path;
}

void write_own_file(Context& ctx, const std::string& name, const std::string& body) {
  std::string path = claim_output(ctx, name);
  std::ofstream os(path);
  if (!os.good()) throw CliError{2, "cannot open output file: " + path};
  for (const std::string& line : provenance(ctx)) os << "# " << line << "\n";
  os << body;
  os.flush();
  if (!os.good()) throw CliError{2, "write failed: " + path};
}

std::string ext(const Context& ctx) { return ctx.opt.format == "text" ? "txt" : "csv"; }

/* ---- stages ----------------------------------------------------------- */

ReturnsH load_returns(Context& ctx) {
  if (ctx.opt.input.empty()) throw CliError{1, "missing --input"};
  ReturnsH rt;
  check(rc_returns_load_csv(ctx.opt.input.c_str(), ctx.opt.frequency.c_str(),
                            ctx.opt.date_column.c_str(), ctx.opt.price_column.c_str(),
                            rt.slot()),
        "load (" + ctx.opt.input + ")");
  check(rc_returns_checksum(rt, &ctx.input_checksum), "load");
  ctx.have_checksum = true;
  return rt;
}

std::vector<std::string> model_list(const Context& ctx) {
  std::vector<std::string> models = split_list(ctx.opt.models);
  if (models.empty()) throw CliError{1, "empty --models list"};
  std::vector<std::string> unique;
  for (const std::string& m : models)
    if (std::find(unique.begin(), unique.end(), m) == unique.end()) unique.push_back(m);
  return unique;
}

std::vector<int> horizon_list(const Context& ctx) {
  if (!ctx.opt.horizons.empty()) return parse_horizons(ctx.opt.horizons);
  int buf[16];
  int n = 16;
  check(rc_default_horizons(ctx.opt.frequency.c_str(), buf, &n), "horizons");
  return std::vector<int>(buf, buf + n);
}

std::vector<FitH> fit_models(Context& ctx, const ReturnsH& rt,
                             const std::vector<std::string>& models) {
  rc_fit_options fopts;
  rc_fit_options_init(&fopts);
  fopts.restarts = ctx.opt.restarts;
  fopts.seed = ctx.opt.seed;
  const char* boundary =
      ctx.opt.in_sample_end.empty() ? nullptr : ctx.opt.in_sample_end.c_str();
  std::vector<FitH> fits;
  for (const std::string& m : models) {
    FitH fit;
    check(rc_fit_model(rt, m.c_str(), boundary, &fopts, fit.slot()), "fit (" + m + ")");
    fits.push_back(std::move(fit));
  }
  return fits;
}

void write_fit_tables(Context& ctx, const std::vector<FitH>& fits) {
  bool text = ctx.opt.format == "text";
  for (const FitH& fit : fits) {
    std::string model = rc_fit_model_name(fit);
    int np = rc_fit_n_params(fit);
    double loglik = 0.0, aic = 0.0;
    check(rc_fit_loglik(fit, &loglik), "fit table");
    check(rc_fit_aic(fit, &aic), "fit table");
    std::string body;
    if (text) {
      char head[96];
      std::snprintf(head, sizeof head, "%-10s %12s %12s %10s\n", "parameter",
                    "estimate", "std_error", "t_value");
      body += head;
    } else {
      body += "model,parameter,estimate,std_error,t_value,stars\n";
    }
    for (int i = 0; i < np; ++i) {
      double est = 0.0, se = 0.0, tv = 0.0;
      check(rc_fit_estimate(fit, i, &est), "fit table");
      check(rc_fit_std_error(fit, i, &se), "fit table");
      check(rc_fit_t_value(fit, i, &tv), "fit table");
      const char* name = rc_fit_param_name(fit, i);
      if (text) {
        char line[160];
        std::snprintf(line, sizeof line, "%-10s %s %s %s %s\n", name,
                      fmt_text(est).c_str(), fmt_text(se).c_str(),
                      fmt_text(tv, "%10.3f").c_str(), stars(tv));
        body += line;
      } else {
        body += model + "," + name + "," + fmt(est) + "," + fmt(se) + "," + fmt(tv) +
                "," + stars(tv) + "\n";
      }
    }
    if (text) {
      char foot[160];
      std::snprintf(foot, sizeof foot,
                    "\nn_obs: %ld  loglik: %.6f  aic: %.6f  converged: %s\n",
                    rc_fit_n_obs(fit), loglik, aic,
                    rc_fit_converged(fit) ? "yes" : "no");
      body += foot;
    }
    write_own_file(ctx, ctx.opt.frequency + "_fit_" + model + "." + ext(ctx), body);
  }

  // Model comparison summary with a competition ranking on AIC.
  std::vector<double> aics;
  for (const FitH& fit : fits) {
    double aic = 0.0;
    check(rc_fit_aic(fit, &aic), "fit summary");
    aics.push_back(aic);
  }
  std::string body;
  bool text_fmt = ctx.opt.format == "text";
  if (text_fmt) {
    char head[96];
    std::snprintf(head, sizeof head, "%-8s %8s %8s %14s %14s %5s %10s\n", "model",
                  "params", "n_obs", "loglik", "aic", "rank", "converged");
    body += head;
  } else {
    body += "model,n_params,n_obs,loglik,aic,aic_rank,converged\n";
  }
  for (std::size_t i = 0; i < fits.size(); ++i) {
    int rank = 1;
    for (double other : aics)
      if (other < aics[i]) ++rank;
    double loglik = 0.0;
    check(rc_fit_loglik(fits[i], &loglik), "fit summary");
    std::string model = rc_fit_model_name(fits[i]);
    if (text_fmt) {
      char line[192];
      std::snprintf(line, sizeof line, "%-8s %8d %8ld %14.4f %14.4f %5d %10s\n",
                    model.c_str(), rc_fit_n_params(fits[i]), rc_fit_n_obs(fits[i]),
                    loglik, aics[i], rank, rc_fit_converged(fits[i]) ? "yes" : "no");
      body += line;
    } else {
      body += model + "," + std::to_string(rc_fit_n_params(fits[i])) + "," +
              std::to_string(rc_fit_n_obs(fits[i])) + "," + fmt(loglik) + "," +
              fmt(aics[i]) + "," + std::to_string(rank) + "," +
              (rc_fit_converged(fits[i]) ? "1" : "0") + "\n";
    }
  }
  write_own_file(ctx, ctx.opt.frequency + "_model_summary." + ext(ctx), body);
}

std::vector<ForecastH> forecast_models(Context& ctx, const std::vector<FitH>& fits,
                                       const std::vector<int>& horizons) {
  rc_forecast_options opts;
  rc_forecast_options_init(&opts);
  opts.mc_paths = ctx.opt.mc_paths;
  opts.seed = ctx.opt.seed;
  opts.reestimate_every = ctx.opt.reestimate;
  std::vector<ForecastH> tables;
  for (const FitH& fit : fits) {
    std::string model = rc_fit_model_name(fit);
    ForecastH table;
    check(rc_forecast_run(fit, horizons.data(), static_cast<int>(horizons.size()),
                          &opts, table.slot()),
          "forecast (" + model + ")");
    tables.push_back(std::move(table));
  }
  return tables;
}

void write_forecast_files(Context& ctx, const std::vector<ForecastH>& tables) {
  std::vector<std::string> lines = provenance(ctx);
  std::vector<const char*> comments = c_lines(lines);
  for (const ForecastH& table : tables) {
    std::string model = rc_forecast_model(table);
    std::string path =
        claim_output(ctx, ctx.opt.frequency + "_forecast_" + model + ".csv");
    check(rc_forecast_write_csv(table, path.c_str(), comments.data(),
                                static_cast<int>(comments.size())),
          "forecast (" + model + ")");
  }
}

std::vector<int> table_horizons(const ForecastH& table) {
  std::vector<int> ks;
  long n = rc_forecast_n_rows(table);
  for (long i = 0; i < n; ++i) {
    int k = 0;
    check(rc_forecast_k(table, i, &k), "evaluate");
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

void evaluate_panels(Context& ctx, const std::vector<ForecastH>& tables,
                     const std::vector<int>& horizons, const std::string& frequency) {
  std::vector<std::string> lines = provenance(ctx);
  std::vector<const char*> comments = c_lines(lines);
  for (int k : horizons) {
    std::vector<ForecastH> slices;
    std::vector<const rc_forecast*> raw;
    for (const ForecastH& table : tables) {
      ForecastH slice;
      check(rc_forecast_filter_k(table, k, slice.slot()),
            "evaluate (k=" + std::to_string(k) + ")");
      raw.push_back(slice);
      slices.push_back(std::move(slice));
    }
    EvaluationH ev;
    check(rc_evaluate(raw.data(), static_cast<int>(raw.size()), ev.slot()),
          "evaluate (k=" + std::to_string(k) + ")");
    std::string name = frequency + "_eval_k" + std::to_string(k) + "." + ext(ctx);
    std::string path = claim_output(ctx, name);
    rc_status st = ctx.opt.format == "text"
                       ? rc_evaluation_write_text(ev, path.c_str(), comments.data(),
                                                  static_cast<int>(comments.size()))
                       : rc_evaluation_write_csv(ev, path.c_str(), comments.data(),
                                                 static_cast<int>(comments.size()));
    check(st, "evaluate (k=" + std::to_string(k) + ")");
  }
}

void backtest_panels(Context& ctx, const std::vector<ForecastH>& tables,
                     const std::vector<FitH>& fits, const std::vector<int>& horizons) {
  std::vector<std::string> lines = provenance(ctx);
  std::vector<const char*> comments = c_lines(lines);
  for (int k : horizons) {
    std::vector<BacktestH> bts;
    std::vector<const rc_backtest*> raw;
    for (std::size_t m = 0; m < tables.size(); ++m) {
      std::string model = rc_forecast_model(tables[m]);
      std::string stage = "backtest (" + model + ", k=" + std::to_string(k) + ")";
      ForecastH slice;
      check(rc_forecast_filter_k(tables[m], k, slice.slot()), stage);
      BacktestH bt;
      check(rc_backtest_run(slice, fits[m], ctx.opt.alpha, bt.slot()), stage);
      std::string series_name = ctx.opt.frequency + "_var_series_" + model + "_k" +
                                std::to_string(k) + ".csv";
      std::string series_path = claim_output(ctx, series_name);
      check(rc_backtest_write_var_csv(bt, series_path.c_str(), comments.data(),
                                      static_cast<int>(comments.size())),
            stage);
      raw.push_back(bt);
      bts.push_back(std::move(bt));
    }
    std::string stage = "backtest (k=" + std::to_string(k) + ")";
    std::string name =
        ctx.opt.frequency + "_var_k" + std::to_string(k) + "." + ext(ctx);
    std::string path = claim_output(ctx, name);
    rc_status st =
        ctx.opt.format == "text"
            ? rc_backtests_write_text(raw.data(), static_cast<int>(raw.size()),
                                      path.c_str(), comments.data(),
                                      static_cast<int>(comments.size()))
            : rc_backtests_write_csv(raw.data(), static_cast<int>(raw.size()),
                                     path.c_str(), comments.data(),
                                     static_cast<int>(comments.size()));
    check(st, stage);
  }
}

void write_returns_series(Context& ctx, const ReturnsH& rt) {
  long n = rc_returns_size(rt);
  std::string body = "date,return\n";
  for (long i = 0; i < n; ++i) {
    int y = 0, m = 0, d = 0;
    double v = 0.0;
    check(rc_returns_date(rt, i, &y, &m, &d), "returns series");
    check(rc_returns_value(rt, i, &v), "returns series");
    char line[80];
    std::snprintf(line, sizeof line, "%04d-%02d-%02d,%s\n", y, m, d,
                  fmt(v, "%.17g").c_str());
    body += line;
  }
  write_own_file(ctx, ctx.opt.frequency + "_returns.csv", body);
}

void write_regime_probs(Context& ctx, const ReturnsH& rt, const std::vector<FitH>& fits) {
  for (const FitH& fit : fits) {
    if (std::string(rc_fit_model_name(fit)) != "mrs") continue;
    long n = rc_fit_n_regime_probs(fit);
    std::string body = "date,prob_high_variance\n";
    for (long i = 0; i < n; ++i) {
      int y = 0, m = 0, d = 0;
      double pr = 0.0;
      check(rc_returns_date(rt, i, &y, &m, &d), "regime probabilities");
      check(rc_fit_regime_prob(fit, i, &pr), "regime probabilities");
      char line[64];
      std::snprintf(line, sizeof line, "%04d-%02d-%02d,%s\n", y, m, d,
                    fmt(pr, "%.17g").c_str());
      body += line;
    }
    write_own_file(ctx, ctx.opt.frequency + "_regime_prob.csv", body);
  }
}

void run_simulate(Context& ctx) {
  if (ctx.opt.sim_params.empty()) throw CliError{1, "missing --params"};
  std::vector<double> params = parse_params(ctx.opt.sim_params);
  SimulationH sim;
  check(rc_simulate(ctx.opt.sim_model.c_str(), params.data(),
                    static_cast<int>(params.size()), ctx.opt.sim_n, ctx.opt.sim_burn,
                    ctx.opt.seed, sim.slot()),
        "simulate (" + ctx.opt.sim_model + ")");
  std::vector<std::string> lines = provenance(ctx);
  std::vector<const char*> comments = c_lines(lines);
  std::string prices = claim_output(ctx, "sim_prices_" + ctx.opt.sim_model + ".csv");
  check(rc_simulation_write_prices_csv(sim, prices.c_str(), comments.data(),
                                       static_cast<int>(comments.size())),
        "simulate (" + ctx.opt.sim_model + ")");
  if (!ctx.opt.recover) return;

  ReturnsH rt;
  check(rc_simulation_to_returns(sim, rt.slot()), "recovery");
  rc_fit_options fopts;
  rc_fit_options_init(&fopts);
  fopts.restarts = ctx.opt.restarts;
  fopts.seed = ctx.opt.seed;
  FitH fit;
  check(rc_fit_model(rt, ctx.opt.sim_model.c_str(), nullptr, &fopts, fit.slot()),
        "recovery fit (" + ctx.opt.sim_model + ")");
  int np = rc_fit_n_params(fit);
  bool text = ctx.opt.format == "text";
  std::string body;
  if (text) {
    char head[96];
    std::snprintf(head, sizeof head, "%-10s %12s %12s %12s %12s\n", "parameter",
                  "truth", "estimate", "std_error", "abs_err/se");
    body += head;
  } else {
    body += "parameter,truth,estimate,std_error,abs_err_over_se\n";
  }
  for (int i = 0; i < np; ++i) {
    double est = 0.0, se = 0.0;
    check(rc_fit_estimate(fit, i, &est), "recovery");
    check(rc_fit_std_error(fit, i, &se), "recovery");
    double truth = params[static_cast<std::size_t>(i)];
    double ratio = se > 0.0 ? std::fabs(est - truth) / se :
                              std::numeric_limits<double>::quiet_NaN();
    const char* name = rc_fit_param_name(fit, i);
    if (text) {
      char line[192];
      std::snprintf(line, sizeof line, "%-10s %s %s %s %s\n", name,
                    fmt_text(truth).c_str(), fmt_text(est).c_str(),
                    fmt_text(se).c_str(), fmt_text(ratio).c_str());
      body += line;
    } else {
      body += std::string(name) + "," + fmt(truth) + "," + fmt(est) + "," + fmt(se) +
              "," + fmt(ratio) + "\n";
    }
  }
  if (ctx.opt.sim_model == "mrs") {
    long n = rc_fit_n_regime_probs(fit);
    long hits = 0;
    for (long i = 0; i < n; ++i) {
      double pr = 0.0;
      int truth_regime = 0;
      check(rc_fit_regime_prob(fit, i, &pr), "recovery");
      check(rc_simulation_regime(sim, i, &truth_regime), "recovery");
      if ((pr > 0.5 ? 1 : 0) == truth_regime) ++hits;
    }
    double acc = n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    if (text) {
      body += "\nregime classification accuracy: " + fmt(acc, "%.4f") + "\n";
    } else {
      body += "regime_accuracy,," + fmt(acc) + ",,\n";
    }
  }
  write_own_file(ctx, "sim_recovery_" + ctx.opt.sim_model + "." + ext(ctx), body);
}

void run_evaluate_from_files(Context& ctx) {
  std::vector<std::string> paths = split_list(ctx.opt.tables);
  std::vector<ForecastH> tables;
  for (const std::string& p : paths) {
    ForecastH table;
    check(rc_forecast_read_csv(p.c_str(), table.slot()), "read (" + p + ")");
    tables.push_back(std::move(table));
  }
  std::string frequency = rc_forecast_frequency(tables.front());
  evaluate_panels(ctx, tables, table_horizons(tables.front()), frequency);
}

void run_command(Context& ctx) {
  const std::string& cmd = ctx.command;
  if (cmd == "simulate") {
    run_simulate(ctx);
    return;
  }
  if (cmd == "evaluate" && !ctx.opt.tables.empty()) {
    run_evaluate_from_files(ctx);
    return;
  }
  if (cmd != "fit" && ctx.opt.in_sample_end.empty())
    throw CliError{1, "missing --in-sample-end"};

  ReturnsH rt = load_returns(ctx);
  std::vector<std::string> models = model_list(ctx);
  std::vector<FitH> fits = fit_models(ctx, rt, models);
  if (cmd == "fit") {
    write_fit_tables(ctx, fits);
    return;
  }
  std::vector<int> horizons = horizon_list(ctx);
  std::vector<ForecastH> tables = forecast_models(ctx, fits, horizons);
  if (cmd == "forecast") {
    write_forecast_files(ctx, tables);
    return;
  }
  if (cmd == "evaluate") {
    evaluate_panels(ctx, tables, horizons, ctx.opt.frequency);
    return;
  }
  if (cmd == "backtest") {
    backtest_panels(ctx, tables, fits, horizons);
    return;
  }
  // reproduce: the full bundle.
  write_fit_tables(ctx, fits);
  write_forecast_files(ctx, tables);
  evaluate_panels(ctx, tables, horizons, ctx.opt.frequency);
  backtest_panels(ctx, tables, fits, horizons);
  write_returns_series(ctx, rt);
  write_regime_probs(ctx, rt, fits);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching volatility forecasting toolkit"};
  app.set_version_flag("--version", rc_version());
  app.set_config("--config", "", "Flat key=value config file; flags win");
  app.require_subcommand(1);

  Options opt;
  app.add_option("--input", opt.input, "Price CSV file");
  app.add_option("--frequency", opt.frequency, "daily|weekly|monthly")
      ->check(CLI::IsMember({"daily", "weekly", "monthly"}));
  app.add_option("--date-column", opt.date_column, "Date column name");
  app.add_option("--price-column", opt.price_column, "Price column name");
  app.add_option("--in-sample-end", opt.in_sample_end,
                 "Last in-sample date (YYYY-MM-DD)");
  app.add_option("--models", opt.models, "Comma list of garch,gjr,egarch,mrs");
  app.add_option("--horizons", opt.horizons,
                 "Comma list of horizons (default: frequency preset)");
  app.add_option("--tables", opt.tables,
                 "Comma list of forecast CSVs to evaluate directly");
  app.add_option("--alpha", opt.alpha, "VaR tail level");
  app.add_option("--seed", opt.seed, "Seed for estimation, forecasting, simulation");
  app.add_option("--restarts", opt.restarts, "Optimizer restarts");
  app.add_option("--mc-paths", opt.mc_paths, "EGARCH Monte Carlo paths");
  app.add_option("--reestimate", opt.reestimate,
                 "Refit every N out-of-sample observations (0 = never)");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"csv", "text"}));
  app.add_option("--model", opt.sim_model, "Simulation model");
  app.add_option("--params", opt.sim_params, "Comma list of generator parameters");
  app.add_option("--n", opt.sim_n, "Simulated observations");
  app.add_option("--burn-in", opt.sim_burn, "Discarded warm-up observations");
  app.add_flag("--recover", opt.recover, "Fit the simulated data and report recovery");

  for (const char* name : {"fit", "forecast", "evaluate", "backtest", "simulate",
                           "reproduce"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Context ctx;
  ctx.opt = opt;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.config_hash = hash_config(opt, ctx.command);
  try {
    if (!(opt.alpha > 0.0 && opt.alpha <= 0.5))
      throw CliError{1, "alpha must lie in (0, 0.5]"};
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw CliError{2, "cannot create output directory: " + opt.out_dir};
    run_command(ctx);
  } catch (const CliError& err) {
    for (const std::string& path : ctx.written) std::remove(path.c_str());
    std::fprintf(stderr, "regimecast %s: %s\n", ctx.command.c_str(),
                 err.message.c_str());
    return err.code;
  }
  return 0;
}
