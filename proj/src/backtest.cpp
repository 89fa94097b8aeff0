#include "backtest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "csv.hpp"
#include "errors.hpp"

namespace regimecast {

static void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 0.5))
    throw UsageError("VaR tail probability must lie in (0, 0.5]");
}

double var_forecast(double mean, int k, double variance, double alpha, const StudentT& d) {
  if (k < 1) throw UsageError("VaR horizon must be at least 1");
  check_alpha(alpha);
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw NumericError("VaR variance must be positive and finite");
  return mean * static_cast<double>(k) + quantile(d, alpha) * std::sqrt(variance);
}

double mixture_var_quantile(const MrsParams& params, const Vec2& weights,
                            const Vec2& cum_variance, int k, double alpha) {
  if (k < 1) throw UsageError("VaR horizon must be at least 1");
  check_alpha(alpha);
  for (int i = 0; i < 2; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw DataError("mixture weights must be nonnegative");
    if (!(cum_variance[i] > 0.0) || !std::isfinite(cum_variance[i]))
      throw NumericError("per-regime variances must be positive and finite");
  }
  if (std::fabs(weights[0] + weights[1] - 1.0) > 1e-6)
    throw DataError("mixture weights must sum to 1");

  const StudentT d0(params.regime[0].nu);
  const StudentT d1(params.regime[1].nu);
  const double m0 = params.regime[0].delta * static_cast<double>(k);
  const double m1 = params.regime[1].delta * static_cast<double>(k);
  const double s0 = std::sqrt(cum_variance[0]);
  const double s1 = std::sqrt(cum_variance[1]);

  auto mix_cdf = [&](double x) {
    return weights[0] * cdf(d0, (x - m0) / s0) + weights[1] * cdf(d1, (x - m1) / s1);
  };

  // The mixture quantile lies between the component quantiles at the same
  // tail probability.
  double q0 = m0 + quantile(d0, alpha) * s0;
  double q1 = m1 + quantile(d1, alpha) * s1;
  double lo = q0 < q1 ? q0 : q1;
  double hi = q0 < q1 ? q1 : q0;
  if (lo == hi) return lo;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mix_cdf(mid) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

static double xlogy(double count, double p) {
  if (count == 0.0) return 0.0;
  return count * std::log(p);
}

double lruc(std::size_t n, std::size_t n1, double alpha) {
  if (n < 1) throw UsageError("LRuc needs at least one observation");
  if (n1 > n) throw UsageError("violation count exceeds sample size");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw UsageError("coverage level must lie in (0, 1)");
  double nd = static_cast<double>(n);
  double v = static_cast<double>(n1);
  double pihat = v / nd;
  double ll_null = xlogy(nd - v, 1.0 - alpha) + xlogy(v, alpha);
  double ll_alt = xlogy(nd - v, 1.0 - pihat) + xlogy(v, pihat);
  double stat = -2.0 * (ll_null - ll_alt);
  return stat < 0.0 ? 0.0 : stat;
}

double lrind(const std::vector<int>& violations) {
  if (violations.size() < 2)
    throw UsageError("LRind needs at least two observations");
  double n00 = 0.0, n01 = 0.0, n10 = 0.0, n11 = 0.0;
  for (std::size_t t = 1; t < violations.size(); ++t) {
    int a = violations[t - 1] ? 1 : 0;
    int b = violations[t] ? 1 : 0;
    if (a == 0 && b == 0) ++n00;
    if (a == 0 && b == 1) ++n01;
    if (a == 1 && b == 0) ++n10;
    if (a == 1 && b == 1) ++n11;
  }
  double pi0 = n00 + n01 > 0.0 ? n01 / (n00 + n01) : 0.0;
  double pi1 = n10 + n11 > 0.0 ? n11 / (n10 + n11) : 0.0;
  double pi = (n01 + n11) / static_cast<double>(violations.size() - 1);
  double ll_null = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi);
  double ll_alt = xlogy(n00, 1.0 - pi0) + xlogy(n01, pi0) + xlogy(n10, 1.0 - pi1) +
                  xlogy(n11, pi1);
  double stat = -2.0 * (ll_null - ll_alt);
  return stat < 0.0 ? 0.0 : stat;
}

double lrcc(const std::vector<int>& violations, double alpha) {
  std::size_t n1 = 0;
  for (int v : violations) n1 += v ? 1u : 0u;
  return lruc(violations.size(), n1, alpha) + lrind(violations);
}

static LrReport lr_report(const std::vector<int>& violations, double alpha) {
  LrReport r;
  r.alpha = alpha;
  r.n = violations.size();
  for (int v : violations) r.n1 += v ? 1u : 0u;
  for (std::size_t t = 1; t < violations.size(); ++t) {
    int a = violations[t - 1] ? 1 : 0;
    int b = violations[t] ? 1 : 0;
    if (a == 0 && b == 0) ++r.n00;
    if (a == 0 && b == 1) ++r.n01;
    if (a == 1 && b == 0) ++r.n10;
    if (a == 1 && b == 1) ++r.n11;
  }
  r.lruc = lruc(r.n, r.n1, alpha);
  r.lrind = lrind(violations);
  r.lrcc = r.lruc + r.lrind;
  r.reject_uc = r.lruc > 3.841;
  r.reject_ind = r.lrind > 3.841;
  r.reject_cc = r.lrcc > 5.991;
  return r;
}

BacktestResult backtest(const ForecastTable& table, const FitResult& fit, double alpha) {
  check_alpha(alpha);
  if (table.rows.empty()) throw UsageError("empty forecast table");
  if (fit.kind != table.model)
    throw UsageError("fit and forecast table describe different models");
  for (const ForecastRow& row : table.rows) {
    if (row.k != table.rows.front().k)
      throw UsageError("backtest expects a single-horizon table");
    if (!std::isfinite(row.realized_return))
      throw DataError("table lacks realized returns; rerun the forecast stage");
  }

  BacktestResult out;
  out.var.model = table.model;
  out.var.alpha = alpha;
  out.var.points.reserve(table.rows.size());

  std::vector<int> violations;
  violations.reserve(table.rows.size());

  if (table.model == ModelKind::mrs) {
    MrsParams mp = fit.mrs();
    for (const ForecastRow& row : table.rows) {
      VarPoint pt;
      pt.origin_date = row.origin_date;
      pt.k = row.k;
      pt.threshold = mixture_var_quantile(mp, row.regime_probs, row.regime_cumulative,
                                          row.k, alpha);
      pt.realized_return = row.realized_return;
      pt.violation = pt.realized_return < pt.threshold;
      violations.push_back(pt.violation ? 1 : 0);
      out.var.points.push_back(pt);
    }
  } else {
    double delta = 0.0, nu = 0.0;
    switch (table.model) {
      case ModelKind::garch:
        delta = fit.garch().delta;
        nu = fit.garch().nu;
        break;
      case ModelKind::gjr:
        delta = fit.gjr().delta;
        nu = fit.gjr().nu;
        break;
      case ModelKind::egarch:
        delta = fit.egarch().delta;
        nu = fit.egarch().nu;
        break;
      case ModelKind::mrs:
        break;
    }
    StudentT d(nu);
    for (const ForecastRow& row : table.rows) {
      VarPoint pt;
      pt.origin_date = row.origin_date;
      pt.k = row.k;
      pt.threshold = var_forecast(delta, row.k, row.forecast, alpha, d);
      pt.realized_return = row.realized_return;
      pt.violation = pt.realized_return < pt.threshold;
      violations.push_back(pt.violation ? 1 : 0);
      out.var.points.push_back(pt);
    }
  }

  out.report = lr_report(violations, alpha);
  return out;
}

void write_var_series_csv(const VarSeries& series, std::ostream& os,
                          const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) os << "# " << c << '\n';
  os << "model,origin_date,k,alpha,var,realized_return,violation\n";
  const char* model = to_string(series.model);
  for (const VarPoint& pt : series.points) {
    os << model << ',' << pt.origin_date.str() << ',' << pt.k << ','
       << format_double(series.alpha) << ',' << format_double(pt.threshold) << ','
       << format_double(pt.realized_return) << ',' << (pt.violation ? 1 : 0) << '\n';
  }
}

void write_lr_reports_csv(const std::vector<std::string>& model_names,
                          const std::vector<LrReport>& reports, std::ostream& os,
                          const std::vector<std::string>& comment_lines) {
  if (model_names.size() != reports.size())
    throw UsageError("model name and report counts differ");
  for (const std::string& c : comment_lines) os << "# " << c << '\n';
  os << "model,alpha,n,n1,lruc,lruc_reject,lrind,lrind_reject,lrcc,lrcc_reject,"
        "n00,n01,n10,n11\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LrReport& r = reports[i];
    os << model_names[i] << ',' << format_double(r.alpha) << ',' << r.n << ',' << r.n1
       << ',' << format_double(r.lruc) << ',' << (r.reject_uc ? 1 : 0) << ','
       << format_double(r.lrind) << ',' << (r.reject_ind ? 1 : 0) << ','
       << format_double(r.lrcc) << ',' << (r.reject_cc ? 1 : 0) << ',' << r.n00 << ','
       << r.n01 << ',' << r.n10 << ',' << r.n11 << '\n';
  }
}

void write_lr_reports_text(const std::vector<std::string>& model_names,
                           const std::vector<LrReport>& reports, std::ostream& os) {
  if (model_names.size() != reports.size())
    throw UsageError("model name and report counts differ");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %6s %5s  %-10s %-10s %-10s\n", "model", "n", "n1",
                "LRuc", "LRind", "LRcc");
  os << buf;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LrReport& r = reports[i];
    char uc[24], ind[24], cc[24];
    std::snprintf(uc, sizeof uc, "%.3f%s", r.lruc, r.reject_uc ? "**" : "");
    std::snprintf(ind, sizeof ind, "%.3f%s", r.lrind, r.reject_ind ? "**" : "");
    std::snprintf(cc, sizeof cc, "%.3f%s", r.lrcc, r.reject_cc ? "**" : "");
    std::snprintf(buf, sizeof buf, "%-8s %6zu %5zu  %-10s %-10s %-10s\n",
                  model_names[i].c_str(), r.n, r.n1, uc, ind, cc);
    os << buf;
  }
}

}  // namespace regimecast
