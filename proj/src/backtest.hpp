#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "forecast.hpp"
#include "mrs.hpp"
#include "student_t.hpp"

namespace regimecast {

// Long-position, left-tail VaR: thresholds are percent-return levels and a
// violation means the realized k-period return fell below the threshold.

// VaR = mean*k + quantile(d, alpha) * sqrt(variance).
double var_forecast(double mean, int k, double variance, double alpha, const StudentT& d);

// Quantile of the two-component predictive mixture sum_i w_i * T_i with
// per-regime means k*delta_i and cumulative variances, solved by bisection.
double mixture_var_quantile(const MrsParams& params, const Vec2& weights,
                            const Vec2& cum_variance, int k, double alpha);

struct VarPoint {
  Date origin_date;
  int k = 0;
  double threshold = 0.0;
  double realized_return = 0.0;
  bool violation = false;
};

struct VarSeries {
  ModelKind model = ModelKind::garch;
  double alpha = 0.05;
  std::vector<VarPoint> points;
};

struct LrReport {
  double alpha = 0.05;
  std::size_t n = 0;
  std::size_t n1 = 0;  // violations
  std::size_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;
  double lruc = 0.0;
  double lrind = 0.0;
  double lrcc = 0.0;
  bool reject_uc = false;   // LRuc  > 3.841 (chi2(1), 5%)
  bool reject_ind = false;  // LRind > 3.841
  bool reject_cc = false;   // LRcc  > 5.991 (chi2(2), 5%)
};

// Kupiec unconditional coverage statistic; 0*ln0 = 0 keeps n1 in {0, n} finite.
double lruc(std::size_t n, std::size_t n1, double alpha);

// Christoffersen independence statistic against a first-order Markov
// alternative; degenerate transition cells use the 0*ln0 = 0 convention.
double lrind(const std::vector<int>& violations);

// Conditional coverage: LRuc + LRind.
double lrcc(const std::vector<int>& violations, double alpha);

struct BacktestResult {
  VarSeries var;
  LrReport report;
};

// Builds the VaR series for a single-horizon forecast table using the fitted
// innovation distribution (MRS: regime-probability-weighted mixture quantile)
// and runs all three likelihood-ratio tests on the violation sequence.
BacktestResult backtest(const ForecastTable& table, const FitResult& fit, double alpha);

void write_var_series_csv(const VarSeries& series, std::ostream& os,
                          const std::vector<std::string>& comment_lines = {});
void write_lr_reports_csv(const std::vector<std::string>& model_names,
                          const std::vector<LrReport>& reports, std::ostream& os,
                          const std::vector<std::string>& comment_lines = {});
// Table-style text panel: model rows, LRuc/LRind/LRcc columns, ** at 5%.
void write_lr_reports_text(const std::vector<std::string>& model_names,
                           const std::vector<LrReport>& reports, std::ostream& os);

}  // namespace regimecast
