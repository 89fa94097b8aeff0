#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "forecast.hpp"

namespace regimecast {

// Statistical loss functions over a forecast table. QLIKE and R2LOG skip rows
// with zero realized variance (ln 0 is undefined); the skip count is reported.
struct LossValues {
  double mse = 0.0;
  double mad = 0.0;
  double qlike = 0.0;
  double r2log = 0.0;
  std::size_t n_rows = 0;
  std::size_t n_skipped = 0;  // zero-realized rows excluded from qlike/r2log
};

LossValues losses(const ForecastTable& table);

// Fraction of rows whose forecast moves in the same direction as the realized
// series, both measured against the previous realized value within the same
// horizon. Zero changes match only when both changes are zero.
double success_ratio(const ForecastTable& table);

struct DaResult {
  bool defined = false;      // false when a direction marginal is degenerate
  double statistic = 0.0;
  bool significant = false;  // |statistic| > 1.96, two-sided 5%
};

// Pesaran-Timmermann directional accuracy test on the same direction events
// as success_ratio.
DaResult da_test(const ForecastTable& table);

// Competition ranking: rank 1 is the smallest value, ties share the smaller
// rank and the next rank is skipped.
std::vector<int> competition_ranks(const std::vector<double>& values);

// Per-criterion ranks (mse, mad, qlike, r2log) across models. All loss sets
// must describe the same number of rows.
std::array<std::vector<int>, 4> rank_models(const std::vector<LossValues>& per_model);

struct LossReport {
  std::vector<std::string> model_names;
  std::vector<LossValues> model_losses;
  std::vector<double> sr;
  std::vector<DaResult> da;
  std::array<std::vector<int>, 4> ranks;  // mse, mad, qlike, r2log
  std::size_t n_rows = 0;
};

// Joint evaluation of several models over identical rows (same origins,
// horizons, and realized values).
LossReport evaluate_models(const std::vector<ForecastTable>& tables);

void write_loss_report_csv(const LossReport& report, std::ostream& os,
                           const std::vector<std::string>& comment_lines = {});
void write_loss_report_text(const LossReport& report, std::ostream& os);

}  // namespace regimecast
