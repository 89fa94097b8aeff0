#include "evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "csv.hpp"
#include "errors.hpp"

namespace regimecast {

static void check_table_rows(const ForecastTable& table) {
  if (table.rows.empty()) throw UsageError("empty forecast table");
  for (const ForecastRow& row : table.rows) {
    if (!(row.forecast > 0.0) || !std::isfinite(row.forecast))
      throw NumericError("forecasts must be positive and finite");
    if (!(row.realized >= 0.0) || !std::isfinite(row.realized))
      throw NumericError("realized variances must be nonnegative and finite");
  }
}

LossValues losses(const ForecastTable& table) {
  check_table_rows(table);
  LossValues out;
  out.n_rows = table.rows.size();
  double se = 0.0, ad = 0.0, ql = 0.0, rl = 0.0;
  std::size_t used = 0;
  for (const ForecastRow& row : table.rows) {
    double err = row.realized - row.forecast;
    se += err * err;
    ad += std::fabs(err);
    if (row.realized > 0.0) {
      ql += std::log(row.forecast) + row.realized / row.forecast;
      double lr = std::log(row.realized / row.forecast);
      rl += lr * lr;
      ++used;
    } else {
      ++out.n_skipped;
    }
  }
  double n = static_cast<double>(out.n_rows);
  out.mse = se / n;
  out.mad = ad / n;
  if (used > 0) {
    out.qlike = ql / static_cast<double>(used);
    out.r2log = rl / static_cast<double>(used);
  } else {
    out.qlike = std::numeric_limits<double>::quiet_NaN();
    out.r2log = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

static int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

namespace {

struct DirectionCounts {
  std::size_t n = 0;
  std::size_t matches = 0;
  std::size_t actual_up = 0;
  std::size_t pred_up = 0;
};

}  // namespace

// Direction events compare each row against the previous row at the same
// horizon; a table mixing horizons contributes pairs from every horizon.
static DirectionCounts direction_counts(const ForecastTable& table) {
  check_table_rows(table);
  if (table.rows.size() < 2)
    throw UsageError("need at least 2 rows for direction statistics");
  std::map<int, const ForecastRow*> last;
  DirectionCounts dc;
  for (const ForecastRow& row : table.rows) {
    auto [it, fresh] = last.try_emplace(row.k, &row);
    if (!fresh) {
      double prev = it->second->realized;
      int actual = sign_of(row.realized - prev);
      int pred = sign_of(row.forecast - prev);
      ++dc.n;
      if (actual == pred) ++dc.matches;
      if (actual > 0) ++dc.actual_up;
      if (pred > 0) ++dc.pred_up;
      it->second = &row;
    }
  }
  if (dc.n == 0) throw UsageError("no consecutive rows share a horizon");
  return dc;
}

double success_ratio(const ForecastTable& table) {
  DirectionCounts dc = direction_counts(table);
  return static_cast<double>(dc.matches) / static_cast<double>(dc.n);
}

DaResult da_test(const ForecastTable& table) {
  if (table.rows.size() < 10)
    throw UsageError("need at least 10 rows for the directional accuracy test");
  DirectionCounts dc = direction_counts(table);
  double n = static_cast<double>(dc.n);
  double sr = static_cast<double>(dc.matches) / n;
  double pa = static_cast<double>(dc.actual_up) / n;
  double pp = static_cast<double>(dc.pred_up) / n;

  DaResult out;
  if (pa <= 0.0 || pa >= 1.0 || pp <= 0.0 || pp >= 1.0) return out;

  double sri = pa * pp + (1.0 - pa) * (1.0 - pp);
  double v_sr = sri * (1.0 - sri) / n;
  double v_sri = ((2.0 * pp - 1.0) * (2.0 * pp - 1.0) * pa * (1.0 - pa) +
                  (2.0 * pa - 1.0) * (2.0 * pa - 1.0) * pp * (1.0 - pp) +
                  4.0 * pa * pp * (1.0 - pa) * (1.0 - pp) / n) /
                 n;
  double vdiff = v_sr - v_sri;
  if (!(vdiff > 0.0)) return out;

  out.defined = true;
  out.statistic = (sr - sri) / std::sqrt(vdiff);
  out.significant = std::fabs(out.statistic) > 1.96;
  return out;
}

std::vector<int> competition_ranks(const std::vector<double>& values) {
  std::vector<double> vals = values;
  for (double& v : vals)
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
  std::vector<int> ranks(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    int below = 0;
    for (std::size_t j = 0; j < vals.size(); ++j)
      if (vals[j] < vals[i]) ++below;
    ranks[i] = 1 + below;
  }
  return ranks;
}

std::array<std::vector<int>, 4> rank_models(const std::vector<LossValues>& per_model) {
  if (per_model.size() < 2) throw UsageError("ranking needs at least 2 models");
  for (const LossValues& lv : per_model)
    if (lv.n_rows != per_model.front().n_rows)
      throw UsageError("loss sets describe different row counts");
  std::array<std::vector<double>, 4> cols;
  for (const LossValues& lv : per_model) {
    cols[0].push_back(lv.mse);
    cols[1].push_back(lv.mad);
    cols[2].push_back(lv.qlike);
    cols[3].push_back(lv.r2log);
  }
  std::array<std::vector<int>, 4> out;
  for (int c = 0; c < 4; ++c) out[c] = competition_ranks(cols[c]);
  return out;
}

LossReport evaluate_models(const std::vector<ForecastTable>& tables) {
  if (tables.empty()) throw UsageError("no forecast tables to evaluate");
  const ForecastTable& first = tables.front();
  if (first.rows.size() < 10)
    throw UsageError("need at least 10 rows to evaluate");
  for (const ForecastTable& t : tables) {
    if (t.rows.size() != first.rows.size())
      throw UsageError("forecast tables do not cover identical rows");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const ForecastRow& a = first.rows[i];
      const ForecastRow& b = t.rows[i];
      if (a.k != b.k || a.origin_date != b.origin_date || a.realized != b.realized)
        throw UsageError("forecast tables do not cover identical rows");
    }
  }

  LossReport report;
  report.n_rows = first.rows.size();
  for (const ForecastTable& t : tables) {
    report.model_names.push_back(to_string(t.model));
    report.model_losses.push_back(losses(t));
    report.sr.push_back(success_ratio(t));
    report.da.push_back(da_test(t));
  }
  if (tables.size() >= 2) {
    report.ranks = rank_models(report.model_losses);
  } else {
    report.ranks = {std::vector<int>{1}, std::vector<int>{1}, std::vector<int>{1},
                    std::vector<int>{1}};
  }
  return report;
}

void write_loss_report_csv(const LossReport& report, std::ostream& os,
                           const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) os << "# " << c << '\n';
  os << "model,n_rows,n_skipped,mse,mse_rank,mad,mad_rank,qlike,qlike_rank,"
        "r2log,r2log_rank,sr,da,da_significant\n";
  for (std::size_t i = 0; i < report.model_names.size(); ++i) {
    const LossValues& lv = report.model_losses[i];
    os << report.model_names[i] << ',' << lv.n_rows << ',' << lv.n_skipped << ','
       << format_double(lv.mse) << ',' << report.ranks[0][i] << ','
       << format_double(lv.mad) << ',' << report.ranks[1][i] << ','
       << format_double(lv.qlike) << ',' << report.ranks[2][i] << ','
       << format_double(lv.r2log) << ',' << report.ranks[3][i] << ','
       << format_double(report.sr[i]) << ',';
    if (report.da[i].defined)
      os << format_double(report.da[i].statistic) << ','
         << (report.da[i].significant ? 1 : 0);
    else
      os << ",";
    os << '\n';
  }
}

void write_loss_report_text(const LossReport& report, std::ostream& os) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-8s %6s  %-12s %-2s  %-12s %-2s  %-12s %-2s  %-12s %-2s  %-7s %s\n",
                "model", "n", "MSE", "rk", "MAD", "rk", "QLIKE", "rk", "R2LOG", "rk", "SR",
                "DA");
  os << buf;
  for (std::size_t i = 0; i < report.model_names.size(); ++i) {
    const LossValues& lv = report.model_losses[i];
    char da[32];
    if (report.da[i].defined)
      std::snprintf(da, sizeof da, "%.3f%s", report.da[i].statistic,
                    report.da[i].significant ? "*" : "");
    else
      std::snprintf(da, sizeof da, "n/a");
    std::snprintf(buf, sizeof buf,
                  "%-8s %6zu  %-12.6g %-2d  %-12.6g %-2d  %-12.6g %-2d  %-12.6g %-2d  %-7.4f %s\n",
                  report.model_names[i].c_str(), lv.n_rows, lv.mse, report.ranks[0][i],
                  lv.mad, report.ranks[1][i], lv.qlike, report.ranks[2][i], lv.r2log,
                  report.ranks[3][i], report.sr[i], da);
    os << buf;
  }
}

}  // namespace regimecast
