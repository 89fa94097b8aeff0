#include "market_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "csv.hpp"
#include "errors.hpp"

namespace regimecast {

const char* to_string(Frequency f) {
  switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::weekly: return "weekly";
    case Frequency::monthly: return "monthly";
  }
  return "unknown";
}

Frequency frequency_from_string(const std::string& s) {
  if (s == "daily") return Frequency::daily;
  if (s == "weekly") return Frequency::weekly;
  if (s == "monthly") return Frequency::monthly;
  throw UsageError("unknown frequency: " + s + " (expected daily|weekly|monthly)");
}

Date Date::parse(const std::string& iso) {
  // YYYY-MM-DD, all digits required
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    throw DataError("bad date (expected YYYY-MM-DD): '" + iso + "'");
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(iso[i])))
      throw DataError("bad date (expected YYYY-MM-DD): '" + iso + "'");
  Date d;
  d.year = std::atoi(iso.substr(0, 4).c_str());
  d.month = std::atoi(iso.substr(5, 2).c_str());
  d.day = std::atoi(iso.substr(8, 2).c_str());
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
    throw DataError("bad date: '" + iso + "'");
  return d;
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

static double parse_price(const std::string& s, std::size_t lineno) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw DataError("row " + std::to_string(lineno) + ": unparseable price '" + s + "'");
  return v;
}

PriceSeries load_prices(const std::string& path, Frequency frequency,
                        const std::string& date_column,
                        const std::string& price_column) {
  CsvTable table = read_csv(path);
  const std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t dc = table.column(date_column);
  std::size_t pc = table.column(price_column);
  if (dc == npos) throw DataError("missing column '" + date_column + "' in " + path);
  if (pc == npos) throw DataError("missing column '" + price_column + "' in " + path);

  struct Row {
    Date date;
    double price;
    std::size_t lineno;
  };
  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    std::size_t lineno = table.row_numbers[i];
    if (r.size() <= std::max(dc, pc))
      throw DataError("row " + std::to_string(lineno) + ": too few fields");
    Date d;
    try {
      d = Date::parse(r[dc]);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(lineno) + ": " + e.what());
    }
    double p = parse_price(r[pc], lineno);
    if (!(p > 0.0))
      throw DataError("row " + std::to_string(lineno) + ": non-positive price " + r[pc]);
    rows.push_back({d, p, lineno});
  }
  if (rows.empty()) throw DataError("no data rows in " + path);

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].date == rows[i - 1].date)
      throw DataError("duplicate date " + rows[i].date.str() + " (rows " +
                      std::to_string(rows[i - 1].lineno) + " and " +
                      std::to_string(rows[i].lineno) + ")");

  PriceSeries out;
  out.frequency = frequency;
  out.dates.reserve(rows.size());
  out.prices.reserve(rows.size());
  for (const auto& r : rows) {
    out.dates.push_back(r.date);
    out.prices.push_back(r.price);
  }
  out.source_checksum = fnv1a_file(path);
  return out;
}

ReturnSeries to_returns(const PriceSeries& prices) {
  if (prices.size() < 2) throw DataError("need at least 2 prices to build returns");
  ReturnSeries out;
  out.frequency = prices.frequency;
  out.source_checksum = prices.source_checksum;
  out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  out.values.resize(prices.size() - 1);
  for (std::size_t t = 1; t < prices.size(); ++t)
    out.values[t - 1] = 100.0 * (std::log(prices.prices[t]) - std::log(prices.prices[t - 1]));
  return out;
}

RealizedVolSeries to_realized_vol(const ReturnSeries& returns) {
  RealizedVolSeries out;
  out.frequency = returns.frequency;
  out.dates = returns.dates;
  out.values.resize(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t)
    out.values[t] = returns.values[t] * returns.values[t];
  return out;
}

SampleSplit split(const ReturnSeries& returns, const Date& in_sample_end) {
  auto it = std::lower_bound(returns.dates.begin(), returns.dates.end(), in_sample_end);
  if (it == returns.dates.end() || !(*it == in_sample_end))
    throw DataError("in-sample end date " + in_sample_end.str() + " not in series");
  std::size_t n_in = static_cast<std::size_t>(it - returns.dates.begin()) + 1;
  if (n_in < 50)
    throw DataError("in-sample too short: " + std::to_string(n_in) + " < 50 observations");
  if (n_in == returns.size())
    throw DataError("empty out-of-sample: boundary is the last observation");
  SampleSplit s;
  s.in_sample_end = in_sample_end;
  s.n_in = n_in;
  s.n_total = returns.size();
  return s;
}

double realized_k_period(const RealizedVolSeries& vol, std::size_t origin, int k) {
  if (k < 1) throw UsageError("horizon must be >= 1");
  if (origin + static_cast<std::size_t>(k) >= vol.size())
    throw DataError("realized window exceeds series end");
  double sum = 0.0;
  for (int tau = 1; tau <= k; ++tau) sum += vol.values[origin + static_cast<std::size_t>(tau)];
  return sum;
}

}  // namespace regimecast
