#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace regimecast {

enum class Frequency { daily, weekly, monthly };

const char* to_string(Frequency f);
Frequency frequency_from_string(const std::string& s);

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  static Date parse(const std::string& iso);  // strict YYYY-MM-DD
  std::string str() const;
};

// Dated price observations at a declared (never inferred) frequency.
struct PriceSeries {
  Frequency frequency = Frequency::daily;
  std::vector<Date> dates;
  std::vector<double> prices;
  std::uint64_t source_checksum = 0;

  std::size_t size() const { return prices.size(); }
};

// Percent log returns: r_t = 100 * (ln p_t - ln p_{t-1}), dated at p_t.
struct ReturnSeries {
  Frequency frequency = Frequency::daily;
  std::vector<Date> dates;
  std::vector<double> values;
  std::uint64_t source_checksum = 0;

  std::size_t size() const { return values.size(); }
};

// Squared returns, the forecast target.
struct RealizedVolSeries {
  Frequency frequency = Frequency::daily;
  std::vector<Date> dates;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Contiguous partition of a return series: indices [0, n_in) are in-sample,
// [n_in, n_total) out-of-sample. The boundary date belongs to in-sample.
struct SampleSplit {
  Date in_sample_end;
  std::size_t n_in = 0;
  std::size_t n_total = 0;

  std::size_t n_out() const { return n_total - n_in; }
};

PriceSeries load_prices(const std::string& path, Frequency frequency,
                        const std::string& date_column,
                        const std::string& price_column);

ReturnSeries to_returns(const PriceSeries& prices);

RealizedVolSeries to_realized_vol(const ReturnSeries& returns);

// The boundary date must exist in the series; no nearest-date snapping.
SampleSplit split(const ReturnSeries& returns, const Date& in_sample_end);

// Sum of realized variance over (origin, origin + k]:
// sum_{tau=1..k} vol[origin + tau].
double realized_k_period(const RealizedVolSeries& vol, std::size_t origin, int k);

}  // namespace regimecast
