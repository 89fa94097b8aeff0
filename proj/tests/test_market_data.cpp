#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "market_data.hpp"

using namespace regimecast;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/regimecast_test_") + name;
  std::ofstream f(path);
  f << content;
  return path;
}

PriceSeries make_prices(const std::vector<double>& p) {
  PriceSeries s;
  s.frequency = Frequency::daily;
  s.prices = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Date d;
    d.year = 2020;
    d.month = static_cast<int>(i / 28) + 1;
    d.day = static_cast<int>(i % 28) + 1;
    s.dates.push_back(d);
  }
  return s;
}

}  // namespace

TEST_SUITE("market_data") {

TEST_CASE("date parse and format round trip") {
  Date d = Date::parse("2003-01-02");
  CHECK(d.year == 2003);
  CHECK(d.month == 1);
  CHECK(d.day == 2);
  CHECK(d.str() == "2003-01-02");
  CHECK(Date::parse("1999-12-31") < d);
  CHECK_THROWS_AS(Date::parse("2003/01/02"), DataError);
  CHECK_THROWS_AS(Date::parse("2003-1-2"), DataError);
  CHECK_THROWS_AS(Date::parse("2003-13-01"), DataError);
  CHECK_THROWS_AS(Date::parse("2003-00-10"), DataError);
  CHECK_THROWS_AS(Date::parse(""), DataError);
}

TEST_CASE("frequency names") {
  CHECK(frequency_from_string("daily") == Frequency::daily);
  CHECK(frequency_from_string("weekly") == Frequency::weekly);
  CHECK(frequency_from_string("monthly") == Frequency::monthly);
  CHECK(std::string(to_string(Frequency::monthly)) == "monthly");
  CHECK_THROWS_AS(frequency_from_string("hourly"), UsageError);
}

TEST_CASE("percent log returns match hand values") {
  PriceSeries p = make_prices({100.0, 101.0, 50.5});
  ReturnSeries r = to_returns(p);
  REQUIRE(r.size() == 2);
  // 100*ln(101/100) and 100*ln(50.5/101)
  CHECK(r.values[0] == doctest::Approx(0.9950330853168092).epsilon(1e-12));
  CHECK(r.values[1] == doctest::Approx(-69.31471805599453).epsilon(1e-12));
  CHECK(r.dates[0] == p.dates[1]);
  CHECK(r.dates[1] == p.dates[2]);
  CHECK(r.frequency == p.frequency);
}

TEST_CASE("returns are invariant to price rescaling") {
  std::vector<double> base = {100.0, 101.2, 103.5, 99.7, 104.1};
  PriceSeries a = make_prices(base);
  std::vector<double> scaled = base;
  for (double& x : scaled) x *= 7.3;
  PriceSeries b = make_prices(scaled);
  ReturnSeries ra = to_returns(a);
  ReturnSeries rb = to_returns(b);
  for (std::size_t t = 0; t < ra.size(); ++t)
    CHECK(ra.values[t] == doctest::Approx(rb.values[t]).epsilon(1e-12));
}

TEST_CASE("returns telescope to total log change") {
  std::vector<double> p = {42.0, 44.5, 41.0, 47.3, 46.2, 50.9};
  PriceSeries s = make_prices(p);
  ReturnSeries r = to_returns(s);
  double total = 0.0;
  for (double v : r.values) total += v;
  double expect = 100.0 * (std::log(p.back()) - std::log(p.front()));
  CHECK(total == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("realized vol is the squared return") {
  PriceSeries p = make_prices({100.0, 101.0, 99.0});
  ReturnSeries r = to_returns(p);
  RealizedVolSeries v = to_realized_vol(r);
  REQUIRE(v.size() == r.size());
  for (std::size_t t = 0; t < v.size(); ++t) {
    CHECK(v.values[t] == doctest::Approx(r.values[t] * r.values[t]).epsilon(1e-15));
    CHECK(v.values[t] >= 0.0);
  }
}

TEST_CASE("realized_k_period sums the window after the origin") {
  RealizedVolSeries v;
  v.values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  for (std::size_t i = 0; i < v.values.size(); ++i) v.dates.push_back(Date{2020, 1, int(i) + 1});
  CHECK(realized_k_period(v, 0, 1) == doctest::Approx(2.0));
  CHECK(realized_k_period(v, 0, 3) == doctest::Approx(9.0));
  CHECK(realized_k_period(v, 2, 2) == doctest::Approx(9.0));
  // additivity over adjacent windows
  CHECK(realized_k_period(v, 0, 5) ==
        doctest::Approx(realized_k_period(v, 0, 2) + realized_k_period(v, 2, 3)).epsilon(1e-12));
  CHECK_THROWS_AS(realized_k_period(v, 3, 3), DataError);
  CHECK_THROWS_AS(realized_k_period(v, 0, 0), UsageError);
}

TEST_CASE("split partitions the series at an existing date") {
  std::vector<double> p(61, 100.0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 100.0 + 0.1 * double(i);
  PriceSeries s = make_prices(p);
  ReturnSeries r = to_returns(s);
  REQUIRE(r.size() == 60);
  SampleSplit sp = split(r, r.dates[49]);
  CHECK(sp.n_in == 50);
  CHECK(sp.n_total == 60);
  CHECK(sp.n_out() == 10);
  // boundary not in series
  CHECK_THROWS_AS(split(r, Date{1990, 1, 1}), DataError);
  // too short in-sample
  CHECK_THROWS_AS(split(r, r.dates[10]), DataError);
  // empty out-of-sample
  CHECK_THROWS_AS(split(r, r.dates.back()), DataError);
}

TEST_CASE("load_prices reads, sorts and validates") {
  std::string csv =
      "# comment line\n"
      "date,price\n"
      "2020-01-03,102.5\n"
      "2020-01-01,100.0\n"
      "\n"
      "2020-01-02,101.0\n";
  std::string path = write_temp("ok.csv", csv);
  PriceSeries s = load_prices(path, Frequency::daily, "date", "price");
  REQUIRE(s.size() == 3);
  CHECK(s.dates[0].str() == "2020-01-01");
  CHECK(s.dates[1].str() == "2020-01-02");
  CHECK(s.dates[2].str() == "2020-01-03");
  CHECK(s.prices[0] == doctest::Approx(100.0));
  CHECK(s.prices[2] == doctest::Approx(102.5));
  CHECK(s.source_checksum != 0);
  CHECK(s.source_checksum == fnv1a_file(path));
}

TEST_CASE("load_prices rejects bad input with row context") {
  std::string path1 = write_temp("neg.csv", "date,price\n2020-01-01,100\n2020-01-02,-3\n");
  CHECK_THROWS_WITH_AS(load_prices(path1, Frequency::daily, "date", "price"),
                       doctest::Contains("row 3"), DataError);

  std::string path2 = write_temp("dup.csv", "date,price\n2020-01-01,100\n2020-01-01,101\n");
  CHECK_THROWS_WITH_AS(load_prices(path2, Frequency::daily, "date", "price"),
                       doctest::Contains("duplicate date"), DataError);

  std::string path3 = write_temp("badnum.csv", "date,price\n2020-01-01,abc\n");
  CHECK_THROWS_AS(load_prices(path3, Frequency::daily, "date", "price"), DataError);

  std::string path4 = write_temp("cols.csv", "date,price\n2020-01-01,100\n");
  CHECK_THROWS_AS(load_prices(path4, Frequency::daily, "date", "close"), DataError);

  CHECK_THROWS_AS(load_prices("/nonexistent/nope.csv", Frequency::daily, "date", "price"),
                  DataError);
}

TEST_CASE("load_prices accepts alternate column names and quoted fields") {
  std::string csv =
      "Day,\"Close, USD\",volume\n"
      "2020-01-01,100.0,5\n"
      "2020-01-02,\"101.5\",6\n";
  std::string path = write_temp("named.csv", csv);
  PriceSeries s = load_prices(path, Frequency::weekly, "Day", "Close, USD");
  REQUIRE(s.size() == 2);
  CHECK(s.frequency == Frequency::weekly);
  CHECK(s.prices[1] == doctest::Approx(101.5));
}

TEST_CASE("to_returns needs at least two prices") {
  PriceSeries s = make_prices({100.0});
  CHECK_THROWS_AS(to_returns(s), DataError);
}

TEST_CASE("csv double formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-12, 123456.789, -69.31471805599453}) {
    std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}

}  // TEST_SUITE
