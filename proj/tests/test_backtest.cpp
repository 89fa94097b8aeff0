#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "backtest.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "estimate.hpp"
#include "forecast.hpp"
#include "rng.hpp"
#include "student_t.hpp"

using namespace regimecast;

namespace {

std::vector<Date> bt_dates(std::size_t n) {
  std::vector<Date> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i % 336;
    out[i] = Date{2000 + static_cast<int>(i / 336), static_cast<int>(rem / 28) + 1,
                  static_cast<int>(rem % 28) + 1};
  }
  return out;
}

std::vector<double> sim_garch(const GarchParams& p, std::size_t n, std::uint64_t seed) {
  StudentT d(p.nu);
  Rng rng(seed);
  double h = p.alpha0 / (1.0 - p.alpha1 - p.beta);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double eps = std::sqrt(h) * sample_one(d, rng);
    out[t] = p.delta + eps;
    h = p.alpha0 + p.alpha1 * eps * eps + p.beta * h;
  }
  return out;
}

ReturnSeries series_from(const std::vector<double>& values) {
  ReturnSeries rs;
  rs.values = values;
  rs.dates = bt_dates(values.size());
  return rs;
}

FitResult fit_from(ModelKind kind, std::vector<double> estimates,
                   const std::vector<double>& in_sample) {
  FitResult fr;
  fr.kind = kind;
  fr.estimates = std::move(estimates);
  fr.n_obs = in_sample.size();
  fr.h_init = series_variance(in_sample);
  return fr;
}

}  // namespace

TEST_SUITE("risk_backtest") {
  TEST_CASE("var forecast formula") {
    StudentT d(7.0);
    CHECK(var_forecast(0.12, 5, 1.0, 0.5, d) ==
          doctest::Approx(0.12 * 5).epsilon(1e-8));

    double base = var_forecast(0.1, 1, 0.9, 0.05, d) - 0.1;
    double wide = var_forecast(0.1, 1, 3.6, 0.05, d) - 0.1;
    CHECK(wide == 2.0 * base);

    CHECK(var_forecast(0.0, 1, 1.0, 0.05, d) == quantile(d, 0.05));
    CHECK(var_forecast(0.0, 1, 1.0, 0.05, d) ==
          doctest::Approx(-1.60121116898518).epsilon(1e-10));

    CHECK_THROWS_AS(var_forecast(0.0, 1, 1.0, 0.0, d), UsageError);
    CHECK_THROWS_AS(var_forecast(0.0, 1, 1.0, 0.6, d), UsageError);
    CHECK_THROWS_AS(var_forecast(0.0, 1, 0.0, 0.05, d), NumericError);
    CHECK_THROWS_AS(var_forecast(0.0, 0, 1.0, 0.05, d), UsageError);
  }

  TEST_CASE("lruc hand values") {
    CHECK(lruc(100, 5, 0.05) == 0.0);
    CHECK(lruc(100, 10, 0.05) == doctest::Approx(4.13084).epsilon(1e-4));
    CHECK(lruc(100, 0, 0.05) ==
          doctest::Approx(-2.0 * 100.0 * std::log(0.95)).epsilon(1e-12));
    CHECK(lruc(100, 0, 0.05) == doctest::Approx(10.2587).epsilon(1e-4));
    double all = lruc(100, 100, 0.05);
    CHECK(all > 0.0);
    CHECK(std::isfinite(all));
    CHECK_THROWS_AS(lruc(0, 0, 0.05), UsageError);
    CHECK_THROWS_AS(lruc(10, 11, 0.05), UsageError);
  }

  TEST_CASE("lruc grows with distance from the nominal rate") {
    double prev = lruc(200, 10, 0.05);  // pi-hat = alpha
    CHECK(prev == 0.0);
    for (std::size_t n1 : {13, 16, 20, 30, 60}) {
      double cur = lruc(200, n1, 0.05);
      CHECK(cur > prev);
      prev = cur;
    }
    prev = 0.0;
    for (std::size_t n1 : {8, 6, 3, 1, 0}) {
      double cur = lruc(200, n1, 0.05);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  TEST_CASE("lrind hand values") {
    // n00 = n01 = n10 = n11 = 2: identical transition rates, statistic 0.
    std::vector<int> balanced = {0, 0, 0, 1, 1, 0, 1, 1, 0};
    CHECK(lrind(balanced) == 0.0);

    std::vector<int> clustered;
    for (int i = 0; i < 10; ++i) clustered.push_back(0);
    for (int i = 0; i < 10; ++i) clustered.push_back(1);
    CHECK(lrind(clustered) > 3.841);

    std::vector<int> alternating;
    for (int i = 0; i < 10; ++i) {
      alternating.push_back(0);
      alternating.push_back(1);
    }
    double n01 = 10.0, n10 = 9.0;
    double pi = n01 / 19.0;
    double expect = -2.0 * (n10 * std::log(1.0 - pi) + n01 * std::log(pi));
    CHECK(lrind(alternating) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(lrind(alternating) > 3.841);

    CHECK_THROWS_AS(lrind({1}), UsageError);
  }

  TEST_CASE("lrcc adds its components") {
    Rng rng(606);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<int> v(60);
      for (int& x : v) x = rng.uniform() < 0.2 ? 1 : 0;
      std::size_t n1 = 0;
      for (int x : v) n1 += static_cast<std::size_t>(x);
      double sum = lruc(v.size(), n1, 0.05) + lrind(v);
      CHECK(lrcc(v, 0.05) == doctest::Approx(sum).epsilon(1e-10));
      CHECK(lrcc(v, 0.05) >= 0.0);
    }
  }

  TEST_CASE("lr tests have roughly nominal size on calibrated violations") {
    Rng rng(8181);
    const int reps = 1000;
    int reject_uc = 0, reject_cc = 0;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<int> v(391);
      for (int& x : v) x = rng.uniform() < 0.05 ? 1 : 0;
      std::size_t n1 = 0;
      for (int x : v) n1 += static_cast<std::size_t>(x);
      if (lruc(v.size(), n1, 0.05) > 3.841) ++reject_uc;
      if (lrcc(v, 0.05) > 5.991) ++reject_cc;
    }
    CHECK(reject_uc >= 20);
    CHECK(reject_uc <= 90);
    CHECK(reject_cc >= 20);
    CHECK(reject_cc <= 90);
  }

  TEST_CASE("violation indicator is monotone-transform invariant") {
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
      double thr = rng.normal();
      double ret = rng.normal();
      bool raw = ret < thr;
      auto f = [](double x) { return std::exp(0.5 * x) + x; };  // strictly increasing
      bool mapped = f(ret) < f(thr);
      CHECK(raw == mapped);
    }
  }

  TEST_CASE("backtest on a correctly specified garch model") {
    GarchParams truth{0.03, 0.05, 0.08, 0.9, 7.0};
    auto values = sim_garch(truth, 491, 99);
    ReturnSeries rs = series_from(values);
    SampleSplit sp{rs.dates[99], 100, 491};
    FitResult fr = fit_from(ModelKind::garch, {0.03, 0.05, 0.08, 0.9, 7.0},
                            std::vector<double>(values.begin(), values.begin() + 100));
    auto table = rolling_forecast(fr, rs, sp, {1});

    BacktestResult bt = backtest(table, fr, 0.05);
    CHECK(bt.report.n == 391);
    CHECK(bt.var.points.size() == 391);
    CHECK(bt.report.n1 >= 6);
    CHECK(bt.report.n1 <= 40);
    CHECK(bt.report.n00 + bt.report.n01 + bt.report.n10 + bt.report.n11 == 390);

    std::size_t n1 = 0;
    for (const VarPoint& pt : bt.var.points) {
      CHECK(std::isfinite(pt.threshold));
      CHECK(pt.violation == (pt.realized_return < pt.threshold));
      n1 += pt.violation ? 1u : 0u;
    }
    CHECK(n1 == bt.report.n1);
    CHECK(bt.report.lrcc ==
          doctest::Approx(bt.report.lruc + bt.report.lrind).epsilon(1e-10));

    // Correctly specified model: coverage tests should not reject wildly.
    CHECK(bt.report.lruc < 15.0);
  }

  TEST_CASE("backtest input validation") {
    GarchParams truth{0.0, 0.05, 0.08, 0.9, 7.0};
    auto values = sim_garch(truth, 200, 12);
    ReturnSeries rs = series_from(values);
    SampleSplit sp{rs.dates[149], 150, 200};
    FitResult fr = fit_from(ModelKind::garch, {0.0, 0.05, 0.08, 0.9, 7.0},
                            std::vector<double>(values.begin(), values.begin() + 150));
    auto table = rolling_forecast(fr, rs, sp, {1, 5});

    CHECK_THROWS_AS(backtest(table, fr, 0.05), UsageError);  // mixed horizons
    CHECK_THROWS_AS(backtest(ForecastTable{}, fr, 0.05), UsageError);

    auto single = rolling_forecast(fr, rs, sp, {1});
    CHECK_THROWS_AS(backtest(single, fr, 0.0), UsageError);
    FitResult other = fit_from(ModelKind::gjr, {0.0, 0.05, 0.08, 0.08, 0.9, 7.0},
                               std::vector<double>(values.begin(), values.begin() + 150));
    CHECK_THROWS_AS(backtest(single, other, 0.05), UsageError);

    // Round-tripped tables lack realized returns.
    std::ostringstream os;
    write_forecast_csv(single, os);
    std::istringstream is(os.str());
    auto from_csv = read_forecast_csv(is);
    CHECK_THROWS_AS(backtest(from_csv, fr, 0.05), DataError);
  }

  TEST_CASE("mrs backtest solves the mixture quantile") {
    MrsParams mp;
    mp.regime[0] = GarchParams{0.02, 0.03, 0.05, 0.90, 8.0};
    mp.regime[1] = GarchParams{-0.01, 0.30, 0.10, 0.85, 6.0};
    mp.p = 0.95;
    mp.q = 0.90;

    auto values = sim_garch(GarchParams{0.0, 0.1, 0.1, 0.8, 7.0}, 200, 44);
    ReturnSeries rs = series_from(values);
    SampleSplit sp{rs.dates[149], 150, 200};
    FitResult fr = fit_from(ModelKind::mrs,
                            {0.02, 0.03, 0.05, 0.90, 8.0, -0.01, 0.30, 0.10, 0.85, 6.0,
                             0.95, 0.90},
                            std::vector<double>(values.begin(), values.begin() + 150));
    auto table = rolling_forecast(fr, rs, sp, {2});
    BacktestResult bt = backtest(table, fr, 0.05);

    StudentT d0(8.0), d1(6.0);
    REQUIRE(bt.var.points.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const ForecastRow& row = table.rows[i];
      double x = bt.var.points[i].threshold;
      double f = row.regime_probs[0] *
                     cdf(d0, (x - 2.0 * 0.02) / std::sqrt(row.regime_cumulative[0])) +
                 row.regime_probs[1] *
                     cdf(d1, (x - 2.0 * -0.01) / std::sqrt(row.regime_cumulative[1]));
      CHECK(f == doctest::Approx(0.05).epsilon(1e-9));
    }
  }

  TEST_CASE("degenerate mixture quantile matches the single-regime formula") {
    GarchParams g{0.05, 0.1, 0.08, 0.88, 7.0};
    MrsParams mp;
    mp.regime = {g, g};
    mp.p = 0.9;
    mp.q = 0.8;
    StudentT d(7.0);
    for (double w : {0.0, 0.3, 1.0}) {
      double mixed = mixture_var_quantile(mp, Vec2{w, 1.0 - w}, Vec2{1.9, 1.9}, 3, 0.05);
      double direct = var_forecast(g.delta, 3, 1.9, 0.05, d);
      CHECK(mixed == doctest::Approx(direct).epsilon(1e-8));
    }
    CHECK_THROWS_AS(
        mixture_var_quantile(mp, Vec2{0.7, 0.7}, Vec2{1.0, 1.0}, 1, 0.05), DataError);
    CHECK_THROWS_AS(
        mixture_var_quantile(mp, Vec2{0.5, 0.5}, Vec2{1.0, -1.0}, 1, 0.05), NumericError);
  }

  TEST_CASE("lr report serialization") {
    std::vector<int> v;
    Rng rng(9);
    for (int i = 0; i < 100; ++i) v.push_back(rng.uniform() < 0.3 ? 1 : 0);
    LrReport a;
    a.n = v.size();
    for (int x : v) a.n1 += static_cast<std::size_t>(x);
    a.lruc = lruc(a.n, a.n1, 0.05);
    a.lrind = lrind(v);
    a.lrcc = a.lruc + a.lrind;
    a.reject_uc = a.lruc > 3.841;
    a.reject_cc = a.lrcc > 5.991;

    std::ostringstream text;
    write_lr_reports_text({"garch"}, {a}, text);
    CHECK(text.str().find("LRuc") != std::string::npos);
    CHECK(text.str().find("**") != std::string::npos);  // 30% violations reject hard

    std::ostringstream csvs;
    write_lr_reports_csv({"garch"}, {a}, csvs, {"unit test"});
    CHECK(csvs.str().find("lruc_reject") != std::string::npos);
    CHECK_THROWS_AS(write_lr_reports_csv({"a", "b"}, {a}, csvs), UsageError);

    VarSeries vs;
    vs.model = ModelKind::garch;
    vs.points.push_back(VarPoint{Date{2001, 2, 3}, 1, -2.5, -3.0, true});
    std::ostringstream vcsv;
    write_var_series_csv(vs, vcsv);
    CHECK(vcsv.str().find("violation") != std::string::npos);
    CHECK(vcsv.str().find("2001-02-03") != std::string::npos);
  }
}
