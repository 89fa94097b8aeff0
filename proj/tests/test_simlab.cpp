#include <cmath>
#include <cstdio>
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "forecast.hpp"
#include "garch.hpp"
#include "market_data.hpp"
#include "mrs.hpp"
#include "simlab.hpp"

using namespace regimecast;

namespace {

GarchParams base_garch() { return GarchParams{0.0, 0.05, 0.08, 0.9, 7.0}; }

bool throws_naming_step(const EgarchParams& p, std::size_t n, std::uint64_t seed) {
  try {
    simulate_egarch(p, n, 0, seed);
  } catch (const NumericError& e) {
    return std::string(e.what()).find("step") != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_SUITE("simlab") {

TEST_CASE("simulation is deterministic in the seed") {
  GarchParams p = base_garch();
  SimOutput a = simulate_garch(p, 300, 50, 9);
  SimOutput b = simulate_garch(p, 300, 50, 9);
  SimOutput c = simulate_garch(p, 300, 50, 10);
  REQUIRE(a.returns.size() == 300);
  REQUIRE(a.true_variance.size() == 300);
  CHECK(a.true_regime.empty());
  CHECK(a.seed == 9);
  bool same = true;
  for (std::size_t t = 0; t < 300; ++t) {
    same = same && a.returns.values[t] == b.returns.values[t] &&
           a.true_variance[t] == b.true_variance[t];
  }
  CHECK(same);
  bool differs = false;
  for (std::size_t t = 0; t < 300; ++t)
    differs = differs || a.returns.values[t] != c.returns.values[t];
  CHECK(differs);
  for (std::size_t t = 1; t < 300; ++t) CHECK(a.returns.dates[t - 1] < a.returns.dates[t]);
}

TEST_CASE("zero arch and garch loads give iid draws at constant variance") {
  GarchParams p{0.4, 2.25, 0.0, 0.0, 7.0};
  std::size_t n = 20000;
  SimOutput sim = simulate_garch(p, n, 100, 17);
  for (std::size_t t = 0; t < n; ++t) REQUIRE(sim.true_variance[t] == 2.25);
  double mean = series_mean(sim.returns.values);
  double var = series_variance(sim.returns.values);
  CHECK(std::fabs(mean - 0.4) < 5.0 * std::sqrt(2.25 / static_cast<double>(n)));
  CHECK(std::fabs(var - 2.25) < 0.05 * 2.25);
}

TEST_CASE("long sample variance approaches the unconditional variance") {
  GarchParams p = base_garch();  // alpha0/(1-alpha1-beta) = 2.5
  SimOutput sim = simulate_garch(p, 100000, 2000, 29);
  double var = series_variance(sim.returns.values);
  CHECK(std::fabs(var - 2.5) < 0.05 * 2.5);
}

TEST_CASE("refiltering the simulated returns reproduces the variance path") {
  std::size_t n = 400;
  SUBCASE("garch") {
    GarchParams p{0.1, 0.05, 0.08, 0.9, 7.0};
    SimOutput sim = simulate_garch(p, n, 300, 41);
    VariancePath vp = garch_filter(p, sim.returns.values, sim.true_variance[0]);
    for (std::size_t t = 0; t < n; ++t)
      CHECK(std::fabs(vp.h[t] - sim.true_variance[t]) <= 1e-12 * sim.true_variance[t]);
  }
  SUBCASE("gjr") {
    GjrParams p{0.1, 0.05, 0.09, 0.03, 0.9, 7.0};
    SimOutput sim = simulate_gjr(p, n, 300, 42);
    VariancePath vp = gjr_filter(p, sim.returns.values, sim.true_variance[0]);
    for (std::size_t t = 0; t < n; ++t)
      CHECK(std::fabs(vp.h[t] - sim.true_variance[t]) <= 1e-12 * sim.true_variance[t]);
  }
  SUBCASE("egarch") {
    EgarchParams p{0.1, -0.05, 0.15, -0.06, 0.95, 8.0};
    SimOutput sim = simulate_egarch(p, n, 300, 43);
    VariancePath vp =
        egarch_filter(p, sim.returns.values, std::log(sim.true_variance[0]));
    for (std::size_t t = 0; t < n; ++t)
      CHECK(std::fabs(vp.h[t] - sim.true_variance[t]) <= 1e-12 * sim.true_variance[t]);
  }
}

TEST_CASE("mrs regime chain has the right occupancy and transition rates") {
  MrsParams p;
  p.regime[0] = GarchParams{0.0, 0.02, 0.05, 0.9, 8.0};
  p.regime[1] = GarchParams{0.0, 1.0, 0.1, 0.8, 8.0};
  std::size_t n = 100000;

  SUBCASE("symmetric half-half chain") {
    p.p = 0.5;
    p.q = 0.5;
    SimOutput sim = simulate_mrs(p, n, 500, 53);
    REQUIRE(sim.true_regime.size() == n);
    std::size_t ones = 0;
    for (int s : sim.true_regime) {
      REQUIRE((s == 0 || s == 1));
      ones += static_cast<std::size_t>(s);
    }
    double frac = static_cast<double>(ones) / static_cast<double>(n);
    CHECK(std::fabs(frac - 0.5) < 0.02);
  }

  SUBCASE("empirical transition frequencies match p and q") {
    p.p = 0.9;
    p.q = 0.7;
    SimOutput sim = simulate_mrs(p, n, 500, 57);
    std::size_t stay0 = 0, from0 = 0, stay1 = 0, from1 = 0;
    for (std::size_t t = 1; t < n; ++t) {
      int prev = sim.true_regime[t - 1];
      int cur = sim.true_regime[t];
      if (prev == 0) {
        ++from0;
        if (cur == 0) ++stay0;
      } else {
        ++from1;
        if (cur == 1) ++stay1;
      }
    }
    double phat = static_cast<double>(stay0) / static_cast<double>(from0);
    double qhat = static_cast<double>(stay1) / static_cast<double>(from1);
    CHECK(std::fabs(phat - 0.9) < 0.01);
    CHECK(std::fabs(qhat - 0.7) < 0.01);
  }
}

TEST_CASE("mrs regimes separate in the realized variance") {
  // Low beta keeps the cross-regime variance mixing from washing out the gap.
  MrsParams p;
  p.regime[0] = GarchParams{0.0, 0.02, 0.05, 0.5, 8.0};
  p.regime[1] = GarchParams{0.0, 2.0, 0.1, 0.3, 8.0};
  p.p = 0.95;
  p.q = 0.9;
  SimOutput sim = simulate_mrs(p, 20000, 500, 61);
  double v0 = 0.0, v1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t t = 0; t < sim.true_regime.size(); ++t) {
    REQUIRE(sim.true_variance[t] > 0.0);
    if (sim.true_regime[t] == 0) {
      v0 += sim.true_variance[t];
      ++n0;
    } else {
      v1 += sim.true_variance[t];
      ++n1;
    }
  }
  REQUIRE(n0 > 1000);
  REQUIRE(n1 > 1000);
  CHECK(v1 / static_cast<double>(n1) > 3.0 * v0 / static_cast<double>(n0));
}

TEST_CASE("divergent egarch simulation reports the offending step") {
  // Fixed point of the log-variance recursion sits far beyond overflow.
  EgarchParams p{0.0, 300.0, 0.1, 0.0, 0.9, 7.0};
  CHECK(throws_naming_step(p, 50, 3));
}

TEST_CASE("oracle reproduces the closed-form garch forecast") {
  GarchParams p = base_garch();
  double h_next = 1.3;
  int k = 10;
  OracleResult orc = oracle_garch_forecast(p, h_next, k, 60000, 11);
  std::vector<double> closed = garch_multistep(p, h_next, k);
  REQUIRE(orc.mean.size() == static_cast<std::size_t>(k));
  // Step 1 is the same value on every path; only summation rounding remains.
  CHECK(std::fabs(orc.mean[0] - h_next) <= 1e-9);
  CHECK(orc.se[0] <= 1e-9);
  for (int tau = 1; tau < k; ++tau) {
    CHECK(orc.se[tau] > 0.0);
    CHECK(std::fabs(orc.mean[tau] - closed[tau]) <= 3.0 * orc.se[tau]);
  }
  double cum = 0.0;
  for (double v : closed) cum += v;
  CHECK(std::fabs(orc.cumulative_mean - cum) <= 3.0 * orc.cumulative_se);
}

TEST_CASE("oracle decay rate recovers the gjr persistence") {
  GjrParams p{0.0, 0.04, 0.05, 0.11, 0.88, 7.0};  // persistence 0.96, unconditional 1
  double h_next = 3.0;
  int k = 22;
  OracleResult orc = oracle_gjr_forecast(p, h_next, k, 200000, 13);
  std::vector<double> closed = gjr_multistep(p, h_next, k);
  for (int tau = 1; tau < k; ++tau)
    CHECK(std::fabs(orc.mean[tau] - closed[tau]) <= 3.0 * orc.se[tau]);
  double uncond = 0.04 / (1.0 - 0.96);
  double g1 = orc.mean[0] - uncond;
  double gk = orc.mean[k - 1] - uncond;
  double rate = std::pow(gk / g1, 1.0 / static_cast<double>(k - 1));
  CHECK(std::fabs(rate - 0.96) <= 0.01 * 0.96);
}

TEST_CASE("oracle agrees with the egarch Monte Carlo forecaster") {
  EgarchParams p{0.0, -0.1, 0.15, -0.05, 0.95, 8.0};
  double logh = 0.4;
  int k = 10;
  EgarchForecast fc = egarch_multistep(p, logh, k, 20000, 3);
  OracleResult orc = oracle_egarch_forecast(p, logh, k, 100000, 4);
  CHECK(std::fabs(fc.steps[0] - std::exp(logh)) <= 1e-12);
  CHECK(std::fabs(orc.mean[0] - std::exp(logh)) <= 1e-9);
  for (int tau = 1; tau < k; ++tau)
    CHECK(std::fabs(fc.steps[tau] - orc.mean[tau]) <= 0.05 * orc.mean[tau]);
}

TEST_CASE("oracle agrees with the mrs recursion") {
  MrsParams p;
  p.regime[0] = GarchParams{0.0, 0.03, 0.05, 0.9, 8.0};
  p.regime[1] = GarchParams{0.0, 0.3, 0.1, 0.85, 8.0};
  p.p = 0.95;
  p.q = 0.9;
  MrsOriginState state;
  state.filt = {0.7, 0.3};
  state.h_next = {0.5, 2.0};
  int k = 10;
  MrsForecast closed = mrs_multistep(p, state, k);
  OracleResult orc = oracle_mrs_forecast(p, state.filt, state.h_next, k, 300000, 19);
  CHECK(std::fabs(orc.mean[0] - closed.steps[0]) <= 4.0 * orc.se[0]);
  double cum = 0.0;
  for (int tau = 0; tau < k; ++tau) {
    cum += closed.steps[tau];
    CHECK(std::fabs(orc.mean[tau] - closed.steps[tau]) <= 0.03 * closed.steps[tau]);
  }
  CHECK(std::fabs(orc.cumulative_mean - cum) <= 0.02 * cum);
}

TEST_CASE("marginalized oracle is unbiased for the mrs closed form") {
  MrsParams p;
  p.regime[0] = GarchParams{0.02, 0.03, 0.06, 0.7, 8.0};
  p.regime[1] = GarchParams{-0.01, 0.4, 0.1, 0.55, 6.0};
  p.p = 0.97;
  p.q = 0.96;
  MrsOriginState state;
  state.filt = {0.55, 0.45};
  state.h_next = {0.14, 1.05};
  int k = 10;
  MrsForecast closed = mrs_multistep(p, state, k);
  OracleResult orc =
      oracle_mrs_forecast_marginal(p, state.filt, state.h_next, k, 200000, 31);
  // Step 1 carries no randomness at all under full marginalization.
  CHECK(std::fabs(orc.mean[0] - closed.steps[0]) <= 1e-9);
  CHECK(orc.se[0] <= 1e-9);
  double cum = 0.0;
  for (int tau = 0; tau < k; ++tau) {
    cum += closed.steps[tau];
    CHECK(std::fabs(orc.mean[tau] - closed.steps[tau]) <= 3.0 * orc.se[tau] + 1e-9);
  }
  CHECK(std::fabs(orc.cumulative_mean - cum) <= 3.0 * orc.cumulative_se + 1e-9);
}

TEST_CASE("price export round-trips through the loader") {
  GarchParams p = base_garch();
  SimOutput sim = simulate_garch(p, 60, 100, 21);
  std::string path = "simlab_prices_roundtrip.csv";
  {
    std::ofstream os(path);
    REQUIRE(os.good());
    write_sim_prices_csv(sim, os, {"synthetic series, seed 21"});
  }
  PriceSeries prices = load_prices(path, Frequency::daily, "date", "price");
  std::remove(path.c_str());
  REQUIRE(prices.size() == 61);
  CHECK(prices.prices[0] == 100.0);
  ReturnSeries rt = to_returns(prices);
  REQUIRE(rt.size() == 60);
  for (std::size_t t = 0; t < 60; ++t) {
    CHECK(rt.dates[t] == sim.returns.dates[t]);
    CHECK(std::fabs(rt.values[t] - sim.returns.values[t]) <= 1e-9);
  }
}

TEST_CASE("simulation and oracle inputs are validated") {
  GarchParams g = base_garch();
  CHECK_THROWS_AS(simulate_garch(g, 0, 0, 1), UsageError);
  GarchParams bad0 = g;
  bad0.alpha0 = 0.0;
  CHECK_THROWS_AS(simulate_garch(bad0, 10, 0, 1), UsageError);
  GarchParams expl = g;
  expl.beta = 0.92;  // alpha1 + beta = 1
  CHECK_THROWS_AS(simulate_garch(expl, 10, 0, 1), NumericError);
  GjrParams gj{0.0, 0.05, 0.1, 0.1, 0.9, 7.0};  // persistence 1
  CHECK_THROWS_AS(simulate_gjr(gj, 10, 0, 1), NumericError);
  EgarchParams eg{0.0, -0.1, 0.1, 0.0, 1.0, 7.0};
  CHECK_THROWS_AS(simulate_egarch(eg, 10, 0, 1), NumericError);
  MrsParams m;
  m.regime[0] = g;
  m.regime[1] = g;
  m.p = 1.0;
  m.q = 0.5;
  CHECK_THROWS_AS(simulate_mrs(m, 10, 0, 1), UsageError);
  m.p = 0.5;
  m.regime[1].beta = 0.92;
  CHECK_THROWS_AS(simulate_mrs(m, 10, 0, 1), NumericError);

  CHECK_THROWS_AS(oracle_garch_forecast(g, 1.0, 0, 2000, 1), UsageError);
  CHECK_THROWS_AS(oracle_garch_forecast(g, 1.0, 5, 999, 1), UsageError);
  CHECK_THROWS_AS(oracle_garch_forecast(g, 0.0, 5, 2000, 1), NumericError);
  MrsParams ok;
  ok.regime[0] = g;
  ok.regime[1] = g;
  ok.p = 0.9;
  ok.q = 0.9;
  CHECK_THROWS_AS(oracle_mrs_forecast(ok, {0.5, 0.3}, {1.0, 1.0}, 5, 2000, 1),
                  UsageError);
  CHECK_THROWS_AS(oracle_mrs_forecast(ok, {0.5, 0.5}, {1.0, -1.0}, 5, 2000, 1),
                  NumericError);
}

}  // TEST_SUITE
