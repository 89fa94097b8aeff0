#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "garch.hpp"
#include "market_data.hpp"
#include "mrs.hpp"

namespace regimecast {

// Synthetic data generators and brute-force Monte Carlo oracles. The model
// recursions here are deliberately written out again rather than calling the
// filter or forecaster code, so they can serve as independent checks.

struct SimOutput {
  ReturnSeries returns;
  std::vector<double> true_variance;  // conditional variance of each return
  std::vector<int> true_regime;      // MRS only, 0 or 1 per observation
  std::uint64_t seed = 0;
};

// Strictly ascending synthetic calendar (28-day months).
std::vector<Date> sim_dates(std::size_t n, int start_year = 2000);

SimOutput simulate_garch(const GarchParams& p, std::size_t n, std::size_t burn_in,
                         std::uint64_t seed);
SimOutput simulate_gjr(const GjrParams& p, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed);
SimOutput simulate_egarch(const EgarchParams& p, std::size_t n, std::size_t burn_in,
                          std::uint64_t seed);

// Regime states are drawn from the Markov chain (ergodic start). The variance
// recursion mixes lagged regime variances with chain-marginal conditional
// probabilities and demeans innovations with the realized regime's mean.
SimOutput simulate_mrs(const MrsParams& p, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed);

struct OracleResult {
  std::vector<double> mean;  // per step tau = 1..k
  std::vector<double> se;    // Monte Carlo standard error per step
  double cumulative_mean = 0.0;
  double cumulative_se = 0.0;
};

OracleResult oracle_garch_forecast(const GarchParams& p, double h_next, int k, int paths,
                                   std::uint64_t seed);
OracleResult oracle_gjr_forecast(const GjrParams& p, double h_next, int k, int paths,
                                 std::uint64_t seed);
OracleResult oracle_egarch_forecast(const EgarchParams& p, double logh_next, int k,
                                    int paths, std::uint64_t seed);
OracleResult oracle_mrs_forecast(const MrsParams& p, const Vec2& filt, const Vec2& h_next,
                                 int k, int paths, std::uint64_t seed);

// The chain-persistent oracle above estimates the true-DGP expectation, which
// the closed-form recombination only approximates (regime runs correlate with
// past squared innovations). This variant re-marginalizes the regime at every
// step, so its expectation coincides with the closed form's target and
// supports tight 3-standard-error agreement checks.
OracleResult oracle_mrs_forecast_marginal(const MrsParams& p, const Vec2& filt,
                                          const Vec2& h_next, int k, int paths,
                                          std::uint64_t seed);

// Price export in the format market_data reads: a base-100 price whose log
// increments reproduce the simulated returns.
void write_sim_prices_csv(const SimOutput& sim, std::ostream& os,
                          const std::vector<std::string>& comment_lines = {});

}  // namespace regimecast
