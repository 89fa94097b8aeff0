#include "simlab.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "student_t.hpp"

namespace regimecast {

namespace {

void check_sim_args(std::size_t n, double alpha0, double alpha1, double beta,
                    double nu) {
  if (n < 1) throw UsageError("simulation length must be at least 1");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw UsageError("alpha0 must be positive");
  if (alpha1 < 0.0 || beta < 0.0) throw UsageError("arch and garch loads must be nonnegative");
  if (!(nu > 2.0)) throw UsageError("nu must exceed 2");
}

[[noreturn]] void throw_overflow(std::size_t step) {
  throw NumericError("simulated variance overflowed at step " +
                     std::to_string(step + 1));
}

void check_oracle_args(int k, int paths) {
  if (k < 1) throw UsageError("forecast horizon must be at least 1");
  if (paths < 1000) throw UsageError("oracle needs at least 1000 paths");
}

// Attach the synthetic calendar, skipping its first entry so the export can
// use it for the base price.
void finish_output(SimOutput& out, std::size_t n) {
  std::vector<Date> all = sim_dates(n + 1);
  out.returns.frequency = Frequency::daily;
  out.returns.dates.assign(all.begin() + 1, all.end());
}

struct MomentAcc {
  std::vector<double> sum;
  std::vector<double> sumsq;
  double csum = 0.0;
  double csumsq = 0.0;
  long n = 0;

  explicit MomentAcc(int k) : sum(k, 0.0), sumsq(k, 0.0) {}

  void add_step(int tau, double v) {
    sum[tau] += v;
    sumsq[tau] += v * v;
  }
  void add_path(double cum) {
    csum += cum;
    csumsq += cum * cum;
    ++n;
  }

  OracleResult finish() const {
    OracleResult r;
    std::size_t k = sum.size();
    r.mean.resize(k);
    r.se.resize(k);
    double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < k; ++i) {
      double m = sum[i] / dn;
      double var = (sumsq[i] - dn * m * m) / (dn - 1.0);
      r.mean[i] = m;
      r.se[i] = std::sqrt(std::max(var, 0.0) / dn);
    }
    double cm = csum / dn;
    double cvar = (csumsq - dn * cm * cm) / (dn - 1.0);
    r.cumulative_mean = cm;
    r.cumulative_se = std::sqrt(std::max(cvar, 0.0) / dn);
    return r;
  }
};

}  // namespace

std::vector<Date> sim_dates(std::size_t n, int start_year) {
  std::vector<Date> out;
  out.reserve(n);
  Date d{start_year, 1, 1};
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(d);
    if (++d.day > 28) {
      d.day = 1;
      if (++d.month > 12) {
        d.month = 1;
        ++d.year;
      }
    }
  }
  return out;
}

SimOutput simulate_garch(const GarchParams& p, std::size_t n, std::size_t burn_in,
                         std::uint64_t seed) {
  check_sim_args(n, p.alpha0, p.alpha1, p.beta, p.nu);
  double pers = p.alpha1 + p.beta;
  if (!(pers < 1.0))
    throw NumericError("alpha1 + beta must be below 1 to pin the starting variance");
  SimOutput out;
  out.seed = seed;
  out.returns.values.reserve(n);
  out.true_variance.reserve(n);
  StudentT dist(p.nu);
  Rng rng(seed);
  double h = p.alpha0 / (1.0 - pers);
  std::size_t total = burn_in + n;
  for (std::size_t t = 0; t < total; ++t) {
    double z = sample_one(dist, rng);
    double r = p.delta + std::sqrt(h) * z;
    if (t >= burn_in) {
      out.returns.values.push_back(r);
      out.true_variance.push_back(h);
    }
    double eps = r - p.delta;
    h = p.alpha0 + p.alpha1 * eps * eps + p.beta * h;
    if (!(h > 0.0) || !std::isfinite(h)) throw_overflow(t);
  }
  finish_output(out, n);
  return out;
}

SimOutput simulate_gjr(const GjrParams& p, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed) {
  check_sim_args(n, p.alpha0, p.alpha1, p.beta, p.nu);
  if (p.xi < 0.0) throw UsageError("arch and garch loads must be nonnegative");
  double pers = 0.5 * (p.alpha1 + p.xi) + p.beta;
  if (!(pers < 1.0))
    throw NumericError("(alpha1 + xi)/2 + beta must be below 1 to pin the starting variance");
  SimOutput out;
  out.seed = seed;
  out.returns.values.reserve(n);
  out.true_variance.reserve(n);
  StudentT dist(p.nu);
  Rng rng(seed);
  double h = p.alpha0 / (1.0 - pers);
  std::size_t total = burn_in + n;
  for (std::size_t t = 0; t < total; ++t) {
    double z = sample_one(dist, rng);
    double r = p.delta + std::sqrt(h) * z;
    if (t >= burn_in) {
      out.returns.values.push_back(r);
      out.true_variance.push_back(h);
    }
    double eps = r - p.delta;
    double load = eps > 0.0 ? p.xi : p.alpha1;
    h = p.alpha0 + load * eps * eps + p.beta * h;
    if (!(h > 0.0) || !std::isfinite(h)) throw_overflow(t);
  }
  finish_output(out, n);
  return out;
}

SimOutput simulate_egarch(const EgarchParams& p, std::size_t n, std::size_t burn_in,
                          std::uint64_t seed) {
  if (n < 1) throw UsageError("simulation length must be at least 1");
  if (!(p.nu > 2.0)) throw UsageError("nu must exceed 2");
  if (!(std::fabs(p.beta) < 1.0))
    throw NumericError("|beta| must be below 1 to pin the starting log variance");
  SimOutput out;
  out.seed = seed;
  out.returns.values.reserve(n);
  out.true_variance.reserve(n);
  StudentT dist(p.nu);
  double eabs = abs_moment(dist);
  Rng rng(seed);
  double logh = p.alpha0 / (1.0 - p.beta);
  std::size_t total = burn_in + n;
  for (std::size_t t = 0; t < total; ++t) {
    double h = std::exp(logh);
    double z = sample_one(dist, rng);
    double r = p.delta + std::sqrt(h) * z;
    if (t >= burn_in) {
      out.returns.values.push_back(r);
      out.true_variance.push_back(h);
    }
    double zz = (r - p.delta) / std::sqrt(h);
    logh = p.alpha0 + p.alpha1 * (std::fabs(zz) - eabs) + p.xi * zz + p.beta * logh;
    if (!std::isfinite(logh) || logh > 700.0) throw_overflow(t);
  }
  finish_output(out, n);
  return out;
}

SimOutput simulate_mrs(const MrsParams& p, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed) {
  for (const GarchParams& g : p.regime)
    check_sim_args(n, g.alpha0, g.alpha1, g.beta, g.nu);
  if (!(p.p > 0.0 && p.p < 1.0 && p.q > 0.0 && p.q < 1.0))
    throw UsageError("transition probabilities must lie strictly inside (0,1)");
  Vec2 h{};
  for (int i = 0; i < 2; ++i) {
    double u = unconditional_variance_proxy(p.regime[i]);
    if (!std::isfinite(u) || !(u > 0.0))
      throw NumericError("regime " + std::to_string(i + 1) +
                         " has no finite unconditional variance to start from");
    h[i] = u;
  }
  Mat2 P = transition_matrix(p.p, p.q);
  Vec2 pi = ergodic_probs(p.p, p.q);
  Vec2 means{p.regime[0].delta, p.regime[1].delta};
  // Chain-stationary conditional probabilities Pr(s_{t-1}=j | s_t=i); with an
  // ergodic start they are the same at every step.
  Mat2 cond{};
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) cond[j][i] = P[j][i] * pi[j] / pi[i];
  std::array<StudentT, 2> dist{StudentT(p.regime[0].nu), StudentT(p.regime[1].nu)};
  Rng rng(seed);
  SimOutput out;
  out.seed = seed;
  out.returns.values.reserve(n);
  out.true_variance.reserve(n);
  out.true_regime.reserve(n);
  int s = rng.uniform() < pi[0] ? 0 : 1;
  std::size_t total = burn_in + n;
  for (std::size_t t = 0; t < total; ++t) {
    double z = sample_one(dist[s], rng);
    double r = means[s] + std::sqrt(h[s]) * z;
    if (t >= burn_in) {
      out.returns.values.push_back(r);
      out.true_variance.push_back(h[s]);
      out.true_regime.push_back(s);
    }
    double eps = r - means[s];
    Vec2 hn{};
    for (int i = 0; i < 2; ++i) {
      double m = cond[0][i] * means[0] + cond[1][i] * means[1];
      double base = cond[0][i] * (means[0] * means[0] + h[0]) +
                    cond[1][i] * (means[1] * means[1] + h[1]) - m * m;
      hn[i] = p.regime[i].alpha0 + p.regime[i].alpha1 * eps * eps +
              p.regime[i].beta * base;
      if (!(hn[i] > 0.0) || !std::isfinite(hn[i])) throw_overflow(t);
    }
    h = hn;
    s = rng.uniform() < P[s][0] ? 0 : 1;
  }
  finish_output(out, n);
  return out;
}

OracleResult oracle_garch_forecast(const GarchParams& p, double h_next, int k, int paths,
                                   std::uint64_t seed) {
  check_oracle_args(k, paths);
  if (!(h_next > 0.0) || !std::isfinite(h_next))
    throw NumericError("starting variance must be positive and finite");
  StudentT dist(p.nu);
  Rng rng(seed);
  MomentAcc acc(k);
  for (int pth = 0; pth < paths; ++pth) {
    double h = h_next;
    double cum = 0.0;
    for (int tau = 0; tau < k; ++tau) {
      acc.add_step(tau, h);
      cum += h;
      if (tau + 1 < k) {
        double z = sample_one(dist, rng);
        double eps = std::sqrt(h) * z;
        h = p.alpha0 + p.alpha1 * eps * eps + p.beta * h;
        if (!(h > 0.0) || !std::isfinite(h)) throw_overflow(static_cast<std::size_t>(tau));
      }
    }
    acc.add_path(cum);
  }
  return acc.finish();
}

OracleResult oracle_gjr_forecast(const GjrParams& p, double h_next, int k, int paths,
                                 std::uint64_t seed) {
  check_oracle_args(k, paths);
  if (!(h_next > 0.0) || !std::isfinite(h_next))
    throw NumericError("starting variance must be positive and finite");
  StudentT dist(p.nu);
  Rng rng(seed);
  MomentAcc acc(k);
  for (int pth = 0; pth < paths; ++pth) {
    double h = h_next;
    double cum = 0.0;
    for (int tau = 0; tau < k; ++tau) {
      acc.add_step(tau, h);
      cum += h;
      if (tau + 1 < k) {
        double z = sample_one(dist, rng);
        double eps = std::sqrt(h) * z;
        double load = eps > 0.0 ? p.xi : p.alpha1;
        h = p.alpha0 + load * eps * eps + p.beta * h;
        if (!(h > 0.0) || !std::isfinite(h)) throw_overflow(static_cast<std::size_t>(tau));
      }
    }
    acc.add_path(cum);
  }
  return acc.finish();
}

OracleResult oracle_egarch_forecast(const EgarchParams& p, double logh_next, int k,
                                    int paths, std::uint64_t seed) {
  check_oracle_args(k, paths);
  if (!std::isfinite(logh_next))
    throw NumericError("starting log variance must be finite");
  StudentT dist(p.nu);
  double eabs = abs_moment(dist);
  Rng rng(seed);
  MomentAcc acc(k);
  for (int pth = 0; pth < paths; ++pth) {
    double logh = logh_next;
    double cum = 0.0;
    for (int tau = 0; tau < k; ++tau) {
      double h = std::exp(logh);
      if (!std::isfinite(h)) throw_overflow(static_cast<std::size_t>(tau));
      acc.add_step(tau, h);
      cum += h;
      if (tau + 1 < k) {
        double z = sample_one(dist, rng);
        logh = p.alpha0 + p.alpha1 * (std::fabs(z) - eabs) + p.xi * z + p.beta * logh;
        if (!std::isfinite(logh) || logh > 700.0)
          throw_overflow(static_cast<std::size_t>(tau));
      }
    }
    acc.add_path(cum);
  }
  return acc.finish();
}

OracleResult oracle_mrs_forecast(const MrsParams& p, const Vec2& filt, const Vec2& h_next,
                                 int k, int paths, std::uint64_t seed) {
  check_oracle_args(k, paths);
  for (int i = 0; i < 2; ++i) {
    if (!(filt[i] >= 0.0 && filt[i] <= 1.0))
      throw UsageError("regime probabilities must lie in [0,1]");
    if (!(h_next[i] > 0.0) || !std::isfinite(h_next[i]))
      throw NumericError("starting variances must be positive and finite");
  }
  if (std::fabs(filt[0] + filt[1] - 1.0) > 1e-8)
    throw UsageError("regime probabilities must sum to 1");
  Mat2 P = transition_matrix(p.p, p.q);
  Vec2 means{p.regime[0].delta, p.regime[1].delta};
  std::array<StudentT, 2> dist{StudentT(p.regime[0].nu), StudentT(p.regime[1].nu)};
  Rng rng(seed);
  MomentAcc acc(k);
  for (int pth = 0; pth < paths; ++pth) {
    // Same one-step predictive expression the filter uses.
    Vec2 pi{P[0][0] * filt[0] + P[1][0] * filt[1],
            P[0][1] * filt[0] + P[1][1] * filt[1]};
    int s = rng.uniform() < filt[0] ? 0 : 1;
    s = rng.uniform() < P[s][0] ? 0 : 1;
    Vec2 h = h_next;
    double cum = 0.0;
    for (int tau = 0; tau < k; ++tau) {
      acc.add_step(tau, h[s]);
      cum += h[s];
      if (tau + 1 < k) {
        double z = sample_one(dist[s], rng);
        double eps = std::sqrt(h[s]) * z;
        Vec2 pn{P[0][0] * pi[0] + P[1][0] * pi[1],
                P[0][1] * pi[0] + P[1][1] * pi[1]};
        Vec2 hn{};
        for (int i = 0; i < 2; ++i) {
          double c0 = P[0][i] * pi[0] / pn[i];
          double c1 = P[1][i] * pi[1] / pn[i];
          double m = c0 * means[0] + c1 * means[1];
          double base = c0 * (means[0] * means[0] + h[0]) +
                        c1 * (means[1] * means[1] + h[1]) - m * m;
          hn[i] = p.regime[i].alpha0 + p.regime[i].alpha1 * eps * eps +
                  p.regime[i].beta * base;
          if (!(hn[i] > 0.0) || !std::isfinite(hn[i]))
            throw_overflow(static_cast<std::size_t>(tau));
        }
        h = hn;
        pi = pn;
        s = rng.uniform() < P[s][0] ? 0 : 1;
      }
    }
    acc.add_path(cum);
  }
  return acc.finish();
}

OracleResult oracle_mrs_forecast_marginal(const MrsParams& p, const Vec2& filt,
                                          const Vec2& h_next, int k, int paths,
                                          std::uint64_t seed) {
  check_oracle_args(k, paths);
  for (int i = 0; i < 2; ++i) {
    if (!(filt[i] >= 0.0 && filt[i] <= 1.0))
      throw UsageError("regime probabilities must lie in [0,1]");
    if (!(h_next[i] > 0.0) || !std::isfinite(h_next[i]))
      throw NumericError("starting variances must be positive and finite");
  }
  if (std::fabs(filt[0] + filt[1] - 1.0) > 1e-8)
    throw UsageError("regime probabilities must sum to 1");
  Mat2 P = transition_matrix(p.p, p.q);
  Vec2 means{p.regime[0].delta, p.regime[1].delta};
  std::array<StudentT, 2> dist{StudentT(p.regime[0].nu), StudentT(p.regime[1].nu)};
  Rng rng(seed);
  MomentAcc acc(k);
  for (int pth = 0; pth < paths; ++pth) {
    Vec2 pi{P[0][0] * filt[0] + P[1][0] * filt[1],
            P[0][1] * filt[0] + P[1][1] * filt[1]};
    Vec2 h = h_next;
    double cum = 0.0;
    for (int tau = 0; tau < k; ++tau) {
      // Fully marginalized record: no regime draw enters the average itself.
      double mix = pi[0] * h[0] + pi[1] * h[1];
      acc.add_step(tau, mix);
      cum += mix;
      if (tau + 1 < k) {
        Vec2 pn{P[0][0] * pi[0] + P[1][0] * pi[1],
                P[0][1] * pi[0] + P[1][1] * pi[1]};
        Vec2 hn{};
        for (int i = 0; i < 2; ++i) {
          double c0 = P[0][i] * pi[0] / pn[i];
          double c1 = P[1][i] * pi[1] / pn[i];
          double m = c0 * means[0] + c1 * means[1];
          double base = c0 * (means[0] * means[0] + h[0]) +
                        c1 * (means[1] * means[1] + h[1]) - m * m;
          // One shock draw from the recombined mixture per target regime;
          // its squared value has mean equal to base, keeping the arch and
          // garch terms unbiased for the closed-form recursion.
          int j = rng.uniform() < c0 ? 0 : 1;
          double z = sample_one(dist[j], rng);
          double shock = means[j] - m + std::sqrt(h[j]) * z;
          hn[i] = p.regime[i].alpha0 + p.regime[i].alpha1 * shock * shock +
                  p.regime[i].beta * base;
          if (!(hn[i] > 0.0) || !std::isfinite(hn[i]))
            throw_overflow(static_cast<std::size_t>(tau));
        }
        h = hn;
        pi = pn;
      }
    }
    acc.add_path(cum);
  }
  return acc.finish();
}

void write_sim_prices_csv(const SimOutput& sim, std::ostream& os,
                          const std::vector<std::string>& comment_lines) {
  std::size_t n = sim.returns.size();
  if (n == 0) throw UsageError("nothing to export");
  std::vector<Date> all = sim_dates(n + 1);
  for (const std::string& line : comment_lines) os << "# " << line << "\n";
  os << "date,price\n";
  double price = 100.0;
  os << all[0].str() << "," << format_double(price) << "\n";
  for (std::size_t t = 0; t < n; ++t) {
    price *= std::exp(sim.returns.values[t] / 100.0);
    os << sim.returns.dates[t].str() << "," << format_double(price) << "\n";
  }
}

}  // namespace regimecast
