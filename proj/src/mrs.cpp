#include "mrs.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "errors.hpp"
#include "student_t.hpp"

namespace regimecast {

Mat2 transition_matrix(double p, double q) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0))
    throw NumericError("transition probabilities must lie strictly in (0,1)");
  return Mat2{{{p, 1.0 - p}, {1.0 - q, q}}};
}

Vec2 ergodic_probs(double p, double q) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0))
    throw NumericError("transition probabilities must lie strictly in (0,1)");
  double denom = 2.0 - p - q;
  if (!(denom > 0.0)) throw NumericError("degenerate chain: p + q = 2");
  double pi1 = (1.0 - q) / denom;
  return Vec2{pi1, 1.0 - pi1};
}

double klaassen_recombine(const Vec2& cond, const Vec2& means, const Vec2& variances) {
  double second = cond[0] * (means[0] * means[0] + variances[0]) +
                  cond[1] * (means[1] * means[1] + variances[1]);
  double mean = cond[0] * means[0] + cond[1] * means[1];
  return second - mean * mean;
}

Mat2 conditional_regime_probs(const Mat2& P, const Vec2& filt, const Vec2& pred_next) {
  Mat2 cond;
  for (int i = 0; i < 2; ++i) {
    if (!(pred_next[i] > 0.0))
      throw NumericError("predicted regime probability vanished");
    for (int j = 0; j < 2; ++j) cond[j][i] = P[j][i] * filt[j] / pred_next[i];
  }
  return cond;
}

static void check_mrs_params(const MrsParams& m) {
  for (const GarchParams& g : m.regime) {
    if (!(g.alpha0 > 0.0) || g.alpha1 < 0.0 || g.beta < 0.0 || !(g.nu > 2.0))
      throw NumericError("regime parameters violate positivity constraints");
  }
  if (!(m.p > 0.0 && m.p < 1.0) || !(m.q > 0.0 && m.q < 1.0))
    throw NumericError("transition probabilities must lie strictly in (0,1)");
}

MrsLoglik hamilton_filter(const MrsParams& params, const std::vector<double>& returns,
                          double h_init, const Vec2* init_probs) {
  check_mrs_params(params);
  if (!(h_init > 0.0)) throw NumericError("h_init must be positive");

  const Mat2 P = transition_matrix(params.p, params.q);
  const StudentT dist[2] = {StudentT(params.regime[0].nu), StudentT(params.regime[1].nu)};
  const Vec2 mu = {params.regime[0].delta, params.regime[1].delta};

  std::size_t n = returns.size();
  RegimeProbPath path;
  path.h_init = h_init;
  path.pred.resize(n);
  path.filt.resize(n);
  path.h.resize(n);
  path.recombined.resize(n);

  Vec2 pred = init_probs ? *init_probs : ergodic_probs(params.p, params.q);
  Vec2 h = {h_init, h_init};
  double ll = 0.0;

  // Probability-weighted average of the regime variances. The regime-mean
  // dispersion term is deliberately excluded so one-step values line up with
  // the k-step aggregation rule used by the forecaster.
  auto mixture_variance = [](const Vec2& pr, const Vec2& hh) {
    return pr[0] * hh[0] + pr[1] * hh[1];
  };

  for (std::size_t t = 0; t < n; ++t) {
    path.pred[t] = pred;
    path.h[t] = h;
    path.recombined[t] = mixture_variance(pred, h);

    // Bayes update in log space, scaled by the larger term
    Vec2 a;
    for (int i = 0; i < 2; ++i) {
      double z = (returns[t] - mu[i]) / std::sqrt(h[i]);
      a[i] = std::log(pred[i]) + log_density(dist[i], z) - 0.5 * std::log(h[i]);
    }
    double m = a[0] > a[1] ? a[0] : a[1];
    if (!std::isfinite(m)) throw NumericError("regime densities vanished");
    double lt = m + std::log(std::exp(a[0] - m) + std::exp(a[1] - m));
    ll += lt;
    Vec2 filt = {std::exp(a[0] - lt), std::exp(a[1] - lt)};
    double fs = filt[0] + filt[1];
    filt[0] /= fs;
    filt[1] /= fs;
    path.filt[t] = filt;

    double eps = returns[t] - (filt[0] * mu[0] + filt[1] * mu[1]);
    Vec2 pred_next = {P[0][0] * filt[0] + P[1][0] * filt[1],
                      P[0][1] * filt[0] + P[1][1] * filt[1]};
    Mat2 cond = conditional_regime_probs(P, filt, pred_next);
    Vec2 h_next;
    for (int i = 0; i < 2; ++i) {
      double base = klaassen_recombine(Vec2{cond[0][i], cond[1][i]}, mu, h);
      h_next[i] = params.regime[i].alpha0 + params.regime[i].alpha1 * eps * eps +
                  params.regime[i].beta * base;
      if (!(h_next[i] > 0.0) || !std::isfinite(h_next[i]))
        throw NumericError("regime variance left (0, inf)");
    }
    pred = pred_next;
    h = h_next;
  }
  if (!std::isfinite(ll)) throw NumericError("log-likelihood is not finite");

  path.pred_next = pred;
  path.h_next = h;
  path.recombined_next = mixture_variance(pred, h);
  return MrsLoglik{ll, std::move(path)};
}

std::vector<double> regime_prob_series(const RegimeProbPath& path) {
  std::vector<double> out(path.filt.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = path.filt[t][1];
  return out;
}

double unconditional_variance_proxy(const GarchParams& p) {
  double persistence = p.alpha1 + p.beta;
  if (persistence >= 1.0) return std::numeric_limits<double>::infinity();
  return p.alpha0 / (1.0 - persistence);
}

MrsParams identify_regimes(const MrsParams& params) {
  double v0 = unconditional_variance_proxy(params.regime[0]);
  double v1 = unconditional_variance_proxy(params.regime[1]);
  if (v0 <= v1) return params;
  MrsParams out;
  out.regime[0] = params.regime[1];
  out.regime[1] = params.regime[0];
  out.p = params.q;
  out.q = params.p;
  return out;
}

}  // namespace regimecast
