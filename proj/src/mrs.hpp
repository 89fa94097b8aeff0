#pragma once

#include <array>
#include <vector>

#include "garch.hpp"

namespace regimecast {

// Two-regime Markov switching GARCH. Regime recursions follow the
// Klaassen recombination: each regime's lagged variance is replaced by its
// expectation conditional on the destination regime.

struct MrsParams {
  std::array<GarchParams, 2> regime;  // regime[1] is the high-variance one after identification
  double p = 0.0;                     // Pr(s_t = 1 | s_{t-1} = 1)
  double q = 0.0;                     // Pr(s_t = 2 | s_{t-1} = 2)
};

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

Mat2 transition_matrix(double p, double q);  // [[p, 1-p], [1-q, q]]
Vec2 ergodic_probs(double p, double q);      // pi1 = (1-q)/(2-p-q)

// cond[j] = Pr(s_{t-1} = j | s_t = target, info); returns
// sum_j cond_j*(mu_j^2 + h_j) - (sum_j cond_j*mu_j)^2.
double klaassen_recombine(const Vec2& cond, const Vec2& means, const Vec2& variances);

// cond[j][i] = P[j][i] * filt[j] / pred_next[i].
Mat2 conditional_regime_probs(const Mat2& P, const Vec2& filt, const Vec2& pred_next);

struct RegimeProbPath {
  std::vector<Vec2> pred;          // Pr(s_t = i | info through t-1)
  std::vector<Vec2> filt;          // Pr(s_t = i | info through t)
  std::vector<Vec2> h;             // per-regime conditional variances
  std::vector<double> recombined;  // sum_i pred[i]*h[i], the one-step predictive variance
  Vec2 pred_next{};
  Vec2 h_next{};
  double recombined_next = 0.0;
  double h_init = 0.0;
};

struct MrsLoglik {
  double value = 0.0;
  RegimeProbPath path;
};

MrsLoglik hamilton_filter(const MrsParams& params, const std::vector<double>& returns,
                          double h_init, const Vec2* init_probs = nullptr);

// Filtered probability of the high-variance regime (index 1), one per date.
std::vector<double> regime_prob_series(const RegimeProbPath& path);

// Unconditional variance proxy alpha0/(1 - alpha1 - beta); +inf when the
// regime is explosive. Used for the regime ordering convention.
double unconditional_variance_proxy(const GarchParams& p);

// Reorder regimes (and swap p/q) so regime 1 has the larger proxy.
MrsParams identify_regimes(const MrsParams& params);

}  // namespace regimecast
