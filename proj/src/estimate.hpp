#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "garch.hpp"
#include "mrs.hpp"

namespace regimecast {

// Maximum likelihood over transformed (unconstrained) coordinates: identity
// for means, log for positive scales, logit pairs for stationarity sums,
// 2 + exp(u) for degrees of freedom (capped at 500), logit for p and q.

std::vector<std::string> param_names(ModelKind kind);
std::size_t param_count(ModelKind kind);

// theta is the original-coordinate parameter vector in param_names order.
std::vector<double> forward_transform(ModelKind kind, const std::vector<double>& theta);
std::vector<double> inverse_transform(ModelKind kind, const std::vector<double>& u);

GarchParams theta_to_garch(const std::vector<double>& theta);
GjrParams theta_to_gjr(const std::vector<double>& theta);
EgarchParams theta_to_egarch(const std::vector<double>& theta);
MrsParams theta_to_mrs(const std::vector<double>& theta);
std::vector<double> garch_to_theta(const GarchParams& p);
std::vector<double> gjr_to_theta(const GjrParams& p);
std::vector<double> egarch_to_theta(const EgarchParams& p);
std::vector<double> mrs_to_theta(const MrsParams& p);

// Log-likelihood at original coordinates, with the variance initialization
// held fixed at h_init. Throws NumericError on infeasible theta.
double loglik_at(ModelKind kind, const std::vector<double>& theta,
                 const std::vector<double>& returns, double h_init);

struct FitOptions {
  int restarts = 5;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int max_evals = 20000;
  int threads = 0;  // 0: REGIMECAST_THREADS env var, else hardware count
};

struct RestartTrace {
  double start_obj = 0.0;  // -loglik at the start point
  double final_obj = 0.0;
  int evals = 0;
  bool converged = false;
};

struct FitResult {
  ModelKind kind = ModelKind::garch;
  std::vector<std::string> names;
  std::vector<double> estimates;   // original coordinates
  std::vector<double> std_errors;  // NaN when the Hessian is unusable
  std::vector<double> t_values;    // NaN when the Hessian is unusable
  double loglik = 0.0;
  double aic = 0.0;  // 2k - 2*loglik
  bool converged = false;
  std::size_t n_obs = 0;
  double h_init = 0.0;
  bool normal_limit = false;  // some nu estimate ran past 100
  VariancePath path;          // for MRS this holds the recombined predictive variances
  RegimeProbPath regime_path;  // populated for MRS only
  std::vector<RestartTrace> trace;

  GarchParams garch() const;
  GjrParams gjr() const;
  EgarchParams egarch() const;
  MrsParams mrs() const;
};

std::vector<std::vector<double>> default_starts(ModelKind kind,
                                                const std::vector<double>& returns,
                                                std::uint64_t seed, int count);

FitResult fit(ModelKind kind, const std::vector<double>& returns, const FitOptions& options);

// Central-difference Hessian of f at a point; symmetric by construction.
std::vector<std::vector<double>> numerical_hessian(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& at, const std::vector<double>& steps);

// sqrt(diag((-H)^-1)); all-NaN when -H is singular or has a non-positive
// diagonal after inversion.
std::vector<double> standard_errors_from_hessian(
    const std::vector<std::vector<double>>& hessian);

double aic_total(double loglik, int k);  // 2k - 2*loglik

int resolve_thread_count(int requested);

}  // namespace regimecast
