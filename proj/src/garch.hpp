#pragma once

#include <string>
#include <vector>

namespace regimecast {

enum class ModelKind { garch, gjr, egarch, mrs };

const char* to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

// r_t = delta + eps_t, eps_t = sqrt(h_t) * z_t with z_t unit-variance t(nu).

struct GarchParams {
  double delta = 0.0;
  double alpha0 = 0.0;  // h_t = alpha0 + alpha1*eps^2_{t-1} + beta*h_{t-1}
  double alpha1 = 0.0;
  double beta = 0.0;
  double nu = 0.0;
};

struct GjrParams {
  double delta = 0.0;
  double alpha0 = 0.0;  // alpha1 loads on eps <= 0, xi on eps > 0
  double alpha1 = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  double nu = 0.0;
};

struct EgarchParams {
  double delta = 0.0;  // ln h_t = alpha0 + alpha1*(|z|-E|z|) + xi*z + beta*ln h_{t-1}
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  double nu = 0.0;
};

// Conditional variances aligned with the returns: h[t] conditions on
// information through t-1, h[0] = h_init. h_next is the one-step-ahead
// variance implied by the final observation.
struct VariancePath {
  std::vector<double> h;
  double h_init = 0.0;
  double h_next = 0.0;
};

VariancePath garch_filter(const GarchParams& p, const std::vector<double>& returns,
                          double h_init);
VariancePath gjr_filter(const GjrParams& p, const std::vector<double>& returns,
                        double h_init);
VariancePath egarch_filter(const EgarchParams& p, const std::vector<double>& returns,
                           double logh_init);

struct Loglik {
  double value = 0.0;
  VariancePath path;
};

Loglik garch_loglik(const GarchParams& p, const std::vector<double>& returns, double h_init);
Loglik gjr_loglik(const GjrParams& p, const std::vector<double>& returns, double h_init);
Loglik egarch_loglik(const EgarchParams& p, const std::vector<double>& returns,
                     double logh_init);

struct MomentDiagnostics {
  double persistence = 0.0;         // alpha1 + beta
  bool second_moment_ok = false;    // persistence < 1
  double fourth_moment_stat = 0.0;  // beta^2 + 2*alpha1*beta + 3*alpha1^2
  bool fourth_moment_ok = false;    // Gaussian-case condition, approximate under t
};

MomentDiagnostics moment_diagnostics(const GarchParams& p);

double series_mean(const std::vector<double>& v);
double series_variance(const std::vector<double>& v);  // divisor n, about the mean

}  // namespace regimecast
