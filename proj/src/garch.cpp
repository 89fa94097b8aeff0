#include "garch.hpp"

#include <cmath>

#include "errors.hpp"
#include "student_t.hpp"

namespace regimecast {

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::garch: return "garch";
    case ModelKind::gjr: return "gjr";
    case ModelKind::egarch: return "egarch";
    case ModelKind::mrs: return "mrs";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "garch") return ModelKind::garch;
  if (s == "gjr") return ModelKind::gjr;
  if (s == "egarch") return ModelKind::egarch;
  if (s == "mrs") return ModelKind::mrs;
  throw UsageError("unknown model: " + s + " (expected garch|gjr|egarch|mrs)");
}

static void check_variance(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw NumericError("conditional variance left (0, inf)");
}

VariancePath garch_filter(const GarchParams& p, const std::vector<double>& returns,
                          double h_init) {
  if (!(p.alpha0 > 0.0) || p.alpha1 < 0.0 || p.beta < 0.0 || !(p.nu > 2.0))
    throw NumericError("garch parameters violate positivity constraints");
  if (!(h_init > 0.0)) throw NumericError("h_init must be positive");
  VariancePath out;
  out.h_init = h_init;
  out.h.resize(returns.size());
  double h = h_init;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    out.h[t] = h;
    double eps = returns[t] - p.delta;
    h = p.alpha0 + p.alpha1 * eps * eps + p.beta * h;
    check_variance(h);
  }
  out.h_next = h;
  return out;
}

VariancePath gjr_filter(const GjrParams& p, const std::vector<double>& returns,
                        double h_init) {
  if (!(p.alpha0 > 0.0) || p.alpha1 < 0.0 || p.xi < 0.0 || p.beta < 0.0 || !(p.nu > 2.0))
    throw NumericError("gjr parameters violate positivity constraints");
  if (!(h_init > 0.0)) throw NumericError("h_init must be positive");
  VariancePath out;
  out.h_init = h_init;
  out.h.resize(returns.size());
  double h = h_init;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    out.h[t] = h;
    double eps = returns[t] - p.delta;
    double load = eps > 0.0 ? p.xi : p.alpha1;
    h = p.alpha0 + load * eps * eps + p.beta * h;
    check_variance(h);
  }
  out.h_next = h;
  return out;
}

VariancePath egarch_filter(const EgarchParams& p, const std::vector<double>& returns,
                           double logh_init) {
  if (!(std::fabs(p.beta) < 1.0) || !(p.nu > 2.0))
    throw NumericError("egarch parameters violate |beta| < 1 or nu > 2");
  if (!std::isfinite(logh_init)) throw NumericError("logh_init must be finite");
  double eabs = abs_moment(StudentT(p.nu));
  VariancePath out;
  out.h_init = std::exp(logh_init);
  out.h.resize(returns.size());
  double logh = logh_init;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    double h = std::exp(logh);
    check_variance(h);
    out.h[t] = h;
    double z = (returns[t] - p.delta) / std::sqrt(h);
    logh = p.alpha0 + p.alpha1 * (std::fabs(z) - eabs) + p.xi * z + p.beta * logh;
    if (!std::isfinite(logh)) throw NumericError("egarch log-variance diverged");
  }
  out.h_next = std::exp(logh);
  check_variance(out.h_next);
  return out;
}

static Loglik finish_loglik(double nu, double delta, const std::vector<double>& returns,
                            VariancePath path) {
  StudentT d(nu);
  double ll = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    double h = path.h[t];
    double z = (returns[t] - delta) / std::sqrt(h);
    ll += log_density(d, z) - 0.5 * std::log(h);
  }
  if (!std::isfinite(ll)) throw NumericError("log-likelihood is not finite");
  return Loglik{ll, std::move(path)};
}

Loglik garch_loglik(const GarchParams& p, const std::vector<double>& returns, double h_init) {
  return finish_loglik(p.nu, p.delta, returns, garch_filter(p, returns, h_init));
}

Loglik gjr_loglik(const GjrParams& p, const std::vector<double>& returns, double h_init) {
  return finish_loglik(p.nu, p.delta, returns, gjr_filter(p, returns, h_init));
}

Loglik egarch_loglik(const EgarchParams& p, const std::vector<double>& returns,
                     double logh_init) {
  return finish_loglik(p.nu, p.delta, returns, egarch_filter(p, returns, logh_init));
}

MomentDiagnostics moment_diagnostics(const GarchParams& p) {
  MomentDiagnostics d;
  d.persistence = p.alpha1 + p.beta;
  d.second_moment_ok = d.persistence < 1.0;
  d.fourth_moment_stat = p.beta * p.beta + 2.0 * p.alpha1 * p.beta + 3.0 * p.alpha1 * p.alpha1;
  d.fourth_moment_ok = d.fourth_moment_stat < 1.0;
  return d;
}

double series_mean(const std::vector<double>& v) {
  if (v.empty()) throw DataError("mean of empty series");
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double series_variance(const std::vector<double>& v) {
  double m = series_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size());
}

}  // namespace regimecast
