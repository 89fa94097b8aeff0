#include "estimate.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <utility>

#include "errors.hpp"
#include "nelder_mead.hpp"
#include "rng.hpp"

namespace regimecast {

namespace {

constexpr double kHugePenalty = 1e10;
constexpr double kNuCap = 500.0;
const double kNan = std::numeric_limits<double>::quiet_NaN();

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double x) { return std::log(x / (1.0 - x)); }

double clamp_prob(double x) {
  if (x < 1e-10) return 1e-10;
  if (x > 1.0 - 1e-10) return 1.0 - 1e-10;
  return x;
}

double pos_from_u(double u) { return std::max(std::exp(u), 1e-12); }

double nu_from_u(double u) { return 2.0 + std::min(std::exp(u), kNuCap - 2.0); }

double u_from_nu(double nu) { return std::log(std::min(nu, kNuCap) - 2.0); }

void check_size(const std::vector<double>& v, std::size_t k, const char* what) {
  if (v.size() != k)
    throw UsageError(std::string(what) + ": expected " + std::to_string(k) +
                     " parameters, got " + std::to_string(v.size()));
}

}  // namespace

std::vector<std::string> param_names(ModelKind kind) {
  switch (kind) {
    case ModelKind::garch:
      return {"delta", "alpha0", "alpha1", "beta", "nu"};
    case ModelKind::gjr:
      return {"delta", "alpha0", "alpha1", "xi", "beta", "nu"};
    case ModelKind::egarch:
      return {"delta", "alpha0", "alpha1", "xi", "beta", "nu"};
    case ModelKind::mrs:
      return {"delta_1", "alpha0_1", "alpha1_1", "beta_1", "nu_1",
              "delta_2", "alpha0_2", "alpha1_2", "beta_2", "nu_2", "p", "q"};
  }
  throw UsageError("unknown model kind");
}

std::size_t param_count(ModelKind kind) { return param_names(kind).size(); }

GarchParams theta_to_garch(const std::vector<double>& t) {
  check_size(t, 5, "garch");
  return GarchParams{t[0], t[1], t[2], t[3], t[4]};
}

GjrParams theta_to_gjr(const std::vector<double>& t) {
  check_size(t, 6, "gjr");
  return GjrParams{t[0], t[1], t[2], t[3], t[4], t[5]};
}

EgarchParams theta_to_egarch(const std::vector<double>& t) {
  check_size(t, 6, "egarch");
  return EgarchParams{t[0], t[1], t[2], t[3], t[4], t[5]};
}

MrsParams theta_to_mrs(const std::vector<double>& t) {
  check_size(t, 12, "mrs");
  MrsParams m;
  m.regime[0] = GarchParams{t[0], t[1], t[2], t[3], t[4]};
  m.regime[1] = GarchParams{t[5], t[6], t[7], t[8], t[9]};
  m.p = t[10];
  m.q = t[11];
  return m;
}

std::vector<double> garch_to_theta(const GarchParams& p) {
  return {p.delta, p.alpha0, p.alpha1, p.beta, p.nu};
}

std::vector<double> gjr_to_theta(const GjrParams& p) {
  return {p.delta, p.alpha0, p.alpha1, p.xi, p.beta, p.nu};
}

std::vector<double> egarch_to_theta(const EgarchParams& p) {
  return {p.delta, p.alpha0, p.alpha1, p.xi, p.beta, p.nu};
}

std::vector<double> mrs_to_theta(const MrsParams& p) {
  return {p.regime[0].delta, p.regime[0].alpha0, p.regime[0].alpha1,
          p.regime[0].beta,  p.regime[0].nu,     p.regime[1].delta,
          p.regime[1].alpha0, p.regime[1].alpha1, p.regime[1].beta,
          p.regime[1].nu,    p.p,                p.q};
}

std::vector<double> forward_transform(ModelKind kind, const std::vector<double>& theta) {
  switch (kind) {
    case ModelKind::garch: {
      check_size(theta, 5, "garch");
      double s = theta[2] + theta[3];
      double v = s > 0.0 ? theta[3] / s : 0.5;
      return {theta[0], std::log(theta[1]), logit(clamp_prob(s / 0.9999)),
              logit(clamp_prob(v)), u_from_nu(theta[4])};
    }
    case ModelKind::gjr: {
      check_size(theta, 6, "gjr");
      double s = 0.5 * (theta[2] + theta[3]) + theta[4];
      double v = s > 0.0 ? theta[4] / s : 0.5;
      double pair = theta[2] + theta[3];
      double w = pair > 0.0 ? theta[3] / pair : 0.5;
      return {theta[0], std::log(theta[1]), logit(clamp_prob(s / 0.9999)),
              logit(clamp_prob(v)), logit(clamp_prob(w)), u_from_nu(theta[5])};
    }
    case ModelKind::egarch:
      check_size(theta, 6, "egarch");
      return {theta[0], theta[1], theta[2], theta[3], std::atanh(theta[4]),
              u_from_nu(theta[5])};
    case ModelKind::mrs: {
      check_size(theta, 12, "mrs");
      std::vector<double> u(12);
      for (int r = 0; r < 2; ++r) {
        int b = 5 * r;
        u[b + 0] = theta[b + 0];
        u[b + 1] = std::log(theta[b + 1]);
        u[b + 2] = std::log(theta[b + 2]);
        u[b + 3] = std::log(theta[b + 3]);
        u[b + 4] = u_from_nu(theta[b + 4]);
      }
      u[10] = logit(clamp_prob(theta[10]));
      u[11] = logit(clamp_prob(theta[11]));
      return u;
    }
  }
  throw UsageError("unknown model kind");
}

std::vector<double> inverse_transform(ModelKind kind, const std::vector<double>& u) {
  switch (kind) {
    case ModelKind::garch: {
      check_size(u, 5, "garch");
      double s = 0.9999 * sigmoid(u[2]);
      double v = sigmoid(u[3]);
      return {u[0], pos_from_u(u[1]), s * (1.0 - v), s * v, nu_from_u(u[4])};
    }
    case ModelKind::gjr: {
      check_size(u, 6, "gjr");
      double s = 0.9999 * sigmoid(u[2]);
      double v = sigmoid(u[3]);
      double beta = s * v;
      double rem = s - beta;  // (alpha1 + xi) / 2
      double w = sigmoid(u[4]);
      return {u[0], pos_from_u(u[1]), 2.0 * rem * (1.0 - w), 2.0 * rem * w, beta,
              nu_from_u(u[5])};
    }
    case ModelKind::egarch:
      check_size(u, 6, "egarch");
      return {u[0], u[1], u[2], u[3], std::tanh(u[4]), nu_from_u(u[5])};
    case ModelKind::mrs: {
      check_size(u, 12, "mrs");
      std::vector<double> theta(12);
      for (int r = 0; r < 2; ++r) {
        int b = 5 * r;
        theta[b + 0] = u[b + 0];
        theta[b + 1] = pos_from_u(u[b + 1]);
        theta[b + 2] = pos_from_u(u[b + 2]);
        theta[b + 3] = pos_from_u(u[b + 3]);
        theta[b + 4] = nu_from_u(u[b + 4]);
      }
      theta[10] = clamp_prob(sigmoid(u[10]));
      theta[11] = clamp_prob(sigmoid(u[11]));
      return theta;
    }
  }
  throw UsageError("unknown model kind");
}

double loglik_at(ModelKind kind, const std::vector<double>& theta,
                 const std::vector<double>& returns, double h_init) {
  switch (kind) {
    case ModelKind::garch:
      return garch_loglik(theta_to_garch(theta), returns, h_init).value;
    case ModelKind::gjr:
      return gjr_loglik(theta_to_gjr(theta), returns, h_init).value;
    case ModelKind::egarch:
      return egarch_loglik(theta_to_egarch(theta), returns, std::log(h_init)).value;
    case ModelKind::mrs:
      return hamilton_filter(theta_to_mrs(theta), returns, h_init).value;
  }
  throw UsageError("unknown model kind");
}

std::vector<std::vector<double>> default_starts(ModelKind kind,
                                                const std::vector<double>& returns,
                                                std::uint64_t seed, int count) {
  double m = series_mean(returns);
  double var = series_variance(returns);
  std::vector<double> heur;
  switch (kind) {
    case ModelKind::garch:
      heur = {m, 0.05 * var, 0.05, 0.90, 8.0};
      break;
    case ModelKind::gjr:
      heur = {m, 0.05 * var, 0.05, 0.05, 0.90, 8.0};
      break;
    case ModelKind::egarch:
      heur = {m, 0.1 * std::log(var), 0.1, -0.05, 0.9, 8.0};
      break;
    case ModelKind::mrs:
      heur = {m, 0.02 * var, 0.05, 0.90, 8.0, m, 0.2 * var, 0.05, 0.90, 8.0, 0.95, 0.95};
      break;
  }
  std::vector<std::vector<double>> starts;
  starts.push_back(heur);
  std::vector<double> u0 = forward_transform(kind, heur);
  Rng rng(seed);
  for (int r = 1; r < count; ++r) {
    std::vector<double> u = u0;
    for (double& x : u) x += 0.75 * (2.0 * rng.uniform() - 1.0);
    starts.push_back(inverse_transform(kind, u));
  }
  return starts;
}

std::vector<std::vector<double>> numerical_hessian(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& at, const std::vector<double>& steps) {
  std::size_t k = at.size();
  if (steps.size() != k) throw UsageError("hessian: steps size mismatch");
  std::vector<std::vector<double>> H(k, std::vector<double>(k, 0.0));
  double f0 = f(at);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> xp = at, xm = at;
    xp[i] += steps[i];
    xm[i] -= steps[i];
    H[i][i] = (f(xp) - 2.0 * f0 + f(xm)) / (steps[i] * steps[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<double> pp = at, pm = at, mp = at, mm = at;
      pp[i] += steps[i];
      pp[j] += steps[j];
      pm[i] += steps[i];
      pm[j] -= steps[j];
      mp[i] -= steps[i];
      mp[j] += steps[j];
      mm[i] -= steps[i];
      mm[j] -= steps[j];
      double v = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * steps[i] * steps[j]);
      H[i][j] = v;
      H[j][i] = v;
    }
  }
  return H;
}

namespace {

// Gauss-Jordan with partial pivoting; false on (near-)singular input.
bool invert_matrix(std::vector<std::vector<double>> a,
                   std::vector<std::vector<double>>& out) {
  std::size_t k = a.size();
  out.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) out[i][i] = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (!std::isfinite(a[piv][col]) || std::fabs(a[piv][col]) < 1e-30) return false;
    std::swap(a[piv], a[col]);
    std::swap(out[piv], out[col]);
    double d = a[col][col];
    for (std::size_t c = 0; c < k; ++c) {
      a[col][c] /= d;
      out[col][c] /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      double m = a[r][col];
      if (m == 0.0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        a[r][c] -= m * a[col][c];
        out[r][c] -= m * out[col][c];
      }
    }
  }
  return true;
}

}  // namespace

std::vector<double> standard_errors_from_hessian(
    const std::vector<std::vector<double>>& hessian) {
  std::size_t k = hessian.size();
  std::vector<double> se(k, kNan);
  std::vector<std::vector<double>> neg(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(hessian[i][j])) return se;
      neg[i][j] = -hessian[i][j];
    }
  std::vector<std::vector<double>> inv;
  if (!invert_matrix(std::move(neg), inv)) return se;
  for (std::size_t i = 0; i < k; ++i)
    if (inv[i][i] > 0.0) se[i] = std::sqrt(inv[i][i]);
  return se;
}

double aic_total(double loglik, int k) {
  if (k < 1) throw UsageError("aic: k must be >= 1");
  return 2.0 * double(k) - 2.0 * loglik;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REGIMECAST_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

GarchParams FitResult::garch() const {
  if (kind != ModelKind::garch) throw UsageError("fit result is not a garch fit");
  return theta_to_garch(estimates);
}

GjrParams FitResult::gjr() const {
  if (kind != ModelKind::gjr) throw UsageError("fit result is not a gjr fit");
  return theta_to_gjr(estimates);
}

EgarchParams FitResult::egarch() const {
  if (kind != ModelKind::egarch) throw UsageError("fit result is not an egarch fit");
  return theta_to_egarch(estimates);
}

MrsParams FitResult::mrs() const {
  if (kind != ModelKind::mrs) throw UsageError("fit result is not an mrs fit");
  return theta_to_mrs(estimates);
}

FitResult fit(ModelKind kind, const std::vector<double>& returns,
              const FitOptions& options) {
  if (returns.size() < 50)
    throw DataError("need at least 50 observations, got " +
                    std::to_string(returns.size()));
  if (options.restarts < 1) throw UsageError("restarts must be >= 1");
  double var = series_variance(returns);
  if (!(var > 0.0)) throw DataError("degenerate input: returns have zero variance");
  double h_init = var;

  auto objective = [kind, &returns, h_init](const std::vector<double>& u) -> double {
    try {
      double ll = loglik_at(kind, inverse_transform(kind, u), returns, h_init);
      return std::isfinite(ll) ? -ll : kHugePenalty;
    } catch (const std::exception&) {
      return kHugePenalty;
    }
  };

  std::vector<std::vector<double>> starts =
      default_starts(kind, returns, options.seed, options.restarts);
  std::vector<NelderMeadResult> runs(starts.size());
  std::vector<double> start_objs(starts.size());

  int nthreads = std::min<int>(resolve_thread_count(options.threads),
                               int(starts.size()));
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= starts.size()) break;
      std::vector<double> u0 = forward_transform(kind, starts[i]);
      start_objs[i] = objective(u0);
      runs[i] = nelder_mead_minimize(objective, u0, 0.25, options.tol,
                                     options.max_evals);
    }
  };
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].fx < runs[best].fx) best = i;
  if (!(runs[best].fx < kHugePenalty))
    throw NumericError("no restart produced a finite likelihood");

  std::vector<double> theta = inverse_transform(kind, runs[best].x);
  if (kind == ModelKind::mrs) theta = mrs_to_theta(identify_regimes(theta_to_mrs(theta)));

  FitResult out;
  out.kind = kind;
  out.names = param_names(kind);
  out.estimates = theta;
  out.n_obs = returns.size();
  out.h_init = h_init;
  out.loglik = loglik_at(kind, theta, returns, h_init);
  out.aic = aic_total(out.loglik, int(theta.size()));

  // convergence: simplex spread plus a flat-gradient check in transformed space
  bool grad_ok = true;
  std::vector<double> ustar = forward_transform(kind, theta);
  for (std::size_t j = 0; j < ustar.size(); ++j) {
    std::vector<double> up = ustar, um = ustar;
    up[j] += 1e-5;
    um[j] -= 1e-5;
    double g = (objective(up) - objective(um)) / 2e-5;
    if (!(std::fabs(g) < 1e-2)) grad_ok = false;
  }
  out.converged = runs[best].converged && grad_ok;

  auto ll_fn = [kind, &returns, h_init](const std::vector<double>& th) {
    return loglik_at(kind, th, returns, h_init);
  };
  std::vector<double> steps(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    steps[j] = 1e-4 * std::max(std::fabs(theta[j]), 0.1);
  try {
    out.std_errors = standard_errors_from_hessian(numerical_hessian(ll_fn, theta, steps));
  } catch (const std::exception&) {
    out.std_errors.assign(theta.size(), kNan);
  }
  out.t_values.resize(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j)
    out.t_values[j] = theta[j] / out.std_errors[j];

  out.normal_limit = false;
  for (std::size_t j = 0; j < theta.size(); ++j)
    if (out.names[j].rfind("nu", 0) == 0 && theta[j] > 100.0) out.normal_limit = true;

  switch (kind) {
    case ModelKind::garch:
      out.path = garch_loglik(out.garch(), returns, h_init).path;
      break;
    case ModelKind::gjr:
      out.path = gjr_loglik(out.gjr(), returns, h_init).path;
      break;
    case ModelKind::egarch:
      out.path = egarch_loglik(out.egarch(), returns, std::log(h_init)).path;
      break;
    case ModelKind::mrs: {
      MrsLoglik ml = hamilton_filter(out.mrs(), returns, h_init);
      out.regime_path = ml.path;
      out.path.h = ml.path.recombined;
      out.path.h_init = h_init;
      out.path.h_next = ml.path.recombined_next;
      break;
    }
  }

  out.trace.resize(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i)
    out.trace[i] = RestartTrace{start_objs[i], runs[i].fx, runs[i].evals,
                                runs[i].converged};
  return out;
}

}  // namespace regimecast
