#include "student_t.hpp"

#include <cmath>

#include "errors.hpp"

namespace regimecast {

StudentT::StudentT(double nu_) : nu(nu_) {
  if (!(nu > 2.0)) throw NumericError("degrees of freedom must exceed 2");
  log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
             0.5 * std::log(M_PI * (nu - 2.0));
}

double log_density(const StudentT& d, double z) {
  return d.log_norm - 0.5 * (d.nu + 1.0) * std::log1p(z * z / (d.nu - 2.0));
}

double density(const StudentT& d, double z) { return std::exp(log_density(d, z)); }

// Continued fraction for the incomplete beta function, evaluated with the
// modified Lentz algorithm.
// https://en.wikipedia.org/wiki/Beta_function#Incomplete_beta_function
static double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double dd = 1.0 - qab * x / qap;
  if (std::fabs(dd) < tiny) dd = tiny;
  dd = 1.0 / dd;
  double h = dd;
  for (int m = 1; m <= 300; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    dd = 1.0 + aa * dd;
    if (std::fabs(dd) < tiny) dd = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    h *= dd * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    dd = 1.0 + aa * dd;
    if (std::fabs(dd) < tiny) dd = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    double del = dd * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double cdf(const StudentT& d, double z) {
  double nu = d.nu;
  // map unit-variance z back to the textbook t scale
  double t = z * std::sqrt(nu / (nu - 2.0));
  double p_tail = 0.5 * regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + t * t));
  return t >= 0.0 ? 1.0 - p_tail : p_tail;
}

double quantile(const StudentT& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericError("quantile probability must be in (0,1)");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -quantile(d, 1.0 - p);  // exact antisymmetry

  double lo = -1.0, hi = 0.0;
  while (cdf(d, lo) > p) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e12) throw NumericError("quantile bracket failed");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(d, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  double q = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    double f = cdf(d, q) - p;
    double g = density(d, q);
    if (g <= 0.0) break;
    double step = f / g;
    double next = q - step;
    if (next <= lo || next >= hi) break;
    q = next;
  }
  return q;
}

double abs_moment(const StudentT& d) {
  double nu = d.nu;
  return std::exp(std::log(2.0) + 0.5 * std::log(nu - 2.0) +
                  std::lgamma(0.5 * (nu + 1.0)) - 0.5 * std::log(M_PI) -
                  std::log(nu - 1.0) - std::lgamma(0.5 * nu));
}

double sample_one(const StudentT& d, Rng& rng) {
  double nu = d.nu;
  double n = rng.normal();
  double w = rng.chi_squared(nu);
  double t = n / std::sqrt(w / nu);
  return t * std::sqrt((nu - 2.0) / nu);
}

std::vector<double> sample(const StudentT& d, std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_one(d, rng);
  return out;
}

}  // namespace regimecast
