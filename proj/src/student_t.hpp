#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace regimecast {

// Unit-variance Student-t innovation distribution. If T is textbook t with nu
// degrees of freedom, Z = T * sqrt((nu-2)/nu) has variance exactly 1 and
// density f(z) = G((nu+1)/2) / (G(nu/2) * sqrt(pi*(nu-2)))
//               * (1 + z^2/(nu-2))^(-(nu+1)/2).
struct StudentT {
  double nu;
  double log_norm;  // cached ln of the normalization constant

  explicit StudentT(double nu_);  // requires nu > 2
};

double log_density(const StudentT& d, double z);
double density(const StudentT& d, double z);
double cdf(const StudentT& d, double z);
double quantile(const StudentT& d, double p);  // |cdf(quantile(p)) - p| <= 1e-10
double abs_moment(const StudentT& d);          // E|Z|

double sample_one(const StudentT& d, Rng& rng);
std::vector<double> sample(const StudentT& d, std::uint64_t seed, std::size_t n);

double regularized_incomplete_beta(double a, double b, double x);

}  // namespace regimecast
