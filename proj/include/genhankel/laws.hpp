#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace genhankel {

// Symmetrized Rayleigh law: density |x| exp(-x^2) on the real line.
double rayleigh_density(double x);
double rayleigh_cdf(double x);
/// Inverse-cdf draws: |X| = sqrt(-log U), independent fair sign.
std::vector<double> rayleigh_sample(std::uint64_t seed, std::size_t count);

/// Law of B sqrt(theta) R with B ~ Bernoulli(1/theta) independent of R.
/// Right-continuous: the atom 1 - 1/theta is included at x = 0.
/// theta must be a positive integer.
double integer_theta_cdf(double theta, double x);
std::vector<double> integer_theta_sample(double theta, std::uint64_t seed, std::size_t count);

/// k! theta^{k-1}, the even moment beta_{2k} for integer theta.
double moment_integer_theta(double theta, int k);

/// beta_4 = p(abba) + p(aabb) for any theta > 0.
double beta4_closed_form(double theta);

/// Word limit of either Catalan word of length 4.
double catalan4_word_limit(double theta);

/// (C_k floor(theta)^{k-1}, k! (floor(theta) + 1)^{k-1}).
std::pair<double, double> moment_bounds(double theta, int k);

}  // namespace genhankel
