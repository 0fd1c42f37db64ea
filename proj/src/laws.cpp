#include "genhankel/laws.hpp"

#include <cmath>
#include <stdexcept>

#include "genhankel/limits.hpp"
#include "genhankel/rng.hpp"
#include "genhankel/words.hpp"

namespace genhankel {

namespace {

void require_integer_theta(double theta) {
  if (!is_integer_theta(theta))
    throw std::invalid_argument("integer-theta law requires a positive integer theta");
}

double floor_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("theta must be a positive finite number");
  return static_cast<double>(theta_floor(theta));
}

}  // namespace

double rayleigh_density(double x) { return std::abs(x) * std::exp(-x * x); }

double rayleigh_cdf(double x) {
  const double tail = 0.5 * std::exp(-x * x);
  return x < 0.0 ? tail : 1.0 - tail;
}

std::vector<double> rayleigh_sample(std::uint64_t seed, std::size_t count) {
  Engine eng = make_engine(seed, 0);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double r = std::sqrt(-std::log(uniform_open(eng)));
    x = (eng() >> 63) ? r : -r;
  }
  return out;
}

double integer_theta_cdf(double theta, double x) {
  require_integer_theta(theta);
  const double t = std::round(theta);
  const double atom = x >= 0.0 ? 1.0 - 1.0 / t : 0.0;
  return atom + rayleigh_cdf(x / std::sqrt(t)) / t;
}

std::vector<double> integer_theta_sample(double theta, std::uint64_t seed, std::size_t count) {
  require_integer_theta(theta);
  const double t = std::round(theta);
  const double scale = std::sqrt(t);
  Engine eng = make_engine(seed, 1);
  auto r = rayleigh_sample(seed, count);
  for (auto& x : r) {
    if (uniform_open(eng) < 1.0 / t) {
      x *= scale;
    } else {
      x = 0.0;
    }
  }
  return r;
}

double moment_integer_theta(double theta, int k) {
  require_integer_theta(theta);
  if (k < 1) throw std::invalid_argument("moment_integer_theta: k must be >= 1");
  return static_cast<double>(factorial(k)) * std::pow(std::round(theta), k - 1);
}

double catalan4_word_limit(double theta) {
  const double f = floor_theta(theta);
  return (1.0 - f / theta) * (f + 1.0) * (f + 1.0) + ((f + 1.0) / theta - 1.0) * f * f;
}

double beta4_closed_form(double theta) { return 2.0 * catalan4_word_limit(theta); }

std::pair<double, double> moment_bounds(double theta, int k) {
  const double f = floor_theta(theta);
  if (k < 1) throw std::invalid_argument("moment_bounds: k must be >= 1");
  const double lower = static_cast<double>(catalan_number(k)) * std::pow(f, k - 1);
  const double upper = static_cast<double>(factorial(k)) * std::pow(f + 1.0, k - 1);
  return {lower, upper};
}

}  // namespace genhankel
