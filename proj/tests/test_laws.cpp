#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "genhankel/laws.hpp"
#include "genhankel/spectra.hpp"

using namespace genhankel;

namespace {

double mean_power(const std::vector<double>& xs, int p) {
  double s = 0.0;
  for (double x : xs) s += std::pow(x, p);
  return s / static_cast<double>(xs.size());
}

}  // namespace

TEST_SUITE("laws") {

TEST_CASE("symmetrized Rayleigh basics") {
  CHECK(rayleigh_density(0.0) == 0.0);
  CHECK(rayleigh_cdf(0.0) == 0.5);
  CHECK(rayleigh_density(-1.3) == rayleigh_density(1.3));
  CHECK(rayleigh_cdf(-1.3) == doctest::Approx(1.0 - rayleigh_cdf(1.3)).epsilon(1e-15));
  CHECK(rayleigh_cdf(-40.0) == 0.0);
  CHECK(rayleigh_cdf(40.0) == 1.0);
}

TEST_CASE("density integrates to one and matches the cdf") {
  // Composite Simpson on [-10, 10].
  const int m = 200000;
  const double a = -10.0, b = 10.0, h = (b - a) / m;
  double s = rayleigh_density(a) + rayleigh_density(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * rayleigh_density(a + i * h);
  CHECK(std::abs(s * h / 3.0 - 1.0) < 1e-8);

  for (double x : {-2.0, -0.7, 0.3, 1.1, 2.4}) {
    const double d = 1e-6;
    CHECK((rayleigh_cdf(x + d) - rayleigh_cdf(x - d)) / (2 * d) ==
          doctest::Approx(rayleigh_density(x)).epsilon(1e-6));
  }
}

TEST_CASE("Rayleigh sample moments") {
  const auto xs = rayleigh_sample(1, 1'000'000);
  CHECK(std::abs(mean_power(xs, 2) - 1.0) < 0.01);
  CHECK(std::abs(mean_power(xs, 4) - 2.0) < 0.05);
  CHECK(std::abs(mean_power(xs, 1)) < 0.01);
  CHECK(rayleigh_sample(1, 10) == rayleigh_sample(1, 10));
}

TEST_CASE("integer-theta law") {
  for (double x : {-3.0, -0.5, 0.0, 0.5, 3.0}) CHECK(integer_theta_cdf(1.0, x) == rayleigh_cdf(x));
  const double below = integer_theta_cdf(2.0, std::nextafter(0.0, -1.0));
  CHECK(integer_theta_cdf(2.0, 0.0) - below == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(integer_theta_cdf(3.0, 0.0) == doctest::Approx(1.0 - 1.0 / 3.0 + 0.5 / 3.0));
  CHECK_THROWS_AS(integer_theta_cdf(2.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integer_theta_cdf(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integer_theta_sample(1.5, 1, 10), std::invalid_argument);
}

TEST_CASE("integer-theta cdf is monotone with the right limits") {
  for (double theta : {1.0, 2.0, 3.0, 5.0}) {
    double prev = 0.0;
    for (double x = -30.0; x <= 30.0; x += 0.01) {
      const double c = integer_theta_cdf(theta, x);
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(integer_theta_cdf(theta, -30.0) < 1e-12);
    CHECK(integer_theta_cdf(theta, 30.0) > 1.0 - 1e-12);
  }
}

TEST_CASE("integer-theta sampler") {
  const auto xs = integer_theta_sample(3.0, 7, 1'000'000);
  CHECK(std::abs(mean_power(xs, 4) - 6.0) < 0.1);
  CHECK(std::abs(mean_power(xs, 2) - 1.0) < 0.02);
  const double zeros = static_cast<double>(std::count(xs.begin(), xs.end(), 0.0)) / xs.size();
  CHECK(std::abs(zeros - 2.0 / 3.0) < 0.005);

  for (double theta : {1.0, 2.0, 3.0}) {
    auto s = integer_theta_sample(theta, 8, 100'000);
    std::sort(s.begin(), s.end());
    CHECK(ks_distance(s, [theta](double x) { return integer_theta_cdf(theta, x); }) < 0.01);
  }
}

TEST_CASE("moment formulas") {
  CHECK(moment_integer_theta(1.0, 3) == 6.0);
  CHECK(moment_integer_theta(2.0, 1) == 1.0);
  CHECK(moment_integer_theta(3.0, 2) == 6.0);
  CHECK(moment_integer_theta(2.0, 3) == 24.0);
  CHECK_THROWS_AS(moment_integer_theta(2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(moment_integer_theta(1.5, 2), std::invalid_argument);

  CHECK(beta4_closed_form(1.0) == 2.0);
  CHECK(beta4_closed_form(2.0) == 4.0);
  CHECK(beta4_closed_form(0.5) == 2.0);
  CHECK(beta4_closed_form(1.5) == doctest::Approx(10.0 / 3.0));
  CHECK(catalan4_word_limit(1.5) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(beta4_closed_form(0.0), std::invalid_argument);
}

TEST_CASE("beta4 is continuous at integers") {
  for (int m = 1; m <= 6; ++m) {
    const double at = beta4_closed_form(m);
    CHECK(std::abs(beta4_closed_form(m - 1e-10) - at) < 1e-8);
    CHECK(std::abs(beta4_closed_form(m + 1e-10) - at) < 1e-8);
    CHECK(std::abs(beta4_closed_form(std::nextafter(static_cast<double>(m), 0.0)) - at) < 1e-9);
    CHECK(std::abs(beta4_closed_form(std::nextafter(static_cast<double>(m), 10.0)) - at) < 1e-9);
  }
}

TEST_CASE("moment bounds") {
  auto b = moment_bounds(2.5, 2);
  CHECK(b.first == 4.0);
  CHECK(b.second == 6.0);
  b = moment_bounds(0.8, 3);
  CHECK(b.first == 0.0);
  CHECK(b.second == 6.0);
  b = moment_bounds(2.0, 2);
  CHECK(b.first == 4.0);
  CHECK(beta4_closed_form(2.0) == b.first);
  b = moment_bounds(0.3, 1);
  CHECK(b.first == 1.0);
  CHECK(b.second == 1.0);
  CHECK_THROWS_AS(moment_bounds(1.0, 0), std::invalid_argument);

  for (int i = 1; i <= 50; ++i) {
    const double theta = 0.1 * i;
    const auto [lo, hi] = moment_bounds(theta, 2);
    const double b4 = beta4_closed_form(theta);
    CAPTURE(theta);
    CHECK(lo <= b4 + 1e-12);
    CHECK(b4 <= hi + 1e-12);
  }
}

}  // TEST_SUITE
