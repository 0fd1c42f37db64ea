#include "genhankel/link.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace genhankel {

LinkSpec LinkSpec::theta_link(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("theta must be a positive finite number");
  LinkSpec spec;
  spec.theta_ = theta;
  std::ostringstream os;
  os << "theta=" << theta;
  spec.description_ = os.str();
  return spec;
}

LinkSpec LinkSpec::custom_modulus(ModulusRule rule, std::string description) {
  if (!rule) throw std::invalid_argument("custom modulus rule is empty");
  LinkSpec spec;
  spec.rule_ = std::move(rule);
  spec.description_ = std::move(description);
  return spec;
}

std::int64_t floor_div(std::int64_t n, double theta) {
  const double q = static_cast<double>(n) / theta;
  auto f = static_cast<std::int64_t>(std::floor(q));
  // Guard against q landing one ulp below an exact integer quotient.
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q))) f = static_cast<std::int64_t>(nearest);
  return f;
}

std::int64_t LinkSpec::modulus(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("dimension n must be >= 1");
  const std::int64_t a = rule_ ? rule_(n) : floor_div(n, theta_);
  if (a < 1) {
    std::ostringstream os;
    os << "link modulus is " << a << " for n=" << n << " (" << description_
       << "); theta must not exceed n";
    throw std::invalid_argument(os.str());
  }
  return a;
}

std::int64_t link_value(std::int64_t i, std::int64_t j, const LinkSpec& link, std::int64_t n) {
  if (i < 1 || i > n || j < 1 || j > n)
    throw std::out_of_range("link_value: index out of range [1, n]");
  return (i + j) % link.modulus(n);
}

}  // namespace genhankel
