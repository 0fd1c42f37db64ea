#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace genhankel {

/// Link L(i,j) = (i + j) mod a_n. The theta family uses a_n = floor(n / theta);
/// a custom rule supplies a_n directly.
class LinkSpec {
 public:
  using ModulusRule = std::function<std::int64_t(std::int64_t)>;

  static LinkSpec theta_link(double theta);
  static LinkSpec custom_modulus(ModulusRule rule, std::string description);

  bool is_theta() const { return !rule_; }
  double theta() const { return theta_; }
  const std::string& description() const { return description_; }

  /// a_n for dimension n. Throws std::invalid_argument if n < 1 or a_n < 1.
  std::int64_t modulus(std::int64_t n) const;

 private:
  double theta_ = 0.0;
  ModulusRule rule_;
  std::string description_;
};

inline std::int64_t modulus(const LinkSpec& link, std::int64_t n) { return link.modulus(n); }

/// (i + j) mod a_n for 1-based i, j in [1, n].
std::int64_t link_value(std::int64_t i, std::int64_t j, const LinkSpec& link, std::int64_t n);

/// floor(n / theta) computed so that exact quotients such as 1000 / 0.5 are not
/// lost to rounding.
std::int64_t floor_div(std::int64_t n, double theta);

}  // namespace genhankel
