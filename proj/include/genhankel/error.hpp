#pragma once

#include <stdexcept>
#include <string>

namespace genhankel {

/// A requested computation would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace genhankel
