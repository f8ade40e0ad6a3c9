#pragma once

#include <stdexcept>
#include <string>

namespace mdm {

inline constexpr const char* kToolVersion = "0.1.0";

// Precondition violated by a caller-supplied value (bad digit, weight, range...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what, int index = -1)
      : std::invalid_argument(what), index_(index) {}

  // Offending element index, or -1 when the error is not tied to one element.
  int index() const noexcept { return index_; }

 private:
  int index_;
};

// A computation would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mdm
