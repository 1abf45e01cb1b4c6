#pragma once

#include <stdexcept>
#include <string>

namespace impsel {

// Invalid arguments, malformed files, out-of-range ids. CLI maps this to exit 2.
struct input_error : std::invalid_argument {
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// An exact enumeration would exceed the configured node budget. Never truncate
// silently; callers must shrink the instance or raise the budget.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace impsel
