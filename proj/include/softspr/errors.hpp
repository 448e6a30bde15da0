#pragma once

#include <stdexcept>

namespace softspr {

// Input trees do not share the same leaf label set.
struct LabelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An oracle was asked for an instance beyond its configured size bound.
struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The search reached k_max without an affirmative answer.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace softspr
