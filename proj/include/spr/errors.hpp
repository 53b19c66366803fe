#pragma once

#include <stdexcept>

namespace spr {

// Least-squares support with more columns than the matrix has rows.
struct UnderdeterminedSupportError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exhaustive search would enumerate more supports than the configured guard.
struct CombinatorialGuardError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input carries no usable information (e.g. all-zero measurements).
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace spr
