#pragma once

#include <stdexcept>
#include <string>

namespace tenrank {

/// Violated input contract (bad file, bad dimension, bad option). CLI exit code 2.
class input_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure (factorization breakdown, eigenvalue below tolerance). CLI exit code 3.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace tenrank
