#pragma once

#include <stdexcept>
#include <string>

namespace inekf_drs {

/// Malformed or out-of-contract input (bad config, non-finite samples, unordered streams).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// The estimator produced a non-finite state or covariance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace inekf_drs
