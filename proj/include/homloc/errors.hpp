#pragma once
#include <stdexcept>
#include <string>

namespace homloc {

/// @brief Raised when an iterative numeric procedure fails to converge
/// (quadrature refinement, estimator campaigns with no usable trials).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace homloc
