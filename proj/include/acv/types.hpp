#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Bad arguments, inconsistent constants or malformed configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public UsageError {
 public:
  using UsageError::UsageError;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace acv
