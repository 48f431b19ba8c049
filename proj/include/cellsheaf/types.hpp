#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cellsheaf {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Raised when an operation's preconditions are violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kron reduction was requested for a sheaf with a vertex stalk of dimension
/// two or more. Such reductions do not exist in general.
class KronObstruction : public Error {
 public:
  using Error::Error;
};

}  // namespace cellsheaf
