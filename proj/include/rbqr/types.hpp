#ifndef RBQR_TYPES_HPP
#define RBQR_TYPES_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rbqr {

using Scalar = std::complex<double>;
using Index = Eigen::Index;

/// Column-major dense complex matrix. Columns are contiguous in memory.
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
/// Row-major dense complex matrix, used for row-wise growing R factors.
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

//
// exception hierarchy
//

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input (files, configs, parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Candidate vector lies numerically in the span of the current basis.
class DegenerateCandidate : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed to converge or an operand violates a numerical precondition.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Parallel runs disagree where they are required to be identical.
class DeterminismError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbqr

#endif  // RBQR_TYPES_HPP
