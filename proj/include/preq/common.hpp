#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace preq {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Frame = Eigen::Matrix<double, 3, 2>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Kernels that loop over independent grid nodes (or independent sweep rows)
// come in two flavours: a plain loop kept as the reference, and an OpenMP
// version. Both must produce bit-identical output.
enum class Exec { Serial, Parallel };

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Numerical accuracy could not be certified (quadrature, flow drift, ...).
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time steps too coarse for the requested stepper or lifting.
struct StepSizeError : AccuracyError {
  using AccuracyError::AccuracyError;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace preq
