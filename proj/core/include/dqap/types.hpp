#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dqap {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error { using Error::Error; };
struct OpenShellError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct SingularOverlapError : Error { using Error::Error; };
struct LinearSolveError : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SizeLimitExceeded : Error { using Error::Error; };
// eigenvalue of a one-particle density matrix far outside [0, 1]
struct SpectrumError : Error { using Error::Error; };

} // namespace dqap
