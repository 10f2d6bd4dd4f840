#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlb {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

inline constexpr Complex im{0.0, 1.0};

// Invalid or inconsistent run configuration (bad JSON, unknown keys,
// incompatible dimensions).  CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure of the numerics at run time (step-size underflow, NaN in
// observables, non-convergent relaxation).  CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds a hard size cap (basis dimension
// overflow, dense Hamiltonian too large).  CLI exit code 4.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mlb
