#pragma once

#include <complex>

#include <Eigen/Dense>

namespace kreinspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kreinspec
