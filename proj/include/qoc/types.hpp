#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace qoc {

using cplx = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Energies are carried as E/h in GHz and times in ps.  exp(-iHt) wants the
// generator in rad/ps, so every GHz picks up 2*pi*1e-3.
inline constexpr double rad_per_ghz = 2e-3 * std::numbers::pi;

}  // namespace qoc
