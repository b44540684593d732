#pragma once

#include <Eigen/Dense>

#include "xiflow/flow.hpp"

namespace xiflow::flows {

/// Translation flow Phi(t, x) = x + v t on R^n (complete).
Flow translation(const Eigen::VectorXd& velocity);

/// Linear flow Phi(t, x) = exp(A t) x on R^n (complete).
Flow linear(const Eigen::MatrixXd& a);

/// Cyclic shift on Z_p residue states: Phi(t, u) = u + t (a p-cycle raised
/// to the power t). Complete and exact.
Flow zp_cycle(std::uint32_t p);

/// Omega(x) = x[index].
Observable coordinate(int index = 0);

/// Omega(x) = sum_k coeffs[k] * x[index]^k.
Observable polynomial(const std::vector<double>& coeffs, int index = 0);

/// Omega(x) = |x|^2 (squared Euclidean norm of a real vector state).
Observable squared_norm();

Observable constant(double value);

/// Identity observable on residue states.
Observable residue_identity();

} // namespace xiflow::flows
