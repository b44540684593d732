#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xiflow/flow.hpp"

namespace xiflow {

/// Finite-dimensional quantum system: Hermitian generator H and a unit-norm
/// initial state.
struct QuantumSystem {
    Eigen::MatrixXcd h;
    Eigen::VectorXcd psi0;

    QuantumSystem(Eigen::MatrixXcd hamiltonian, Eigen::VectorXcd initial_state);
    int dim() const { return static_cast<int>(h.rows()); }
};

/// U(t) = exp(-i H t) via eigendecomposition of H.
Eigen::MatrixXcd propagator(const QuantumSystem& q, double t);

/// Survival probability |<psi0| U(t) |psi0>|^2.
double omega_survival(const QuantumSystem& q, double t);

/// <psi0| H |psi0> (real for Hermitian H).
double h_expectation(const QuantumSystem& q);

enum class OmegaKind { Survival, Amplitude };

/// Xi for the two observable choices, with the conjugate dynamics realized as
/// U^dagger(t) acting on the initial state. The survival kind vanishes to
/// machine precision because the two amplitudes are complex conjugates. The
/// amplitude kind converges to a purely imaginary value of magnitude
/// 2 |<psi0|H|psi0>|; with this conjugation convention the computed value is
/// -2i <H> (flipping the convention flips the sign).
std::complex<double> quantum_xi(const QuantumSystem& q, OmegaKind kind, double h = 1e-3,
                                int richardson_levels = 3);

/// Schrodinger evolution as a flow on complex vector states. The eigendecomposition
/// of H is computed once and cached inside the returned callable.
Flow schrodinger_flow(const QuantumSystem& q);

Observable survival_observable(const QuantumSystem& q);
Observable amplitude_observable(const QuantumSystem& q);

/// Scattering model: unitary S-matrix, channel occupation probabilities and
/// positive normalization constants (default all 1).
struct ScatteringSystem {
    Eigen::MatrixXcd s;
    Eigen::VectorXd p;
    Eigen::VectorXd c;

    ScatteringSystem(Eigen::MatrixXcd s_matrix, Eigen::VectorXd probabilities,
                     Eigen::VectorXd normalization = Eigen::VectorXd());
    int channels() const { return static_cast<int>(p.size()); }
};

/// T(a, b) = |S(a, b)|^2; doubly stochastic because S is unitary.
Eigen::MatrixXd transition_matrix(const ScatteringSystem& sys);

/// S = -sum_a P_a ln(P_a / c_a) with 0 ln 0 = 0.
double scattering_entropy(const ScatteringSystem& sys);

/// One step of the doubly stochastic chain P <- T P (the discrete-time
/// carrier of the rate dynamics P_b G(b->a) - P_a G(a->b)). Entropy with
/// c = 1 never decreases along these steps.
ScatteringSystem master_step(const ScatteringSystem& sys);

/// Discrete analogue of dS/dt: -sum_a (1 + ln(P_a/c_a)) ((T - I) P)_a.
/// Equals the first-order entropy change of one master step; returns +inf
/// when an empty channel has net inflow (the continuous rate diverges there).
double entropy_rate(const ScatteringSystem& sys);

struct EntropyTrace {
    std::vector<double> entropy; // entropy[k] before step k
    std::vector<double> delta;   // delta[k] = entropy[k] - entropy[k-1], delta[0] = 0
};

EntropyTrace run_master_chain(ScatteringSystem sys, int steps);

/// CSV rows (step, S, dS) with headers.
std::string entropy_trace_csv(const EntropyTrace& trace);

/// Haar-like random unitary from a seeded QR of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(int n, std::uint64_t seed);
Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed);
Eigen::VectorXcd random_state(int n, std::uint64_t seed);

} // namespace xiflow
