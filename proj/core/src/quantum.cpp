#include "xiflow/quantum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "xiflow/numerics.hpp"

namespace xiflow {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd propagator_from_eigen(const Eigen::VectorXd& evals, const Eigen::MatrixXcd& evecs,
                                       double t) {
    Eigen::VectorXcd phases(evals.size());
    for (int k = 0; k < evals.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -evals(k) * t));
    return evecs * phases.asDiagonal() * evecs.adjoint();
}

} // namespace

// ---------------------------------------------------------------------------
// QuantumSystem

QuantumSystem::QuantumSystem(Eigen::MatrixXcd hamiltonian, Eigen::VectorXcd initial_state)
    : h(std::move(hamiltonian)), psi0(std::move(initial_state)) {
    if (h.rows() != h.cols()) throw InvalidInputError("QuantumSystem: H must be square");
    if (psi0.size() != h.rows())
        throw InvalidInputError("QuantumSystem: state dimension does not match H");
    const double herm_dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-12)
        throw InvalidInputError("QuantumSystem: generator is not Hermitian (deviation " +
                                num::fmt17(herm_dev) + ")");
    if (std::abs(psi0.norm() - 1.0) > 1e-12)
        throw InvalidInputError("QuantumSystem: initial state is not normalized");
}

Eigen::MatrixXcd propagator(const QuantumSystem& q, double t) {
    if (!std::isfinite(t)) throw InvalidInputError("propagator: t must be finite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.h);
    if (es.info() != Eigen::Success) throw EvaluationError("propagator: eigendecomposition failed");
    return propagator_from_eigen(es.eigenvalues(), es.eigenvectors(), t);
}

double omega_survival(const QuantumSystem& q, double t) {
    const Complex amp = q.psi0.dot(propagator(q, t) * q.psi0);
    return std::norm(amp);
}

double h_expectation(const QuantumSystem& q) { return q.psi0.dot(q.h * q.psi0).real(); }

std::complex<double> quantum_xi(const QuantumSystem& q, OmegaKind kind, double h,
                                int richardson_levels) {
    if (!(h > 0.0)) throw InvalidInputError("quantum_xi: step must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.h);
    if (es.info() != Eigen::Success) throw EvaluationError("quantum_xi: eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues();
    const Eigen::MatrixXcd evecs = es.eigenvectors();

    const auto quotient = [&](double t) -> Complex {
        const Eigen::MatrixXcd u = propagator_from_eigen(evals, evecs, t);
        const Complex fwd = q.psi0.dot(u * q.psi0); // <psi|U(t)|psi>
        // <psi|U^dag(t)|psi> is the exact complex conjugate of the forward
        // amplitude (U^dag acts to the left), so evaluate it that way instead
        // of through a second matrix product.
        const Complex bwd = std::conj(fwd);
        switch (kind) {
            case OmegaKind::Survival: return Complex(std::norm(fwd) - std::norm(bwd), 0.0) / t;
            case OmegaKind::Amplitude: return (fwd - bwd) / t;
        }
        throw InvalidInputError("quantum_xi: invalid observable kind");
    };
    return num::richardson(quotient, h, richardson_levels);
}

Flow schrodinger_flow(const QuantumSystem& q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.h);
    if (es.info() != Eigen::Success)
        throw EvaluationError("schrodinger_flow: eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues();
    const Eigen::MatrixXcd evecs = es.eigenvectors();

    Flow f;
    f.name = "schrodinger";
    f.field = TimeField::reals();
    f.time_param = TimeParameter::whole(f.field);
    f.space = {StateKind::ComplexVector, q.dim()};
    f.evolve = [evals, evecs](const FieldValue& t, const State& u) {
        return State(Eigen::VectorXcd(propagator_from_eigen(evals, evecs, t.as_real()) *
                                      u.complex_vec()));
    };
    // U^dag(t) = U(-t); kept explicit to mirror the Schrodinger-picture conjugation
    f.exact_conjugate = [evals, evecs](const FieldValue& t, const State& u) {
        return State(Eigen::VectorXcd(
            propagator_from_eigen(evals, evecs, t.as_real()).adjoint() * u.complex_vec()));
    };
    return f;
}

Observable survival_observable(const QuantumSystem& q) {
    const Eigen::VectorXcd psi0 = q.psi0;
    return {"survival", [psi0](const State& u) {
                return FieldValue::real(std::norm(psi0.dot(u.complex_vec())));
            }};
}

Observable amplitude_observable(const QuantumSystem& q) {
    const Eigen::VectorXcd psi0 = q.psi0;
    return {"amplitude", [psi0](const State& u) {
                return FieldValue::complex(psi0.dot(u.complex_vec()));
            }};
}

// ---------------------------------------------------------------------------
// Scattering and the H-theorem

ScatteringSystem::ScatteringSystem(Eigen::MatrixXcd s_matrix, Eigen::VectorXd probabilities,
                                   Eigen::VectorXd normalization)
    : s(std::move(s_matrix)), p(std::move(probabilities)), c(std::move(normalization)) {
    const int n = static_cast<int>(p.size());
    if (s.rows() != s.cols() || s.rows() != n)
        throw InvalidInputError("ScatteringSystem: S and P dimensions disagree");
    if (c.size() == 0) c = Eigen::VectorXd::Ones(n);
    if (c.size() != n) throw InvalidInputError("ScatteringSystem: c has the wrong length");
    const double unit_dev =
        (s.adjoint() * s - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (unit_dev > 1e-10)
        throw InvalidInputError("ScatteringSystem: S is not unitary (deviation " +
                                num::fmt17(unit_dev) + ")");
    for (int i = 0; i < n; ++i) {
        if (p(i) < 0.0)
            throw InvalidInputError("ScatteringSystem: negative probability in channel " +
                                    std::to_string(i));
        if (!(c(i) > 0.0))
            throw InvalidInputError("ScatteringSystem: normalization constants must be positive");
    }
    if (std::abs(p.sum() - 1.0) > 1e-12)
        throw InvalidInputError("ScatteringSystem: probabilities do not sum to 1");
}

Eigen::MatrixXd transition_matrix(const ScatteringSystem& sys) {
    return sys.s.cwiseAbs2();
}

double scattering_entropy(const ScatteringSystem& sys) {
    double acc = 0.0;
    for (int i = 0; i < sys.channels(); ++i) {
        const double pi = sys.p(i);
        if (pi > 0.0) acc -= pi * std::log(pi / sys.c(i));
    }
    return acc;
}

ScatteringSystem master_step(const ScatteringSystem& sys) {
    const Eigen::VectorXd next = transition_matrix(sys) * sys.p;
    return ScatteringSystem(sys.s, next, sys.c);
}

double entropy_rate(const ScatteringSystem& sys) {
    const Eigen::VectorXd flux = transition_matrix(sys) * sys.p - sys.p; // dP/dt
    double rate = 0.0;
    for (int i = 0; i < sys.channels(); ++i) {
        if (flux(i) == 0.0) continue;
        if (sys.p(i) == 0.0) {
            // empty channel with net inflow: the (1 + ln P) weight diverges
            if (flux(i) > 0.0) return std::numeric_limits<double>::infinity();
            throw EvaluationError("entropy_rate: outflow from an empty channel");
        }
        rate -= (1.0 + std::log(sys.p(i) / sys.c(i))) * flux(i);
    }
    return rate;
}

EntropyTrace run_master_chain(ScatteringSystem sys, int steps) {
    if (steps < 0) throw InvalidInputError("run_master_chain: negative step count");
    EntropyTrace trace;
    trace.entropy.reserve(steps + 1);
    trace.delta.reserve(steps + 1);
    trace.entropy.push_back(scattering_entropy(sys));
    trace.delta.push_back(0.0);
    for (int k = 0; k < steps; ++k) {
        sys = master_step(sys);
        const double s = scattering_entropy(sys);
        trace.delta.push_back(s - trace.entropy.back());
        trace.entropy.push_back(s);
    }
    return trace;
}

std::string entropy_trace_csv(const EntropyTrace& trace) {
    std::ostringstream os;
    os << "step,S,dS\n";
    for (std::size_t k = 0; k < trace.entropy.size(); ++k)
        os << k << "," << num::fmt17(trace.entropy[k]) << "," << num::fmt17(trace.delta[k])
           << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Seeded random inputs

Eigen::MatrixXcd random_unitary(int n, std::uint64_t seed) {
    num::Rng rng(seed);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal_complex();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the distribution is Haar rather than QR-convention dependent
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) {
        const Complex rii = r(i, i);
        d(i) = std::abs(rii) > 0.0 ? rii / std::abs(rii) : Complex(1.0, 0.0);
    }
    return q * d.asDiagonal();
}

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
    num::Rng rng(seed);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal_complex();
    return 0.5 * (g + g.adjoint());
}

Eigen::VectorXcd random_state(int n, std::uint64_t seed) {
    num::Rng rng(seed);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal_complex();
    const double norm = v.norm();
    if (norm == 0.0) throw EvaluationError("random_state: degenerate draw");
    return v / norm;
}

} // namespace xiflow
