#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "xiflow/timefield.hpp"

namespace xiflow {

enum class StateKind { RealVector, ComplexVector, FieldScalar };

struct StateSpace {
    StateKind kind;
    int dim;
};

/// A point of the configuration space: a real vector, a complex vector, or a
/// field scalar (residue class, rational, real). Doubles as the concrete
/// representation of a section value.
class State {
public:
    State() : value_(Eigen::VectorXd()) {}
    State(Eigen::VectorXd v) : value_(std::move(v)) {}
    State(Eigen::VectorXcd v) : value_(std::move(v)) {}
    State(FieldValue v) : value_(std::move(v)) {}

    StateKind kind() const;
    int dim() const;

    const Eigen::VectorXd& real_vec() const;
    const Eigen::VectorXcd& complex_vec() const;
    const FieldValue& scalar() const;

private:
    std::variant<Eigen::VectorXd, Eigen::VectorXcd, FieldValue> value_;
};

State state_add(const State& a, const State& b);
/// Multiplies by 1/2 (exact inverse of 2 for residue states; p = 2 throws).
State state_halve(const State& a);
/// Max-norm deviation between two states; exact kinds report the magnitude
/// of the difference, so 0 means equal.
double state_distance(const State& a, const State& b);
bool state_equal(const State& a, const State& b);

using EvolveFn = std::function<State(const FieldValue& t, const State& u)>;

/// A local dynamics: a map (t, u) -> u over a time parameter J, expected to
/// satisfy the identity and group-composition laws (check_flow_axioms is the
/// verifier). An exact conjugate may be supplied; complete flows fall back to
/// t -> -t time reversal.
struct Flow {
    std::string name;
    TimeField field = TimeField::reals();
    TimeParameter time_param = TimeParameter::whole(TimeField::reals());
    StateSpace space{StateKind::RealVector, 0};
    EvolveFn evolve;
    EvolveFn exact_conjugate; // may be empty

    bool complete() const { return time_param.is_whole(); }
};

/// Scalar function of states with a declared continuity bound. Values live in
/// the flow's field (complex for quantum observables).
struct Observable {
    std::string name;
    std::function<FieldValue(const State&)> eval;
    double continuity_bound = 1.0;
};

struct FlowSample {
    FieldValue t1, t2;
    State u;
};

enum class FlowAxiomKind { Identity, Composition, Domain };

struct FlowAxiomViolation {
    FlowAxiomKind kind;
    std::size_t sample_index;
    double deviation;
    std::string detail;
};

struct FlowAxiomReport {
    std::size_t checked = 0;
    double max_observed_deviation = 0.0; // over all samples, violating or not
    std::vector<FlowAxiomViolation> violations;
    bool ok() const { return violations.empty(); }
    double max_deviation() const;
};

/// Verifies Phi(0, u) = u and Phi(t1+t2, u) = Phi(t1, Phi(t2, u)) on the
/// samples. Deviations are relative to max(1, |reference|); pass tol = 0 for
/// exact fields. Samples with t1, t2 or t1+t2 outside J are reported as
/// Domain entries, not failures of the law.
FlowAxiomReport check_flow_axioms(const Flow& flow, const std::vector<FlowSample>& samples,
                                  double tol);

/// Conjugate dynamics: the flow with Phi^c(t, B) = A whenever Phi(t, A) = B.
/// Uses the supplied exact conjugate if present, otherwise t -> -t for
/// complete flows; anything else throws NotConjugableError. Applying it twice
/// returns the original evolution map.
Flow conjugate(const Flow& flow);

/// Resolves the conjugate evolution map without wrapping a new Flow.
EvolveFn conjugate_evolve(const Flow& flow);

enum class XiEstimator { ExactDiscrete, FiniteDifference, ClosedForm };

std::string to_string(XiEstimator e);

struct NonReversibilityReport {
    FieldValue xi;
    XiEstimator estimator = XiEstimator::FiniteDifference;
    double step = 0.0;
    int arrow_sign = 0;
    std::optional<double> support_fraction;

    /// {"xi": ..., "estimator": ..., "h": ..., "arrow_sign": ..., "support_fraction": ...}
    std::string to_json() const;
};

struct XiOptions {
    double h = 1e-3;          // base step for finite differences
    int richardson_levels = 3; // 1 = plain quotient at h
};

/// The non-reversibility functional
///   Xi_Omega(E) = lim_{t->d_min} (Omega(Phi(t,E)) - Omega(Phi^c(t,E))) / t.
/// Prime fields evaluate one exact quotient at the minimal step; the reals
/// use a Richardson-extrapolated finite difference; the rationals use one
/// exact quotient at the supplied step.
NonReversibilityReport xi(const Observable& omega, const Flow& flow, const State& e,
                          const XiOptions& opt = {});

/// Fraction of sampled states with |Xi_Omega| > tol (the sampled stand-in for
/// "non-zero almost everywhere").
double xi_support_fraction(const Observable& omega, const Flow& flow,
                           const std::vector<State>& sample, double tol,
                           const XiOptions& opt = {});

/// Symmetrized dynamics Sym Phi(t, E) = (Phi(t,E) + Phi^c(t,E)) / 2 on
/// module-valued state spaces. The result is self-conjugate, so its Xi
/// vanishes for every observable.
Flow symmetrize(const Flow& flow);

/// Finite-difference estimate of d/dt|_0 [Phi(t,E) - Phi^c(t,E)] on real
/// vector states; the zero vector certifies reversibility relative to the
/// derivative criterion.
Eigen::VectorXd reversibility_residual(const Flow& flow, const State& e, double h = 1e-3,
                                       int richardson_levels = 3);

struct TurningPointReport {
    std::vector<FieldValue> xi_values;            // per path point
    std::vector<int> point_signs;                 // tol-floored arrow sign per point
    std::vector<std::pair<int, int>> brackets;    // [i, i+1] sign changes
    std::vector<int> degenerate_indices;          // |xi| <= tol
    std::vector<int> segment_arrows;              // per segment, 0 when undecided
};

/// Scans Xi_Omega along an ordered path of states, bracketing sign changes
/// and flagging degenerate (|Xi| <= tol) points.
TurningPointReport detect_turning_points(const Observable& omega, const Flow& flow,
                                         const std::vector<State>& path, double tol,
                                         const XiOptions& opt = {});

} // namespace xiflow
