#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xiflow/errors.hpp"

namespace xiflow {

/// Product of N component configuration spaces carrying a family of
/// thermodynamic functions P[N]. A single component is not a thermodynamic
/// system, so N >= 2 is enforced.
struct ThermoSpace {
    int n_components;
    std::vector<int> component_dims;
    std::function<double(int)> thermo_fn;

    ThermoSpace(int n, std::vector<int> dims, std::function<double(int)> p_family);
};

struct AsymptoticReport {
    bool pass = false;
    double delta = 0.0;
    std::vector<double> ratios; // |P[N] - P[N-1]| / N^delta for N = 2..N_max
    std::string detail;
};

/// Finite-N trend test of P[N] = P[N-1] + o(N^delta), delta < 0: the tail
/// quartile of |increment|/N^delta must sit strictly below the head quartile
/// (or vanish identically). Requires N_max >= 10.
AsymptoticReport asymptotic_thermo_check(const std::function<double(int)>& p_family, double delta,
                                         int n_max);

/// Entropy-like function of time and a state vector.
struct EntropyFunction {
    std::string name;
    std::function<double(double t, const Eigen::VectorXd& u)> eval;
};

struct ExtensivitySample {
    double t;
    Eigen::VectorXd u1, u2;
};

struct ThermoViolation {
    std::string function_name;
    int index;
    double amount;
};

struct ThermoReport {
    std::size_t checked = 0;
    std::vector<ThermoViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks Lambda(t, (u1, u2)) >= Lambda1(t, u1) + Lambda2(t, u2) on every
/// sample; the joint state is the concatenation of the parts.
ThermoReport extensivity_check(const EntropyFunction& total, const EntropyFunction& part1,
                               const EntropyFunction& part2,
                               const std::vector<ExtensivitySample>& samples, double tol = 1e-12);

/// Verifies that the total entropy and every declared subsystem density are
/// non-decreasing along the trajectory (within tol). The trajectory must be
/// ordered by time. A violation is reported at the index of the later sample
/// of the offending step.
ThermoReport monotonicity_check(const EntropyFunction& total,
                                const std::vector<std::pair<double, Eigen::VectorXd>>& trajectory,
                                const std::vector<EntropyFunction>& subsystems = {},
                                double tol = 1e-12);

/// Scalar-series overload for ingested entropy traces.
ThermoReport monotonicity_check(const std::vector<double>& series, double tol = 1e-12);

enum class SegmentVerdict { Coincide, Oppose, Turning, Indeterminate };

struct ArrowCoincidenceReport {
    std::vector<SegmentVerdict> segments;
    int coincide = 0;
    int oppose = 0;
    /// coincide / (coincide + oppose); empty when no segment is decidable.
    std::optional<double> fraction;
};

/// Compares the sign of Xi with the sign of the entropy increment on each
/// aligned segment. Segments where Xi crosses zero (or sits below tol) are
/// marked Turning and excluded; segments with |dLambda| <= tol are
/// Indeterminate. Throws on length mismatch.
ArrowCoincidenceReport arrow_coincidence(const std::vector<double>& xi_trace,
                                         const std::vector<double>& entropy_deltas, double tol);

} // namespace xiflow
