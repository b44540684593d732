#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xiflow/flow.hpp"

namespace xiflow {

using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using OneFormField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Randers metric F(x, y) = sqrt(y^T a(x) y) + b(x).y, the prototype of a
/// non-reversible Finsler structure. a(x) must be symmetric positive definite
/// and the a-norm of the one-form b must stay below 1, which keeps F positive
/// away from the zero section. Spatial derivatives of the fields are taken by
/// central finite differences (step 1e-5).
class RandersMetric {
public:
    RandersMetric(int dim, MatrixField a, OneFormField b);

    /// a = identity, b = 0 (flat Riemannian case).
    static RandersMetric euclidean(int dim);
    /// Position-independent coefficients.
    static RandersMetric constant(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

    int dim() const { return dim_; }
    Eigen::MatrixXd a(const Eigen::VectorXd& x) const { return a_(x); }
    Eigen::VectorXd b(const Eigen::VectorXd& x) const { return b_(x); }

    /// SPD check (Cholesky) plus ||b||_a < 1 at one point; throws
    /// InvalidInputError on failure.
    void validate_at(const Eigen::VectorXd& x) const;
    void validate_on(const std::vector<Eigen::VectorXd>& points) const;

private:
    int dim_;
    MatrixField a_;
    OneFormField b_;
};

/// State of the geodesic flow: base point and nonzero velocity.
struct GeodesicState {
    Eigen::VectorXd x;
    Eigen::VectorXd v;
};

/// F(x, y); throws on y = 0.
double finsler_norm(const RandersMetric& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Non-reversibility of the geodesic example, evaluated directly:
/// F^2(x, v) - F^2(x, -v).
double finsler_xi(const RandersMetric& f, const GeodesicState& s);

/// The same quantity through the algebraic identity 4 sqrt(v^T a v) (b.v).
double finsler_xi_closed(const RandersMetric& f, const GeodesicState& s);

struct GeodesicTrajectory {
    std::vector<double> t;
    std::vector<GeodesicState> states;
    std::vector<double> f_values; // F(gamma, gamma') along the way
};

/// Integrates the Euler-Lagrange equations of the energy functional
/// integral F^2(gamma, gamma') dt with fixed-step RK4. F is a first integral
/// of its own geodesic flow, so f_values should stay constant up to
/// integration error. Throws EvaluationError (with the step index) if the
/// derivative estimates go non-finite.
GeodesicTrajectory integrate_geodesic(const RandersMetric& f, const GeodesicState& s0, double total_time,
                                      int steps);

/// CSV rows (t, x..., v..., F) with headers.
std::string trajectory_csv(const GeodesicTrajectory& traj);

/// max over the sampled directions of F(x, -y) / F(x, y); equals 1 iff the
/// metric is reversible on the sample. For a = I the supremum over the sphere
/// is (1 + |b|) / (1 - |b|).
double reversibility_lambda(const RandersMetric& f, const Eigen::VectorXd& x,
                            const std::vector<Eigen::VectorXd>& directions);

/// Evenly spaced unit directions on the circle (dim 2) or seeded random unit
/// vectors (higher dims).
std::vector<Eigen::VectorXd> sphere_directions(int dim, int count, std::uint64_t seed = 20260810u);

/// Geodesic flow as a dynamics on (x, v) states in R^{2m}. steps_per_unit
/// controls the fixed RK4 substep density.
Flow geodesic_flow(const RandersMetric& f, int steps_per_unit = 128);

/// Geodesic flow augmented with the accumulated energy integral: states are
/// (x, v, s) with ds/dt = F^2(x, v). The exact conjugate transports the
/// section along the reversed-velocity geodesic while accumulating its own
/// cost, which is the concrete carrier of the path-integral observable the
/// geodesic example differentiates.
Flow action_flow(const RandersMetric& f, int steps_per_unit = 128);

/// Picks the accumulated-action component of an action_flow state.
Observable action_observable(int dim);

} // namespace xiflow
