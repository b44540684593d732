#include "xiflow/randers.hpp"

#include <cmath>
#include <sstream>

#include "xiflow/numerics.hpp"

namespace xiflow {

namespace {

constexpr double kSpatialStep = 1e-5; // central differences of the metric fields

struct Lagrangian {
    const RandersMetric* metric;

    // L(x, v) = F^2(x, v) = (alpha + beta)^2
    double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        const Eigen::MatrixXd a = metric->a(x);
        const double alpha = std::sqrt(v.dot(a * v));
        const double beta = metric->b(x).dot(v);
        const double f = alpha + beta;
        return f * f;
    }

    Eigen::VectorXd grad_v(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        const Eigen::MatrixXd a = metric->a(x);
        const Eigen::VectorXd av = a * v;
        const double alpha = std::sqrt(v.dot(av));
        const Eigen::VectorXd b = metric->b(x);
        const double f = alpha + b.dot(v);
        return 2.0 * f * (av / alpha + b);
    }

    // fundamental tensor of F^2 (twice the Finsler g_ij); positive definite
    // away from v = 0 while ||b||_a < 1
    Eigen::MatrixXd hess_v(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        const Eigen::MatrixXd a = metric->a(x);
        const Eigen::VectorXd av = a * v;
        const double alpha = std::sqrt(v.dot(av));
        const Eigen::VectorXd b = metric->b(x);
        const double f = alpha + b.dot(v);
        const Eigen::VectorXd l = av / alpha + b; // d(alpha+beta)/dv
        return 2.0 * (l * l.transpose() +
                      f * (a / alpha - (av * av.transpose()) / (alpha * alpha * alpha)));
    }

    Eigen::VectorXd grad_x(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        Eigen::VectorXd g(x.size());
        Eigen::VectorXd xp = x;
        for (int j = 0; j < x.size(); ++j) {
            xp(j) = x(j) + kSpatialStep;
            const double lp = (*this)(xp, v);
            xp(j) = x(j) - kSpatialStep;
            const double lm = (*this)(xp, v);
            xp(j) = x(j);
            g(j) = (lp - lm) / (2.0 * kSpatialStep);
        }
        return g;
    }

    // J(i, j) = d( dL/dv_i ) / dx_j
    Eigen::MatrixXd mixed_xv(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        Eigen::MatrixXd j(x.size(), x.size());
        Eigen::VectorXd xp = x;
        for (int col = 0; col < x.size(); ++col) {
            xp(col) = x(col) + kSpatialStep;
            const Eigen::VectorXd gp = grad_v(xp, v);
            xp(col) = x(col) - kSpatialStep;
            const Eigen::VectorXd gm = grad_v(xp, v);
            xp(col) = x(col);
            j.col(col) = (gp - gm) / (2.0 * kSpatialStep);
        }
        return j;
    }

    // Euler-Lagrange acceleration: M(x,v) a = dL/dx - (d^2L/dx dv) v
    Eigen::VectorXd acceleration(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        const Eigen::VectorXd rhs = grad_x(x, v) - mixed_xv(x, v) * v;
        return hess_v(x, v).ldlt().solve(rhs);
    }
};

struct PhasePoint {
    Eigen::VectorXd x, v;
    double action = 0.0;
};

PhasePoint rk4_step(const Lagrangian& lag, const PhasePoint& p, double dt, bool with_action) {
    const auto deriv = [&](const PhasePoint& q) {
        PhasePoint d;
        d.x = q.v;
        d.v = lag.acceleration(q.x, q.v);
        d.action = with_action ? lag(q.x, q.v) : 0.0;
        return d;
    };
    const auto advance = [](const PhasePoint& q, const PhasePoint& d, double s) {
        PhasePoint r;
        r.x = q.x + s * d.x;
        r.v = q.v + s * d.v;
        r.action = q.action + s * d.action;
        return r;
    };
    const PhasePoint k1 = deriv(p);
    const PhasePoint k2 = deriv(advance(p, k1, dt / 2.0));
    const PhasePoint k3 = deriv(advance(p, k2, dt / 2.0));
    const PhasePoint k4 = deriv(advance(p, k3, dt));
    PhasePoint out;
    out.x = p.x + (dt / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.v = p.v + (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.action = p.action + (dt / 6.0) * (k1.action + 2.0 * k2.action + 2.0 * k3.action + k4.action);
    return out;
}

PhasePoint integrate(const Lagrangian& lag, PhasePoint p, double total_time, int steps,
                     bool with_action) {
    const double dt = total_time / steps;
    for (int k = 0; k < steps; ++k) {
        p = rk4_step(lag, p, dt, with_action);
        if (!p.x.allFinite() || !p.v.allFinite() || !std::isfinite(p.action))
            throw EvaluationError("integrate_geodesic: non-finite state at step " +
                                  std::to_string(k));
    }
    return p;
}

int substeps(double t, int steps_per_unit) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(t) * steps_per_unit)));
}

} // namespace

// ---------------------------------------------------------------------------
// RandersMetric

RandersMetric::RandersMetric(int dim, MatrixField a, OneFormField b)
    : dim_(dim), a_(std::move(a)), b_(std::move(b)) {
    if (dim_ < 1) throw InvalidInputError("RandersMetric: dimension must be positive");
    validate_at(Eigen::VectorXd::Zero(dim_));
}

RandersMetric RandersMetric::euclidean(int dim) {
    return RandersMetric(
        dim, [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(dim, dim); },
        [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim); });
}

RandersMetric RandersMetric::constant(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw InvalidInputError("RandersMetric: inconsistent coefficient dimensions");
    Eigen::MatrixXd am = a;
    Eigen::VectorXd bv = b;
    return RandersMetric(
        static_cast<int>(b.size()), [am](const Eigen::VectorXd&) { return am; },
        [bv](const Eigen::VectorXd&) { return bv; });
}

void RandersMetric::validate_at(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXd a = a_(x);
    if (a.rows() != dim_ || a.cols() != dim_)
        throw InvalidInputError("RandersMetric: a(x) has the wrong shape");
    if (!a.isApprox(a.transpose(), 1e-12))
        throw InvalidInputError("RandersMetric: a(x) is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw InvalidInputError("RandersMetric: a(x) is not positive definite");
    const Eigen::VectorXd b = b_(x);
    if (b.size() != dim_) throw InvalidInputError("RandersMetric: b(x) has the wrong shape");
    // one-form norm: ||b||_a^2 = b^T a^{-1} b
    const double bnorm2 = b.dot(llt.solve(b));
    if (!(bnorm2 < 1.0))
        throw InvalidInputError("RandersMetric: ||b||_a >= 1 at a sampled point (F loses positivity)");
}

void RandersMetric::validate_on(const std::vector<Eigen::VectorXd>& points) const {
    for (const auto& x : points) validate_at(x);
}

// ---------------------------------------------------------------------------
// Norm and Xi

double finsler_norm(const RandersMetric& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (y.size() != f.dim() || x.size() != f.dim())
        throw InvalidInputError("finsler_norm: dimension mismatch");
    if (y.isZero(0.0))
        throw InvalidInputError("finsler_norm: F is evaluated away from the zero section");
    const Eigen::MatrixXd a = f.a(x);
    return std::sqrt(y.dot(a * y)) + f.b(x).dot(y);
}

double finsler_xi(const RandersMetric& f, const GeodesicState& s) {
    const double fp = finsler_norm(f, s.x, s.v);
    const double fm = finsler_norm(f, s.x, -s.v);
    return fp * fp - fm * fm;
}

double finsler_xi_closed(const RandersMetric& f, const GeodesicState& s) {
    const Eigen::MatrixXd a = f.a(s.x);
    return 4.0 * std::sqrt(s.v.dot(a * s.v)) * f.b(s.x).dot(s.v);
}

// ---------------------------------------------------------------------------
// Geodesic integration

GeodesicTrajectory integrate_geodesic(const RandersMetric& f, const GeodesicState& s0, double total_time,
                                      int steps) {
    if (steps < 1) throw InvalidInputError("integrate_geodesic: steps must be >= 1");
    if (s0.v.isZero(0.0)) throw InvalidInputError("integrate_geodesic: zero initial velocity");
    const Lagrangian lag{&f};
    GeodesicTrajectory traj;
    traj.t.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.f_values.reserve(steps + 1);
    PhasePoint p{s0.x, s0.v, 0.0};
    const double dt = total_time / steps;
    traj.t.push_back(0.0);
    traj.states.push_back(s0);
    traj.f_values.push_back(finsler_norm(f, p.x, p.v));
    for (int k = 0; k < steps; ++k) {
        p = rk4_step(lag, p, dt, false);
        if (!p.x.allFinite() || !p.v.allFinite())
            throw EvaluationError("integrate_geodesic: non-finite state at step " +
                                  std::to_string(k));
        traj.t.push_back(dt * (k + 1));
        traj.states.push_back({p.x, p.v});
        traj.f_values.push_back(finsler_norm(f, p.x, p.v));
    }
    return traj;
}

std::string trajectory_csv(const GeodesicTrajectory& traj) {
    std::ostringstream os;
    if (traj.states.empty()) return "";
    const int m = static_cast<int>(traj.states.front().x.size());
    os << "t";
    for (int j = 0; j < m; ++j) os << ",x" << j;
    for (int j = 0; j < m; ++j) os << ",v" << j;
    os << ",F\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        os << num::fmt17(traj.t[i]);
        for (int j = 0; j < m; ++j) os << "," << num::fmt17(traj.states[i].x(j));
        for (int j = 0; j < m; ++j) os << "," << num::fmt17(traj.states[i].v(j));
        os << "," << num::fmt17(traj.f_values[i]) << "\n";
    }
    return os.str();
}

double reversibility_lambda(const RandersMetric& f, const Eigen::VectorXd& x,
                            const std::vector<Eigen::VectorXd>& directions) {
    if (directions.empty()) throw InvalidInputError("reversibility_lambda: empty direction sample");
    double lambda = 0.0;
    for (const auto& y : directions)
        lambda = std::max(lambda, finsler_norm(f, x, -y) / finsler_norm(f, x, y));
    return lambda;
}

std::vector<Eigen::VectorXd> sphere_directions(int dim, int count, std::uint64_t seed) {
    if (dim < 1 || count < 1) throw InvalidInputError("sphere_directions: bad arguments");
    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * M_PI * k / count;
            dirs.push_back(Eigen::Vector2d(std::cos(th), std::sin(th)));
        }
        return dirs;
    }
    num::Rng rng(seed);
    while (static_cast<int>(dirs.size()) < count) {
        Eigen::VectorXd y(dim);
        for (int j = 0; j < dim; ++j) y(j) = rng.normal();
        const double n = y.norm();
        if (n > 1e-12) dirs.push_back(y / n);
    }
    return dirs;
}

// ---------------------------------------------------------------------------
// Flow bridges

Flow geodesic_flow(const RandersMetric& f, int steps_per_unit) {
    Flow flow;
    flow.name = "randers-geodesic";
    flow.field = TimeField::reals();
    flow.time_param = TimeParameter::whole(flow.field);
    flow.space = {StateKind::RealVector, 2 * f.dim()};
    const int m = f.dim();
    const RandersMetric metric = f;
    flow.evolve = [metric, m, steps_per_unit](const FieldValue& tv, const State& u) {
        const double t = tv.as_real();
        const Eigen::VectorXd& z = u.real_vec();
        if (t == 0.0) return u;
        PhasePoint p{z.head(m), z.tail(m), 0.0};
        p = integrate(Lagrangian{&metric}, p, t, substeps(t, steps_per_unit), false);
        Eigen::VectorXd out(2 * m);
        out << p.x, p.v;
        return State(out);
    };
    return flow;
}

Flow action_flow(const RandersMetric& f, int steps_per_unit) {
    Flow flow;
    flow.name = "randers-action";
    flow.field = TimeField::reals();
    flow.time_param = TimeParameter::whole(flow.field);
    flow.space = {StateKind::RealVector, 2 * f.dim() + 1};
    const int m = f.dim();
    const RandersMetric metric = f;
    flow.evolve = [metric, m, steps_per_unit](const FieldValue& tv, const State& u) {
        const double t = tv.as_real();
        const Eigen::VectorXd& z = u.real_vec();
        if (t == 0.0) return u;
        PhasePoint p{z.head(m), z.segment(m, m), z(2 * m)};
        p = integrate(Lagrangian{&metric}, p, t, substeps(t, steps_per_unit), true);
        Eigen::VectorXd out(2 * m + 1);
        out << p.x, p.v, p.action;
        return State(out);
    };
    // Return leg: follow the geodesic issued with reversed velocity and pay
    // its own cost; the velocity is re-reversed afterwards so the state stays
    // comparable with the forward one.
    flow.exact_conjugate = [metric, m, steps_per_unit](const FieldValue& tv, const State& u) {
        const double t = tv.as_real();
        const Eigen::VectorXd& z = u.real_vec();
        if (t == 0.0) return u;
        PhasePoint p{z.head(m), -z.segment(m, m), z(2 * m)};
        p = integrate(Lagrangian{&metric}, p, t, substeps(t, steps_per_unit), true);
        Eigen::VectorXd out(2 * m + 1);
        out << p.x, -p.v, p.action;
        return State(out);
    };
    return flow;
}

Observable action_observable(int dim) {
    return {"energy-action", [dim](const State& u) { return FieldValue::real(u.real_vec()(2 * dim)); }};
}

} // namespace xiflow
