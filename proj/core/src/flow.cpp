#include "xiflow/flow.hpp"

#include <cmath>
#include <sstream>

#include "xiflow/numerics.hpp"

namespace xiflow {

// ---------------------------------------------------------------------------
// State

StateKind State::kind() const {
    if (std::holds_alternative<Eigen::VectorXd>(value_)) return StateKind::RealVector;
    if (std::holds_alternative<Eigen::VectorXcd>(value_)) return StateKind::ComplexVector;
    return StateKind::FieldScalar;
}

int State::dim() const {
    switch (kind()) {
        case StateKind::RealVector: return static_cast<int>(real_vec().size());
        case StateKind::ComplexVector: return static_cast<int>(complex_vec().size());
        case StateKind::FieldScalar: return 1;
    }
    return 0;
}

const Eigen::VectorXd& State::real_vec() const {
    if (!std::holds_alternative<Eigen::VectorXd>(value_))
        throw InvalidInputError("State: not a real vector");
    return std::get<Eigen::VectorXd>(value_);
}

const Eigen::VectorXcd& State::complex_vec() const {
    if (!std::holds_alternative<Eigen::VectorXcd>(value_))
        throw InvalidInputError("State: not a complex vector");
    return std::get<Eigen::VectorXcd>(value_);
}

const FieldValue& State::scalar() const {
    if (!std::holds_alternative<FieldValue>(value_))
        throw InvalidInputError("State: not a field scalar");
    return std::get<FieldValue>(value_);
}

State state_add(const State& a, const State& b) {
    if (a.kind() != b.kind()) throw InvalidInputError("state_add: mixed state kinds");
    switch (a.kind()) {
        case StateKind::RealVector: return State(Eigen::VectorXd(a.real_vec() + b.real_vec()));
        case StateKind::ComplexVector:
            return State(Eigen::VectorXcd(a.complex_vec() + b.complex_vec()));
        case StateKind::FieldScalar: return State(a.scalar() + b.scalar());
    }
    throw InvalidInputError("state_add: bad state kind");
}

State state_halve(const State& a) {
    switch (a.kind()) {
        case StateKind::RealVector: return State(Eigen::VectorXd(0.5 * a.real_vec()));
        case StateKind::ComplexVector: return State(Eigen::VectorXcd(0.5 * a.complex_vec()));
        case StateKind::FieldScalar: {
            const FieldValue& v = a.scalar();
            if (v.kind() == ValueKind::Residue && v.residue_modulus() == 2)
                throw InvalidInputError("state_halve: halving undefined in Z_2");
            FieldValue two = v.kind() == ValueKind::Residue
                                 ? FieldValue::residue(v.residue_modulus(), 2)
                                 : (v.kind() == ValueKind::Rational
                                        ? FieldValue::rational(Rational(2))
                                        : FieldValue::real(2.0));
            return State(v * two.inverse());
        }
    }
    throw InvalidInputError("state_halve: bad state kind");
}

double state_distance(const State& a, const State& b) {
    if (a.kind() != b.kind()) throw InvalidInputError("state_distance: mixed state kinds");
    switch (a.kind()) {
        case StateKind::RealVector: {
            if (a.real_vec().size() != b.real_vec().size())
                throw InvalidInputError("state_distance: dimension mismatch");
            if (a.real_vec().size() == 0) return 0.0;
            return (a.real_vec() - b.real_vec()).cwiseAbs().maxCoeff();
        }
        case StateKind::ComplexVector: {
            if (a.complex_vec().size() != b.complex_vec().size())
                throw InvalidInputError("state_distance: dimension mismatch");
            if (a.complex_vec().size() == 0) return 0.0;
            return (a.complex_vec() - b.complex_vec()).cwiseAbs().maxCoeff();
        }
        case StateKind::FieldScalar: return (a.scalar() - b.scalar()).magnitude();
    }
    throw InvalidInputError("state_distance: bad state kind");
}

bool state_equal(const State& a, const State& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case StateKind::RealVector: return a.real_vec() == b.real_vec();
        case StateKind::ComplexVector: return a.complex_vec() == b.complex_vec();
        case StateKind::FieldScalar: return a.scalar() == b.scalar();
    }
    return false;
}

// ---------------------------------------------------------------------------
// Flow axioms

double FlowAxiomReport::max_deviation() const {
    double m = 0.0;
    for (const auto& v : violations) m = std::max(m, v.deviation);
    return m;
}

namespace {

double state_scale(const State& s) {
    switch (s.kind()) {
        case StateKind::RealVector:
            return s.real_vec().size() ? s.real_vec().cwiseAbs().maxCoeff() : 0.0;
        case StateKind::ComplexVector:
            return s.complex_vec().size() ? s.complex_vec().cwiseAbs().maxCoeff() : 0.0;
        case StateKind::FieldScalar: return s.scalar().magnitude();
    }
    return 0.0;
}

} // namespace

FlowAxiomReport check_flow_axioms(const Flow& flow, const std::vector<FlowSample>& samples,
                                  double tol) {
    if (samples.empty()) throw InvalidInputError("check_flow_axioms: empty sample list");
    FlowAxiomReport report;
    const FieldValue zero = flow.field.zero();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        ++report.checked;

        const State id = flow.evolve(zero, s.u);
        const double id_dev = state_distance(id, s.u) / std::max(1.0, state_scale(s.u));
        report.max_observed_deviation = std::max(report.max_observed_deviation, id_dev);
        if (id_dev > tol)
            report.violations.push_back({FlowAxiomKind::Identity, i, id_dev, "Phi(0,u) != u"});

        const FieldValue tsum = s.t1 + s.t2;
        if (!flow.time_param.contains(s.t1) || !flow.time_param.contains(s.t2) ||
            !flow.time_param.contains(tsum)) {
            report.violations.push_back(
                {FlowAxiomKind::Domain, i, 0.0,
                 "t1, t2 or t1+t2 outside the time parameter; composition skipped"});
            continue;
        }
        const State direct = flow.evolve(tsum, s.u);
        const State composed = flow.evolve(s.t1, flow.evolve(s.t2, s.u));
        const double dev =
            state_distance(direct, composed) / std::max(1.0, state_scale(direct));
        report.max_observed_deviation = std::max(report.max_observed_deviation, dev);
        if (dev > tol)
            report.violations.push_back({FlowAxiomKind::Composition, i, dev,
                                         "Phi(t1+t2,u) != Phi(t1,Phi(t2,u)) at t1=" + s.t1.str() +
                                             " t2=" + s.t2.str()});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Conjugation

EvolveFn conjugate_evolve(const Flow& flow) {
    if (flow.exact_conjugate) return flow.exact_conjugate;
    if (!flow.complete())
        throw NotConjugableError("conjugate: flow '" + flow.name +
                                 "' is not complete and supplies no exact conjugate");
    EvolveFn fwd = flow.evolve;
    return [fwd](const FieldValue& t, const State& u) { return fwd(-t, u); };
}

Flow conjugate(const Flow& flow) {
    Flow c;
    c.name = flow.name + "^c";
    c.field = flow.field;
    c.time_param = flow.time_param;
    c.space = flow.space;
    c.evolve = conjugate_evolve(flow);
    c.exact_conjugate = flow.evolve; // (Phi^c)^c = Phi
    return c;
}

// ---------------------------------------------------------------------------
// Xi

std::string to_string(XiEstimator e) {
    switch (e) {
        case XiEstimator::ExactDiscrete: return "exact-discrete";
        case XiEstimator::FiniteDifference: return "finite-difference";
        case XiEstimator::ClosedForm: return "closed-form";
    }
    return "?";
}

std::string NonReversibilityReport::to_json() const {
    std::ostringstream os;
    os << "{\"xi\": ";
    switch (xi.kind()) {
        case ValueKind::Real: os << num::fmt17(xi.as_real()); break;
        case ValueKind::Rational: os << '"' << xi.as_rational() << '"'; break;
        case ValueKind::Residue: os << xi.residue_rep(); break;
        case ValueKind::Complex:
            os << "[" << num::fmt17(xi.as_complex().real()) << ", "
               << num::fmt17(xi.as_complex().imag()) << "]";
            break;
    }
    os << ", \"estimator\": \"" << to_string(estimator) << "\"";
    os << ", \"h\": " << num::fmt17(step);
    os << ", \"arrow_sign\": " << arrow_sign;
    os << ", \"support_fraction\": ";
    if (support_fraction)
        os << num::fmt17(*support_fraction);
    else
        os << "null";
    os << "}";
    return os.str();
}

namespace {

FieldValue eval_checked(const Observable& omega, const State& u) {
    FieldValue v = omega.eval(u);
    const bool finite =
        v.kind() == ValueKind::Real
            ? std::isfinite(v.as_real())
            : (v.kind() != ValueKind::Complex ||
               (std::isfinite(v.as_complex().real()) && std::isfinite(v.as_complex().imag())));
    if (!finite)
        throw EvaluationError("xi: observable '" + omega.name + "' returned a non-finite value");
    return v;
}

} // namespace

NonReversibilityReport xi(const Observable& omega, const Flow& flow, const State& e,
                          const XiOptions& opt) {
    const EvolveFn conj = conjugate_evolve(flow);
    NonReversibilityReport report;

    if (flow.field.kind() == FieldKind::PrimeField) {
        // exact quotient at the minimal step t = [1], d([1], [0]) = d_min = 1
        const FieldValue t = flow.field.one();
        const FieldValue fwd = eval_checked(omega, flow.evolve(t, e));
        const FieldValue bwd = eval_checked(omega, conj(t, e));
        report.xi = (fwd - bwd) * t.inverse();
        report.estimator = XiEstimator::ExactDiscrete;
        report.step = 1.0;
    } else if (flow.field.kind() == FieldKind::Rationals) {
        const FieldValue t = flow.field.rational(make_rational(1, 1000));
        const FieldValue fwd = eval_checked(omega, flow.evolve(t, e));
        const FieldValue bwd = eval_checked(omega, conj(t, e));
        report.xi = (fwd - bwd) * t.inverse();
        report.estimator = XiEstimator::FiniteDifference;
        report.step = 1e-3;
    } else {
        const auto quotient = [&](double hk) {
            const FieldValue t = flow.field.real(hk);
            const FieldValue fwd = eval_checked(omega, flow.evolve(t, e));
            const FieldValue bwd = eval_checked(omega, conj(t, e));
            return (fwd - bwd).as_complex() / hk;
        };
        const std::complex<double> z = num::richardson(quotient, opt.h, opt.richardson_levels);
        report.xi = (z.imag() == 0.0) ? FieldValue::real(z.real()) : FieldValue::complex(z);
        report.estimator = XiEstimator::FiniteDifference;
        report.step = opt.h;
    }
    report.arrow_sign = report.xi.arrow_sign();
    return report;
}

double xi_support_fraction(const Observable& omega, const Flow& flow,
                           const std::vector<State>& sample, double tol, const XiOptions& opt) {
    if (sample.empty()) throw InvalidInputError("xi_support_fraction: empty sample");
    std::size_t nonzero = 0;
    for (const auto& e : sample)
        if (xi(omega, flow, e, opt).xi.magnitude() > tol) ++nonzero;
    return static_cast<double>(nonzero) / static_cast<double>(sample.size());
}

// ---------------------------------------------------------------------------
// Symmetrization and the derivative criterion

Flow symmetrize(const Flow& flow) {
    if (flow.space.kind == StateKind::FieldScalar && flow.field.kind() == FieldKind::PrimeField &&
        flow.field.p() == 2)
        throw InvalidInputError("symmetrize: halving undefined over Z_2");
    const EvolveFn fwd = flow.evolve;
    const EvolveFn bwd = conjugate_evolve(flow);
    EvolveFn sym = [fwd, bwd](const FieldValue& t, const State& u) {
        return state_halve(state_add(fwd(t, u), bwd(t, u)));
    };
    Flow s;
    s.name = "sym(" + flow.name + ")";
    s.field = flow.field;
    s.time_param = flow.time_param;
    s.space = flow.space;
    s.evolve = sym;
    // the average of a flow and its conjugate is its own conjugate
    s.exact_conjugate = [fwd, bwd](const FieldValue& t, const State& u) {
        return state_halve(state_add(bwd(t, u), fwd(t, u)));
    };
    return s;
}

Eigen::VectorXd reversibility_residual(const Flow& flow, const State& e, double h,
                                       int richardson_levels) {
    if (flow.space.kind != StateKind::RealVector)
        throw InvalidInputError("reversibility_residual: requires a normed real vector state space");
    const EvolveFn conj = conjugate_evolve(flow);
    const auto quotient = [&](double hk) {
        const FieldValue t = flow.field.real(hk);
        const Eigen::VectorXd fwd = flow.evolve(t, e).real_vec();
        const Eigen::VectorXd bwd = conj(t, e).real_vec();
        return Eigen::VectorXd(((fwd - bwd) / hk).eval());
    };
    return num::richardson(quotient, h, richardson_levels);
}

// ---------------------------------------------------------------------------
// Turning points

TurningPointReport detect_turning_points(const Observable& omega, const Flow& flow,
                                         const std::vector<State>& path, double tol,
                                         const XiOptions& opt) {
    if (path.empty()) throw InvalidInputError("detect_turning_points: empty path");
    TurningPointReport report;
    report.xi_values.reserve(path.size());
    report.point_signs.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const NonReversibilityReport r = xi(omega, flow, path[i], opt);
        report.xi_values.push_back(r.xi);
        const bool degenerate = r.xi.magnitude() <= tol;
        report.point_signs.push_back(degenerate ? 0 : r.arrow_sign);
        if (degenerate) report.degenerate_indices.push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const int s0 = report.point_signs[i], s1 = report.point_signs[i + 1];
        if (s0 != 0 && s1 != 0 && s0 != s1)
            report.brackets.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
        report.segment_arrows.push_back((s0 == s1) ? s0 : 0);
    }
    return report;
}

} // namespace xiflow
