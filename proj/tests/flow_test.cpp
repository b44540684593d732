#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xiflow/flows.hpp"
#include "xiflow/numerics.hpp"

using namespace xiflow;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

std::vector<FlowSample> random_real_samples(const TimeField& f, int count, std::uint64_t seed,
                                            int dim, double tmax = 1.0) {
    num::Rng rng(seed);
    std::vector<FlowSample> samples;
    samples.reserve(count);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd u(dim);
        for (int j = 0; j < dim; ++j) u(j) = rng.uniform(-2.0, 2.0);
        samples.push_back({f.real(rng.uniform(-tmax, tmax)), f.real(rng.uniform(-tmax, tmax)),
                           State(u)});
    }
    return samples;
}

std::vector<FlowSample> all_zp_samples(const TimeField& f) {
    std::vector<FlowSample> samples;
    for (std::uint32_t t1 = 0; t1 < f.p(); ++t1)
        for (std::uint32_t t2 = 0; t2 < f.p(); ++t2)
            for (std::uint32_t u = 0; u < f.p(); ++u)
                samples.push_back({f.residue(t1), f.residue(t2), State(f.residue(u))});
    return samples;
}

} // namespace

TEST_CASE("flow axioms: translation and Z7 cycle pass, broken map fails") {
    Eigen::VectorXd v(2);
    v << 1.5, -0.7;
    const Flow trans = flows::translation(v);
    const auto r1 = check_flow_axioms(trans, random_real_samples(trans.field, 200, 7, 2), 1e-9);
    CHECK(r1.ok());

    const Flow cycle = flows::zp_cycle(7);
    const auto r2 = check_flow_axioms(cycle, all_zp_samples(cycle.field), 0.0);
    CHECK(r2.ok());
    CHECK(r2.checked == 343);

    // Phi(t, x) = x + t^2 violates the composition law at generic (t1, t2)
    Flow broken = flows::translation(vec1(1.0));
    broken.name = "broken";
    broken.evolve = [](const FieldValue& t, const State& u) {
        return State(vec1(u.real_vec()(0) + t.as_real() * t.as_real()));
    };
    const auto r3 = check_flow_axioms(broken, random_real_samples(broken.field, 50, 11, 1), 1e-9);
    CHECK_FALSE(r3.ok());
}

TEST_CASE("flow axioms: linear exponential flow") {
    Eigen::MatrixXd a(3, 3);
    a << 0.2, 1.0, -0.3,
        -0.5, 0.1, 0.4,
         0.3, -0.2, -0.1;
    const Flow lin = flows::linear(a);
    const auto report = check_flow_axioms(lin, random_real_samples(lin.field, 300, 13, 3), 1e-10);
    CHECK(report.ok());
}

TEST_CASE("samples outside the time parameter are domain-reported, not fatal") {
    Eigen::VectorXd v = vec1(1.0);
    Flow trans = flows::translation(v);
    trans.time_param =
        TimeParameter::interval(trans.field, trans.field.real(-1.0), trans.field.real(1.0));
    std::vector<FlowSample> samples{{trans.field.real(0.9), trans.field.real(0.9), State(vec1(0.0))}};
    const auto report = check_flow_axioms(trans, samples, 1e-9);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == FlowAxiomKind::Domain);
}

TEST_CASE("conjugate of the translation flow undoes it") {
    Eigen::VectorXd v(2);
    v << 2.0, -1.0;
    const Flow trans = flows::translation(v);
    const Flow conj = conjugate(trans);
    num::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(-2.0, 2.0);
        Eigen::VectorXd x(2);
        x << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
        const Eigen::VectorXd got = conj.evolve(trans.field.real(t), State(x)).real_vec();
        const Eigen::VectorXd want = x - t * v; // solve Phi(t, A) = B for A
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
        // conjugation inverts the flow pointwise
        const State roundtrip = conj.evolve(trans.field.real(t), trans.evolve(trans.field.real(t), State(x)));
        CHECK((roundtrip.real_vec() - x).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("conjugation is an involution") {
    Eigen::VectorXd v(2);
    v << 1.0, 0.5;
    const Flow trans = flows::translation(v);
    const Flow twice = conjugate(conjugate(trans));
    num::Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.uniform(-2.0, 2.0);
        Eigen::VectorXd x(2);
        x << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
        CHECK(state_equal(twice.evolve(trans.field.real(t), State(x)),
                          trans.evolve(trans.field.real(t), State(x))));
    }

    const Flow cycle = flows::zp_cycle(7);
    const Flow cc = conjugate(conjugate(cycle));
    const Flow c = conjugate(cycle);
    for (std::uint32_t t = 0; t < 7; ++t)
        for (std::uint32_t u = 0; u < 7; ++u) {
            const FieldValue tv = cycle.field.residue(t);
            const State su(cycle.field.residue(u));
            CHECK(state_equal(cc.evolve(tv, su), cycle.evolve(tv, su)));
            // group inverse: g^{p-t}
            CHECK(c.evolve(tv, su).scalar() == cycle.field.residue(static_cast<std::int64_t>(u) -
                                                                   static_cast<std::int64_t>(t)));
        }
}

TEST_CASE("incomplete flows without an exact conjugate are not conjugable") {
    Eigen::VectorXd v = vec1(1.0);
    Flow trans = flows::translation(v);
    trans.time_param =
        TimeParameter::interval(trans.field, trans.field.real(0.0), trans.field.real(1.0));
    CHECK_THROWS_AS(conjugate(trans), NotConjugableError);
}

TEST_CASE("xi of the translation flow with the square observable is 4x") {
    const Flow trans = flows::translation(vec1(1.0));
    const Observable omega = flows::polynomial({0.0, 0.0, 1.0}); // x^2
    // (x + t)^2 - (x - t)^2 = 4 x t, so Xi = 4x independent of the step
    for (double x : {-1.0, -0.3, 0.7, 2.0}) {
        const auto report = xi(omega, trans, State(vec1(x)));
        CHECK(report.xi.as_real() == doctest::Approx(4.0 * x).epsilon(1e-10));
        CHECK(report.estimator == XiEstimator::FiniteDifference);
        CHECK(report.arrow_sign == (x > 0 ? 1 : -1));
    }
    const auto at_zero = xi(omega, trans, State(vec1(0.0)));
    CHECK(at_zero.xi.magnitude() < 1e-14);
    CHECK(at_zero.arrow_sign == 0);
}

TEST_CASE("xi of a constant observable vanishes for any flow") {
    const Observable c = flows::constant(3.7);
    CHECK(xi(c, flows::translation(vec1(2.0)), State(vec1(0.4))).xi.magnitude() == 0.0);
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    Eigen::VectorXd x0(2);
    x0 << 1.0, 0.0;
    CHECK(xi(c, flows::linear(a), State(x0)).xi.magnitude() == 0.0);

    const Flow cycle = flows::zp_cycle(7);
    const Observable cz{"const", [](const State&) { return FieldValue::residue(7, 3); }};
    CHECK(xi(cz, cycle, State(cycle.field.residue(2))).xi == cycle.field.residue(0));
}

TEST_CASE("xi of the Z7 shift with the identity observable is exactly [2]") {
    const Flow cycle = flows::zp_cycle(7);
    const Observable omega = flows::residue_identity();
    for (std::uint32_t u = 0; u < 7; ++u) {
        const auto report = xi(omega, cycle, State(cycle.field.residue(u)));
        // (u + 1) - (u - 1) = 2 mod 7, exactly
        CHECK(report.xi == cycle.field.residue(2));
        CHECK(report.estimator == XiEstimator::ExactDiscrete);
        CHECK(report.step == 1.0);
        CHECK(report.arrow_sign == 1);
    }
}

TEST_CASE("xi over the rationals is exact") {
    // translation on rational scalar states: Xi of u^2 is 4u, exactly
    Flow flow;
    flow.name = "q-translation";
    flow.field = TimeField::rationals();
    flow.time_param = TimeParameter::whole(flow.field);
    flow.space = {StateKind::FieldScalar, 1};
    flow.evolve = [](const FieldValue& t, const State& u) { return State(u.scalar() + t); };
    const Observable omega{"u^2", [](const State& u) { return u.scalar() * u.scalar(); }};

    const State e(FieldValue::rational(make_rational(3, 7)));
    const auto report = xi(omega, flow, e);
    CHECK(report.xi == FieldValue::rational(make_rational(12, 7)));
    CHECK(report.arrow_sign == 1);

    const State neg(FieldValue::rational(make_rational(-2, 5)));
    CHECK(xi(omega, flow, neg).xi == FieldValue::rational(make_rational(-8, 5)));
}

TEST_CASE("xi is linear in the observable") {
    const Flow trans = flows::translation(vec1(1.3));
    const Observable w1 = flows::polynomial({0.0, 0.0, 1.0});       // x^2
    const Observable w2 = flows::polynomial({0.0, 1.0, 0.0, 1.0});  // x + x^3
    const double alpha = 0.6, beta = -1.1;
    const Observable combo{"combo", [&](const State& u) {
                               return FieldValue::real(alpha * w1.eval(u).as_real() +
                                                       beta * w2.eval(u).as_real());
                           }};
    num::Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        const State e(vec1(rng.uniform(-2.0, 2.0)));
        const double lhs = xi(combo, trans, e).xi.as_real();
        const double rhs =
            alpha * xi(w1, trans, e).xi.as_real() + beta * xi(w2, trans, e).xi.as_real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("finite-difference xi converges at first order or better") {
    const Flow trans = flows::translation(vec1(1.0));
    const Observable cubic = flows::polynomial({0.0, 0.0, 0.0, 1.0}); // x^3
    // numerator (x+t)^3 - (x-t)^3 = 2(3x^2 t + t^3): plain quotient error is 2h^2
    const double x = 0.8;
    const double closed = 6.0 * x * x;
    XiOptions opt;
    opt.richardson_levels = 1;
    opt.h = 1e-2;
    const double err_h = std::abs(xi(cubic, trans, State(vec1(x)), opt).xi.as_real() - closed);
    opt.h = 5e-3;
    const double err_h2 = std::abs(xi(cubic, trans, State(vec1(x)), opt).xi.as_real() - closed);
    CHECK(err_h2 < 0.6 * err_h);
}

TEST_CASE("finite-difference xi converges for the linear flow") {
    Eigen::MatrixXd a(2, 2);
    a << 0.3, 1.1, -0.4, -0.2;
    const Flow lin = flows::linear(a);
    Eigen::VectorXd w(2), x0(2);
    w << 0.8, -0.5;
    x0 << 1.1, 0.7;
    const Observable omega{"(w.x)^2", [w](const State& u) {
                               const double y = w.dot(u.real_vec());
                               return FieldValue::real(y * y);
                           }};
    // Xi = 2 d/dt (w.e^{At}x)^2 |_0 = 4 (w.x)(w.Ax)
    const double closed = 4.0 * w.dot(x0) * w.dot(a * x0);
    XiOptions opt;
    opt.richardson_levels = 1;
    opt.h = 1e-2;
    const double err_h = std::abs(xi(omega, lin, State(x0), opt).xi.as_real() - closed);
    opt.h = 5e-3;
    const double err_h2 = std::abs(xi(omega, lin, State(x0), opt).xi.as_real() - closed);
    CHECK(err_h2 < 0.6 * err_h);
    CHECK(std::abs(xi(omega, lin, State(x0)).xi.as_real() - closed) < 1e-9);
}

TEST_CASE("xi report serializes to the fixed JSON schema") {
    const Flow cycle = flows::zp_cycle(7);
    auto report = xi(flows::residue_identity(), cycle, State(cycle.field.residue(3)));
    report.support_fraction = 0.5;
    const auto j = nlohmann::json::parse(report.to_json());
    CHECK(j["xi"] == 2);
    CHECK(j["estimator"] == "exact-discrete");
    CHECK(j["h"] == 1.0);
    CHECK(j["arrow_sign"] == 1);
    CHECK(j["support_fraction"] == 0.5);

    const auto r2 = xi(flows::polynomial({0.0, 0.0, 1.0}), flows::translation(vec1(1.0)),
                       State(vec1(0.5)));
    const auto j2 = nlohmann::json::parse(r2.to_json());
    CHECK(j2["estimator"] == "finite-difference");
    CHECK(j2["support_fraction"].is_null());
    CHECK(j2["xi"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("support fraction") {
    const Flow trans = flows::translation(vec1(1.0));
    std::vector<State> sample;
    for (double x : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) sample.emplace_back(vec1(x));
    CHECK(xi_support_fraction(flows::polynomial({0.0, 0.0, 1.0}), trans, sample, 1e-8) == 1.0);
    CHECK(xi_support_fraction(flows::constant(1.0), trans, sample, 1e-8) == 0.0);
    CHECK_THROWS_AS(xi_support_fraction(flows::constant(1.0), trans, {}, 1e-8),
                    InvalidInputError);
}

TEST_CASE("symmetrized translation is the identity with vanishing xi") {
    const Flow trans = flows::translation(vec1(2.5));
    const Flow sym = symmetrize(trans);
    num::Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-2.0, 2.0), t = rng.uniform(-1.0, 1.0);
        const double moved = sym.evolve(trans.field.real(t), State(vec1(x))).real_vec()(0);
        CHECK(std::abs(moved - x) < 1e-12);
    }
    const auto report = xi(flows::polynomial({0.0, 0.0, 1.0}), sym, State(vec1(1.3)));
    CHECK(report.xi.magnitude() == 0.0);
}

TEST_CASE("symmetrized linear flow has vanishing xi for polynomial observables") {
    Eigen::MatrixXd a(2, 2);
    a << 0.3, 1.1, -0.4, -0.2; // not skew, so the flow is not its own reverse
    const Flow lin = flows::linear(a);
    const Flow sym = symmetrize(lin);
    num::Rng rng(37);
    const Observable omega{"mixed-poly", [](const State& u) {
                               const auto& x = u.real_vec();
                               const double w = 0.7 * x(0) - 0.4 * x(1);
                               return FieldValue::real(w + 0.5 * w * w + 0.2 * w * w * w);
                           }};
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd x(2);
        x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        CHECK(xi(omega, sym, State(x)).xi.magnitude() <= 1e-8);
    }
}

TEST_CASE("symmetrized Z_p shift fixes every state; Z_2 cannot halve") {
    const Flow cycle = flows::zp_cycle(7);
    const Flow sym = symmetrize(cycle);
    for (std::uint32_t t = 0; t < 7; ++t)
        for (std::uint32_t u = 0; u < 7; ++u)
            CHECK(sym.evolve(cycle.field.residue(t), State(cycle.field.residue(u))).scalar() ==
                  cycle.field.residue(u));
    CHECK_THROWS_AS(symmetrize(flows::zp_cycle(2)), InvalidInputError);
}

TEST_CASE("a flow reversible for an observable agrees with its symmetrization to first order") {
    // rotations preserve |x|^2, so Xi vanishes for that observable family
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    const Flow rot = flows::linear(a);
    const Flow sym = symmetrize(rot);
    const Observable omega = flows::squared_norm();
    Eigen::VectorXd x0(2);
    x0 << 0.8, -0.6;
    CHECK(xi(omega, rot, State(x0)).xi.magnitude() < 1e-8);
    // d/dt Omega(Phi(t, E)) and d/dt Omega(Sym Phi(t, E)) both vanish at t = 0
    const auto d_along = [&](const Flow& f) {
        return derivative_richardson(
            [&](double t) { return omega.eval(f.evolve(f.field.real(t), State(x0))).as_real(); },
            0.0, 1e-3);
    };
    CHECK(std::abs(d_along(rot) - d_along(sym)) < 1e-8);
}

TEST_CASE("reversibility residual") {
    Eigen::VectorXd v(2);
    v << 1.0, -0.5;
    const Flow trans = flows::translation(v);
    Eigen::VectorXd e(2);
    e << 0.3, 0.4;
    const Eigen::VectorXd res = reversibility_residual(trans, State(e));
    CHECK((res - 2.0 * v).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::MatrixXd a(2, 2);
    a << 0.3, 1.1, -0.4, -0.2;
    const Eigen::VectorXd res_sym =
        reversibility_residual(symmetrize(flows::linear(a)), State(e));
    CHECK(res_sym.cwiseAbs().maxCoeff() < 1e-10);

    Flow trivial = flows::translation(Eigen::VectorXd::Zero(2));
    const Eigen::VectorXd res_triv = reversibility_residual(trivial, State(e));
    CHECK(res_triv.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("turning point detection brackets the zero of 4x") {
    const Flow trans = flows::translation(vec1(1.0));
    const Observable omega = flows::polynomial({0.0, 0.0, 1.0});
    std::vector<State> path;
    for (double x : {-1.0, -0.5, 0.5, 1.0}) path.emplace_back(vec1(x));
    const auto report = detect_turning_points(omega, trans, path, 1e-9);
    REQUIRE(report.brackets.size() == 1);
    CHECK(report.brackets[0] == std::pair<int, int>(1, 2));
    CHECK(report.degenerate_indices.empty());
    REQUIRE(report.segment_arrows.size() == 3);
    CHECK(report.segment_arrows[0] == -1);
    CHECK(report.segment_arrows[1] == 0);
    CHECK(report.segment_arrows[2] == 1);

    std::vector<State> positive;
    for (double x : {0.5, 1.0, 1.5}) positive.emplace_back(vec1(x));
    CHECK(detect_turning_points(omega, trans, positive, 1e-9).brackets.empty());

    const auto degen = detect_turning_points(flows::constant(1.0), trans, path, 1e-9);
    CHECK(degen.degenerate_indices.size() == path.size());
    CHECK(degen.brackets.empty());
}
