#include "xiflow/flows.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace xiflow::flows {

Flow translation(const Eigen::VectorXd& velocity) {
    Flow f;
    f.name = "translation";
    f.field = TimeField::reals();
    f.time_param = TimeParameter::whole(f.field);
    f.space = {StateKind::RealVector, static_cast<int>(velocity.size())};
    Eigen::VectorXd v = velocity;
    f.evolve = [v](const FieldValue& t, const State& u) {
        return State(Eigen::VectorXd(u.real_vec() + t.as_real() * v));
    };
    return f;
}

Flow linear(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw InvalidInputError("linear: generator must be square");
    Flow f;
    f.name = "linear";
    f.field = TimeField::reals();
    f.time_param = TimeParameter::whole(f.field);
    f.space = {StateKind::RealVector, static_cast<int>(a.rows())};
    Eigen::MatrixXd gen = a;
    f.evolve = [gen](const FieldValue& t, const State& u) {
        const Eigen::MatrixXd expat = (gen * t.as_real()).exp();
        return State(Eigen::VectorXd(expat * u.real_vec()));
    };
    return f;
}

Flow zp_cycle(std::uint32_t p) {
    Flow f;
    f.name = "zp-cycle";
    f.field = TimeField::prime_field(p);
    f.time_param = TimeParameter::whole(f.field);
    f.space = {StateKind::FieldScalar, 1};
    f.evolve = [](const FieldValue& t, const State& u) { return State(u.scalar() + t); };
    return f;
}

Observable coordinate(int index) {
    return {"x[" + std::to_string(index) + "]",
            [index](const State& u) { return FieldValue::real(u.real_vec()(index)); }};
}

Observable polynomial(const std::vector<double>& coeffs, int index) {
    return {"poly(x[" + std::to_string(index) + "])", [coeffs, index](const State& u) {
                const double x = u.real_vec()(index);
                double acc = 0.0;
                for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
                return FieldValue::real(acc);
            }};
}

Observable squared_norm() {
    return {"|x|^2", [](const State& u) { return FieldValue::real(u.real_vec().squaredNorm()); }};
}

Observable constant(double value) {
    return {"const", [value](const State&) { return FieldValue::real(value); }};
}

Observable residue_identity() {
    return {"u", [](const State& u) { return u.scalar(); }};
}

} // namespace xiflow::flows
