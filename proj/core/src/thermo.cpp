#include "xiflow/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace xiflow {

ThermoSpace::ThermoSpace(int n, std::vector<int> dims, std::function<double(int)> p_family)
    : n_components(n), component_dims(std::move(dims)), thermo_fn(std::move(p_family)) {
    if (n_components < 2)
        throw InvalidInputError("ThermoSpace: a single fundamental component is not a thermodynamic system");
    if (!component_dims.empty() && static_cast<int>(component_dims.size()) != n_components)
        throw InvalidInputError("ThermoSpace: component descriptor count does not match N");
    if (!thermo_fn) throw InvalidInputError("ThermoSpace: missing thermodynamic function family");
}

AsymptoticReport asymptotic_thermo_check(const std::function<double(int)>& p_family, double delta,
                                         int n_max) {
    if (!(delta < 0.0)) throw InvalidInputError("asymptotic_thermo_check: delta must be negative");
    if (n_max < 10) throw InvalidInputError("asymptotic_thermo_check: N_max must be at least 10");
    AsymptoticReport report;
    report.delta = delta;
    double prev = p_family(1);
    for (int n = 2; n <= n_max; ++n) {
        const double cur = p_family(n);
        if (!std::isfinite(cur) || !std::isfinite(prev))
            throw EvaluationError("asymptotic_thermo_check: non-finite P[N]");
        report.ratios.push_back(std::abs(cur - prev) / std::pow(static_cast<double>(n), delta));
        prev = cur;
    }
    const std::size_t q = std::max<std::size_t>(1, report.ratios.size() / 4);
    double head_min = report.ratios[0];
    for (std::size_t i = 0; i < q; ++i) head_min = std::min(head_min, report.ratios[i]);
    double tail_max = 0.0;
    for (std::size_t i = report.ratios.size() - q; i < report.ratios.size(); ++i)
        tail_max = std::max(tail_max, report.ratios[i]);
    report.pass = (tail_max < head_min) || (tail_max == 0.0);
    report.detail = "head-quartile min " + std::to_string(head_min) + ", tail-quartile max " +
                    std::to_string(tail_max);
    return report;
}

ThermoReport extensivity_check(const EntropyFunction& total, const EntropyFunction& part1,
                               const EntropyFunction& part2,
                               const std::vector<ExtensivitySample>& samples, double tol) {
    if (samples.empty()) throw InvalidInputError("extensivity_check: empty sample list");
    ThermoReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        Eigen::VectorXd joint(s.u1.size() + s.u2.size());
        joint << s.u1, s.u2;
        const double lhs = total.eval(s.t, joint);
        const double rhs = part1.eval(s.t, s.u1) + part2.eval(s.t, s.u2);
        if (lhs < rhs - tol)
            report.violations.push_back({total.name, static_cast<int>(i), rhs - lhs});
        ++report.checked;
    }
    return report;
}

ThermoReport monotonicity_check(const EntropyFunction& total,
                                const std::vector<std::pair<double, Eigen::VectorXd>>& trajectory,
                                const std::vector<EntropyFunction>& subsystems, double tol) {
    if (trajectory.empty()) throw InvalidInputError("monotonicity_check: empty trajectory");
    for (std::size_t i = 0; i + 1 < trajectory.size(); ++i)
        if (!(trajectory[i].first < trajectory[i + 1].first))
            throw InvalidInputError("monotonicity_check: trajectory not ordered by time");
    ThermoReport report;
    std::vector<const EntropyFunction*> fns{&total};
    for (const auto& s : subsystems) fns.push_back(&s);
    for (const EntropyFunction* fn : fns) {
        double prev = fn->eval(trajectory.front().first, trajectory.front().second);
        for (std::size_t i = 1; i < trajectory.size(); ++i) {
            const double cur = fn->eval(trajectory[i].first, trajectory[i].second);
            if (cur < prev - tol)
                report.violations.push_back({fn->name, static_cast<int>(i), prev - cur});
            prev = cur;
            ++report.checked;
        }
    }
    return report;
}

ThermoReport monotonicity_check(const std::vector<double>& series, double tol) {
    if (series.empty()) throw InvalidInputError("monotonicity_check: empty series");
    ThermoReport report;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] < series[i - 1] - tol)
            report.violations.push_back({"series", static_cast<int>(i), series[i - 1] - series[i]});
        ++report.checked;
    }
    return report;
}

ArrowCoincidenceReport arrow_coincidence(const std::vector<double>& xi_trace,
                                         const std::vector<double>& entropy_deltas, double tol) {
    if (xi_trace.size() != entropy_deltas.size())
        throw InvalidInputError("arrow_coincidence: trace length mismatch");
    ArrowCoincidenceReport report;
    report.segments.reserve(xi_trace.size());
    int prev_sign = 0;
    for (std::size_t i = 0; i < xi_trace.size(); ++i) {
        const double xi = xi_trace[i];
        const int xi_sign = std::abs(xi) <= tol ? 0 : (xi > 0.0 ? 1 : -1);
        const bool crossing = xi_sign != 0 && prev_sign != 0 && xi_sign != prev_sign;
        if (xi_sign != 0) prev_sign = xi_sign;
        if (xi_sign == 0 || crossing) {
            report.segments.push_back(SegmentVerdict::Turning);
            continue;
        }
        const double ds = entropy_deltas[i];
        if (std::abs(ds) <= tol) {
            report.segments.push_back(SegmentVerdict::Indeterminate);
            continue;
        }
        const int ds_sign = ds > 0.0 ? 1 : -1;
        if (ds_sign == xi_sign) {
            report.segments.push_back(SegmentVerdict::Coincide);
            ++report.coincide;
        } else {
            report.segments.push_back(SegmentVerdict::Oppose);
            ++report.oppose;
        }
    }
    if (report.coincide + report.oppose > 0)
        report.fraction = static_cast<double>(report.coincide) /
                          static_cast<double>(report.coincide + report.oppose);
    return report;
}

} // namespace xiflow
