#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "xiflow/errors.hpp"

namespace xiflow::num {

/// Neville polynomial extrapolation of the samples (hs[k], vals[k]) to h = 0.
/// V needs subtraction, addition and multiplication by double (double,
/// std::complex<double> and Eigen vectors all qualify).
template <class V>
V extrapolate_to_zero(const std::vector<double>& hs, std::vector<V> vals) {
    if (hs.empty() || hs.size() != vals.size())
        throw InvalidInputError("extrapolate_to_zero: node/value size mismatch");
    const std::size_t n = hs.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double w = hs[i + level] / (hs[i] - hs[i + level]);
            vals[i] = vals[i + 1] + (vals[i + 1] - vals[i]) * w;
        }
    }
    return vals[0];
}

/// Richardson-style estimator: evaluates f at h, h/2, ..., h/2^(levels-1)
/// and extrapolates to zero step. levels == 1 returns the plain f(h).
template <class F>
auto richardson(F&& f, double h, int levels = 3) -> decltype(f(h)) {
    if (!(h > 0.0)) throw InvalidInputError("richardson: step must be positive");
    if (levels < 1) throw InvalidInputError("richardson: need at least one level");
    std::vector<double> hs(static_cast<std::size_t>(levels));
    std::vector<decltype(f(h))> vals;
    vals.reserve(hs.size());
    double hk = h;
    for (int k = 0; k < levels; ++k, hk *= 0.5) {
        hs[static_cast<std::size_t>(k)] = hk;
        vals.push_back(f(hk));
    }
    if (levels == 1) return vals[0];
    return extrapolate_to_zero(hs, std::move(vals));
}

/// Deterministic random source used by tests and the CLI. The raw engine is
/// std::mt19937_64 but all distributions are hand-rolled so that a fixed seed
/// yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::complex<double> normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

private:
    std::mt19937_64 eng_;
};

/// Formats a double with 17 significant digits (round-trip safe).
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace xiflow::num
