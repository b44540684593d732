#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "xiflow/errors.hpp"

namespace xiflow {

/// Exact arbitrary-precision rational, also the codomain of every
/// quasi-distance (distances live in an ordered field; the rationals cover
/// all supported cases, with machine doubles embedded exactly).
using Rational = mpq_class;

enum class FieldKind { Reals, Rationals, PrimeField };

enum class ValueKind { Real, Rational, Residue, Complex };

class FieldValue;

/// Descriptor of a number field usable as a source of time parameters:
/// the reals, the rationals, or a prime field Z_p. All three are ordered;
/// the minimal nonzero distance is 0 for the continuous kinds and 1 for Z_p.
class TimeField {
public:
    static TimeField reals() { return TimeField(FieldKind::Reals, 0); }
    static TimeField rationals() { return TimeField(FieldKind::Rationals, 0); }
    /// Throws InvalidInputError unless p is prime.
    static TimeField prime_field(std::uint32_t p);

    FieldKind kind() const { return kind_; }
    std::uint32_t p() const { return p_; }
    bool ordered() const { return true; }

    /// Minimal nonzero value of the quasi-distance: 0, 0 or 1.
    Rational min_distance() const;

    bool contains(const FieldValue& v) const;

    FieldValue zero() const;
    FieldValue one() const;
    FieldValue real(double x) const;
    FieldValue rational(long num, long den = 1) const;
    FieldValue rational(const Rational& q) const;
    FieldValue residue(std::int64_t n) const;

    friend bool operator==(const TimeField& a, const TimeField& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }
    friend bool operator!=(const TimeField& a, const TimeField& b) { return !(a == b); }

    std::string describe() const;

private:
    TimeField(FieldKind k, std::uint32_t p) : kind_(k), p_(p) {}
    FieldKind kind_;
    std::uint32_t p_;
};

/// A tagged scalar: machine real, exact rational, residue class mod p, or a
/// complex number (complex values arise only as observable outputs, never as
/// time values). Arithmetic is closed within one kind; mixing kinds throws
/// FieldMismatchError, except that reals promote to complex.
class FieldValue {
public:
    FieldValue() : kind_(ValueKind::Real) {}

    static FieldValue real(double x);
    static FieldValue rational(Rational q);
    static FieldValue residue(std::uint32_t p, std::int64_t n);
    static FieldValue complex(std::complex<double> z);

    ValueKind kind() const { return kind_; }

    double as_real() const;
    const Rational& as_rational() const;
    /// Canonical representative in 0..p-1.
    std::uint32_t residue_rep() const;
    std::uint32_t residue_modulus() const;
    /// Real values promote; other kinds throw.
    std::complex<double> as_complex() const;

    FieldValue operator-() const;
    FieldValue operator+(const FieldValue& o) const;
    FieldValue operator-(const FieldValue& o) const;
    FieldValue operator*(const FieldValue& o) const;

    /// Multiplicative inverse; throws on zero.
    FieldValue inverse() const;

    bool is_zero() const;
    bool operator==(const FieldValue& o) const;
    bool operator!=(const FieldValue& o) const { return !(*this == o); }

    /// |x| as a machine double (canonical representative for residues).
    double magnitude() const;

    /// -1/0/+1 under the field's order. Complex values have no order and
    /// report 0; residues use the canonical-representative order, so any
    /// nonzero residue is positive.
    int arrow_sign() const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const FieldValue& v) {
        return os << v.str();
    }

private:
    ValueKind kind_;
    double re_ = 0.0;
    std::complex<double> c_{0.0, 0.0};
    Rational q_{0};
    std::uint32_t p_ = 0;
    std::uint64_t res_ = 0;

    void require_same(const FieldValue& o, const char* op) const;
};

/// Three-way comparison under the field's order; throws for complex values
/// and for mismatched kinds.
int compare(const FieldValue& a, const FieldValue& b);

/// Quasi-distance d_K on a supported field, valued in the exact rationals.
/// For the reals and rationals this is |a-b| (doubles embed exactly); for
/// Z_p it is |n0-m0| over canonical representatives 0 <= n0,m0 <= p-1.
Rational quasi_distance(const TimeField& f, const FieldValue& a, const FieldValue& b);

enum class QuasiMetricAxiom { NonNegativity, IdentityOfIndiscernibles, TriangleInequality };

struct QuasiMetricViolation {
    QuasiMetricAxiom axiom;
    std::size_t triple_index;
    std::string detail;
};

struct QuasiMetricReport {
    std::size_t triples_checked = 0;
    std::vector<QuasiMetricViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks non-negativity, identity of indiscernibles and the triangle
/// inequality on every supplied (u, v, w). All comparisons are exact.
QuasiMetricReport check_quasi_metric_axioms(const TimeField& f,
                                            const std::vector<std::array<FieldValue, 3>>& sample);

/// All field elements within quasi-distance < r of the center (prime fields).
std::vector<FieldValue> metric_ball(const TimeField& f, const FieldValue& center,
                                    const Rational& r);

/// True iff the balls B(k1, r) and B(k2, r) are disjoint. With r = 1/4 the
/// balls in Z_p are singletons, which is how Hausdorff separability shows up.
bool hausdorff_ball_check(const TimeField& f, const FieldValue& k1, const FieldValue& k2,
                          const Rational& r);

enum class Ordering { LT, EQ, GT };

/// Order on Z_p via canonical representatives.
Ordering zp_order_compare(const FieldValue& a, const FieldValue& b);

/// A candidate time parameter J within a field: the whole field, an interval
/// (continuous kinds), or an explicit finite subset.
class TimeParameter {
public:
    enum class Form { Whole, Interval, FiniteSet };

    static TimeParameter whole(TimeField f);
    static TimeParameter interval(TimeField f, FieldValue lo, FieldValue hi);
    static TimeParameter finite_set(TimeField f, std::vector<FieldValue> elements);

    const TimeField& field() const { return field_; }
    Form form() const { return form_; }
    bool is_whole() const { return form_ == Form::Whole; }
    const std::vector<FieldValue>& elements() const;
    const FieldValue& lower() const;
    const FieldValue& upper() const;

    bool contains(const FieldValue& t) const;
    bool operator==(const TimeParameter& o) const;

private:
    TimeParameter(TimeField f, Form form) : field_(f), form_(form) {}
    TimeField field_;
    Form form_;
    std::vector<FieldValue> elements_;
    std::optional<FieldValue> lo_, hi_;
};

struct TimeParameterVerdict {
    bool ok = false;
    std::string reason;
};

/// Decides whether J qualifies as a time parameter: (J, +) must be a
/// subgroup of (K, +) and every element needs a distinct neighbour at small
/// distance (exactly d_min for Z_p, within eps for the continuous kinds).
/// Finite representations are checked exactly; interval closure is
/// contract-checked on sampled pairs. Empty sets throw InvalidInputError.
TimeParameterVerdict is_time_parameter(const TimeField& f, const TimeParameter& j,
                                       double eps = 1e-4, int samples = 256,
                                       std::uint64_t seed = 20260810u);

/// A field automorphism candidate. An empty map means the identity.
struct FieldAutomorphism {
    TimeField field;
    std::function<FieldValue(const FieldValue&)> map;
    std::string name = "identity";

    static FieldAutomorphism identity(TimeField f) { return {f, nullptr, "identity"}; }
    bool is_identity() const { return !map; }
    FieldValue apply(const FieldValue& v) const { return map ? map(v) : v; }
};

/// Validates the automorphism laws (theta(a+b), theta(a*b), theta(1)).
/// Exhaustive over Z_p; sampled (seeded) over the continuous kinds.
/// Throws InvalidAutomorphismError with the offending law.
void validate_automorphism(const FieldAutomorphism& theta, int samples = 64,
                           std::uint64_t seed = 20260810u);

/// Image theta(J) of a time parameter under a validated automorphism.
TimeParameter reparametrize(const FieldAutomorphism& theta, const TimeParameter& j);

/// Single incremental quotient (psi(t1+h) - psi(t1)) * h^{-1}. For discrete
/// fields h must realize the minimal distance d(t1+h, t1) = d_min; for
/// continuous fields 0 < |h| <= max_step. Exact over Z_p and Q.
FieldValue incremental_quotient(const std::function<FieldValue(const FieldValue&)>& psi,
                                const FieldValue& t1, const FieldValue& h,
                                double max_step = 1e-4);

/// Richardson-extrapolated derivative estimator for real-valued maps
/// (the continuous-field counterpart of the single quotient).
double derivative_richardson(const std::function<double(double)>& psi, double t1,
                             double h = 1e-4, int levels = 3);

/// Canonicalized rational from a num/den pair.
Rational make_rational(long num, long den);

} // namespace xiflow
