#include "xiflow/timefield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "xiflow/numerics.hpp"

namespace xiflow {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime, a != 0 mod p
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw InvalidInputError("mod_inverse: element not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

Rational rational_abs(const Rational& q) { return Rational(abs(q)); }

} // namespace

Rational make_rational(long num, long den) {
    if (den == 0) throw InvalidInputError("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// TimeField

TimeField TimeField::prime_field(std::uint32_t p) {
    if (!is_prime_u32(p))
        throw InvalidInputError("prime_field: " + std::to_string(p) + " is not prime");
    return TimeField(FieldKind::PrimeField, p);
}

Rational TimeField::min_distance() const {
    return kind_ == FieldKind::PrimeField ? Rational(1) : Rational(0);
}

bool TimeField::contains(const FieldValue& v) const {
    switch (kind_) {
        case FieldKind::Reals: return v.kind() == ValueKind::Real;
        case FieldKind::Rationals: return v.kind() == ValueKind::Rational;
        case FieldKind::PrimeField:
            return v.kind() == ValueKind::Residue && v.residue_modulus() == p_;
    }
    return false;
}

FieldValue TimeField::zero() const {
    switch (kind_) {
        case FieldKind::Reals: return FieldValue::real(0.0);
        case FieldKind::Rationals: return FieldValue::rational(Rational(0));
        case FieldKind::PrimeField: return FieldValue::residue(p_, 0);
    }
    throw InvalidInputError("zero: bad field kind");
}

FieldValue TimeField::one() const {
    switch (kind_) {
        case FieldKind::Reals: return FieldValue::real(1.0);
        case FieldKind::Rationals: return FieldValue::rational(Rational(1));
        case FieldKind::PrimeField: return FieldValue::residue(p_, 1);
    }
    throw InvalidInputError("one: bad field kind");
}

FieldValue TimeField::real(double x) const {
    if (kind_ != FieldKind::Reals) throw FieldMismatchError("real(): field is not R");
    return FieldValue::real(x);
}

FieldValue TimeField::rational(long num, long den) const {
    if (kind_ != FieldKind::Rationals) throw FieldMismatchError("rational(): field is not Q");
    return FieldValue::rational(make_rational(num, den));
}

FieldValue TimeField::rational(const Rational& q) const {
    if (kind_ != FieldKind::Rationals) throw FieldMismatchError("rational(): field is not Q");
    return FieldValue::rational(q);
}

FieldValue TimeField::residue(std::int64_t n) const {
    if (kind_ != FieldKind::PrimeField) throw FieldMismatchError("residue(): field is not Z_p");
    return FieldValue::residue(p_, n);
}

std::string TimeField::describe() const {
    switch (kind_) {
        case FieldKind::Reals: return "R";
        case FieldKind::Rationals: return "Q";
        case FieldKind::PrimeField: return "Z_" + std::to_string(p_);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// FieldValue

FieldValue FieldValue::real(double x) {
    FieldValue v;
    v.kind_ = ValueKind::Real;
    v.re_ = x;
    return v;
}

FieldValue FieldValue::rational(Rational q) {
    FieldValue v;
    v.kind_ = ValueKind::Rational;
    v.q_ = std::move(q);
    return v;
}

FieldValue FieldValue::residue(std::uint32_t p, std::int64_t n) {
    if (p < 2) throw InvalidInputError("residue: modulus must be >= 2");
    FieldValue v;
    v.kind_ = ValueKind::Residue;
    v.p_ = p;
    std::int64_t m = n % static_cast<std::int64_t>(p);
    if (m < 0) m += static_cast<std::int64_t>(p);
    v.res_ = static_cast<std::uint64_t>(m);
    return v;
}

FieldValue FieldValue::complex(std::complex<double> z) {
    FieldValue v;
    v.kind_ = ValueKind::Complex;
    v.c_ = z;
    return v;
}

double FieldValue::as_real() const {
    if (kind_ != ValueKind::Real) throw FieldMismatchError("as_real: value is not real");
    return re_;
}

const Rational& FieldValue::as_rational() const {
    if (kind_ != ValueKind::Rational) throw FieldMismatchError("as_rational: value is not rational");
    return q_;
}

std::uint32_t FieldValue::residue_rep() const {
    if (kind_ != ValueKind::Residue) throw FieldMismatchError("residue_rep: value is not a residue");
    return static_cast<std::uint32_t>(res_);
}

std::uint32_t FieldValue::residue_modulus() const {
    if (kind_ != ValueKind::Residue) throw FieldMismatchError("residue_modulus: value is not a residue");
    return p_;
}

std::complex<double> FieldValue::as_complex() const {
    if (kind_ == ValueKind::Complex) return c_;
    if (kind_ == ValueKind::Real) return {re_, 0.0};
    throw FieldMismatchError("as_complex: value cannot promote to complex");
}

void FieldValue::require_same(const FieldValue& o, const char* op) const {
    const bool cx_mix = (kind_ == ValueKind::Complex && o.kind_ == ValueKind::Real) ||
                        (kind_ == ValueKind::Real && o.kind_ == ValueKind::Complex);
    if (cx_mix) return;
    if (kind_ != o.kind_)
        throw FieldMismatchError(std::string(op) + ": operands from different fields");
    if (kind_ == ValueKind::Residue && p_ != o.p_)
        throw FieldMismatchError(std::string(op) + ": residues with different moduli");
}

FieldValue FieldValue::operator-() const {
    switch (kind_) {
        case ValueKind::Real: return real(-re_);
        case ValueKind::Rational: return rational(Rational(-q_));
        case ValueKind::Residue: return residue(p_, -static_cast<std::int64_t>(res_));
        case ValueKind::Complex: return complex(-c_);
    }
    throw InvalidInputError("negate: bad value kind");
}

FieldValue FieldValue::operator+(const FieldValue& o) const {
    require_same(o, "add");
    if (kind_ == ValueKind::Complex || o.kind_ == ValueKind::Complex)
        return complex(as_complex() + o.as_complex());
    switch (kind_) {
        case ValueKind::Real: return real(re_ + o.re_);
        case ValueKind::Rational: return rational(Rational(q_ + o.q_));
        case ValueKind::Residue: return residue(p_, static_cast<std::int64_t>(res_ + o.res_));
        default: break;
    }
    throw InvalidInputError("add: bad value kind");
}

FieldValue FieldValue::operator-(const FieldValue& o) const { return *this + (-o); }

FieldValue FieldValue::operator*(const FieldValue& o) const {
    require_same(o, "mul");
    if (kind_ == ValueKind::Complex || o.kind_ == ValueKind::Complex)
        return complex(as_complex() * o.as_complex());
    switch (kind_) {
        case ValueKind::Real: return real(re_ * o.re_);
        case ValueKind::Rational: return rational(Rational(q_ * o.q_));
        case ValueKind::Residue: {
            const std::uint64_t prod = (res_ * o.res_) % p_;
            return residue(p_, static_cast<std::int64_t>(prod));
        }
        default: break;
    }
    throw InvalidInputError("mul: bad value kind");
}

FieldValue FieldValue::inverse() const {
    if (is_zero()) throw InvalidInputError("inverse: division by zero");
    switch (kind_) {
        case ValueKind::Real: return real(1.0 / re_);
        case ValueKind::Rational: return rational(Rational(1 / q_));
        case ValueKind::Residue:
            return residue(p_, static_cast<std::int64_t>(mod_inverse(res_, p_)));
        case ValueKind::Complex: return complex(1.0 / c_);
    }
    throw InvalidInputError("inverse: bad value kind");
}

bool FieldValue::is_zero() const {
    switch (kind_) {
        case ValueKind::Real: return re_ == 0.0;
        case ValueKind::Rational: return q_ == 0;
        case ValueKind::Residue: return res_ == 0;
        case ValueKind::Complex: return c_ == std::complex<double>(0.0, 0.0);
    }
    return false;
}

bool FieldValue::operator==(const FieldValue& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case ValueKind::Real: return re_ == o.re_;
        case ValueKind::Rational: return q_ == o.q_;
        case ValueKind::Residue: return p_ == o.p_ && res_ == o.res_;
        case ValueKind::Complex: return c_ == o.c_;
    }
    return false;
}

double FieldValue::magnitude() const {
    switch (kind_) {
        case ValueKind::Real: return std::abs(re_);
        case ValueKind::Rational: return std::abs(q_.get_d());
        case ValueKind::Residue: return static_cast<double>(res_);
        case ValueKind::Complex: return std::abs(c_);
    }
    return 0.0;
}

int FieldValue::arrow_sign() const {
    switch (kind_) {
        case ValueKind::Real: return re_ > 0.0 ? 1 : (re_ < 0.0 ? -1 : 0);
        case ValueKind::Rational: return sgn(q_);
        case ValueKind::Residue: return res_ == 0 ? 0 : 1;
        case ValueKind::Complex: return 0; // no order on C
    }
    return 0;
}

std::string FieldValue::str() const {
    std::ostringstream os;
    switch (kind_) {
        case ValueKind::Real: os << num::fmt17(re_); break;
        case ValueKind::Rational: os << q_; break;
        case ValueKind::Residue: os << "[" << res_ << "] mod " << p_; break;
        case ValueKind::Complex: os << "(" << num::fmt17(c_.real()) << ", " << num::fmt17(c_.imag()) << ")"; break;
    }
    return os.str();
}

int compare(const FieldValue& a, const FieldValue& b) {
    if (a.kind() != b.kind()) throw FieldMismatchError("compare: operands from different fields");
    switch (a.kind()) {
        case ValueKind::Real: {
            const double x = a.as_real(), y = b.as_real();
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        case ValueKind::Rational:
            return cmp(a.as_rational(), b.as_rational());
        case ValueKind::Residue: {
            if (a.residue_modulus() != b.residue_modulus())
                throw FieldMismatchError("compare: residues with different moduli");
            const auto x = a.residue_rep(), y = b.residue_rep();
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        case ValueKind::Complex:
            throw InvalidInputError("compare: complex values are unordered");
    }
    throw InvalidInputError("compare: bad value kind");
}

// ---------------------------------------------------------------------------
// Quasi-metric

Rational quasi_distance(const TimeField& f, const FieldValue& a, const FieldValue& b) {
    if (!f.contains(a) || !f.contains(b))
        throw FieldMismatchError("quasi_distance: value does not belong to " + f.describe());
    switch (f.kind()) {
        case FieldKind::Reals: {
            if (!std::isfinite(a.as_real()) || !std::isfinite(b.as_real()))
                throw EvaluationError("quasi_distance: non-finite real value");
            return rational_abs(Rational(a.as_real()) - Rational(b.as_real()));
        }
        case FieldKind::Rationals:
            return rational_abs(Rational(a.as_rational() - b.as_rational()));
        case FieldKind::PrimeField: {
            const std::int64_t n0 = a.residue_rep(), m0 = b.residue_rep();
            return Rational(n0 >= m0 ? n0 - m0 : m0 - n0);
        }
    }
    throw InvalidInputError("quasi_distance: bad field kind");
}

QuasiMetricReport check_quasi_metric_axioms(const TimeField& f,
                                            const std::vector<std::array<FieldValue, 3>>& sample) {
    if (sample.empty()) throw InvalidInputError("check_quasi_metric_axioms: empty sample");
    QuasiMetricReport report;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& [u, v, w] = sample[i];
        const Rational duv = quasi_distance(f, u, v);
        const Rational dvw = quasi_distance(f, v, w);
        const Rational duw = quasi_distance(f, u, w);
        if (duv < 0 || dvw < 0 || duw < 0)
            report.violations.push_back({QuasiMetricAxiom::NonNegativity, i, "negative distance"});
        if ((duv == 0) != (u == v))
            report.violations.push_back({QuasiMetricAxiom::IdentityOfIndiscernibles, i,
                                         "d(u,v)=0 iff u=v failed at u=" + u.str() + " v=" + v.str()});
        if (duw > duv + dvw)
            report.violations.push_back({QuasiMetricAxiom::TriangleInequality, i,
                                         "d(u,w) > d(u,v)+d(v,w) at u=" + u.str() + " v=" + v.str() +
                                             " w=" + w.str()});
        ++report.triples_checked;
    }
    return report;
}

std::vector<FieldValue> metric_ball(const TimeField& f, const FieldValue& center,
                                    const Rational& r) {
    if (f.kind() != FieldKind::PrimeField)
        throw InvalidInputError("metric_ball: only prime fields enumerate balls");
    std::vector<FieldValue> ball;
    for (std::uint32_t k = 0; k < f.p(); ++k) {
        const FieldValue cand = f.residue(k);
        if (quasi_distance(f, cand, center) < r) ball.push_back(cand);
    }
    return ball;
}

bool hausdorff_ball_check(const TimeField& f, const FieldValue& k1, const FieldValue& k2,
                          const Rational& r) {
    if (k1 == k2) throw InvalidInputError("hausdorff_ball_check: centers must differ");
    const auto b1 = metric_ball(f, k1, r);
    const auto b2 = metric_ball(f, k2, r);
    for (const auto& x : b1)
        for (const auto& y : b2)
            if (x == y) return false;
    return true;
}

Ordering zp_order_compare(const FieldValue& a, const FieldValue& b) {
    if (a.kind() != ValueKind::Residue || b.kind() != ValueKind::Residue)
        throw FieldMismatchError("zp_order_compare: residues required");
    const int c = compare(a, b);
    return c < 0 ? Ordering::LT : (c > 0 ? Ordering::GT : Ordering::EQ);
}

// ---------------------------------------------------------------------------
// TimeParameter

TimeParameter TimeParameter::whole(TimeField f) { return TimeParameter(f, Form::Whole); }

TimeParameter TimeParameter::interval(TimeField f, FieldValue lo, FieldValue hi) {
    if (f.kind() == FieldKind::PrimeField)
        throw InvalidInputError("interval: prime fields use explicit finite subsets");
    if (!f.contains(lo) || !f.contains(hi))
        throw FieldMismatchError("interval: endpoints outside the field");
    if (compare(lo, hi) > 0) throw InvalidInputError("interval: lower endpoint above upper");
    TimeParameter j(f, Form::Interval);
    j.lo_ = std::move(lo);
    j.hi_ = std::move(hi);
    return j;
}

TimeParameter TimeParameter::finite_set(TimeField f, std::vector<FieldValue> elements) {
    if (elements.empty()) throw InvalidInputError("finite_set: empty element list");
    for (const auto& e : elements)
        if (!f.contains(e)) throw FieldMismatchError("finite_set: element outside the field");
    // dedupe, keeping things order-independent
    std::vector<FieldValue> unique;
    for (const auto& e : elements) {
        bool seen = false;
        for (const auto& u : unique) seen = seen || (u == e);
        if (!seen) unique.push_back(e);
    }
    TimeParameter j(f, Form::FiniteSet);
    j.elements_ = std::move(unique);
    return j;
}

const std::vector<FieldValue>& TimeParameter::elements() const {
    if (form_ != Form::FiniteSet) throw InvalidInputError("elements: not a finite set");
    return elements_;
}

const FieldValue& TimeParameter::lower() const {
    if (form_ != Form::Interval) throw InvalidInputError("lower: not an interval");
    return *lo_;
}

const FieldValue& TimeParameter::upper() const {
    if (form_ != Form::Interval) throw InvalidInputError("upper: not an interval");
    return *hi_;
}

bool TimeParameter::contains(const FieldValue& t) const {
    if (!field_.contains(t)) return false;
    switch (form_) {
        case Form::Whole: return true;
        case Form::Interval: return compare(*lo_, t) <= 0 && compare(t, *hi_) <= 0;
        case Form::FiniteSet:
            for (const auto& e : elements_)
                if (e == t) return true;
            return false;
    }
    return false;
}

bool TimeParameter::operator==(const TimeParameter& o) const {
    if (!(field_ == o.field_) || form_ != o.form_) return false;
    switch (form_) {
        case Form::Whole: return true;
        case Form::Interval: return *lo_ == *o.lo_ && *hi_ == *o.hi_;
        case Form::FiniteSet: {
            if (elements_.size() != o.elements_.size()) return false;
            for (const auto& e : elements_)
                if (!o.contains(e)) return false;
            return true;
        }
    }
    return false;
}

namespace {

TimeParameterVerdict finite_set_verdict(const TimeField& f, const TimeParameter& j, double eps) {
    const auto& elems = j.elements();
    // subgroup: closed under addition, contains 0, closed under negation
    for (const auto& a : elems) {
        for (const auto& b : elems) {
            const FieldValue s = a + b;
            if (!j.contains(s))
                return {false, "not closed under addition: " + a.str() + " + " + b.str() + " = " +
                                   s.str() + " is outside J"};
        }
    }
    if (!j.contains(f.zero())) return {false, "not a subgroup: missing the neutral element"};
    for (const auto& a : elems)
        if (!j.contains(-a))
            return {false, "not a subgroup: missing inverse of " + a.str()};
    // small-neighbour condition
    const bool discrete = f.kind() == FieldKind::PrimeField;
    const Rational dmin = f.min_distance();
    for (const auto& a : elems) {
        bool found = false;
        for (const auto& b : elems) {
            if (a == b) continue;
            const Rational d = quasi_distance(f, b, a);
            if (discrete ? (d == dmin) : (d <= Rational(eps))) {
                found = true;
                break;
            }
        }
        if (!found)
            return {false, "no distinct small neighbour for " + a.str() +
                               (elems.size() == 1 ? " (degenerate trivial subgroup)" : "")};
    }
    return {true, "subgroup with small neighbours"};
}

} // namespace

TimeParameterVerdict is_time_parameter(const TimeField& f, const TimeParameter& j, double eps,
                                       int samples, std::uint64_t seed) {
    if (!(j.field() == f)) throw FieldMismatchError("is_time_parameter: parameter from another field");
    switch (j.form()) {
        case TimeParameter::Form::Whole:
            return {true, "the whole field is a complete time parameter"};
        case TimeParameter::Form::FiniteSet:
            return finite_set_verdict(f, j, eps);
        case TimeParameter::Form::Interval: {
            const FieldValue& lo = j.lower();
            const FieldValue& hi = j.upper();
            if (lo == hi) {
                if (lo.is_zero())
                    return {false, "degenerate trivial subgroup {0}: no small nonzero neighbour"};
                return {false, "singleton without the neutral element is not a subgroup"};
            }
            if (!j.contains(f.zero())) return {false, "interval misses the neutral element"};
            // closure contract-check on sampled pairs
            num::Rng rng(seed);
            const double a = lo.kind() == ValueKind::Real ? lo.as_real() : lo.as_rational().get_d();
            const double b = hi.kind() == ValueKind::Real ? hi.as_real() : hi.as_rational().get_d();
            for (int k = 0; k < samples; ++k) {
                const double x = rng.uniform(a, b), y = rng.uniform(a, b);
                const double s = x + y;
                if (s < a || s > b)
                    return {false, "not closed under addition on sampled pair (" +
                                       num::fmt17(x) + ", " + num::fmt17(y) + ")"};
            }
            return {true, "interval passed sampled closure and small-neighbour checks"};
        }
    }
    return {false, "unknown form"};
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

void check_laws_on(const FieldAutomorphism& th, const FieldValue& a, const FieldValue& b) {
    const FieldValue lhs_add = th.apply(a + b);
    const FieldValue rhs_add = th.apply(a) + th.apply(b);
    if (!(lhs_add == rhs_add))
        throw InvalidAutomorphismError("candidate is not additive: theta(a+b) != theta(a)+theta(b) at a=" +
                                       a.str() + " b=" + b.str());
    const FieldValue lhs_mul = th.apply(a * b);
    const FieldValue rhs_mul = th.apply(a) * th.apply(b);
    if (!(lhs_mul == rhs_mul))
        throw InvalidAutomorphismError("candidate is not multiplicative: theta(a*b) != theta(a)*theta(b) at a=" +
                                       a.str() + " b=" + b.str());
}

} // namespace

void validate_automorphism(const FieldAutomorphism& theta, int samples, std::uint64_t seed) {
    if (theta.is_identity()) return;
    const TimeField& f = theta.field;
    if (!(theta.apply(f.one()) == f.one()))
        throw InvalidAutomorphismError("candidate is not multiplicative: theta(1) != 1");
    if (!(theta.apply(f.zero()) == f.zero()))
        throw InvalidAutomorphismError("candidate is not additive: theta(0) != 0");
    if (f.kind() == FieldKind::PrimeField) {
        for (std::uint32_t i = 0; i < f.p(); ++i)
            for (std::uint32_t k = 0; k < f.p(); ++k)
                check_laws_on(theta, f.residue(i), f.residue(k));
        return;
    }
    num::Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        FieldValue a, b;
        if (f.kind() == FieldKind::Reals) {
            a = f.real(rng.uniform(-2.0, 2.0));
            b = f.real(rng.uniform(-2.0, 2.0));
        } else {
            a = f.rational(rng.uniform_int(-24, 24), rng.uniform_int(1, 12));
            b = f.rational(rng.uniform_int(-24, 24), rng.uniform_int(1, 12));
        }
        check_laws_on(theta, a, b);
    }
}

TimeParameter reparametrize(const FieldAutomorphism& theta, const TimeParameter& j) {
    if (!(theta.field == j.field()))
        throw FieldMismatchError("reparametrize: automorphism and parameter fields differ");
    validate_automorphism(theta);
    switch (j.form()) {
        case TimeParameter::Form::Whole:
            return TimeParameter::whole(j.field()); // automorphisms are bijective
        case TimeParameter::Form::Interval: {
            FieldValue lo = theta.apply(j.lower());
            FieldValue hi = theta.apply(j.upper());
            if (compare(lo, hi) > 0) std::swap(lo, hi);
            return TimeParameter::interval(j.field(), lo, hi);
        }
        case TimeParameter::Form::FiniteSet: {
            std::vector<FieldValue> mapped;
            mapped.reserve(j.elements().size());
            for (const auto& e : j.elements()) mapped.push_back(theta.apply(e));
            return TimeParameter::finite_set(j.field(), std::move(mapped));
        }
    }
    throw InvalidInputError("reparametrize: unknown form");
}

// ---------------------------------------------------------------------------
// Incremental quotients

FieldValue incremental_quotient(const std::function<FieldValue(const FieldValue&)>& psi,
                                const FieldValue& t1, const FieldValue& h, double max_step) {
    if (h.is_zero()) throw InvalidInputError("incremental_quotient: division by zero (h = 0)");
    if (h.kind() != t1.kind())
        throw FieldMismatchError("incremental_quotient: t1 and h from different fields");
    if (t1.kind() == ValueKind::Residue) {
        const TimeField f = TimeField::prime_field(t1.residue_modulus());
        const FieldValue t2 = t1 + h;
        if (!(quasi_distance(f, t2, t1) == f.min_distance()))
            throw InvalidInputError(
                "incremental_quotient: contract violation, d(t1+h, t1) != d_min for h = " + h.str());
    } else if (t1.kind() == ValueKind::Real) {
        if (std::abs(h.as_real()) > max_step)
            throw InvalidInputError("incremental_quotient: contract violation, |h| above the small-step bound");
    } else if (t1.kind() == ValueKind::Rational) {
        if (abs(h.as_rational()) > Rational(max_step))
            throw InvalidInputError("incremental_quotient: contract violation, |h| above the small-step bound");
    }
    const FieldValue num = psi(t1 + h) - psi(t1);
    return num * h.inverse();
}

double derivative_richardson(const std::function<double(double)>& psi, double t1, double h,
                             int levels) {
    if (h == 0.0) throw InvalidInputError("derivative_richardson: division by zero (h = 0)");
    return num::richardson(
        [&](double hk) { return (psi(t1 + hk) - psi(t1)) / hk; }, std::abs(h), levels);
}

} // namespace xiflow
