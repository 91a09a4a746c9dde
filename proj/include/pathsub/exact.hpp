// Exact rational scalars, closed intervals and certified brackets.
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pathsub {

using ExactScalar = mpq_class;

inline ExactScalar rational(long num, long den = 1)
{
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    ExactScalar q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q", "p" or a terminating decimal such as "0.75".
inline ExactScalar parse_rational(std::string_view text)
{
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    ExactScalar q;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw std::invalid_argument("parse_rational: mixed '.' and '/' in \"" + s + "\"");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const auto frac_len = s.size() - dot - 1;
        mpz_class num;
        if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0)
            throw std::invalid_argument("parse_rational: bad decimal \"" + s + "\"");
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        q = ExactScalar(num, den);
    } else if (q.set_str(s, 10) != 0) {
        throw std::invalid_argument("parse_rational: bad rational \"" + s + "\"");
    }
    if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
}

inline std::string to_string(const ExactScalar& q) { return q.get_str(10); }

/// Exact value of a finite double.
inline ExactScalar exact_from_double(double x)
{
    if (!std::isfinite(x)) throw std::domain_error("exact_from_double: non-finite value");
    return ExactScalar(x);
}

/// Largest double not above q.
inline double round_down(const ExactScalar& q)
{
    double d = q.get_d();
    if (ExactScalar(d) > q) d = std::nextafter(d, -HUGE_VAL);
    return d;
}

/// Smallest double not below q.
inline double round_up(const ExactScalar& q)
{
    double d = q.get_d();
    if (ExactScalar(d) < q) d = std::nextafter(d, HUGE_VAL);
    return d;
}

inline ExactScalar pow2(long e)
{
    ExactScalar r(1);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
}

inline mpz_class floor_z(const ExactScalar& q)
{
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline mpz_class ceil_z(const ExactScalar& q)
{
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

/// Closed interval [lo, hi] with lo < hi.
class Interval {
public:
    Interval(ExactScalar lo, ExactScalar hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        lo_.canonicalize();
        hi_.canonicalize();
        if (!(lo_ < hi_))
            throw std::invalid_argument("Interval: requires lo < hi, got [" + to_string(lo_) + ", " +
                                        to_string(hi_) + "]");
    }

    const ExactScalar& lo() const { return lo_; }
    const ExactScalar& hi() const { return hi_; }
    ExactScalar length() const { return hi_ - lo_; }
    ExactScalar midpoint() const { return (lo_ + hi_) / 2; }

    bool contains(const ExactScalar& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
    /// Other lies in the open interior of this one.
    bool strictly_contains(const Interval& other) const { return lo_ < other.lo_ && other.hi_ < hi_; }

    friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

private:
    ExactScalar lo_;
    ExactScalar hi_;
};

/// Intersection with positive length, or nothing.
inline std::optional<Interval> intersect(const Interval& a, const Interval& b)
{
    const ExactScalar& lo = a.lo() > b.lo() ? a.lo() : b.lo();
    const ExactScalar& hi = a.hi() < b.hi() ? a.hi() : b.hi();
    if (lo < hi) return Interval(lo, hi);
    return std::nullopt;
}

inline std::string to_string(const Interval& I) { return "[" + to_string(I.lo()) + ", " + to_string(I.hi()) + "]"; }

/// Certified bracket [lower, upper] around an unknown exact quantity.
template <typename T>
struct Bounds {
    T lower;
    T upper;

    T width() const { return upper - lower; }
    bool contains(const T& v) const { return lower <= v && v <= upper; }
    bool within(const Bounds& outer) const { return outer.lower <= lower && upper <= outer.upper; }

    friend Bounds operator+(const Bounds& a, const Bounds& b) { return {a.lower + b.lower, a.upper + b.upper}; }
    friend Bounds operator-(const Bounds& a, const Bounds& b) { return {a.lower - b.upper, a.upper - b.lower}; }
    friend bool operator==(const Bounds& a, const Bounds& b) { return a.lower == b.lower && a.upper == b.upper; }
};

template <typename T>
Bounds<T> scale(const Bounds<T>& b, const T& s)
{
    if (s >= 0) return {b.lower * s, b.upper * s};
    return {b.upper * s, b.lower * s};
}

template <typename T>
Bounds<T> shift(const Bounds<T>& b, const T& s)
{
    return {b.lower + s, b.upper + s};
}

/// Bracket of a Lebesgue measure, exact endpoints.
using MeasureBounds = Bounds<ExactScalar>;
/// Bracket of a function value, double endpoints.
using ValueBounds = Bounds<double>;

inline MeasureBounds exact_bounds(const ExactScalar& v) { return {v, v}; }

/// Outward-rounded conversion to doubles.
inline ValueBounds to_value_bounds(const MeasureBounds& b) { return {round_down(b.lower), round_up(b.upper)}; }

enum class VerdictKind { Verified, Violated, Undecided };

inline std::string_view to_string(VerdictKind k)
{
    switch (k) {
    case VerdictKind::Verified: return "Verified";
    case VerdictKind::Violated: return "Violated";
    case VerdictKind::Undecided: return "Undecided";
    }
    return "?";
}

/// Outcome of a certification check. `width` is set for Undecided (the
/// bracket that straddles the threshold); `index` names the first offending
/// item for Violated results over sequences.
struct Verdict {
    VerdictKind kind = VerdictKind::Verified;
    ExactScalar width = 0;
    std::optional<std::size_t> index;
    std::string detail;

    static Verdict verified() { return {}; }
    static Verdict violated(std::optional<std::size_t> at = std::nullopt, std::string why = {})
    {
        return {VerdictKind::Violated, 0, at, std::move(why)};
    }
    static Verdict undecided(ExactScalar w, std::optional<std::size_t> at = std::nullopt)
    {
        return {VerdictKind::Undecided, std::move(w), at, {}};
    }

    bool is_verified() const { return kind == VerdictKind::Verified; }
    bool is_violated() const { return kind == VerdictKind::Violated; }
    bool is_undecided() const { return kind == VerdictKind::Undecided; }
};

/// Decide `value >= threshold` from a bracket of `value`.
inline Verdict decide_at_least(const MeasureBounds& value, const ExactScalar& threshold)
{
    if (value.lower >= threshold) return Verdict::verified();
    if (value.upper < threshold) return Verdict::violated();
    return Verdict::undecided(value.width());
}

/// Worst of a sequence: any Violated wins, then any Undecided.
template <typename Range>
VerdictKind combine(const Range& verdicts)
{
    VerdictKind worst = VerdictKind::Verified;
    for (const auto& v : verdicts) {
        if (v.kind == VerdictKind::Violated) return VerdictKind::Violated;
        if (v.kind == VerdictKind::Undecided) worst = VerdictKind::Undecided;
    }
    return worst;
}

} // namespace pathsub
