// Lipschitz functions built on a splitting set A, with their Clarke
// subdifferentials written out coordinate by coordinate.
//
// With F(y) the integral of chi_A - chi_{A^c} over [0, y] (Clarke saturated,
// dF = [-1, 1] everywhere):
//
//   IncreasingOrbitFn   f(x,y)   = -x + mu F(y)                  df = {-1} x [-mu, mu]
//   SaturatedPeriodicFn Phi(x,y) = x y + M F(y)                  dPhi = {y} x [x-M, x+M]
//   DampedFn            phi(x,y) = delta y rho(x,y) + M F(y)     dphi = {delta y e^-(x^2+y^2)} x (c + [-M, M])
//
// where rho(x,y) = e^-y^2 * int_0^x e^-s^2 ds and c = delta (1 - 2y^2) rho(x,y).
// The pair functions add two copies on R^2 x R^2.
//
// Function values mix exact measure brackets with double arithmetic; callers
// comparing against thresholds should allow kFloatSlack.
#pragma once

#include "pathsub/exact.hpp"
#include "pathsub/splitting_set.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

namespace pathsub {

using Point2 = std::array<double, 2>;
using Point4 = std::array<double, 4>;

inline constexpr double kFloatSlack = 1e-12;

template <std::size_t N>
double norm(const std::array<double, N>& v)
{
    double s = 0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

/// One coordinate of a product-form subdifferential: a point or [lo, hi].
struct SubdiffEntry {
    double lo;
    double hi;

    static SubdiffEntry point(double v) { return {v, v}; }
    static SubdiffEntry range(double lo, double hi) { return {lo, hi}; }

    bool is_point() const { return lo == hi; }
    /// Singletons are matched within `tol`; ranges exactly.
    bool contains(double v, double tol = kFloatSlack) const
    {
        if (is_point()) return std::abs(v - lo) <= tol;
        return lo <= v && v <= hi;
    }
};

template <std::size_t N>
struct SubdiffRect {
    std::array<SubdiffEntry, N> entries;

    bool contains(const std::array<double, N>& v, double tol = kFloatSlack) const
    {
        for (std::size_t i = 0; i < N; ++i)
            if (!entries[i].contains(v[i], tol)) return false;
        return true;
    }

    bool contains_zero() const { return contains(std::array<double, N>{}, 0.0); }

    /// Largest Euclidean norm over the box.
    double max_norm() const
    {
        double s = 0;
        for (const auto& e : entries) {
            const double m = std::max(std::abs(e.lo), std::abs(e.hi));
            s += m * m;
        }
        return std::sqrt(s);
    }
};

// ---------------------------------------------------------------------------
// Gaussian pieces

/// int_0^x e^-s^2 ds, via the error function.
inline double gauss_integral(double x) { return 0.5 * std::sqrt(std::numbers::pi) * std::erf(x); }

inline double eval_rho(const Point2& p) { return std::exp(-p[1] * p[1]) * gauss_integral(p[0]); }

inline Point2 grad_rho(const Point2& p)
{
    const auto [x, y] = p;
    return {std::exp(-(x * x + y * y)), -2 * y * eval_rho(p)};
}

namespace detail {

inline ValueBounds affine(double offset, double slope, const MeasureBounds& exact)
{
    const ValueBounds v = to_value_bounds(exact);
    if (slope >= 0) return {offset + slope * v.lower, offset + slope * v.upper};
    return {offset + slope * v.upper, offset + slope * v.lower};
}

inline const SplittingMeasure& require(const std::shared_ptr<const SplittingMeasure>& m, const char* who)
{
    if (!m) throw std::logic_error(std::string(who) + ": function was built without a splitting set");
    return *m;
}

// Bracket of F(y), reusing the cached oracle when the depth matches.
inline MeasureBounds indicator(const SplittingMeasure& m, double y, unsigned depth)
{
    const ExactScalar t = exact_from_double(y);
    if (depth == m.depth()) return m.indicator_integral(t);
    return SplittingMeasure(m.set(), depth).indicator_integral(t);
}

} // namespace detail

// ---------------------------------------------------------------------------
// f(x,y) = -x + mu F(y)

class IncreasingOrbitFn {
public:
    IncreasingOrbitFn(std::shared_ptr<const SplittingMeasure> A, double rate_alpha)
        : A_(std::move(A)), rate_alpha_(rate_alpha)
    {
        if (!A_) throw std::invalid_argument("IncreasingOrbitFn: missing splitting set");
        if (!(rate_alpha_ > 0)) throw std::invalid_argument("IncreasingOrbitFn: rate_alpha must be positive");
        lambda_ = A_->set().lambda().get_d();
        mu_ = std::sqrt((rate_alpha_ + 1) / (2 * lambda_ - 1));
    }

    const SplittingMeasure& measure() const { return *A_; }
    double rate_alpha() const { return rate_alpha_; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    /// (2 lambda - 1) mu^2 - 1, the guaranteed slope along (t, mu t).
    double slope_bound() const { return (2 * lambda_ - 1) * mu_ * mu_ - 1; }

private:
    std::shared_ptr<const SplittingMeasure> A_;
    double rate_alpha_;
    double lambda_;
    double mu_;
};

inline ValueBounds evaluate(const IncreasingOrbitFn& fn, const Point2& p, unsigned depth)
{
    return detail::affine(-p[0], fn.mu(), detail::indicator(fn.measure(), p[1], depth));
}

inline ValueBounds evaluate(const IncreasingOrbitFn& fn, const Point2& p)
{
    return evaluate(fn, p, fn.measure().depth());
}

inline SubdiffRect<2> subdifferential(const IncreasingOrbitFn& fn, const Point2&)
{
    return {{SubdiffEntry::point(-1), SubdiffEntry::range(-fn.mu(), fn.mu())}};
}

// ---------------------------------------------------------------------------
// Phi(x,y) = x y + M F(y), studied on the box b B_inf with 0 < b < M/2

class SaturatedPeriodicFn {
public:
    SaturatedPeriodicFn(std::shared_ptr<const SplittingMeasure> A, double M, double b) : A_(std::move(A)), M_(M), b_(b)
    {
        if (!(M_ > 0)) throw std::invalid_argument("SaturatedPeriodicFn: M must be positive");
        if (!(b_ > 0 && b_ < M_ / 2)) throw std::invalid_argument("SaturatedPeriodicFn: b must lie in (0, M/2)");
    }

    bool has_set() const { return A_ != nullptr; }
    const SplittingMeasure& measure() const { return detail::require(A_, "SaturatedPeriodicFn"); }
    double M() const { return M_; }
    double b() const { return b_; }
    /// Closed box b B_inf.
    bool in_box(const Point2& p) const { return std::abs(p[0]) <= b_ && std::abs(p[1]) <= b_; }

private:
    std::shared_ptr<const SplittingMeasure> A_;
    double M_;
    double b_;
};

inline ValueBounds evaluate(const SaturatedPeriodicFn& fn, const Point2& p, unsigned depth)
{
    return detail::affine(p[0] * p[1], fn.M(), detail::indicator(fn.measure(), p[1], depth));
}

inline ValueBounds evaluate(const SaturatedPeriodicFn& fn, const Point2& p)
{
    return evaluate(fn, p, fn.measure().depth());
}

inline SubdiffRect<2> subdifferential(const SaturatedPeriodicFn& fn, const Point2& p)
{
    const auto [x, y] = p;
    return {{SubdiffEntry::point(y), SubdiffEntry::range(x - fn.M(), x + fn.M())}};
}

/// The selection (y, -x) = -(-y, x), i.e. h = -2x in dPhi.
inline Point2 selection(const SaturatedPeriodicFn&, const Point2& p) { return {p[1], -p[0]}; }

// ---------------------------------------------------------------------------
// phi(x,y) = delta y rho(x,y) + M F(y), with M >= (delta/2)(sqrt(pi) + 1)

class DampedFn {
public:
    DampedFn(std::shared_ptr<const SplittingMeasure> A, double delta, double M) : A_(std::move(A)), delta_(delta), M_(M)
    {
        if (!(delta_ > 0)) throw std::invalid_argument("DampedFn: delta must be positive");
        const double floor = min_M(delta_);
        if (!(M_ >= floor * (1 - 4 * std::numeric_limits<double>::epsilon())))
            throw std::invalid_argument("DampedFn: M must be at least (delta/2)(sqrt(pi)+1)");
    }

    static double min_M(double delta) { return delta / 2 * (std::sqrt(std::numbers::pi) + 1); }

    bool has_set() const { return A_ != nullptr; }
    const SplittingMeasure& measure() const { return detail::require(A_, "DampedFn"); }
    double delta() const { return delta_; }
    double M() const { return M_; }
    /// Global lower bound of membership_margin: M - delta (sqrt(pi)/2 + 1/sqrt(2e)).
    double margin_floor() const
    {
        return M_ - delta_ * (std::sqrt(std::numbers::pi) / 2 + 1 / std::sqrt(2 * std::numbers::e));
    }
    /// sup of |g| over the plane: delta / sqrt(2e).
    double selection_cap() const { return delta_ / std::sqrt(2 * std::numbers::e); }

private:
    std::shared_ptr<const SplittingMeasure> A_;
    double delta_;
    double M_;
};

inline ValueBounds evaluate(const DampedFn& fn, const Point2& p, unsigned depth)
{
    return detail::affine(fn.delta() * p[1] * eval_rho(p), fn.M(), detail::indicator(fn.measure(), p[1], depth));
}

inline ValueBounds evaluate(const DampedFn& fn, const Point2& p) { return evaluate(fn, p, fn.measure().depth()); }

/// Centre c of the interval coordinate: delta (1 - 2y^2) e^-y^2 int_0^x e^-s^2.
inline double damped_center(const DampedFn& fn, const Point2& p)
{
    const double y = p[1];
    return fn.delta() * (1 - 2 * y * y) * std::exp(-y * y) * gauss_integral(p[0]);
}

inline SubdiffRect<2> subdifferential(const DampedFn& fn, const Point2& p)
{
    const auto [x, y] = p;
    const double c = damped_center(fn, p);
    return {{SubdiffEntry::point(fn.delta() * y * std::exp(-(x * x + y * y))),
             SubdiffEntry::range(c - fn.M(), c + fn.M())}};
}

/// g(x,y) = delta e^-(x^2+y^2) (y, -x), tangent to the circle through p.
inline Point2 selection(const DampedFn& fn, const Point2& p)
{
    const auto [x, y] = p;
    const double s = fn.delta() * std::exp(-(x * x + y * y));
    return {s * y, -s * x};
}

/// M - |g_2 - c|; nonnegative exactly when g lies in dphi.
inline double membership_margin(const DampedFn& fn, const Point2& p)
{
    return fn.M() - std::abs(selection(fn, p)[1] - damped_center(fn, p));
}

// ---------------------------------------------------------------------------
// Doubled functions on R^2 x R^2

namespace detail {

inline Point2 first(const Point4& X) { return {X[0], X[1]}; }
inline Point2 second(const Point4& X) { return {X[2], X[3]}; }
inline Point4 join(const Point2& a, const Point2& b) { return {a[0], a[1], b[0], b[1]}; }

} // namespace detail

/// f(x1,x2,x3,x4) = Phi(x1,x2) + Phi(x3,x4) on U = b B_inf x b B_inf.
class PeriodicPairFn {
public:
    explicit PeriodicPairFn(SaturatedPeriodicFn plane) : plane_(std::move(plane)) {}
    const SaturatedPeriodicFn& plane() const { return plane_; }
    double b() const { return plane_.b(); }
    /// Open domain U.
    bool in_domain(const Point4& X) const
    {
        for (double c : X)
            if (!(std::abs(c) < plane_.b())) return false;
        return true;
    }

private:
    SaturatedPeriodicFn plane_;
};

/// f(x,y,z,w) = phi(x,y) + phi(z,w).
class DampedPairFn {
public:
    explicit DampedPairFn(DampedFn plane) : plane_(std::move(plane)) {}
    const DampedFn& plane() const { return plane_; }

private:
    DampedFn plane_;
};

inline ValueBounds evaluate(const PeriodicPairFn& fn, const Point4& X, unsigned depth)
{
    return evaluate(fn.plane(), detail::first(X), depth) + evaluate(fn.plane(), detail::second(X), depth);
}

inline ValueBounds evaluate(const PeriodicPairFn& fn, const Point4& X)
{
    return evaluate(fn, X, fn.plane().measure().depth());
}

inline ValueBounds evaluate(const DampedPairFn& fn, const Point4& X, unsigned depth)
{
    return evaluate(fn.plane(), detail::first(X), depth) + evaluate(fn.plane(), detail::second(X), depth);
}

inline ValueBounds evaluate(const DampedPairFn& fn, const Point4& X)
{
    return evaluate(fn, X, fn.plane().measure().depth());
}

template <typename Pair>
SubdiffRect<4> pair_subdifferential(const Pair& fn, const Point4& X)
{
    const auto a = subdifferential(fn.plane(), detail::first(X));
    const auto b = subdifferential(fn.plane(), detail::second(X));
    return {{a.entries[0], a.entries[1], b.entries[0], b.entries[1]}};
}

inline SubdiffRect<4> subdifferential(const PeriodicPairFn& fn, const Point4& X) { return pair_subdifferential(fn, X); }
inline SubdiffRect<4> subdifferential(const DampedPairFn& fn, const Point4& X) { return pair_subdifferential(fn, X); }

/// G(X) = (g(x,y), g(z,w)).
inline Point4 selection(const DampedPairFn& fn, const Point4& X)
{
    return detail::join(selection(fn.plane(), detail::first(X)), selection(fn.plane(), detail::second(X)));
}

inline Point4 selection(const PeriodicPairFn& fn, const Point4& X)
{
    return detail::join(selection(fn.plane(), detail::first(X)), selection(fn.plane(), detail::second(X)));
}

/// Distance to Crit(f) = {(x1,0,x3,0) : max(|x1|,|x3|) <= b}; X must lie in U.
inline double dist_to_crit(const PeriodicPairFn& fn, const Point4& X)
{
    if (!fn.in_domain(X)) throw std::domain_error("dist_to_crit: point outside the open box b B_inf x b B_inf");
    return std::hypot(X[1], X[3]);
}

/// Distance to Crit(f) = R x {0} x R x {0}.
inline double dist_to_crit(const DampedPairFn&, const Point4& X) { return std::hypot(X[1], X[3]); }

} // namespace pathsub
