// Subgradient dynamics on the pathological functions: closed-form continuous
// orbits with membership checks, and the discrete subgradient method
// X_{n+1} = X_n - t_n G(X_n) together with the invariants its iterates obey.
#pragma once

#include "pathsub/functions.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathsub {

inline constexpr double kStepTolerance = 1e-12;   // per-step membership / symmetry
inline constexpr double kRunTolerance = 1e-9;     // accumulated checks over long runs

// ---------------------------------------------------------------------------
// Step sizes

class StepSchedule {
public:
    enum class Kind { Harmonic, Explicit };

    /// t_n = c / n for n = 1 .. n_steps.
    static StepSchedule harmonic(double c, std::size_t n_steps)
    {
        if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("StepSchedule: c must be positive and finite");
        StepSchedule s;
        s.kind_ = Kind::Harmonic;
        s.c_ = c;
        s.size_ = n_steps;
        return s;
    }

    static StepSchedule explicit_steps(std::vector<double> steps)
    {
        for (std::size_t i = 0; i < steps.size(); ++i)
            if (!(steps[i] > 0) || !std::isfinite(steps[i]))
                throw std::invalid_argument("StepSchedule: step t_" + std::to_string(i + 1) + " must be positive");
        StepSchedule s;
        s.kind_ = Kind::Explicit;
        s.size_ = steps.size();
        s.steps_ = std::move(steps);
        return s;
    }

    Kind kind() const { return kind_; }
    double c() const { return c_; }
    std::size_t size() const { return size_; }

    /// t_n, 1-based.
    double operator()(std::size_t n) const
    {
        if (n < 1 || n > size_) throw std::out_of_range("StepSchedule: index out of range");
        return kind_ == Kind::Harmonic ? c_ / static_cast<double>(n) : steps_[n - 1];
    }

private:
    StepSchedule() = default;

    Kind kind_ = Kind::Harmonic;
    double c_ = 0;
    std::size_t size_ = 0;
    std::vector<double> steps_;
};

/// H_n = sum_{k<=n} 1/k; direct below 32, asymptotic expansion above.
inline double harmonic_number(std::size_t n)
{
    if (n < 32) {
        double s = 0;
        for (std::size_t k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k);
        return s;
    }
    const double x = static_cast<double>(n);
    const double x2 = x * x;
    return std::log(x) + std::numbers::egamma + 1 / (2 * x) - 1 / (12 * x2) + 1 / (120 * x2 * x2) -
           1 / (252 * x2 * x2 * x2);
}

/// sum_{k<=n} 1/k^2 = pi^2/6 - tail(n).
inline double basel_partial(std::size_t n)
{
    if (n < 32) {
        double s = 0;
        for (std::size_t k = n; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
        return s;
    }
    const double x = static_cast<double>(n);
    const double x2 = x * x;
    const double tail = 1 / x - 1 / (2 * x2) + 1 / (6 * x2 * x) - 1 / (30 * x2 * x2 * x) + 1 / (42 * x2 * x2 * x2 * x);
    return std::numbers::pi * std::numbers::pi / 6 - tail;
}

/// Partial sums of t_n and t_n^2 over the first n steps, compensated.
struct StepSums {
    double sum;
    double sum_sq;
};

inline StepSums step_sums(const StepSchedule& s, std::size_t n)
{
    // Smallest terms first keeps the rounding error near one ulp of the result.
    double sum = 0, sum_sq = 0;
    for (std::size_t k = n; k >= 1; --k) {
        const double t = s(k);
        sum += t;
        sum_sq += t * t;
    }
    return {sum, sum_sq};
}

inline StepSums step_sums_closed_form(const StepSchedule& s, std::size_t n)
{
    if (s.kind() != StepSchedule::Kind::Harmonic)
        throw std::invalid_argument("step_sums_closed_form: only harmonic schedules have closed forms");
    return {s.c() * harmonic_number(n), s.c() * s.c() * basel_partial(n)};
}

// ---------------------------------------------------------------------------
// Trajectories

/// Row n (0-based) holds X_{n+1}, the selection used there, the radii of the
/// two planes, the distance to the critical set and the step t_{n+1} taken
/// from it.
struct Trajectory {
    std::vector<Point4> points;
    std::vector<Point4> selections;
    std::vector<double> r1;
    std::vector<double> r2;
    std::vector<double> dists;
    std::vector<double> steps;
    double selection_cap = 0; // bound on each planar selection norm

    std::size_t size() const { return points.size(); }

    void reserve(std::size_t n)
    {
        points.reserve(n);
        selections.reserve(n);
        r1.reserve(n);
        r2.reserve(n);
        dists.reserve(n);
        steps.reserve(n);
    }

    void push(const Point4& X, const Point4& g, double dist, double t)
    {
        points.push_back(X);
        selections.push_back(g);
        r1.push_back(std::hypot(X[0], X[1]));
        r2.push_back(std::hypot(X[2], X[3]));
        dists.push_back(dist);
        steps.push_back(t);
    }
};

/// Runs the subgradient method from x0 for schedule.size() iterates.
/// Throws std::logic_error if a radius leaves its closed-form cap, which can
/// only happen through a bug.
inline Trajectory sgd_run(const DampedPairFn& fn, const Point4& x0, const StepSchedule& schedule)
{
    const double delta = fn.plane().delta();
    const double gain = delta * delta / (2 * std::numbers::e);
    Trajectory traj;
    traj.selection_cap = fn.plane().selection_cap();
    traj.reserve(schedule.size());

    Point4 X = x0;
    const double cap1 = X[0] * X[0] + X[1] * X[1];
    const double cap2 = X[2] * X[2] + X[3] * X[3];
    double sum_sq = 0;
    for (std::size_t n = 1; n <= schedule.size(); ++n) {
        const Point4 G = selection(fn, X);
        const double t = schedule(n);
        traj.push(X, G, dist_to_crit(fn, X), t);

        const double limit = gain * sum_sq * (1 + 1e-9) + 1e-12;
        if (traj.r1.back() * traj.r1.back() > cap1 + limit || traj.r2.back() * traj.r2.back() > cap2 + limit)
            throw std::logic_error("sgd_run: radius exceeded its cap at iterate " + std::to_string(n));

        for (std::size_t i = 0; i < 4; ++i) X[i] -= t * G[i];
        sum_sq += t * t;
    }
    return traj;
}

/// Per step: r_{n+1}^2 = r_n^2 + t_n^2 |g_n|^2 within tol, r_n strictly
/// increasing and |g_n| <= cap + tol, for both planes. Radii are recomputed
/// from the points. Violated carries the index of the first bad row.
inline Verdict radius_recursion_check(const Trajectory& traj, double tol)
{
    auto sq = [](double a, double b) { return a * a + b * b; };
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& X = traj.points[n];
        const auto& G = traj.selections[n];
        const double g1 = sq(G[0], G[1]);
        const double g2 = sq(G[2], G[3]);
        if (std::sqrt(g1) > traj.selection_cap + tol || std::sqrt(g2) > traj.selection_cap + tol)
            return Verdict::violated(n, "selection norm above delta/sqrt(2e)");
        if (n + 1 == traj.size()) break;
        const auto& Y = traj.points[n + 1];
        const double t2 = traj.steps[n] * traj.steps[n];
        const double a1 = sq(X[0], X[1]), b1 = sq(Y[0], Y[1]);
        const double a2 = sq(X[2], X[3]), b2 = sq(Y[2], Y[3]);
        if (std::abs(b1 - (a1 + t2 * g1)) > tol || std::abs(b2 - (a2 + t2 * g2)) > tol)
            return Verdict::violated(n + 1, "Pythagoras identity fails");
        if (!(b1 > a1) || !(b2 > a2)) return Verdict::violated(n + 1, "radius not strictly increasing");
    }
    return Verdict::verified();
}

/// (z_n, w_n) = (-y_n, x_n) within tol at every row.
inline Verdict rotation_symmetry_check(const Trajectory& traj, double tol)
{
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& X = traj.points[n];
        if (std::abs(X[2] + X[1]) > tol || std::abs(X[3] - X[0]) > tol)
            return Verdict::violated(n, "second plane is not the quarter turn of the first");
    }
    return Verdict::verified();
}

/// Every squared radius stays below r_1^2 + (delta^2 / 2e) * sum t_n^2 + tol.
inline Verdict radius_cap_check(const Trajectory& traj, double delta, double total_sq_steps, double tol)
{
    if (traj.size() == 0) return Verdict::verified();
    const double gain = delta * delta / (2 * std::numbers::e);
    const double cap1 = traj.r1.front() * traj.r1.front() + gain * total_sq_steps + tol;
    const double cap2 = traj.r2.front() * traj.r2.front() + gain * total_sq_steps + tol;
    for (std::size_t n = 0; n < traj.size(); ++n)
        if (traj.r1[n] * traj.r1[n] > cap1 || traj.r2[n] * traj.r2[n] > cap2)
            return Verdict::violated(n, "radius above the closed-form cap");
    return Verdict::verified();
}

/// dist_to_crit equals the planar radius and stays >= floor - tol.
inline Verdict distance_floor_check(const Trajectory& traj, double floor, double tol)
{
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (std::abs(traj.dists[n] - traj.r1[n]) > tol) return Verdict::violated(n, "dist_to_crit differs from r_n");
        if (traj.dists[n] < floor - tol) return Verdict::violated(n, "dist_to_crit below the floor");
    }
    return Verdict::verified();
}

struct AccumulationReport {
    double min_dist;
    double max_dist;
    double r_inf;      // last radius of the first plane
    double dist_floor; // r_1, a certified lower bound on every distance
};

inline AccumulationReport accumulation_report(const Trajectory& traj, std::size_t window)
{
    if (window == 0 || traj.size() < window)
        throw std::invalid_argument("accumulation_report: window must be in [1, trajectory length]");
    AccumulationReport r{traj.dists[traj.size() - window], traj.dists[traj.size() - window], traj.r1.back(),
                         traj.r1.front()};
    for (std::size_t n = traj.size() - window; n < traj.size(); ++n) {
        r.min_dist = std::min(r.min_dist, traj.dists[n]);
        r.max_dist = std::max(r.max_dist, traj.dists[n]);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Continuous orbits

/// gamma(t) = (t, mu t); -gamma' = -(1, mu) lies in {-1} x [-mu, mu].
inline Point2 orbit_increasing(const IncreasingOrbitFn& fn, double t)
{
    if (!(t >= 0)) throw std::invalid_argument("orbit_increasing: t must be nonnegative");
    return {t, fn.mu() * t};
}

struct IncreaseSample {
    double t;
    Point2 point;
    ValueBounds value;     // f(gamma(t))
    double increase_lower; // certified lower bound of f(gamma(t)) - f(gamma(0))
    Verdict verdict;       // increase >= rate_alpha * t
};

inline std::vector<IncreaseSample> verify_increase(const IncreasingOrbitFn& fn, const std::vector<double>& t_grid,
                                                   unsigned depth)
{
    const ValueBounds start = evaluate(fn, orbit_increasing(fn, 0), depth);
    std::vector<IncreaseSample> out;
    out.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        IncreaseSample s{t, orbit_increasing(fn, t), {}, 0, {}};
        s.value = evaluate(fn, s.point, depth);
        s.increase_lower = s.value.lower - start.upper;
        const double threshold = fn.rate_alpha() * t - kFloatSlack;
        if (s.increase_lower >= threshold)
            s.verdict = Verdict::verified();
        else if (s.value.upper - start.lower < threshold)
            s.verdict = Verdict::violated(i);
        else
            s.verdict = Verdict::undecided(exact_from_double(s.value.width() + start.width()), i);
        out.push_back(std::move(s));
    }
    return out;
}

/// -gamma'(t) = (1, mu) up to sign must lie in df(gamma(t)).
inline bool increasing_orbit_member(const IncreasingOrbitFn& fn, double t)
{
    const Point2 minus_velocity{-1.0, -fn.mu()};
    return subdifferential(fn, orbit_increasing(fn, t)).contains(minus_velocity, 0.0);
}

/// gamma(t) = r e^{i(t + theta)} for Phi, with 0 <= r < b.
class CircularOrbit {
public:
    CircularOrbit(const SaturatedPeriodicFn& fn, double r, double theta) : r_(r), theta_(theta)
    {
        if (!(r_ >= 0 && r_ < fn.b())) throw std::invalid_argument("CircularOrbit: radius must lie in [0, b)");
    }

    double radius() const { return r_; }
    Point2 at(double t) const { return {r_ * std::cos(t + theta_), r_ * std::sin(t + theta_)}; }
    Point2 velocity(double t) const { return {-r_ * std::sin(t + theta_), r_ * std::cos(t + theta_)}; }

private:
    double r_;
    double theta_;
};

inline Point2 orbit_periodic_2d(const SaturatedPeriodicFn& fn, double r, double theta, double t)
{
    return CircularOrbit(fn, r, theta).at(t);
}

struct MembershipResidual {
    double first;       // |(-gamma')_1 - y|
    double h;           // multiplier needed in [x - M, x + M], i.e. -gamma'_2 = x + h
    Verdict verdict;
};

/// Checks -gamma'(t) in dPhi(gamma(t)) = {y} x [x - M, x + M].
inline MembershipResidual residual_membership(const SaturatedPeriodicFn& fn, const CircularOrbit& orbit, double t)
{
    const Point2 p = orbit.at(t);
    const Point2 v = orbit.velocity(t);
    MembershipResidual r{std::abs(-v[0] - p[1]), -v[1] - p[0], {}};
    if (r.first <= kStepTolerance && std::abs(r.h) <= fn.M())
        r.verdict = Verdict::verified();
    else
        r.verdict = Verdict::violated(std::nullopt, "velocity leaves the subdifferential");
    return r;
}

/// (b/2)(e^{it}, e^{i(t + pi/2)}) = (b/2)(cos t, sin t, -sin t, cos t).
inline Point4 orbit_periodic_4d(double b, double t)
{
    const double h = b / 2;
    return {h * std::cos(t), h * std::sin(t), -h * std::sin(t), h * std::cos(t)};
}

inline Point4 orbit_periodic_4d_velocity(double b, double t)
{
    const double h = b / 2;
    return {-h * std::sin(t), h * std::cos(t), -h * std::cos(t), -h * std::sin(t)};
}

/// Largest membership residual of -gamma' in df(gamma) over both planes;
/// infinity when an interval coordinate is missed.
inline double residual_membership_4d(const PeriodicPairFn& fn, double t)
{
    const Point4 X = orbit_periodic_4d(fn.b(), t);
    const Point4 V = orbit_periodic_4d_velocity(fn.b(), t);
    const auto sub = subdifferential(fn, X);
    const Point4 minus_v{-V[0], -V[1], -V[2], -V[3]};
    double worst = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& e = sub.entries[i];
        if (e.is_point())
            worst = std::max(worst, std::abs(minus_v[i] - e.lo));
        else if (!e.contains(minus_v[i]))
            return HUGE_VAL;
    }
    return worst;
}

struct NoncriticalReport {
    Verdict verdict;
    double min_dist;
    double max_deviation; // max |dist - b/2|
};

/// dist_to_crit(gamma(t)) = b/2 within tol on every grid time.
inline NoncriticalReport certify_noncritical(const PeriodicPairFn& fn, const std::vector<double>& t_grid,
                                             double tol = kStepTolerance)
{
    NoncriticalReport rep{Verdict::verified(), HUGE_VAL, 0};
    const double target = fn.b() / 2;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double d = dist_to_crit(fn, orbit_periodic_4d(fn.b(), t_grid[i]));
        rep.min_dist = std::min(rep.min_dist, d);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(d - target));
        if (std::abs(d - target) > tol && rep.verdict.is_verified())
            rep.verdict = Verdict::violated(i, "distance to the critical set differs from b/2");
    }
    if (rep.verdict.is_verified() && !(rep.min_dist > 0))
        rep.verdict = Verdict::violated(std::nullopt, "orbit meets the critical set");
    return rep;
}

/// Samples gamma at t_k = k * period / n_samples, k = 0 .. n_samples, with
/// the selected subgradient -gamma' per row.
inline Trajectory sample_periodic_orbit(const PeriodicPairFn& fn, std::size_t n_samples)
{
    if (n_samples == 0) throw std::invalid_argument("sample_periodic_orbit: need at least one sample");
    Trajectory traj;
    traj.selection_cap = fn.b() / 2;
    traj.reserve(n_samples + 1);
    const double dt = 2 * std::numbers::pi / static_cast<double>(n_samples);
    for (std::size_t k = 0; k <= n_samples; ++k) {
        const double t = dt * static_cast<double>(k);
        const Point4 V = orbit_periodic_4d_velocity(fn.b(), t);
        const Point4 X = orbit_periodic_4d(fn.b(), t);
        traj.push(X, {-V[0], -V[1], -V[2], -V[3]}, dist_to_crit(fn, X), dt);
    }
    return traj;
}

/// Integrates x' = -y, y' = x (the field of the selection (y, -x)) with RK4
/// from orbit.at(0) and returns the largest distance to the closed-form orbit
/// over [0, horizon]. Cross-check only.
inline double reference_orbit_deviation(const CircularOrbit& orbit, double horizon, double h)
{
    if (!(h > 0) || !(horizon >= 0)) throw std::invalid_argument("reference_orbit_deviation: bad step or horizon");
    auto field = [](const Point2& p) { return Point2{-p[1], p[0]}; };
    Point2 p = orbit.at(0);
    double worst = 0;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / h));
    for (std::size_t k = 1; k <= steps; ++k) {
        const Point2 k1 = field(p);
        const Point2 k2 = field({p[0] + h / 2 * k1[0], p[1] + h / 2 * k1[1]});
        const Point2 k3 = field({p[0] + h / 2 * k2[0], p[1] + h / 2 * k2[1]});
        const Point2 k4 = field({p[0] + h * k3[0], p[1] + h * k3[1]});
        for (std::size_t i = 0; i < 2; ++i) p[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        const Point2 q = orbit.at(h * static_cast<double>(k));
        worst = std::max(worst, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// CSV

/// Round-trip-safe rendering with 17 significant digits.
inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline constexpr const char* kTrajectoryCsvHeader = "n,x,y,z,w,r1,r2,dist_crit,t_n,gnorm1,gnorm2";

/// Writes rows 1, 1 + stride, ... and always the last row.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1)
{
    if (stride == 0) throw std::invalid_argument("write_trajectory_csv: stride must be positive");
    os << kTrajectoryCsvHeader << '\n';
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (n % stride != 0 && n + 1 != traj.size()) continue;
        const auto& X = traj.points[n];
        const auto& G = traj.selections[n];
        os << (n + 1);
        for (double v : {X[0], X[1], X[2], X[3], traj.r1[n], traj.r2[n], traj.dists[n], traj.steps[n],
                         std::hypot(G[0], G[1]), std::hypot(G[2], G[3])})
            os << ',' << format_double(v);
        os << '\n';
    }
}

} // namespace pathsub
