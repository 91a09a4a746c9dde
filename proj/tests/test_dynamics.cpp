#include "pathsub/dynamics.hpp"
#include "pathsub/plot.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace pathsub;

namespace {

constexpr double kHarmonic1e4 = 9.78760603604438226;
constexpr double kFirstStepRadiusSq = 1.13533528323661269;  // 1 + e^-2
constexpr double kCapSquared = 1.30256871263799674;         // 1 + pi^2 / (12 e)
constexpr double kCapRadius = 1.14130132420758925;

const Point4 kStart{1, 0, 0, 1};

DampedPairFn default_pair() { return DampedPairFn(DampedFn(nullptr, 1, DampedFn::min_M(1))); }

const Trajectory& default_run()
{
    static const Trajectory t = sgd_run(default_pair(), kStart, StepSchedule::harmonic(1, 1'000'000));
    return t;
}

std::shared_ptr<const SplittingMeasure> default_measure()
{
    static const auto m = std::make_shared<const SplittingMeasure>(
        std::make_shared<const SplittingSet>(build_splitting_set(rational(3, 5), rational(3, 4), rational(9, 10), 200, 20)),
        20);
    return m;
}

// Point lists of the orbit polylines in an SVG document.
std::vector<std::string> orbit_point_lists(const std::string& svg)
{
    std::vector<std::string> out;
    const std::string tag = "<polyline class=\"orbit\"";
    const std::string attr = "points=\"";
    for (auto at = svg.find(tag); at != std::string::npos; at = svg.find(tag, at + 1)) {
        const auto begin = svg.find(attr, at) + attr.size();
        out.push_back(svg.substr(begin, svg.find('"', begin) - begin));
    }
    return out;
}

} // namespace

TEST(StepSchedule, HarmonicAndExplicit)
{
    const auto h = StepSchedule::harmonic(2, 10);
    EXPECT_EQ(h(1), 2);
    EXPECT_EQ(h(4), 0.5);
    EXPECT_THROW(h(0), std::out_of_range);
    EXPECT_THROW(h(11), std::out_of_range);
    EXPECT_THROW(StepSchedule::harmonic(0, 10), std::invalid_argument);
    const auto e = StepSchedule::explicit_steps({0.5, 0.25});
    EXPECT_EQ(e.size(), 2u);
    EXPECT_EQ(e(2), 0.25);
    EXPECT_THROW(StepSchedule::explicit_steps({0.5, 0}), std::invalid_argument);
    EXPECT_THROW(step_sums_closed_form(e, 2), std::invalid_argument);
}

TEST(StepSums, ClosedFormsMatchDirectSums)
{
    EXPECT_NEAR(harmonic_number(10'000), kHarmonic1e4, 1e-12);
    for (double c : {1.0, 0.5, 3.0}) {
        for (std::size_t n : {1u, 2u, 31u, 32u, 33u, 1000u, 65'537u, 1'000'000u}) {
            const auto s = StepSchedule::harmonic(c, n);
            const auto direct = step_sums(s, n);
            const auto closed = step_sums_closed_form(s, n);
            EXPECT_NEAR(direct.sum, closed.sum, 1e-12 * c) << n;
            EXPECT_NEAR(direct.sum_sq, closed.sum_sq, 1e-12 * c * c) << n;
        }
    }
}

TEST(Sgd, FirstStepMatchesHandComputation)
{
    const auto t = sgd_run(default_pair(), kStart, StepSchedule::harmonic(1, 2));
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.points[0], kStart);
    EXPECT_NEAR(t.points[1][1], std::exp(-1.0), 1e-16);
    EXPECT_NEAR(t.r1[1] * t.r1[1], kFirstStepRadiusSq, 1e-15);
    EXPECT_NEAR(t.r2[1] * t.r2[1], kFirstStepRadiusSq, 1e-15);
    EXPECT_EQ(t.steps[0], 1);
}

TEST(SgdProperty, DefaultRunSatisfiesAllInvariants)
{
    const auto& t = default_run();
    ASSERT_EQ(t.size(), 1'000'000u);
    EXPECT_TRUE(radius_recursion_check(t, kRunTolerance).is_verified());
    EXPECT_TRUE(rotation_symmetry_check(t, kRunTolerance).is_verified());
    const auto sums = step_sums(StepSchedule::harmonic(1, t.size()), t.size());
    EXPECT_TRUE(radius_cap_check(t, 1, sums.sum_sq, kRunTolerance).is_verified());
    EXPECT_TRUE(distance_floor_check(t, 1, kRunTolerance).is_verified());
    double worst = 0;
    for (double r : t.r1) worst = std::max(worst, r * r);
    EXPECT_LE(worst, kCapSquared + kRunTolerance);
    EXPECT_GT(t.r1.back(), 1);
    EXPECT_LE(t.r1.back(), kCapRadius);
}

TEST(SgdProperty, RadiiIncreaseForOtherStartsAndSchedules)
{
    const DampedPairFn f(DampedFn(nullptr, 0.5, 2));
    const Point4 x0{-0.3, 0.7, -0.7, -0.3};
    const auto t = sgd_run(f, x0, StepSchedule::explicit_steps({0.9, 0.5, 0.4, 0.1, 2.0, 0.01}));
    EXPECT_TRUE(radius_recursion_check(t, kStepTolerance).is_verified());
    EXPECT_TRUE(rotation_symmetry_check(t, kStepTolerance).is_verified());
}

TEST(SgdNegativeControl, CorruptedPointIsReported)
{
    Trajectory t = sgd_run(default_pair(), kStart, StepSchedule::harmonic(1, 1000));
    t.points[500][0] += 1e-6;
    const auto v = radius_recursion_check(t, kRunTolerance);
    ASSERT_TRUE(v.is_violated());
    EXPECT_EQ(v.index, 500u);

    Trajectory u = sgd_run(default_pair(), kStart, StepSchedule::harmonic(1, 1000));
    u.points[200][3] = -u.points[200][3];
    EXPECT_TRUE(rotation_symmetry_check(u, kRunTolerance).is_violated());
    u.dists[10] = 0.5;
    EXPECT_TRUE(distance_floor_check(u, 1, kRunTolerance).is_violated());
}

TEST(Sgd, AccumulationReport)
{
    const auto& t = default_run();
    const auto r = accumulation_report(t, 1000);
    EXPECT_EQ(r.dist_floor, 1);
    EXPECT_EQ(r.r_inf, t.r1.back());
    EXPECT_LE(r.min_dist, r.max_dist);
    EXPECT_GE(r.min_dist, 1);
    EXPECT_THROW(accumulation_report(t, 0), std::invalid_argument);
}

TEST(IncreasingOrbit, MembershipAndLinearIncrease)
{
    const IncreasingOrbitFn f(default_measure(), 1.0);
    std::vector<double> grid;
    for (int k = 1; k <= 640; ++k) grid.push_back(k / 64.0);
    for (double t : grid) EXPECT_TRUE(increasing_orbit_member(f, t));
    for (const auto& s : verify_increase(f, grid, 20)) {
        ASSERT_TRUE(s.verdict.is_verified()) << s.t;
        EXPECT_GE(s.increase_lower, s.t - kFloatSlack);
    }
    EXPECT_THROW(orbit_increasing(f, -1), std::invalid_argument);
}

TEST(IncreasingOrbitProperty, CoarseDepthNeverViolates)
{
    const IncreasingOrbitFn f(default_measure(), 1.0);
    std::vector<double> grid;
    for (int k = 1; k <= 64; ++k) grid.push_back(k / 8.0);
    for (unsigned depth : {0u, 2u, 6u})
        for (const auto& s : verify_increase(f, grid, depth)) EXPECT_FALSE(s.verdict.is_violated()) << s.t;
}

TEST(PeriodicOrbit, PlanarMembership)
{
    const SaturatedPeriodicFn Phi(nullptr, 2.5, 1);
    const CircularOrbit orbit(Phi, 0.8, 0.3);
    for (int k = 0; k < 1000; ++k) {
        const auto r = residual_membership(Phi, orbit, k * 0.01);
        EXPECT_TRUE(r.verdict.is_verified());
        EXPECT_LE(r.first, kStepTolerance);
        EXPECT_LE(std::abs(r.h), Phi.M());
    }
    EXPECT_THROW(CircularOrbit(Phi, 1.0, 0), std::invalid_argument);
    EXPECT_LE(reference_orbit_deviation(orbit, 2 * std::numbers::pi, 1e-3), 1e-9);
}

TEST(PeriodicOrbit, FourDimensionalOrbitStaysAtHalfB)
{
    const PeriodicPairFn f(SaturatedPeriodicFn(nullptr, 2.5, 1));
    std::vector<double> times;
    for (int k = 0; k <= 10000; ++k) times.push_back(2 * std::numbers::pi * k / 10000);
    for (double t : times) {
        EXPECT_LE(residual_membership_4d(f, t), kStepTolerance);
        const Point4 V = orbit_periodic_4d_velocity(f.b(), t);
        const Point4 g = selection(f, orbit_periodic_4d(f.b(), t));
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(g[i], -V[i], 1e-15);
    }
    const auto rep = certify_noncritical(f, times);
    EXPECT_TRUE(rep.verdict.is_verified());
    EXPECT_NEAR(rep.min_dist, 0.5, 1e-12);
    EXPECT_LE(rep.max_deviation, 1e-12);

    const auto traj = sample_periodic_orbit(f, 100);
    ASSERT_EQ(traj.size(), 101u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(traj.points.front()[i], traj.points.back()[i], 1e-15);
}

TEST(Csv, HeaderStrideAndLastRow)
{
    const auto t = sgd_run(default_pair(), kStart, StepSchedule::harmonic(1, 10));
    std::ostringstream os;
    write_trajectory_csv(os, t, 4);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(is, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], kTrajectoryCsvHeader);
    EXPECT_EQ(rows[1].substr(0, 2), "1,");
    EXPECT_EQ(rows[2].substr(0, 2), "5,");
    EXPECT_EQ(rows[3].substr(0, 2), "9,");
    EXPECT_EQ(rows[4].substr(0, 3), "10,");
    EXPECT_THROW(write_trajectory_csv(os, t, 0), std::invalid_argument);
}

TEST(Csv, FormatDoubleRoundTrips)
{
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 1e300, 0.0, std::exp(-1.0)})
        EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Svg, TwoPanelsWithCirclesOfRadiusHalf)
{
    const PeriodicPairFn f(SaturatedPeriodicFn(nullptr, 2.5, 1));
    std::ostringstream os;
    write_orbit_svg(os, sample_periodic_orbit(f, 500), 1);
    const std::string svg = os.str();
    std::size_t panels = 0;
    for (const auto& list : orbit_point_lists(svg)) {
        ++panels;
        std::istringstream pts(list);
        std::string pair;
        std::size_t count = 0;
        while (pts >> pair) {
            const auto comma = pair.find(',');
            EXPECT_NEAR(std::hypot(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))), 0.5, 1e-12);
            ++count;
        }
        EXPECT_EQ(count, 501u);
    }
    EXPECT_EQ(panels, 2u);
    EXPECT_NE(svg.find("class=\"critical\""), std::string::npos);
}
