// Controlled splitting sets: a subset A of the line that meets every interval
// in positive but not full measure, with m(A n [0,t]) >= lambda * t for t > 0.
//
// A0 = [0,1] minus the union of the "removed" Cantor sets N_i. Placement i
// occupies a host interval [a,b]; its left part [a, a + theta (b-a)] carries a
// kept alpha-fat Cantor set T_i and its right part a 1/2-fat Cantor set N_i.
// Placement 0 has host [0,1]; placement n > 0 is put inside a free gap of the
// earlier placements that lies in the n-th enumerated dyadic interval. Hosts
// therefore form a laminar family and all T_i, N_i are pairwise disjoint.
// A itself is the integer-periodic extension of A0.
#pragma once

#include "pathsub/enumeration.hpp"
#include "pathsub/exact.hpp"
#include "pathsub/fat_cantor.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace pathsub {

struct Placement {
    Interval host;
    FatCantorSet kept;    // F_alpha(host+), part of A
    FatCantorSet removed; // F_1/2(host-), part of the complement
};

inline Placement make_placement(const Interval& host, const ExactScalar& alpha, const ExactScalar& theta)
{
    const ExactScalar split = host.lo() + theta * host.length();
    return Placement{host, FatCantorSet(Interval(host.lo(), split), alpha),
                     FatCantorSet(Interval(split, host.hi()), rational(1, 2))};
}

/// Throws std::invalid_argument naming the first failed hypothesis.
inline void validate_splitting_parameters(const ExactScalar& lambda, const ExactScalar& alpha,
                                          const ExactScalar& theta)
{
    if (!(lambda > rational(1, 2) && lambda < 1))
        throw std::invalid_argument("lambda must lie in (1/2, 1), got " + to_string(lambda));
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1), got " + to_string(alpha));
    if (!(theta > 0 && theta < 1)) throw std::invalid_argument("theta must lie in (0, 1), got " + to_string(theta));
    if (!(alpha * theta > lambda))
        throw std::invalid_argument("alpha * theta = " + to_string(ExactScalar(alpha * theta)) +
                                    " must exceed lambda = " + to_string(lambda));
    const ExactScalar fat_bound = 3 * lambda / (2 + lambda);
    if (!(alpha > fat_bound))
        throw std::invalid_argument("alpha = " + to_string(alpha) + " must exceed 3 lambda / (2 + lambda) = " +
                                    to_string(fat_bound));
}

class SplittingSet {
public:
    SplittingSet(ExactScalar lambda, ExactScalar alpha, ExactScalar theta, unsigned depth,
                 std::vector<Placement> placements)
        : lambda_(std::move(lambda)), alpha_(std::move(alpha)), theta_(std::move(theta)), depth_(depth),
          placements_(std::move(placements))
    {
        validate_splitting_parameters(lambda_, alpha_, theta_);
        if (placements_.empty() || !(placements_.front().host == Interval(0, 1)))
            throw std::invalid_argument("SplittingSet: placement 0 must have host [0,1]");
        for (const auto& p : placements_) {
            const Placement expected = make_placement(p.host, alpha_, theta_);
            if (!(p.kept.base() == expected.kept.base()) || p.kept.alpha() != alpha_ ||
                !(p.removed.base() == expected.removed.base()) || p.removed.alpha() != rational(1, 2))
                throw std::invalid_argument("SplittingSet: placement on " + to_string(p.host) +
                                            " does not match (alpha, theta)");
            if (!Interval(0, 1).contains(p.host))
                throw std::invalid_argument("SplittingSet: host " + to_string(p.host) + " outside [0,1]");
        }
    }

    const ExactScalar& lambda() const { return lambda_; }
    const ExactScalar& alpha() const { return alpha_; }
    const ExactScalar& theta() const { return theta_; }
    /// Resolution used to locate gaps while building.
    unsigned depth() const { return depth_; }
    const std::vector<Placement>& placements() const { return placements_; }

private:
    ExactScalar lambda_;
    ExactScalar alpha_;
    ExactScalar theta_;
    unsigned depth_;
    std::vector<Placement> placements_;
};

namespace detail {

// Pieces of an open gap not covered by hosts lying inside it.
inline std::vector<Interval> free_pieces(const Interval& gap, const std::vector<Interval>& hosts_by_lo)
{
    std::vector<Interval> out;
    ExactScalar cursor = gap.lo();
    for (const auto& h : hosts_by_lo) {
        if (h.lo() >= gap.hi()) break;
        if (!gap.strictly_contains(h) || h.hi() <= cursor) continue;
        if (cursor < h.lo()) out.emplace_back(cursor, h.lo());
        cursor = h.hi();
    }
    if (cursor < gap.hi()) out.emplace_back(cursor, gap.hi());
    return out;
}

// Closed dyadic interval inside [x, y] covering at least half of it.
inline Interval dyadic_inner(const ExactScalar& x, const ExactScalar& y)
{
    const ExactScalar quarter = (y - x) / 4;
    long k = 0;
    while (pow2(-k) > quarter) ++k;
    const ExactScalar step = pow2(-k);
    const ExactScalar lo = ExactScalar(ceil_z(x / step)) * step;
    const ExactScalar hi = ExactScalar(floor_z(y / step)) * step;
    return Interval(lo, hi);
}

} // namespace detail

/// A closed dyadic subinterval of I disjoint from every kept and removed
/// Cantor set of `placements`, or nothing when no gap is resolved at `depth`.
///
/// Candidates are the free parts (not occupied by later hosts) of removed
/// intervals through `depth`, clipped to I. The longest clipped piece wins,
/// ties going to the leftmost; the answer is a dyadic interval inside its
/// middle third.
inline std::optional<Interval> find_gap(const std::vector<Placement>& placements, const Interval& I, unsigned depth)
{
    std::vector<Interval> hosts;
    hosts.reserve(placements.size());
    for (const auto& p : placements) hosts.push_back(p.host);
    std::sort(hosts.begin(), hosts.end(), [](const Interval& a, const Interval& b) {
        return a.lo() < b.lo() || (a.lo() == b.lo() && a.hi() > b.hi());
    });

    std::optional<Interval> best;
    ExactScalar best_len = 0;
    auto consider = [&](const Interval& piece) {
        const ExactScalar len = piece.length();
        if (!best || len > best_len || (len == best_len && piece.lo() < best->lo())) {
            best = piece;
            best_len = len;
        }
    };

    for (const auto& p : placements) {
        for (const FatCantorSet* tree : {&p.kept, &p.removed}) {
            if (!intersect(tree->base(), I)) continue;
            tree->visit_gaps(I, depth, [&](const Interval& gap, unsigned level) {
                if (auto clipped = intersect(gap, I); clipped && clipped->length() >= best_len) {
                    for (const auto& piece : detail::free_pieces(gap, hosts))
                        if (auto c = intersect(piece, I)) consider(*c);
                }
                return tree->gap_length(level + 1) >= best_len;
            });
        }
    }
    if (!best) return std::nullopt;
    const ExactScalar third = best->length() / 3;
    return detail::dyadic_inner(best->lo() + third, best->hi() - third);
}

/// Appends placements n = size .. size + count - 1 following the enumeration.
inline SplittingSet extend_splitting_set(const SplittingSet& A, std::size_t count)
{
    std::vector<Placement> placements = A.placements();
    placements.reserve(placements.size() + count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto n = static_cast<std::uint64_t>(placements.size());
        const Interval target = rational_interval_enumeration(n);
        auto host = find_gap(placements, target, A.depth());
        if (!host)
            throw std::runtime_error("build_splitting_set: no gap resolved inside " + to_string(target) +
                                     " at depth " + std::to_string(A.depth()) + "; refine deeper");
        placements.push_back(make_placement(*host, A.alpha(), A.theta()));
    }
    return SplittingSet(A.lambda(), A.alpha(), A.theta(), A.depth(), std::move(placements));
}

/// Placement 0 on [0,1] followed by `n_placements` enumerated placements.
inline SplittingSet build_splitting_set(const ExactScalar& lambda, const ExactScalar& alpha, const ExactScalar& theta,
                                        std::size_t n_placements, unsigned depth)
{
    validate_splitting_parameters(lambda, alpha, theta);
    SplittingSet base(lambda, alpha, theta, depth, {make_placement(Interval(0, 1), alpha, theta)});
    return n_placements == 0 ? base : extend_splitting_set(base, n_placements);
}

/// Measure queries on a splitting set resolved at a fixed depth. Brackets of
/// whole removed sets and of m(A0) are computed once, so a query only walks
/// the Cantor trees whose hull straddles the query point.
class SplittingMeasure {
public:
    SplittingMeasure(std::shared_ptr<const SplittingSet> set, unsigned depth) : set_(std::move(set)), depth_(depth)
    {
        const auto& ps = set_->placements();
        order_.resize(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return ps[a].removed.base().hi() < ps[b].removed.base().hi();
        });
        prefix_.reserve(ps.size() + 1);
        prefix_.push_back({0, 0});
        for (std::size_t i : order_) prefix_.push_back(prefix_.back() + fat_cantor_measure(ps[i].removed, depth_));
        period_ = base_cumulative(1);
    }

    /// Non-owning view; `set` must outlive this object.
    SplittingMeasure(const SplittingSet& set, unsigned depth)
        : SplittingMeasure(std::shared_ptr<const SplittingSet>(std::shared_ptr<void>{}, &set), depth)
    {
    }

    const SplittingSet& set() const { return *set_; }
    unsigned depth() const { return depth_; }

    /// Bracket of m(N n [0, s]) for s in [0,1], N the union of removed sets.
    MeasureBounds removed_cumulative(const ExactScalar& s) const
    {
        const auto& ps = set_->placements();
        const auto split = std::partition_point(order_.begin(), order_.end(), [&](std::size_t i) {
            return ps[i].removed.base().hi() <= s;
        });
        MeasureBounds acc = prefix_[static_cast<std::size_t>(split - order_.begin())];
        for (auto it = split; it != order_.end(); ++it) {
            const auto& N = ps[*it].removed;
            if (N.base().lo() < s) acc = acc + cantor_cumulative_clamped(N, s, depth_);
        }
        return acc;
    }

    /// Bracket of m(A0 n [0, s]) for s in [0,1].
    MeasureBounds base_cumulative(const ExactScalar& s) const
    {
        const MeasureBounds removed = removed_cumulative(s);
        return {s - removed.upper, s - removed.lower};
    }

    /// Bracket of m(A0) = m(A n [0,1]).
    const MeasureBounds& period_measure() const { return period_; }

    /// m(A n [0,t]) for t >= 0 and -m(A n [t,0]) for t < 0.
    MeasureBounds signed_cumulative(const ExactScalar& t) const
    {
        const mpz_class whole = floor_z(t);
        const ExactScalar frac = t - ExactScalar(whole);
        MeasureBounds partial = base_cumulative(frac);
        if (whole == 0) return partial;
        return scale(period_, ExactScalar(whole)) + partial;
    }

    /// Certified bracket of m(A n [0,t]), t >= 0.
    MeasureBounds cumulative(const ExactScalar& t) const
    {
        if (t < 0) throw std::domain_error("cumulative_measure: t = " + to_string(t) + " is negative");
        return signed_cumulative(t);
    }

    /// Certified bracket of the integral of chi_A - chi_{A^c} over [0, t]
    /// (negatively oriented for t < 0).
    MeasureBounds indicator_integral(const ExactScalar& t) const
    {
        const MeasureBounds c = signed_cumulative(t);
        return {2 * c.lower - t, 2 * c.upper - t};
    }

private:
    std::shared_ptr<const SplittingSet> set_;
    unsigned depth_;
    std::vector<std::size_t> order_;    // placements sorted by removed-set right end
    std::vector<MeasureBounds> prefix_; // prefix sums of whole removed-set brackets
    MeasureBounds period_;
};

inline MeasureBounds period_measure(const SplittingSet& A, unsigned depth)
{
    return SplittingMeasure(A, depth).period_measure();
}

inline MeasureBounds cumulative_measure(const SplittingSet& A, const ExactScalar& t, unsigned depth)
{
    return SplittingMeasure(A, depth).cumulative(t);
}

inline MeasureBounds indicator_integral(const SplittingSet& A, const ExactScalar& t, unsigned depth)
{
    return SplittingMeasure(A, depth).indicator_integral(t);
}

/// Verdict per grid point on m(A n [0,t]) >= lambda t.
inline std::vector<Verdict> check_controlled_split(const SplittingSet& A, const std::vector<ExactScalar>& t_grid,
                                                   unsigned depth, const ExactScalar& lambda)
{
    const SplittingMeasure measure(A, depth);
    std::vector<Verdict> out;
    out.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto& t = t_grid[i];
        if (!(t > 0)) throw std::invalid_argument("check_controlled_split: grid points must be positive");
        Verdict v = decide_at_least(measure.cumulative(t), lambda * t);
        if (!v.is_verified()) v.index = i;
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<Verdict> check_controlled_split(const SplittingSet& A, const std::vector<ExactScalar>& t_grid,
                                                   unsigned depth)
{
    return check_controlled_split(A, t_grid, depth, A.lambda());
}

/// Witness-based evidence that A splits I. Both lower bounds only use the
/// kept sets T_j (inside A) and removed sets N_j (outside A), which later
/// placements never touch, so they hold for every extension of A too.
struct SplitCheck {
    Verdict verdict;
    ExactScalar inside_lower = 0;  // lower bound on m(A n I)
    ExactScalar outside_lower = 0; // lower bound on m(A^c n I)
    std::size_t placements_used = 0;
};

namespace detail {

inline ExactScalar clipped_lower(const FatCantorSet& F, const Interval& I, unsigned depth)
{
    auto overlap = intersect(F.base(), I);
    if (!overlap) return 0;
    ExactScalar v = cantor_cumulative_clamped(F, overlap->hi(), depth).lower -
                    cantor_cumulative_clamped(F, overlap->lo(), depth).upper;
    return v > 0 ? v : ExactScalar(0);
}

} // namespace detail

/// `budget` caps the total number of placements (existing plus enumerated
/// on demand) that may be materialised while searching for witnesses.
inline SplitCheck check_splits_intervals(const SplittingSet& A, const Interval& I, unsigned depth, std::size_t budget)
{
    if (!Interval(0, 1).contains(I))
        throw std::invalid_argument("check_splits_intervals: " + to_string(I) + " is not inside [0,1]");
    SplitCheck out;
    auto absorb = [&](const Placement& p) {
        out.inside_lower += detail::clipped_lower(p.kept, I, depth);
        out.outside_lower += detail::clipped_lower(p.removed, I, depth);
        ++out.placements_used;
    };
    for (const auto& p : A.placements()) absorb(p);

    std::optional<SplittingSet> grown;
    while (!(out.inside_lower > 0 && out.outside_lower > 0) && out.placements_used < budget) {
        grown = extend_splitting_set(grown ? *grown : A, 1);
        absorb(grown->placements().back());
    }

    if (out.inside_lower > 0 && out.outside_lower > 0)
        out.verdict = Verdict::verified();
    else
        out.verdict = Verdict::undecided(I.length() - out.inside_lower - out.outside_lower);
    return out;
}

/// True when every host is either disjoint from an earlier host or lies
/// strictly inside one of that host's removed intervals through `depth`.
inline bool cantor_sets_disjoint(const SplittingSet& A, unsigned depth)
{
    const auto& ps = A.placements();
    for (std::size_t j = 1; j < ps.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (!intersect(ps[i].host, ps[j].host)) continue;
            if (!ps[i].kept.gap_containing(ps[j].host, depth) && !ps[i].removed.gap_containing(ps[j].host, depth))
                return false;
        }
    }
    return true;
}

} // namespace pathsub
