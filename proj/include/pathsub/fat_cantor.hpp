// Fat Cantor sets built by removing open middle intervals along a dyadic tree.
//
// Level n of the tree holds 2^n removed intervals of length delta0 / 4^n, each
// centred in the sub-interval left over by level n - 1, where
// delta0 = (1 - alpha) / 2 * m(base). The removed mass through level n is
// delta0 * (2 - 2^-n), so the limit set has measure alpha * m(base).
//
// Nothing is materialised: every query walks one root-to-leaf path, so cost is
// linear in the requested depth.
#pragma once

#include "pathsub/exact.hpp"

#include <utility>
#include <vector>

namespace pathsub {

class FatCantorSet {
public:
    FatCantorSet(Interval base, ExactScalar alpha) : base_(std::move(base)), alpha_(std::move(alpha))
    {
        alpha_.canonicalize();
        if (!(alpha_ > 0 && alpha_ < 1))
            throw std::invalid_argument("FatCantorSet: alpha must lie in (0,1), got " + to_string(alpha_));
        delta0_ = (1 - alpha_) / 2 * base_.length();
    }

    const Interval& base() const { return base_; }
    const ExactScalar& alpha() const { return alpha_; }
    const ExactScalar& delta0() const { return delta0_; }

    /// Length of each removed interval at tree level n.
    ExactScalar gap_length(unsigned level) const { return delta0_ * pow2(-2 * static_cast<long>(level)); }

    /// Removed mass of a subtree rooted at `level`, counting levels up to `depth`.
    ExactScalar subtree_removed(unsigned level, unsigned depth) const
    {
        if (level > depth) return 0;
        return gap_length(level) * (2 - pow2(-static_cast<long>(depth - level)));
    }

    /// Total removed mass through `depth`: delta0 * (2 - 2^-depth).
    ExactScalar removed_through(unsigned depth) const { return subtree_removed(0, depth); }

    /// Mass still to be removed below `depth`: delta0 * 2^-depth.
    ExactScalar tail(unsigned depth) const { return delta0_ * pow2(-static_cast<long>(depth)); }

    /// Removed mass (levels 0..depth) inside [base.lo, t]; t is clamped to base.
    ExactScalar removed_mass_upto(const ExactScalar& t, unsigned depth) const
    {
        if (t <= base_.lo()) return 0;
        if (t >= base_.hi()) return removed_through(depth);
        ExactScalar lo = base_.lo();
        ExactScalar hi = base_.hi();
        ExactScalar acc = 0;
        ExactScalar delta = delta0_;
        for (unsigned n = 0; n <= depth; ++n) {
            const ExactScalar mid = (lo + hi) / 2;
            const ExactScalar gl = mid - delta / 2;
            const ExactScalar gr = mid + delta / 2;
            if (t <= gl) {
                hi = gl;
            } else {
                const ExactScalar left_full = subtree_removed(n + 1, depth);
                if (t < gr) return acc + left_full + (t - gl);
                acc += left_full + delta;
                lo = gr;
            }
            delta /= 4;
        }
        return acc;
    }

    /// Visits removed intervals whose parent node meets `window`, pre-order
    /// and left to right. `fn(gap, level)` returns whether to descend below
    /// that node.
    template <typename Fn>
    void visit_gaps(const Interval& window, unsigned depth, Fn&& fn) const
    {
        visit_node(base_.lo(), base_.hi(), delta0_, 0, window, depth, fn);
    }

    /// The removed interval (open, level <= depth) strictly containing I, if any.
    std::optional<Interval> gap_containing(const Interval& I, unsigned depth) const
    {
        if (!base_.strictly_contains(I)) return std::nullopt;
        ExactScalar lo = base_.lo();
        ExactScalar hi = base_.hi();
        ExactScalar delta = delta0_;
        for (unsigned n = 0; n <= depth; ++n) {
            const ExactScalar mid = (lo + hi) / 2;
            const ExactScalar gl = mid - delta / 2;
            const ExactScalar gr = mid + delta / 2;
            if (I.hi() <= gl) {
                hi = gl;
            } else if (I.lo() >= gr) {
                lo = gr;
            } else {
                if (gl < I.lo() && I.hi() < gr) return Interval(gl, gr);
                return std::nullopt;
            }
            delta /= 4;
        }
        return std::nullopt;
    }

private:
    template <typename Fn>
    void visit_node(const ExactScalar& lo, const ExactScalar& hi, const ExactScalar& delta, unsigned level,
                    const Interval& window, unsigned depth, Fn& fn) const
    {
        if (level > depth || hi <= window.lo() || lo >= window.hi()) return;
        const ExactScalar mid = (lo + hi) / 2;
        const ExactScalar gl = mid - delta / 2;
        const ExactScalar gr = mid + delta / 2;
        if (!fn(Interval(gl, gr), level)) return;
        const ExactScalar next = delta / 4;
        visit_node(lo, gl, next, level + 1, window, depth, fn);
        visit_node(gr, hi, next, level + 1, window, depth, fn);
    }

    Interval base_;
    ExactScalar alpha_;
    ExactScalar delta0_;
};

/// Every removed open interval through `depth`, sorted left to right.
inline std::vector<Interval> fat_cantor_removals(const FatCantorSet& set, unsigned depth)
{
    if (depth > 24) throw std::invalid_argument("fat_cantor_removals: depth > 24 would materialise too many intervals");
    std::vector<Interval> out;
    out.reserve((std::size_t{2} << depth) - 1);
    auto walk = [&](auto&& self, const ExactScalar& lo, const ExactScalar& hi, const ExactScalar& delta,
                    unsigned level) -> void {
        if (level > depth) return;
        const ExactScalar mid = (lo + hi) / 2;
        const ExactScalar gl = mid - delta / 2;
        const ExactScalar gr = mid + delta / 2;
        self(self, lo, gl, delta / 4, level + 1);
        out.emplace_back(gl, gr);
        self(self, gr, hi, delta / 4, level + 1);
    };
    walk(walk, set.base().lo(), set.base().hi(), set.delta0(), 0);
    return out;
}

inline std::vector<Interval> fat_cantor_removals(const Interval& base, const ExactScalar& alpha, unsigned depth)
{
    return fat_cantor_removals(FatCantorSet(base, alpha), depth);
}

/// [m(base) - 2 delta0, m(base) - delta0 (2 - 2^-depth)]; the lower end is alpha * m(base).
inline MeasureBounds fat_cantor_measure(const FatCantorSet& set, unsigned depth)
{
    const ExactScalar m = set.base().length();
    return {m - 2 * set.delta0(), m - set.removed_through(depth)};
}

/// Bracket of m(F n [base.lo, t]) for t in base, with t clamped to the set's
/// hull. Internal helper shared with splitting sets.
inline MeasureBounds cantor_cumulative_clamped(const FatCantorSet& set, const ExactScalar& t, unsigned depth)
{
    if (t <= set.base().lo()) return {0, 0};
    const ExactScalar& a = set.base().lo();
    const ExactScalar x = t < set.base().hi() ? t : set.base().hi();
    const ExactScalar upper = (x - a) - set.removed_mass_upto(x, depth);
    ExactScalar lower = upper - set.tail(depth);
    if (lower < 0) lower = 0;
    return {lower, upper};
}

/// Certified bracket of m(F n [base.lo, t]).
inline MeasureBounds cumulative_measure(const FatCantorSet& set, const ExactScalar& t, unsigned depth)
{
    if (!set.base().contains(t))
        throw std::domain_error("cumulative_measure: t = " + to_string(t) + " outside " + to_string(set.base()));
    return cantor_cumulative_clamped(set, t, depth);
}

/// Verdict per grid point on m(F n [a, x]) >= lambda (x - a), a = base.lo.
inline std::vector<Verdict> check_fat_cantor_density(const FatCantorSet& F, const std::vector<ExactScalar>& grid,
                                                     unsigned depth, const ExactScalar& lambda)
{
    std::vector<Verdict> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Verdict v = decide_at_least(cumulative_measure(F, grid[i], depth), lambda * (grid[i] - F.base().lo()));
        if (!v.is_verified()) v.index = i;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace pathsub
