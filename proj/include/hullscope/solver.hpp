#pragma once

#include "hullscope/point_set.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hullscope {

enum class LineSearch { Exact, FixedStep };

// Only one rule today; kept as an enum so configs serialize by name.
enum class TieBreak { LowestIndex };

struct SolverConfig {
    // <= 0 means auto: 1e-6 * max(1, |q|^2), i.e. certified accuracy that
    // scales with the objective.
    double gap_tolerance = 0.0;
    std::int64_t max_iterations = 100000;
    LineSearch line_search = LineSearch::Exact;
    TieBreak tie_break = TieBreak::LowestIndex;
    bool record_objective_trace = false;

    void validate() const;
    double resolved_gap_tolerance(const QueryPoint& query) const;
};

// Convex-combination weights over the point set: sorted unique indices,
// strictly positive weights, sum within 1e-9 of one.
struct SimplexCoefficients {
    std::vector<std::pair<Index, double>> support;

    double weight_sum() const;
};

struct ProjectionResult {
    SimplexCoefficients coefficients;
    Vector projection;      // = sum over support of weight * point
    double distance = 0.0;  // |query - projection|
    double dual_gap = 0.0;  // Frank-Wolfe gap at the returned iterate
    std::int64_t iterations = 0;
    bool converged = false;
    // Objective 0.5*|x - q|^2 per iteration; filled only when
    // SolverConfig::record_objective_trace is set.
    std::vector<double> objective_trace;
};

// Euclidean projection of `query` onto the convex hull of `points`:
// minimizes 0.5*|V^T a - q|^2 over the probability simplex with away-step
// Frank-Wolfe and exact line search. The dual gap upper-bounds the
// objective suboptimality of the returned iterate, so `dual_gap` is a
// certificate. Exhausting the iteration budget returns converged=false
// rather than throwing.
ProjectionResult project_to_hull(const PointSet& points, const QueryPoint& query,
                                 const SolverConfig& config = {});

struct MembershipResult {
    bool inside;
    double distance;
};

// Membership at threshold `tol`: runs the projection with the gap
// tolerance tightened to tol^2/4 so the distance estimate is reliable at
// threshold scale, then flags distance <= tol.
MembershipResult membership(const PointSet& points, const QueryPoint& query, double tol,
                            const SolverConfig& config = {});

// Projects every query independently; results are in input order and
// identical to sequential project_to_hull calls regardless of `threads`.
std::vector<ProjectionResult> batch_project(const PointSet& points,
                                            const std::vector<QueryPoint>& queries,
                                            const SolverConfig& config = {}, int threads = 0);

// Exact projection by enumerating every nonempty support subset, solving
// the affinely constrained least squares on each and keeping candidates
// whose coefficients are nonnegative. Intended as a test oracle; rejects
// N > 16.
ProjectionResult oracle_project(const PointSet& points, const QueryPoint& query);

}  // namespace hullscope
