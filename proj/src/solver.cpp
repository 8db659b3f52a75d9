#include "hullscope/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hullscope {

void SolverConfig::validate() const {
    if (gap_tolerance < 0.0 || !std::isfinite(gap_tolerance))
        throw std::invalid_argument("SolverConfig: gap_tolerance must be >= 0 (0 = auto)");
    if (max_iterations < 1)
        throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
}

double SolverConfig::resolved_gap_tolerance(const QueryPoint& query) const {
    if (gap_tolerance > 0.0) return gap_tolerance;
    return 1e-6 * std::max(1.0, query.squaredNorm());
}

double SimplexCoefficients::weight_sum() const {
    double s = 0.0;
    for (const auto& [idx, w] : support) s += w;
    return s;
}

namespace {

struct SolverState {
    std::vector<double> weights;  // dense over all points, nonzero on support
    std::vector<Index> support;   // sorted ascending
    Vector x;                     // current hull point = sum w_i * v_i

    void add_support(Index i) {
        auto it = std::lower_bound(support.begin(), support.end(), i);
        if (it == support.end() || *it != i) support.insert(it, i);
    }
    void drop_support(Index i) {
        auto it = std::lower_bound(support.begin(), support.end(), i);
        if (it != support.end() && *it == i) support.erase(it);
    }
};

// Rebuilds x from the support to shed incremental-update drift.
void refresh_point(const RowMatrix& data, SolverState& st) {
    st.x.setZero();
    for (Index i : st.support) st.x.noalias() += st.weights[i] * data.row(i).transpose();
}

// Drops nonpositive weights and renormalizes the sum to one, then rebuilds x.
void finalize_state(const RowMatrix& data, SolverState& st) {
    std::vector<Index> kept;
    kept.reserve(st.support.size());
    double total = 0.0;
    for (Index i : st.support) {
        if (st.weights[i] > 0.0) {
            kept.push_back(i);
            total += st.weights[i];
        } else {
            st.weights[i] = 0.0;
        }
    }
    if (kept.empty() || total <= 0.0) {
        // Cannot happen with a valid simplex iterate; fall back to the
        // first support vertex to keep the result well formed.
        Index i = st.support.empty() ? 0 : st.support.front();
        std::fill(st.weights.begin(), st.weights.end(), 0.0);
        st.weights[i] = 1.0;
        kept = {i};
    } else {
        for (Index i : kept) st.weights[i] /= total;
    }
    st.support = std::move(kept);
    refresh_point(data, st);
}

ProjectionResult finish(const QueryPoint& query, SolverState& st, double gap,
                        std::int64_t iterations, bool converged, std::vector<double> trace) {
    ProjectionResult res;
    res.coefficients.support.reserve(st.support.size());
    for (Index i : st.support) res.coefficients.support.emplace_back(i, st.weights[i]);
    res.projection = st.x;
    res.distance = (query - st.x).norm();
    res.dual_gap = gap;
    res.iterations = iterations;
    res.converged = converged;
    res.objective_trace = std::move(trace);
    return res;
}

}  // namespace

ProjectionResult project_to_hull(const PointSet& points, const QueryPoint& query,
                                 const SolverConfig& config) {
    config.validate();
    check_query(points, query);

    const RowMatrix& data = points.data();
    const Index n = points.n_points();
    const double gap_tol = config.resolved_gap_tolerance(query);

    // Start from the vertex nearest to the query (lowest index on ties).
    Vector vq = data * query;
    Index start = 0;
    double start_val = points.row_norms_sq()[0] - 2.0 * vq[0];
    for (Index i = 1; i < n; ++i) {
        const double val = points.row_norms_sq()[i] - 2.0 * vq[i];
        if (val < start_val) {
            start_val = val;
            start = i;
        }
    }

    SolverState st;
    st.weights.assign(static_cast<std::size_t>(n), 0.0);
    st.weights[start] = 1.0;
    st.support = {start};
    st.x = data.row(start).transpose();

    std::vector<double> trace;
    Vector grad(n);
    std::int64_t iterations = 0;
    std::int64_t steps_since_refresh = 0;
    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool stalled = false;

    // The finalize pass renormalizes weights, which can perturb the gap at
    // machine precision; re-enter the iteration loop if that pushed it back
    // over the tolerance and budget remains.
    for (int pass = 0; pass < 3; ++pass) {
        for (;;) {
            Vector residual = st.x - query;
            if (config.record_objective_trace)
                trace.push_back(0.5 * residual.squaredNorm());

            grad.noalias() = data * residual;

            double support_value = 0.0;  // alpha^T grad
            for (Index i : st.support) support_value += st.weights[i] * grad[i];

            Index fw = 0;
            double fw_val = grad[0];
            for (Index i = 1; i < n; ++i) {
                if (grad[i] < fw_val) {
                    fw_val = grad[i];
                    fw = i;
                }
            }
            gap = support_value - fw_val;

            Index away = st.support.front();
            double away_val = grad[away];
            for (Index i : st.support) {
                if (grad[i] > away_val) {
                    away_val = grad[i];
                    away = i;
                }
            }
            const double away_gap = away_val - support_value;

            if (gap <= gap_tol) {
                converged = true;
                break;
            }
            if (iterations >= config.max_iterations) break;

            bool progressed = false;
            if (config.line_search == LineSearch::FixedStep) {
                const double gamma =
                    std::min(1.0, 2.0 / (static_cast<double>(iterations) + 2.0));
                Vector dir = data.row(fw).transpose() - st.x;
                for (Index i : st.support) st.weights[i] *= (1.0 - gamma);
                st.weights[fw] += gamma;
                st.add_support(fw);
                st.x.noalias() += gamma * dir;
                progressed = gamma > 0.0;
            } else if (gap >= away_gap || st.support.size() == 1) {
                // Toward step: move to the best vertex.
                Vector dir = data.row(fw).transpose() - st.x;
                const double dir_sq = dir.squaredNorm();
                double gamma = dir_sq > 0.0 ? gap / dir_sq : 0.0;
                if (gamma > 0.0) {
                    if (gamma >= 1.0) {
                        // Land exactly on the vertex.
                        for (Index i : st.support) st.weights[i] = 0.0;
                        st.weights[fw] = 1.0;
                        st.support = {fw};
                        st.x = data.row(fw).transpose();
                    } else {
                        for (Index i : st.support) st.weights[i] *= (1.0 - gamma);
                        st.weights[fw] += gamma;
                        st.add_support(fw);
                        st.x.noalias() += gamma * dir;
                    }
                    progressed = true;
                }
            } else {
                // Away step: shift weight off the worst support vertex.
                Vector dir = st.x - data.row(away).transpose();
                const double dir_sq = dir.squaredNorm();
                double gamma = dir_sq > 0.0 ? away_gap / dir_sq : 0.0;
                const double w_away = st.weights[away];
                const double gamma_max =
                    w_away < 1.0 ? w_away / (1.0 - w_away)
                                 : std::numeric_limits<double>::infinity();
                if (gamma > 0.0) {
                    const bool drop = gamma >= gamma_max;
                    if (drop) gamma = gamma_max;
                    for (Index i : st.support) st.weights[i] *= (1.0 + gamma);
                    st.weights[away] -= gamma;
                    if (drop || st.weights[away] <= 0.0) {
                        st.weights[away] = 0.0;
                        st.drop_support(away);
                    }
                    st.x.noalias() += gamma * dir;
                    progressed = true;
                }
            }

            ++iterations;
            if (++steps_since_refresh >= 256) {
                refresh_point(data, st);
                steps_since_refresh = 0;
            }
            if (!progressed) {
                stalled = true;  // numerically stuck below gap resolution
                break;
            }
        }

        finalize_state(data, st);
        // Certify the finalized iterate.
        Vector residual = st.x - query;
        grad.noalias() = data * residual;
        double support_value = 0.0;
        for (Index i : st.support) support_value += st.weights[i] * grad[i];
        double fw_val = grad[0];
        for (Index i = 1; i < n; ++i) fw_val = std::min(fw_val, grad[i]);
        gap = support_value - fw_val;

        converged = gap <= gap_tol;
        if (converged || iterations >= config.max_iterations || stalled) break;
    }

    return finish(query, st, gap, iterations, converged, std::move(trace));
}

MembershipResult membership(const PointSet& points, const QueryPoint& query, double tol,
                            const SolverConfig& config) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("membership: tol must be positive");
    SolverConfig tightened = config;
    tightened.gap_tolerance =
        std::min(config.resolved_gap_tolerance(query), tol * tol / 4.0);
    ProjectionResult res = project_to_hull(points, query, tightened);
    return {res.distance <= tol, res.distance};
}

std::vector<ProjectionResult> batch_project(const PointSet& points,
                                            const std::vector<QueryPoint>& queries,
                                            const SolverConfig& config, int threads) {
    config.validate();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        try {
            check_query(points, queries[i]);
        } catch (const std::exception& e) {
            throw std::invalid_argument("query " + std::to_string(i) + ": " + e.what());
        }
    }
    std::vector<ProjectionResult> results(queries.size());
    parallel_for(static_cast<Index>(queries.size()), threads, [&](Index i) {
        results[static_cast<std::size_t>(i)] =
            project_to_hull(points, queries[static_cast<std::size_t>(i)], config);
    });
    return results;
}

ProjectionResult oracle_project(const PointSet& points, const QueryPoint& query) {
    check_query(points, query);
    const Index n = points.n_points();
    if (n > 16)
        throw std::invalid_argument("oracle_project: N > 16 would enumerate " +
                                    std::to_string(1LL << n) + " subsets");
    const RowMatrix& data = points.data();
    const Index d = points.dim();

    // Caratheodory: the projection is a combination of at most d+1
    // affinely independent points, so larger subsets are redundant.
    const int max_size = static_cast<int>(std::min<Index>(n, d + 1));

    double best_sq = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    Vector best_alpha;

    std::vector<Index> subset;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) > max_size) continue;
        subset.clear();
        for (Index i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        const Index m = static_cast<Index>(subset.size());

        Vector alpha(m);
        Vector candidate;
        if (m == 1) {
            alpha[0] = 1.0;
            candidate = data.row(subset[0]).transpose();
        } else {
            Vector base = data.row(subset[0]).transpose();
            Eigen::MatrixXd span(d, m - 1);
            for (Index j = 1; j < m; ++j)
                span.col(j - 1) = data.row(subset[j]).transpose() - base;
            Vector beta = span.completeOrthogonalDecomposition().solve(query - base);
            alpha[0] = 1.0 - beta.sum();
            alpha.tail(m - 1) = beta;
            candidate = base + span * beta;
        }
        if ((alpha.array() < -1e-10).any()) continue;

        const double sq = (query - candidate).squaredNorm();
        if (sq < best_sq) {
            best_sq = sq;
            best_mask = mask;
            best_alpha = alpha;
        }
    }

    // Rebuild the winner with clipped and renormalized coefficients.
    subset.clear();
    for (Index i = 0; i < n; ++i)
        if (best_mask & (1u << i)) subset.push_back(i);
    ProjectionResult res;
    double total = 0.0;
    for (Index j = 0; j < static_cast<Index>(subset.size()); ++j)
        total += std::max(0.0, best_alpha[j]);
    res.projection = Vector::Zero(d);
    for (Index j = 0; j < static_cast<Index>(subset.size()); ++j) {
        const double w = std::max(0.0, best_alpha[j]) / total;
        if (w > 0.0) {
            res.coefficients.support.emplace_back(subset[j], w);
            res.projection.noalias() += w * data.row(subset[j]).transpose();
        }
    }
    res.distance = (query - res.projection).norm();
    res.dual_gap = 0.0;
    res.iterations = 0;
    res.converged = true;
    return res;
}

}  // namespace hullscope
