#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace hullscope {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

// Row-major so that a point (one row) is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Order-stable pairwise (cascade) summation. Keeps accumulation error at
// O(log n) ulps so means do not depend on chunking decisions upstream.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& values);

// Squared Euclidean distance accumulated left to right in plain doubles.
// Both the blocked diameter scan and its naive test oracle funnel through
// this so their final values are bit-identical.
double direct_sq_distance(const double* a, const double* b, Index d);

// <= 0 resolves to the hardware concurrency (at least 1).
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) over `threads` workers. Work items must be
// independent; ordering of execution is unspecified.
void parallel_for(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace hullscope
