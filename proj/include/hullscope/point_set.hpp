#pragma once

#include "hullscope/common.hpp"

#include <optional>

namespace hullscope {

// Inclusive per-dimension box constraints on the point domain.
struct Bounds {
    Vector lo;
    Vector hi;
};

// Immutable N x d set of points (one point per row) whose convex hull is
// the object of study. Squared row norms are cached at construction since
// every distance computation downstream needs them. Safe to share across
// threads once constructed.
class PointSet {
public:
    explicit PointSet(RowMatrix data, std::optional<Bounds> bounds = std::nullopt);

    Index n_points() const { return data_.rows(); }
    Index dim() const { return data_.cols(); }
    const RowMatrix& data() const { return data_; }
    const Vector& row_norms_sq() const { return row_norms_sq_; }
    const std::optional<Bounds>& bounds() const { return bounds_; }

    auto point(Index i) const { return data_.row(i); }

private:
    RowMatrix data_;
    Vector row_norms_sq_;
    std::optional<Bounds> bounds_;
};

using QueryPoint = Vector;

// Throws std::invalid_argument on dimension mismatch or non-finite entries.
void check_query(const PointSet& points, const QueryPoint& query);

}  // namespace hullscope
