#include "hullscope/point_set.hpp"

#include <stdexcept>
#include <string>

namespace hullscope {

PointSet::PointSet(RowMatrix data, std::optional<Bounds> bounds)
    : data_(std::move(data)), bounds_(std::move(bounds)) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw std::invalid_argument("PointSet: need at least one point and one dimension");
    if (!data_.allFinite())
        throw std::invalid_argument("PointSet: non-finite entry in point data");
    if (bounds_) {
        if (bounds_->lo.size() != data_.cols() || bounds_->hi.size() != data_.cols())
            throw std::invalid_argument("PointSet: bounds dimension mismatch");
        for (Index j = 0; j < data_.cols(); ++j) {
            if (!(bounds_->lo[j] <= bounds_->hi[j]))
                throw std::invalid_argument("PointSet: bounds lo > hi at dimension " +
                                            std::to_string(j));
        }
        for (Index i = 0; i < data_.rows(); ++i) {
            for (Index j = 0; j < data_.cols(); ++j) {
                const double v = data_(i, j);
                if (v < bounds_->lo[j] || v > bounds_->hi[j])
                    throw std::invalid_argument("PointSet: point " + std::to_string(i) +
                                                " violates bounds at dimension " +
                                                std::to_string(j));
            }
        }
    }
    row_norms_sq_ = data_.rowwise().squaredNorm();
}

void check_query(const PointSet& points, const QueryPoint& query) {
    if (query.size() != points.dim())
        throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                    " does not match point set dimension " +
                                    std::to_string(points.dim()));
    if (!query.allFinite())
        throw std::invalid_argument("query has non-finite entries");
}

}  // namespace hullscope
