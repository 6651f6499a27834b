// Deterministic numerical kernels: singular values, symmetric eigenvalues,
// exact nearest-neighbor distances, local covariance. Every estimator sits
// on top of these.

#ifndef DIMSCOPE_NUMERICS_HPP
#define DIMSCOPE_NUMERICS_HPP

#include <vector>

#include "dimscope/common.hpp"
#include "dimscope/core.hpp"

namespace dimscope {

/// Non-increasing, nonnegative spectrum of a rows x cols matrix.
struct Spectrum {
    std::vector<double> values;   // length min(rows, cols)
    Index rows = 0;
    Index cols = 0;

    Index size() const { return static_cast<Index>(values.size()); }
};

/// Singular values of M, descending. Relative accuracy <= 1e-10 of the
/// largest value. Rejects non-finite input.
Spectrum singular_values(const Eigen::Ref<const Matrix>& m);

/// Eigenvalues of a symmetric matrix, descending. Asymmetry beyond
/// 1e-12 * max(1, |C|_max) is rejected; eigenvalues below
/// -1e-12 * lambda_max are rejected, smaller negatives clamp to zero.
Spectrum sym_eigenvalues(const Eigen::Ref<const Matrix>& c);

/// Ascending Euclidean distances from the query row to its m nearest other
/// rows (self excluded by index, so duplicates yield zero distances).
/// Exhaustive exact search; ties break toward the smaller sample index.
std::vector<double> knn_distances(const PointSet& pts, Index query_index, Index m);

/// Indices of the m nearest other rows, same ordering contract.
std::vector<Index> knn_indices(const PointSet& pts, Index query_index, Index m);

/// Covariance of the neighborhood {center} + its m-1 nearest other points,
/// mean-centered, population divisor m.
Matrix local_covariance(const PointSet& pts, Index center_index, Index m);

}  // namespace dimscope

#endif  // DIMSCOPE_NUMERICS_HPP
