#include "dimscope/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dimscope {

Spectrum singular_values(const Eigen::Ref<const Matrix>& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw ValidationError("singular_values: matrix must be at least 1x1");
    if (!m.allFinite()) throw ValidationError("singular_values: non-finite entry");

    Eigen::JacobiSVD<Matrix> svd(m);
    Spectrum s;
    s.rows = m.rows();
    s.cols = m.cols();
    const auto& sv = svd.singularValues();
    s.values.assign(sv.data(), sv.data() + sv.size());
    for (double& v : s.values) v = std::max(v, 0.0);
    return s;
}

Spectrum sym_eigenvalues(const Eigen::Ref<const Matrix>& c) {
    if (c.rows() != c.cols())
        throw ValidationError("sym_eigenvalues: matrix must be square");
    if (!c.allFinite()) throw ValidationError("sym_eigenvalues: non-finite entry");

    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw ValidationError("sym_eigenvalues: asymmetry " + std::to_string(asym) +
                              " exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(c, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("sym_eigenvalues: eigensolver failed to converge");

    Spectrum s;
    s.rows = c.rows();
    s.cols = c.cols();
    const auto& ev = solver.eigenvalues();  // ascending
    s.values.assign(ev.data(), ev.data() + ev.size());
    std::reverse(s.values.begin(), s.values.end());

    // Relative clamp per lambda_max, plus a few ulps of absolute slack so a
    // numerically zero matrix does not trip the rejection.
    const double lambda_max = s.values.empty() ? 0.0 : std::max(s.values.front(), 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double floor = -(1e-12 * lambda_max + 16.0 * eps * scale);
    for (double& v : s.values) {
        if (v < 0.0) {
            if (v < floor)
                throw NumericError("sym_eigenvalues: eigenvalue " + std::to_string(v) +
                                   " below the PSD clamp");
            v = 0.0;
        }
    }
    return s;
}

namespace {

std::vector<std::pair<double, Index>> knn_pairs(const PointSet& pts, Index query_index,
                                                Index m) {
    validate(pts);
    const Index n = pts.size();
    if (query_index < 0 || query_index >= n)
        throw ValidationError("knn: query index out of range");
    if (m < 1) throw ValidationError("knn: neighbor count must be >= 1");
    if (m >= n)
        throw ValidationError("knn: neighbor count " + std::to_string(m) +
                              " must be below the sample count " + std::to_string(n));

    std::vector<std::pair<double, Index>> all;
    all.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j) {
        if (j == query_index) continue;
        const double d2 = (pts.data.row(j) - pts.data.row(query_index)).squaredNorm();
        all.emplace_back(d2, j);
    }
    std::partial_sort(all.begin(), all.begin() + m, all.end());
    all.resize(static_cast<std::size_t>(m));
    return all;
}

}  // namespace

std::vector<double> knn_distances(const PointSet& pts, Index query_index, Index m) {
    auto pairs = knn_pairs(pts, query_index, m);
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [d2, j] : pairs) out.push_back(std::sqrt(d2));
    return out;
}

std::vector<Index> knn_indices(const PointSet& pts, Index query_index, Index m) {
    auto pairs = knn_pairs(pts, query_index, m);
    std::vector<Index> out;
    out.reserve(pairs.size());
    for (const auto& [d2, j] : pairs) out.push_back(j);
    return out;
}

Matrix local_covariance(const PointSet& pts, Index center_index, Index m) {
    if (m < 2) throw ValidationError("local_covariance: neighborhood must have m >= 2");
    const auto neighbors = knn_indices(pts, center_index, m - 1);

    const Index d = pts.dimension();
    Vector mean = pts.data.row(center_index).transpose();
    for (const Index j : neighbors) mean += pts.data.row(j).transpose();
    mean /= static_cast<double>(m);

    Matrix cov = Matrix::Zero(d, d);
    auto accumulate = [&](Index row) {
        const Vector centered = pts.data.row(row).transpose() - mean;
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered, 1.0);
    };
    accumulate(center_index);
    for (const Index j : neighbors) accumulate(j);
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= static_cast<double>(m);
    return cov;
}

}  // namespace dimscope
