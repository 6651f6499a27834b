// Synthetic manifolds with known intrinsic dimension. These are the ground
// truth every estimator is validated against at desk scale.

#ifndef DIMSCOPE_SYNTH_HPP
#define DIMSCOPE_SYNTH_HPP

#include <string>
#include <utility>
#include <vector>

#include "dimscope/core.hpp"

namespace dimscope {

enum class ManifoldKind { subspace_gaussian, k_sphere, k_cube, swiss_roll };

std::string to_string(ManifoldKind k);
ManifoldKind manifold_kind_from_string(const std::string& name);

struct ManifoldSpec {
    ManifoldKind kind = ManifoldKind::subspace_gaussian;
    Index ambient_d = 3;
    Index intrinsic_k = 1;   // forced to 2 for swiss_roll
    Index n = 100;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    // Tangent variances for subspace_gaussian. Empty selects the default
    // geometric decay 1.0, 0.8, 0.8^2, ...
    std::vector<double> lambdas;
};

void validate(const ManifoldSpec& spec);

/// Resolved lambdas (explicit list or the default decay), length k.
std::vector<double> resolve_lambdas(const ManifoldSpec& spec);

struct ManifoldSample {
    PointSet points;
    ManifoldSpec spec;
    int true_k = 0;
    // Orthonormal tangent basis, d x k. Filled for subspace_gaussian; for
    // k_sphere it holds the d x d rotation applied after embedding.
    Matrix basis;
};

/// Draws n points. Regenerating with the same spec is bitwise identical:
/// the basis comes from a reserved stream of the spec seed and sample i
/// draws only from its own stream.
ManifoldSample sample_manifold(const ManifoldSpec& spec);

/// Population mean and covariance U diag(lambda) U^T + noise_sigma^2 I of a
/// subspace_gaussian spec. Rejects other kinds.
std::pair<Vector, Matrix> analytic_covariance(const ManifoldSpec& spec);

/// The seeded orthonormal basis used by both sample_manifold and
/// analytic_covariance for a given spec.
Matrix subspace_basis(const ManifoldSpec& spec, Index cols);

}  // namespace dimscope

#endif  // DIMSCOPE_SYNTH_HPP
