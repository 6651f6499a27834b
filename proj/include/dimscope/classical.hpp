// Baseline intrinsic-dimension estimators: nearest-neighbor maximum
// likelihood, eigenvalue-ratio local PCA, and probabilistic PCA with
// BIC model selection.

#ifndef DIMSCOPE_CLASSICAL_HPP
#define DIMSCOPE_CLASSICAL_HPP

#include <span>
#include <vector>

#include "dimscope/core.hpp"

namespace dimscope {

struct MleParams {
    Index m = 20;   // neighbor count, >= 2
};

struct LpcaParams {
    Index m = 100;         // neighborhood size including the center
    double alpha = 0.05;   // eigenvalue ratio threshold, in (0, 1)
};

void validate(const MleParams& params);
void validate(const LpcaParams& params);

/// Per-point likelihood estimate
///   [ (1/(m-1)) * sum_{j=1}^{m-1} ln(T_m / T_j) ]^{-1}
/// over the ascending neighbor distances T_1..T_m. Duplicate points
/// (some T_j = 0) and all-equidistant neighborhoods reject; batch drivers
/// record those as per-point exclusions.
double mle_id_point(const PointSet& pts, Index index, Index m);

/// Dataset aggregate: the inverse of the mean per-point inverse.
double mle_id_aggregate(std::span<const double> per_point);

/// Number of local-covariance eigenvalues >= alpha * lambda_max over the
/// neighborhood {point} + its m-1 nearest others. Zero local covariance
/// rejects (per-point exclusion).
int lpca_id_point(const PointSet& pts, Index index, const LpcaParams& params);

/// Eigenvalue spectrum of the same local covariance, for export.
std::vector<double> lpca_spectrum(const PointSet& pts, Index index, const LpcaParams& params);

struct PpcaResult {
    int q_star = 0;
    std::vector<double> log_likelihood;   // index q = 0..d-1
    std::vector<double> bic;
    Index n = 0;
    Index d = 0;
};

/// Global PPCA dimension by BIC over the closed-form marginal likelihood
/// obtained from sample-covariance eigenvalues (noise variance = mean of
/// the discarded eigenvalues). Needs n >= d + 2; smaller samples raise
/// InsufficientSamplesError, which interval tables render as N/A.
PpcaResult ppca_id_global(const PointSet& pts);

struct BatchPointResult {
    std::vector<IdEstimate> estimates;
    std::vector<Exclusion> exclusions;
};

/// Per-point MLE over the whole set; exclusions recorded, batch continues.
BatchPointResult mle_batch(const PointSet& pts, const MleParams& params, int workers = 1);

/// Per-point LPCA over the whole set.
BatchPointResult lpca_batch(const PointSet& pts, const LpcaParams& params, int workers = 1);

}  // namespace dimscope

#endif  // DIMSCOPE_CLASSICAL_HPP
