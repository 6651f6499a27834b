// Spectral-gap intrinsic-dimension estimation: perturb a point, collect
// score vectors into a d x K matrix, locate the largest consecutive drop in
// its singular values, and report d minus that index.

#ifndef DIMSCOPE_DIFFUSION_ID_HPP
#define DIMSCOPE_DIFFUSION_ID_HPP

#include <vector>

#include "dimscope/core.hpp"
#include "dimscope/numerics.hpp"
#include "dimscope/scoremodel.hpp"

namespace dimscope {

/// Columns are score vectors evaluated at perturbations of one point.
using ScoreMatrix = Matrix;

struct DiffusionIdParams {
    double sigma_t0 = 0.01;
    /// Number of score vectors K. Zero resolves to the 4*d default.
    Index num_scores = 0;
    std::uint64_t seed = 0;

    Index resolved_num_scores(Index ambient_d) const {
        return num_scores > 0 ? num_scores : 4 * ambient_d;
    }
};

void validate(const DiffusionIdParams& params, Index ambient_d);

struct GapResult {
    int gap_index = 0;        // 1-based index of the winning drop
    int k_hat = 0;            // ambient_d - gap_index
    bool truncated = false;   // spectrum shorter than ambient_d
    bool low_confidence = false;
    double gap_value = 0.0;
};

/// Column i is oracle(x0 + sigma_t0 * eps_i, sigma_t0) with eps_i from the
/// stream `stream`. Bitwise deterministic for a given stream seed.
ScoreMatrix build_score_matrix(const ScoreOracle& oracle,
                               const Eigen::Ref<const Vector>& x0,
                               const DiffusionIdParams& params, std::uint64_t stream);

/// Largest consecutive drop over the available indices 1..len-1; ties break
/// toward the first index. When the spectrum has fewer than d values the
/// result is flagged truncated and k_hat is only a lower-bound style answer.
/// A winning gap below 1e-6 of the leading value sets low_confidence.
GapResult spectral_gap_index(const Spectrum& spectrum, Index ambient_d);

/// Gap rule applied to an already-built score matrix.
IdEstimate estimate_from_scores(const Eigen::Ref<const Matrix>& scores, Index ambient_d,
                                const std::string& sample_id, const std::string& params_note);

/// build_score_matrix -> singular_values -> spectral_gap_index, keeping the
/// full spectrum for later export.
IdEstimate estimate_id_at_point(const ScoreOracle& oracle,
                                const Eigen::Ref<const Vector>& x0,
                                const DiffusionIdParams& params,
                                std::uint64_t stream = 0,
                                const std::string& sample_id = {});

struct BatchIdResult {
    std::vector<IdEstimate> estimates;   // input order, failed samples omitted
    std::vector<Exclusion> exclusions;
};

/// One estimate per sample. Sample i draws from stream_seed(params.seed, i),
/// so the result is identical for any worker count. Per-sample failures are
/// recorded and the batch continues.
BatchIdResult batch_estimate(const ScoreOracle& oracle, const PointSet& pts,
                             const DiffusionIdParams& params, int workers = 1);

/// Same contract over precomputed per-sample score matrices.
BatchIdResult batch_estimate_from_scores(const PrecomputedScores& scores,
                                         const std::vector<std::string>& ids,
                                         int workers = 1);

}  // namespace dimscope

#endif  // DIMSCOPE_DIFFUSION_ID_HPP
