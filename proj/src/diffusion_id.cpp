#include "dimscope/diffusion_id.hpp"

#include <cmath>

namespace dimscope {

void validate(const DiffusionIdParams& params, Index ambient_d) {
    if (!(params.sigma_t0 > 0.0))
        throw ValidationError("DiffusionIdParams: sigma_t0 must be positive");
    if (ambient_d < 1) throw ValidationError("DiffusionIdParams: ambient dimension must be >= 1");
    if (params.resolved_num_scores(ambient_d) < 2)
        throw ValidationError("DiffusionIdParams: need at least K = 2 score vectors");
}

ScoreMatrix build_score_matrix(const ScoreOracle& oracle,
                               const Eigen::Ref<const Vector>& x0,
                               const DiffusionIdParams& params, std::uint64_t stream) {
    const Index d = x0.size();
    validate(params, d);
    if (oracle.dimension() != d)
        throw ValidationError("build_score_matrix: oracle dimension " +
                              std::to_string(oracle.dimension()) +
                              " does not match the point dimension " + std::to_string(d));
    const Index k = params.resolved_num_scores(d);
    const double sigma = params.sigma_t0;

    Rng rng(stream);
    Matrix perturbed(d, k);
    for (Index col = 0; col < k; ++col)
        for (Index row = 0; row < d; ++row)
            perturbed(row, col) = x0(row) + sigma * rng.gaussian();
    return oracle.evaluate(perturbed, sigma);
}

GapResult spectral_gap_index(const Spectrum& spectrum, Index ambient_d) {
    const Index len = spectrum.size();
    if (len < 2)
        throw NumericError("spectral_gap_index: need at least two singular values, got " +
                           std::to_string(len));
    if (ambient_d < len)
        throw ValidationError("spectral_gap_index: spectrum longer than the ambient dimension");
    for (Index i = 0; i + 1 < len; ++i)
        if (spectrum.values[static_cast<std::size_t>(i)] <
            spectrum.values[static_cast<std::size_t>(i + 1)])
            throw ValidationError("spectral_gap_index: spectrum is not non-increasing");

    GapResult result;
    result.truncated = len < ambient_d;
    double best_gap = -1.0;
    int best_index = 1;
    for (Index i = 1; i < len; ++i) {
        const double gap = spectrum.values[static_cast<std::size_t>(i - 1)] -
                           spectrum.values[static_cast<std::size_t>(i)];
        if (gap > best_gap) {   // strict: first index wins ties
            best_gap = gap;
            best_index = static_cast<int>(i);
        }
    }
    result.gap_index = best_index;
    result.gap_value = best_gap;
    result.k_hat = static_cast<int>(ambient_d) - best_index;
    const double leading = spectrum.values.front();
    result.low_confidence = !(leading > 0.0) || best_gap < 1e-6 * leading;
    return result;
}

IdEstimate estimate_from_scores(const Eigen::Ref<const Matrix>& scores, Index ambient_d,
                                const std::string& sample_id,
                                const std::string& params_note) {
    if (scores.rows() != ambient_d)
        throw ValidationError("estimate_from_scores: score matrix has " +
                              std::to_string(scores.rows()) + " rows, expected " +
                              std::to_string(ambient_d));
    const Spectrum spectrum = singular_values(scores);
    const GapResult gap = spectral_gap_index(spectrum, ambient_d);

    IdEstimate est;
    est.sample_id = sample_id;
    est.method = Method::diffusion;
    est.k_hat = gap.k_hat;
    est.value = static_cast<double>(gap.k_hat);
    est.spectrum = spectrum.values;
    est.gap_index = gap.gap_index;
    est.truncated = gap.truncated;
    est.low_confidence = gap.low_confidence;
    est.params = params_note;
    return est;
}

namespace {

std::string params_note(const DiffusionIdParams& params, Index d) {
    return "sigma_t0=" + std::to_string(params.sigma_t0) +
           ";K=" + std::to_string(params.resolved_num_scores(d)) +
           ";seed=" + std::to_string(params.seed);
}

}  // namespace

IdEstimate estimate_id_at_point(const ScoreOracle& oracle,
                                const Eigen::Ref<const Vector>& x0,
                                const DiffusionIdParams& params, std::uint64_t stream,
                                const std::string& sample_id) {
    const Matrix s = build_score_matrix(oracle, x0, params, stream);
    return estimate_from_scores(s, x0.size(), sample_id, params_note(params, x0.size()));
}

BatchIdResult batch_estimate(const ScoreOracle& oracle, const PointSet& pts,
                             const DiffusionIdParams& params, int workers) {
    validate(pts);
    validate(params, pts.dimension());
    const SeedPolicy policy{params.seed};
    const Index n = pts.size();

    std::vector<IdEstimate> slots(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
    std::vector<char> failed(static_cast<std::size_t>(n), 0);

    parallel_for(n, workers, [&](Index i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            slots[idx] = estimate_id_at_point(
                oracle, pts.data.row(i).transpose(), params,
                policy.sample_stream(static_cast<std::uint64_t>(i)), pts.ids[idx]);
        } catch (const Error& e) {
            failed[idx] = 1;
            failures[idx] = e.what();
        }
    });

    BatchIdResult result;
    result.estimates.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (failed[idx])
            result.exclusions.push_back({pts.ids[idx], failures[idx]});
        else
            result.estimates.push_back(std::move(slots[idx]));
    }
    return result;
}

BatchIdResult batch_estimate_from_scores(const PrecomputedScores& scores,
                                         const std::vector<std::string>& ids,
                                         int workers) {
    const Index n = scores.num_samples();
    if (static_cast<Index>(ids.size()) != n)
        throw ValidationError("batch_estimate_from_scores: id count does not match samples");
    const std::string note = "oracle=file;K=" + std::to_string(scores.num_scores());

    std::vector<IdEstimate> slots(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
    std::vector<char> failed(static_cast<std::size_t>(n), 0);

    parallel_for(n, workers, [&](Index i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            slots[idx] = estimate_from_scores(scores.score_matrix(i), scores.dimension(),
                                              ids[idx], note);
        } catch (const Error& e) {
            failed[idx] = 1;
            failures[idx] = e.what();
        }
    });

    BatchIdResult result;
    for (Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (failed[idx])
            result.exclusions.push_back({ids[idx], failures[idx]});
        else
            result.estimates.push_back(std::move(slots[idx]));
    }
    return result;
}

}  // namespace dimscope
