#include "dimscope/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimscope/numerics.hpp"

namespace dimscope {

void validate(const MleParams& params) {
    if (params.m < 2) throw ValidationError("MleParams: m must be >= 2");
}

void validate(const LpcaParams& params) {
    if (params.m < 2) throw ValidationError("LpcaParams: m must be >= 2");
    if (!(params.alpha > 0.0 && params.alpha < 1.0))
        throw ValidationError("LpcaParams: alpha must lie in (0, 1)");
}

double mle_id_point(const PointSet& pts, Index index, Index m) {
    if (m < 2) throw ValidationError("mle_id_point: m must be >= 2");
    const std::vector<double> t = knn_distances(pts, index, m);
    const double t_m = t.back();
    double log_sum = 0.0;
    for (Index j = 0; j + 1 < m; ++j) {
        const double t_j = t[static_cast<std::size_t>(j)];
        if (t_j <= 0.0)
            throw NumericError("mle_id_point: duplicate point at zero distance from sample " +
                               pts.ids[static_cast<std::size_t>(index)]);
        log_sum += std::log(t_m / t_j);
    }
    if (log_sum <= 0.0)
        throw NumericError("mle_id_point: all neighbors equidistant for sample " +
                           pts.ids[static_cast<std::size_t>(index)]);
    return static_cast<double>(m - 1) / log_sum;
}

double mle_id_aggregate(std::span<const double> per_point) {
    if (per_point.empty())
        throw NumericError("mle_id_aggregate: no included points");
    double inverse_sum = 0.0;
    for (const double v : per_point) {
        if (!(v > 0.0)) throw ValidationError("mle_id_aggregate: estimates must be positive");
        inverse_sum += 1.0 / v;
    }
    return static_cast<double>(per_point.size()) / inverse_sum;
}

namespace {

std::vector<double> local_eigenvalues(const PointSet& pts, Index index,
                                      const LpcaParams& params) {
    validate(params);
    const Matrix cov = local_covariance(pts, index, params.m);
    return sym_eigenvalues(cov).values;
}

}  // namespace

std::vector<double> lpca_spectrum(const PointSet& pts, Index index, const LpcaParams& params) {
    return local_eigenvalues(pts, index, params);
}

int lpca_id_point(const PointSet& pts, Index index, const LpcaParams& params) {
    const std::vector<double> eig = local_eigenvalues(pts, index, params);
    const double lambda_max = eig.front();
    if (!(lambda_max > 0.0))
        throw NumericError("lpca_id_point: zero local covariance for sample " +
                           pts.ids[static_cast<std::size_t>(index)]);
    const double threshold = params.alpha * lambda_max;
    int count = 0;
    for (const double l : eig)
        if (l >= threshold) ++count;
    return count;
}

PpcaResult ppca_id_global(const PointSet& pts) {
    validate(pts);
    const Index n = pts.size();
    const Index d = pts.dimension();
    if (n < d + 2)
        throw InsufficientSamplesError("ppca_id_global: insufficient samples (n = " +
                                       std::to_string(n) + " < d + 2 = " +
                                       std::to_string(d + 2) + ")");

    const RowVector mean = pts.data.colwise().mean();
    const Matrix centered = pts.data.rowwise() - mean;
    const Matrix cov = centered.transpose() * centered / static_cast<double>(n);
    std::vector<double> eig = sym_eigenvalues(cov).values;   // descending

    // Exact-rank data drives the residual variance to zero; clamp so the
    // log-likelihood saturates instead of producing -inf/NaN.
    const double lambda_max = std::max(eig.front(), 0.0);
    const double floor =
        std::max(lambda_max, 1.0) * 1e-18 + std::numeric_limits<double>::min();

    PpcaResult result;
    result.n = n;
    result.d = d;
    result.log_likelihood.resize(static_cast<std::size_t>(d));
    result.bic.resize(static_cast<std::size_t>(d));

    double log_retained = 0.0;   // sum of ln lambda_j over the retained block
    double tail_sum = 0.0;
    for (const double l : eig) tail_sum += l;

    int best_q = 0;
    double best_bic = 0.0;
    for (Index q = 0; q < d; ++q) {
        if (q > 0) {
            const double retained = std::max(eig[static_cast<std::size_t>(q - 1)], floor);
            log_retained += std::log(retained);
            tail_sum -= eig[static_cast<std::size_t>(q - 1)];
        }
        const double sigma2 =
            std::max(tail_sum / static_cast<double>(d - q), floor);
        const double ll =
            -0.5 * static_cast<double>(n) *
            (static_cast<double>(d) * std::log(2.0 * M_PI) + log_retained +
             static_cast<double>(d - q) * std::log(sigma2) + static_cast<double>(d));
        // Free parameters: mean (d), loadings with the rotation gauge
        // removed (d*q - q(q-1)/2), and the noise variance.
        const double q_d = static_cast<double>(q);
        const double n_params =
            static_cast<double>(d) + q_d * static_cast<double>(d) - q_d * (q_d - 1.0) / 2.0 +
            1.0;
        const double bic = -2.0 * ll + n_params * std::log(static_cast<double>(n));
        result.log_likelihood[static_cast<std::size_t>(q)] = ll;
        result.bic[static_cast<std::size_t>(q)] = bic;
        if (q == 0 || bic < best_bic) {   // strict: ties keep the smaller q
            best_bic = bic;
            best_q = static_cast<int>(q);
        }
    }
    result.q_star = best_q;
    return result;
}

namespace {

BatchPointResult point_batch(const PointSet& pts, int workers, Method method,
                             const std::string& note,
                             const std::function<IdEstimate(Index)>& make) {
    validate(pts);
    const Index n = pts.size();
    std::vector<IdEstimate> slots(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
    std::vector<char> failed(static_cast<std::size_t>(n), 0);

    parallel_for(n, workers, [&](Index i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            slots[idx] = make(i);
            slots[idx].sample_id = pts.ids[idx];
            slots[idx].method = method;
            slots[idx].params = note;
        } catch (const Error& e) {
            failed[idx] = 1;
            failures[idx] = e.what();
        }
    });

    BatchPointResult result;
    for (Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (failed[idx])
            result.exclusions.push_back({pts.ids[idx], failures[idx]});
        else
            result.estimates.push_back(std::move(slots[idx]));
    }
    return result;
}

}  // namespace

BatchPointResult mle_batch(const PointSet& pts, const MleParams& params, int workers) {
    validate(params);
    const std::string note = "m=" + std::to_string(params.m);
    const Index d = pts.dimension();
    return point_batch(pts, workers, Method::mle, note, [&](Index i) {
        const double value = mle_id_point(pts, i, params.m);
        IdEstimate est;
        est.value = value;
        est.k_hat = static_cast<int>(
            std::clamp<long>(std::lround(value), 0, static_cast<long>(d)));
        return est;
    });
}

BatchPointResult lpca_batch(const PointSet& pts, const LpcaParams& params, int workers) {
    validate(params);
    const std::string note =
        "m=" + std::to_string(params.m) + ";alpha=" + std::to_string(params.alpha);
    return point_batch(pts, workers, Method::lpca, note, [&](Index i) {
        IdEstimate est;
        est.spectrum = lpca_spectrum(pts, i, params);
        const double lambda_max = est.spectrum.front();
        if (!(lambda_max > 0.0))
            throw NumericError("lpca: zero local covariance for sample " +
                               pts.ids[static_cast<std::size_t>(i)]);
        const double threshold = params.alpha * lambda_max;
        int count = 0;
        for (const double l : est.spectrum)
            if (l >= threshold) ++count;
        est.k_hat = count;
        est.value = static_cast<double>(count);
        return est;
    });
}

}  // namespace dimscope
