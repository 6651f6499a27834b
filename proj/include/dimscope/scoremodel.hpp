// Score oracles: the seam between the spectral-gap estimator and any source
// of scores. Three providers: a closed-form Gaussian score, a file of
// precomputed score vectors, and a small denoising-score-matching network
// trained at desk scale.

#ifndef DIMSCOPE_SCOREMODEL_HPP
#define DIMSCOPE_SCOREMODEL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dimscope/core.hpp"

namespace dimscope {

/// Evaluates the (approximate) score grad_x ln p_sigma(x) at a noise scale.
/// Implementations are immutable after construction and safe to evaluate
/// from any number of threads.
class ScoreOracle {
public:
    virtual ~ScoreOracle() = default;

    virtual Index dimension() const = 0;

    /// Scores for the columns of `points` (d x m) at a common noise scale.
    virtual Matrix evaluate(const Eigen::Ref<const Matrix>& points, double sigma_t) const = 0;

    /// Single-point convenience.
    Vector evaluate_point(const Eigen::Ref<const Vector>& x, double sigma_t) const;
};

/// Variance-exploding noise schedule sigma(t) = sigma_min * (sigma_max /
/// sigma_min)^t on t in (0, 1].
struct VeSchedule {
    double sigma_min = 0.01;
    double sigma_max = 1.0;

    double sigma(double t) const;
};

void validate(const VeSchedule& schedule);

/// Closed-form score of N(mean, covariance) perturbed by N(0, sigma^2 I):
/// score(x) = -(covariance + sigma^2 I)^{-1} (x - mean).
class AnalyticGaussianScore final : public ScoreOracle {
public:
    /// Rejects asymmetric or non-PSD covariance.
    AnalyticGaussianScore(Vector mean, Matrix covariance);

    Index dimension() const override { return mean_.size(); }
    Matrix evaluate(const Eigen::Ref<const Matrix>& points, double sigma_t) const override;

    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }

private:
    Vector mean_;
    Matrix covariance_;
};

struct DsmConfig {
    std::vector<Index> hidden_layers = {128, 128, 128};
    long steps = 20000;
    Index batch_size = 128;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    VeSchedule schedule;
};

void validate(const DsmConfig& cfg);

/// Fully connected noise-prediction network. The net maps [x; ln sigma] to
/// a predicted noise vector; the score it serves is -net(x, sigma) / sigma.
class DsmScoreNet final : public ScoreOracle {
public:
    Index dimension() const override { return dim_; }
    Matrix evaluate(const Eigen::Ref<const Matrix>& points, double sigma_t) const override;

    /// Forward pass on the augmented (d+1) x m input.
    Matrix predict_noise(const Eigen::Ref<const Matrix>& augmented) const;

    const VeSchedule& schedule() const { return schedule_; }

private:
    friend struct DsmTrainer;
    DsmScoreNet(Index dim, const std::vector<Index>& hidden, VeSchedule schedule,
                std::uint64_t seed);

    struct Layer {
        Matrix weights;
        Vector bias;
    };
    std::vector<Layer> layers_;
    Index dim_ = 0;
    VeSchedule schedule_;
};

struct DsmTrainResult {
    std::shared_ptr<const DsmScoreNet> oracle;
    std::vector<std::pair<long, double>> loss_trace;   // (step, batch loss)
};

/// Trains with the sigma^2-weighted denoising objective
///   E[ sigma(t)^2 || s_theta(x + sigma(t) e, t) + e / sigma(t) ||^2 ],
/// t uniform on (0, 1], one Adam update per step at a fixed learning rate.
/// steps = 0 returns the freshly initialized network. A non-finite batch
/// loss aborts with the failing step in the message.
DsmTrainResult train_dsm_score_net(const PointSet& data, const DsmConfig& cfg);

/// The training objective evaluated on a seeded batch of held-out draws.
double dsm_loss(const DsmScoreNet& net, const PointSet& data, std::uint64_t seed,
                Index num_draws = 512);

/// Precomputed per-sample score matrices, read from a rank-3 (n, K, d)
/// tensor. Serves column sets directly, no re-evaluation.
class PrecomputedScores {
public:
    Index num_samples() const { return n_; }
    Index num_scores() const { return k_; }
    Index dimension() const { return d_; }

    /// d x K score matrix of one sample.
    Matrix score_matrix(Index sample) const;

private:
    friend PrecomputedScores load_score_matrix(const std::string&, Index);
    std::vector<double> values_;   // row-major (n, K, d)
    Index n_ = 0, k_ = 0, d_ = 0;
};

/// Loads a rank-3 (n, K, d) score tensor. When expected_d >= 0 the file's
/// d must match it.
PrecomputedScores load_score_matrix(const std::string& path, Index expected_d = -1);

}  // namespace dimscope

#endif  // DIMSCOPE_SCOREMODEL_HPP
