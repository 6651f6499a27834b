#include "dimscope/scoremodel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "dimscope/tensor_io.hpp"

namespace dimscope {

Vector ScoreOracle::evaluate_point(const Eigen::Ref<const Vector>& x, double sigma_t) const {
    return evaluate(x, sigma_t).col(0);
}

double VeSchedule::sigma(double t) const {
    return sigma_min * std::pow(sigma_max / sigma_min, t);
}

void validate(const VeSchedule& schedule) {
    if (!(schedule.sigma_min > 0.0))
        throw ValidationError("VeSchedule: sigma_min must be positive");
    if (!(schedule.sigma_max > schedule.sigma_min))
        throw ValidationError("VeSchedule: sigma_max must exceed sigma_min");
}

AnalyticGaussianScore::AnalyticGaussianScore(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
    if (covariance_.rows() != covariance_.cols() || covariance_.rows() != mean_.size())
        throw ValidationError("AnalyticGaussianScore: covariance shape does not match mean");
    if (!covariance_.allFinite() || !mean_.allFinite())
        throw ValidationError("AnalyticGaussianScore: non-finite parameter");
    const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
    if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw ValidationError("AnalyticGaussianScore: covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(covariance_, Eigen::EigenvaluesOnly);
    const double lambda_min = solver.eigenvalues().minCoeff();
    const double lambda_max = std::max(solver.eigenvalues().maxCoeff(), 0.0);
    if (lambda_min < -1e-10 * std::max(lambda_max, 1.0))
        throw ValidationError("AnalyticGaussianScore: covariance is not PSD");
}

Matrix AnalyticGaussianScore::evaluate(const Eigen::Ref<const Matrix>& points,
                                       double sigma_t) const {
    if (!(sigma_t > 0.0))
        throw ValidationError("AnalyticGaussianScore: sigma_t must be positive");
    if (points.rows() != mean_.size())
        throw ValidationError("AnalyticGaussianScore: point dimension mismatch");
    const Index d = mean_.size();
    Matrix shifted = covariance_;
    shifted.diagonal().array() += sigma_t * sigma_t;
    const Eigen::LDLT<Matrix> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw NumericError("AnalyticGaussianScore: factorization failed");
    Matrix centered = points;
    centered.colwise() -= mean_;
    return -ldlt.solve(centered);
}

void validate(const DsmConfig& cfg) {
    validate(cfg.schedule);
    if (cfg.steps < 0) throw ValidationError("DsmConfig: steps must be >= 0");
    if (cfg.batch_size < 1) throw ValidationError("DsmConfig: batch_size must be >= 1");
    if (!(cfg.learning_rate > 0.0))
        throw ValidationError("DsmConfig: learning_rate must be positive");
    for (const Index h : cfg.hidden_layers)
        if (h < 1) throw ValidationError("DsmConfig: hidden widths must be >= 1");
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// silu(z) = z * sigmoid(z); smooth and well behaved for regression.
inline double silu(double z) { return z * sigmoid(z); }
inline double silu_grad(double z) {
    const double s = sigmoid(z);
    return s * (1.0 + z * (1.0 - s));
}

}  // namespace

DsmScoreNet::DsmScoreNet(Index dim, const std::vector<Index>& hidden, VeSchedule schedule,
                         std::uint64_t seed)
    : dim_(dim), schedule_(schedule) {
    std::vector<Index> widths;
    widths.push_back(dim + 1);   // x plus ln sigma
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(dim);

    Rng rng(stream_seed(seed, 0x1));
    layers_.reserve(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const Index fan_in = widths[l], fan_out = widths[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        Layer layer;
        layer.weights.resize(fan_out, fan_in);
        for (Index c = 0; c < fan_in; ++c)
            for (Index r = 0; r < fan_out; ++r)
                layer.weights(r, c) = bound * (2.0 * rng.uniform() - 1.0);
        layer.bias = Vector::Zero(fan_out);
        layers_.push_back(std::move(layer));
    }
}

Matrix DsmScoreNet::predict_noise(const Eigen::Ref<const Matrix>& augmented) const {
    if (augmented.rows() != dim_ + 1)
        throw ValidationError("DsmScoreNet: augmented input must have d+1 rows");
    Matrix activation = augmented;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Matrix pre = layers_[l].weights * activation;
        pre.colwise() += layers_[l].bias;
        if (l + 1 < layers_.size())
            activation = pre.unaryExpr([](double z) { return silu(z); });
        else
            activation = std::move(pre);
    }
    return activation;
}

Matrix DsmScoreNet::evaluate(const Eigen::Ref<const Matrix>& points, double sigma_t) const {
    if (!(sigma_t > 0.0)) throw ValidationError("DsmScoreNet: sigma_t must be positive");
    if (points.rows() != dim_) throw ValidationError("DsmScoreNet: point dimension mismatch");
    Matrix augmented(dim_ + 1, points.cols());
    augmented.topRows(dim_) = points;
    augmented.row(dim_).setConstant(std::log(sigma_t));
    return -predict_noise(augmented) / sigma_t;
}

struct DsmTrainer {
    static DsmTrainResult run(const PointSet& data, const DsmConfig& cfg) {
        validate(data);
        validate(cfg);
        const Index d = data.dimension();
        const Index n = data.size();
        const Index batch = cfg.batch_size;

        auto net = std::shared_ptr<DsmScoreNet>(
            new DsmScoreNet(d, cfg.hidden_layers, cfg.schedule, cfg.seed));
        DsmTrainResult result;
        result.loss_trace.reserve(static_cast<std::size_t>(cfg.steps));

        const std::size_t n_layers = net->layers_.size();
        std::vector<Matrix> m_w(n_layers), v_w(n_layers);
        std::vector<Vector> m_b(n_layers), v_b(n_layers);
        for (std::size_t l = 0; l < n_layers; ++l) {
            m_w[l] = Matrix::Zero(net->layers_[l].weights.rows(), net->layers_[l].weights.cols());
            v_w[l] = m_w[l];
            m_b[l] = Vector::Zero(net->layers_[l].bias.size());
            v_b[l] = m_b[l];
        }
        constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

        Rng rng(stream_seed(cfg.seed, 0x2));
        std::vector<Matrix> pre(n_layers);          // pre-activations per layer
        std::vector<Matrix> activations(n_layers);  // post-activations (input of next layer)

        for (long step = 1; step <= cfg.steps; ++step) {
            // Assemble the perturbed batch: x + sigma(t) * eps, ln sigma.
            Matrix augmented(d + 1, batch);
            Matrix noise(d, batch);
            for (Index b = 0; b < batch; ++b) {
                const Index row = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
                const double t = rng.uniform_open_closed();
                const double sigma = cfg.schedule.sigma(t);
                for (Index j = 0; j < d; ++j) noise(j, b) = rng.gaussian();
                augmented.block(0, b, d, 1) =
                    data.data.row(row).transpose() + sigma * noise.col(b);
                augmented(d, b) = std::log(sigma);
            }

            // Forward with cached pre-activations.
            Matrix input = augmented;
            for (std::size_t l = 0; l < n_layers; ++l) {
                pre[l] = net->layers_[l].weights * input;
                pre[l].colwise() += net->layers_[l].bias;
                if (l + 1 < n_layers) {
                    activations[l] = pre[l].unaryExpr([](double z) { return silu(z); });
                    input = activations[l];
                } else {
                    activations[l] = pre[l];
                }
            }

            // Weighted DSM objective; with score = -net/sigma it reduces to
            // the squared error between the net output and the noise draw.
            const Matrix residual = activations[n_layers - 1] - noise;
            const double loss = residual.squaredNorm() / static_cast<double>(batch);
            if (!std::isfinite(loss))
                throw NumericError("train_dsm_score_net: loss diverged at step " +
                                   std::to_string(step));
            result.loss_trace.emplace_back(step, loss);

            // Backward.
            Matrix delta = (2.0 / static_cast<double>(batch)) * residual;
            const double correction1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double correction2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t l = n_layers; l-- > 0;) {
                const Matrix& layer_input = (l == 0) ? augmented : activations[l - 1];
                const Matrix grad_w = delta * layer_input.transpose();
                const Vector grad_b = delta.rowwise().sum();
                if (l > 0) {
                    delta = net->layers_[l].weights.transpose() * delta;
                    delta.array() *=
                        pre[l - 1].unaryExpr([](double z) { return silu_grad(z); }).array();
                }
                auto& layer = net->layers_[l];
                m_w[l] = beta1 * m_w[l] + (1.0 - beta1) * grad_w;
                v_w[l] = beta2 * v_w[l] + (1.0 - beta2) * grad_w.cwiseProduct(grad_w);
                m_b[l] = beta1 * m_b[l] + (1.0 - beta1) * grad_b;
                v_b[l] = beta2 * v_b[l] + (1.0 - beta2) * grad_b.cwiseProduct(grad_b);
                layer.weights.array() -=
                    cfg.learning_rate * (m_w[l] / correction1).array() /
                    ((v_w[l] / correction2).array().sqrt() + adam_eps);
                layer.bias.array() -=
                    cfg.learning_rate * (m_b[l] / correction1).array() /
                    ((v_b[l] / correction2).array().sqrt() + adam_eps);
            }
        }

        result.oracle = std::move(net);
        return result;
    }
};

DsmTrainResult train_dsm_score_net(const PointSet& data, const DsmConfig& cfg) {
    return DsmTrainer::run(data, cfg);
}

double dsm_loss(const DsmScoreNet& net, const PointSet& data, std::uint64_t seed,
                Index num_draws) {
    validate(data);
    if (num_draws < 1) throw ValidationError("dsm_loss: num_draws must be >= 1");
    const Index d = data.dimension();
    if (d != net.dimension()) throw ValidationError("dsm_loss: dimension mismatch");

    Rng rng(stream_seed(seed, 0x3));
    Matrix augmented(d + 1, num_draws);
    Matrix noise(d, num_draws);
    for (Index b = 0; b < num_draws; ++b) {
        const Index row =
            static_cast<Index>(rng.below(static_cast<std::uint64_t>(data.size())));
        const double t = rng.uniform_open_closed();
        const double sigma = net.schedule().sigma(t);
        for (Index j = 0; j < d; ++j) noise(j, b) = rng.gaussian();
        augmented.block(0, b, d, 1) = data.data.row(row).transpose() + sigma * noise.col(b);
        augmented(d, b) = std::log(sigma);
    }
    const Matrix predicted = net.predict_noise(augmented);
    return (predicted - noise).squaredNorm() / static_cast<double>(num_draws);
}

Matrix PrecomputedScores::score_matrix(Index sample) const {
    if (sample < 0 || sample >= n_)
        throw ValidationError("PrecomputedScores: sample index out of range");
    Matrix s(d_, k_);
    const std::size_t base = static_cast<std::size_t>(sample) *
                             static_cast<std::size_t>(k_) * static_cast<std::size_t>(d_);
    for (Index col = 0; col < k_; ++col)
        for (Index row = 0; row < d_; ++row)
            s(row, col) = values_[base + static_cast<std::size_t>(col) *
                                             static_cast<std::size_t>(d_) +
                                  static_cast<std::size_t>(row)];
    return s;
}

PrecomputedScores load_score_matrix(const std::string& path, Index expected_d) {
    const Tensor t = read_tensor(path);
    if (t.dims.size() != 3)
        throw ValidationError("score tensor '" + path + "': expected rank 3 (n, K, d), got rank " +
                              std::to_string(t.dims.size()));
    PrecomputedScores scores;
    scores.n_ = static_cast<Index>(t.dims[0]);
    scores.k_ = static_cast<Index>(t.dims[1]);
    scores.d_ = static_cast<Index>(t.dims[2]);
    if (scores.n_ < 1 || scores.k_ < 1 || scores.d_ < 1)
        throw ValidationError("score tensor '" + path + "': all dims must be positive");
    if (expected_d >= 0 && scores.d_ != expected_d)
        throw ValidationError("score tensor '" + path + "': dimension " +
                              std::to_string(scores.d_) + " does not match the declared " +
                              std::to_string(expected_d));
    scores.values_ = std::move(t.values);
    return scores;
}

}  // namespace dimscope
