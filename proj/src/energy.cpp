#include "dimscope/energy.hpp"

#include <algorithm>
#include <cmath>

namespace dimscope {

void validate(const PosteriorLogits& p) {
    if (p.num_draws() < 1)
        throw ValidationError("PosteriorLogits '" + p.sample_id + "': need N >= 1 draws");
    if (p.num_classes() < 2)
        throw ValidationError("PosteriorLogits '" + p.sample_id + "': need C >= 2 classes");
    if (!p.logits.allFinite())
        throw ValidationError("PosteriorLogits '" + p.sample_id + "': non-finite logit");
}

std::string to_string(PositivityTransform t) {
    return t == PositivityTransform::negate ? "negate" : "shift";
}

double LogNormalFit::transformed(double value) const {
    return transform == PositivityTransform::negate ? -value : value + shift_c;
}

double LogNormalFit::z_score(double value) const {
    if (!(sigma_ln > 0.0))
        throw NumericError("LogNormalFit: degenerate fit with sigma_ln = 0");
    const double w = transformed(value);
    if (!(w > 0.0))
        throw NumericError("LogNormalFit: value " + std::to_string(value) +
                           " is not positive under the " + to_string(transform) +
                           " transform");
    return (std::log(w) - mu_ln) / sigma_ln;
}

double energy_score(const Eigen::Ref<const Vector>& logits, double temperature) {
    if (!(temperature > 0.0)) throw ValidationError("energy_score: T must be positive");
    if (logits.size() < 1) throw ValidationError("energy_score: empty logit vector");
    if (!logits.allFinite()) throw ValidationError("energy_score: non-finite logit");

    const double peak = logits.maxCoeff() / temperature;
    double sum = 0.0;
    for (Index i = 0; i < logits.size(); ++i)
        sum += std::exp(logits(i) / temperature - peak);
    return -temperature * (peak + std::log(sum));
}

std::pair<double, double> posterior_energy_stats(const PosteriorLogits& p,
                                                 double temperature) {
    validate(p);
    const Index n = p.num_draws();
    Vector energies(n);
    for (Index i = 0; i < n; ++i)
        energies(i) = energy_score(p.logits.row(i).transpose(), temperature);
    const double mean = energies.mean();
    const double variance = (energies.array() - mean).square().sum() / static_cast<double>(n);
    return {mean, std::sqrt(variance)};
}

LogNormalFit fit_lognormal(std::span<const double> values) {
    if (values.size() < 2)
        throw ValidationError("fit_lognormal: need at least two values");
    for (const double v : values)
        if (!std::isfinite(v)) throw ValidationError("fit_lognormal: non-finite value");

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    if (*min_it == *max_it)
        throw NumericError("fit_lognormal: all values equal, fit is degenerate");

    LogNormalFit fit;
    if (*min_it > 0.0) {
        fit.transform = PositivityTransform::shift;
        fit.shift_c = 0.0;
    } else if (*max_it < 0.0) {
        fit.transform = PositivityTransform::negate;
    } else {
        fit.transform = PositivityTransform::shift;
        fit.shift_c = -*min_it + 1e-9;
    }

    double sum = 0.0;
    for (const double v : values) sum += std::log(fit.transformed(v));
    fit.mu_ln = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (const double v : values) {
        const double delta = std::log(fit.transformed(v)) - fit.mu_ln;
        sq += delta * delta;
    }
    fit.sigma_ln = std::sqrt(sq / static_cast<double>(values.size()));
    if (!(fit.sigma_ln > 0.0))
        throw NumericError("fit_lognormal: zero variance in log space");
    return fit;
}

int raw_bin(double value, const LogNormalFit& fit) {
    return static_cast<int>(std::floor(fit.z_score(value)));
}

int interval_label(double value, const LogNormalFit& fit, int dataset_floor) {
    return raw_bin(value, fit) - dataset_floor + 1;
}

std::vector<int> assign_intervals(std::span<const double> values, const LogNormalFit& fit) {
    std::vector<int> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) raw[i] = raw_bin(values[i], fit);
    const int floor = *std::min_element(raw.begin(), raw.end());
    for (int& r : raw) r = r - floor + 1;
    return raw;
}

std::vector<EnergyRecord> energy_records(std::span<const PosteriorLogits> samples,
                                         double temperature) {
    if (samples.empty()) throw ValidationError("energy_records: no samples");
    std::vector<EnergyRecord> records(samples.size());
    std::vector<double> means(samples.size());
    std::vector<double> stds(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [mean, sd] = posterior_energy_stats(samples[i], temperature);
        records[i].sample_id = samples[i].sample_id;
        records[i].energy_mean = mean;
        records[i].energy_std = sd;
        means[i] = mean;
        stds[i] = sd;
    }
    const LogNormalFit mean_fit = fit_lognormal(means);
    const LogNormalFit std_fit = fit_lognormal(stds);
    const std::vector<int> mean_labels = assign_intervals(means, mean_fit);
    const std::vector<int> std_labels = assign_intervals(stds, std_fit);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        records[i].mean_interval = mean_labels[i];
        records[i].std_interval = std_labels[i];
    }
    return records;
}

}  // namespace dimscope
