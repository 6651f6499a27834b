// Energy scores from posterior logits, log-normal fitting, and the
// mean/std interval labeling that stratifies a dataset.

#ifndef DIMSCOPE_ENERGY_HPP
#define DIMSCOPE_ENERGY_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dimscope/common.hpp"

namespace dimscope {

/// N posterior draws by C class logits for one sample.
struct PosteriorLogits {
    std::string sample_id;
    Matrix logits;   // N x C

    Index num_draws() const { return logits.rows(); }
    Index num_classes() const { return logits.cols(); }
};

void validate(const PosteriorLogits& p);

struct EnergyRecord {
    std::string sample_id;
    double energy_mean = 0.0;
    double energy_std = 0.0;     // population convention
    int mean_interval = 0;       // 1-based
    int std_interval = 0;        // 1-based
};

enum class PositivityTransform { negate, shift };

std::string to_string(PositivityTransform t);

/// Log-normal parameters of values made positive by `transform`:
///   negate    w = -v          (all-negative inputs, the usual energy case)
///   shift(c)  w = v + c       (c = 0 when already positive, else -min + 1e-9)
struct LogNormalFit {
    double mu_ln = 0.0;
    double sigma_ln = 0.0;   // population
    PositivityTransform transform = PositivityTransform::shift;
    double shift_c = 0.0;

    double transformed(double value) const;
    double z_score(double value) const;
};

/// E = -T * ln(sum_i exp(f_i / T)), computed overflow-safe.
double energy_score(const Eigen::Ref<const Vector>& logits, double temperature);

/// Mean and population standard deviation of the N per-draw energies.
std::pair<double, double> posterior_energy_stats(const PosteriorLogits& p,
                                                 double temperature);

/// Maximum-likelihood fit of ln(w) over the transformed values. Needs at
/// least two distinct values; an all-equal input is degenerate and rejects.
LogNormalFit fit_lognormal(std::span<const double> values);

/// floor(z) of one value under the fit.
int raw_bin(double value, const LogNormalFit& fit);

/// 1-based label: raw bin minus the dataset-wide minimum raw bin, plus one.
int interval_label(double value, const LogNormalFit& fit, int dataset_floor);

/// Two-phase labeling of a whole dataset (compute raw bins, subtract the
/// floor). Bins are unit-width in sigma units.
std::vector<int> assign_intervals(std::span<const double> values, const LogNormalFit& fit);

/// Full pipeline over per-sample logit blocks: per-draw energies, mean/std,
/// one log-normal fit per statistic, interval labels for both.
std::vector<EnergyRecord> energy_records(std::span<const PosteriorLogits> samples,
                                         double temperature);

}  // namespace dimscope

#endif  // DIMSCOPE_ENERGY_HPP
