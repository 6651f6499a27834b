// SNR estimation, interval aggregation, monotonic-trend checks, and plot
// data emission.

#ifndef DIMSCOPE_ANALYSIS_HPP
#define DIMSCOPE_ANALYSIS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dimscope/core.hpp"
#include "dimscope/energy.hpp"

namespace dimscope {

enum class FrClass { fr1, fr2, unlabeled };

std::string to_string(FrClass c);
FrClass fr_class_from_string(const std::string& name);

struct CatalogEntry {
    std::string sample_id;
    FrClass fr_class = FrClass::unlabeled;
    std::optional<double> consensus_level;
    std::optional<double> angular_size;
    std::optional<double> snr;
};

enum class IntervalAxis { mean, std_dev };

std::string to_string(IntervalAxis axis);

/// Per-interval aggregate estimates for one method. Cells are 1-based and
/// contiguous; nullopt marks an N/A cell (empty interval or insufficient
/// samples for PPCA).
struct IntervalTable {
    std::string method;
    std::vector<std::optional<double>> values;
    std::vector<int> counts;     // joined samples per interval
    std::vector<int> excluded;   // samples with a record but no estimate

    Index num_intervals() const { return static_cast<Index>(values.size()); }
};

/// Peak over robust border noise: max pixel divided by 1.4826 times the
/// median absolute deviation of the border ring (width `border_width`).
/// A constant border (zero MAD) rejects; batch drivers record that as a
/// per-sample exclusion.
double estimate_snr(const ImageGrid& img, Index border_width = 5);

/// Joins estimates to interval labels by id and aggregates per interval:
/// mean of per-point values for diffusion and LPCA, the inverse-mean rule
/// for MLE. PPCA is global-only; use ppca_by_interval.
IntervalTable aggregate_by_interval(std::span<const IdEstimate> estimates,
                                    std::span<const EnergyRecord> records, Method method,
                                    IntervalAxis axis);

/// Refits PPCA per interval group. Insufficient samples yield N/A cells.
IntervalTable ppca_by_interval(const PointSet& pts, std::span<const EnergyRecord> records,
                               IntervalAxis axis);

/// Spearman rank correlation between interval index and estimate over the
/// non-N/A cells (average ranks on ties; an all-tied table returns 0).
/// Needs at least three non-N/A cells.
double trend_check(const IntervalTable& table);

/// One joined row of the reporting pipeline.
struct JoinedRecord {
    std::string id;
    double id_value = 0.0;
    std::optional<double> snr;
    FrClass fr_class = FrClass::unlabeled;
    std::optional<int> mean_interval;
    std::optional<int> std_interval;
};

struct SpectrumExport {
    std::string id;
    std::vector<double> values;
};

struct PlotOutputs {
    std::string scatter_csv;
    std::string scatter_svg;
    std::string interval_csv;
    std::vector<std::string> spectrum_csvs;
};

/// Writes scatter data + a log-log SVG with FR-class categories, the
/// per-interval bar data, and one spectrum CSV per exported sample.
/// Every record lands in exactly one scatter CSV row; records without a
/// usable (snr, value) pair keep their row but get no SVG mark.
PlotOutputs emit_plots(std::span<const JoinedRecord> records,
                       std::span<const SpectrumExport> spectra, const std::string& out_dir);

namespace svg {

struct Point {
    double x = 0.0;
    double y = 0.0;
    FrClass fr_class = FrClass::unlabeled;
};

/// Hand-written SVG scatter chart on log-log axes; one <circle> per point.
std::string scatter_log_log(std::span<const Point> points, const std::string& x_label,
                            const std::string& y_label, const std::string& title);

}  // namespace svg

}  // namespace dimscope

#endif  // DIMSCOPE_ANALYSIS_HPP
