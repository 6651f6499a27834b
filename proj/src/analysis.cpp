#include "dimscope/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>

#include "dimscope/classical.hpp"
#include "dimscope/csv_io.hpp"

namespace dimscope {

std::string to_string(FrClass c) {
    switch (c) {
        case FrClass::fr1: return "FRI";
        case FrClass::fr2: return "FRII";
        case FrClass::unlabeled: return "unlabeled";
    }
    throw ValidationError("unknown FR class");
}

FrClass fr_class_from_string(const std::string& name) {
    if (name == "FRI" || name == "FR1" || name == "fri" || name == "fr1") return FrClass::fr1;
    if (name == "FRII" || name == "FR2" || name == "frii" || name == "fr2") return FrClass::fr2;
    return FrClass::unlabeled;
}

std::string to_string(IntervalAxis axis) {
    return axis == IntervalAxis::mean ? "mean" : "std";
}

namespace {

double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    std::sort(values.begin(), values.end());
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double estimate_snr(const ImageGrid& img, Index border_width) {
    validate(img);
    if (border_width < 1) throw ValidationError("estimate_snr: border width must be >= 1");
    const Index h = img.height(), w = img.width();

    std::vector<double> ring;
    for (Index r = 0; r < h; ++r)
        for (Index c = 0; c < w; ++c)
            if (r < border_width || r >= h - border_width || c < border_width ||
                c >= w - border_width)
                ring.push_back(img.pixels(r, c));
    if (ring.empty()) throw ValidationError("estimate_snr: empty border ring");

    const double center = median_of(ring);
    std::vector<double> deviations(ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i) deviations[i] = std::abs(ring[i] - center);
    const double mad_sigma = 1.4826 * median_of(std::move(deviations));
    if (!(mad_sigma > 0.0))
        throw NumericError("estimate_snr: constant border ring in image '" + img.id + "'");
    return img.pixels.maxCoeff() / mad_sigma;
}

namespace {

int interval_of(const EnergyRecord& record, IntervalAxis axis) {
    return axis == IntervalAxis::mean ? record.mean_interval : record.std_interval;
}

int max_interval(std::span<const EnergyRecord> records, IntervalAxis axis) {
    int max_iv = 0;
    for (const auto& r : records) {
        const int iv = interval_of(r, axis);
        if (iv < 1) throw ValidationError("interval labels must be >= 1");
        max_iv = std::max(max_iv, iv);
    }
    return max_iv;
}

}  // namespace

IntervalTable aggregate_by_interval(std::span<const IdEstimate> estimates,
                                    std::span<const EnergyRecord> records, Method method,
                                    IntervalAxis axis) {
    if (method == Method::ppca)
        throw ValidationError("aggregate_by_interval: PPCA is global, use ppca_by_interval");
    if (records.empty()) throw ValidationError("aggregate_by_interval: no energy records");

    std::unordered_map<std::string, double> value_by_id;
    for (const auto& est : estimates) {
        if (est.method != method)
            throw ValidationError("aggregate_by_interval: estimate for sample '" +
                                  est.sample_id + "' is from method " + to_string(est.method) +
                                  ", expected " + to_string(method));
        value_by_id.emplace(est.sample_id, est.value);
    }

    const int n_intervals = max_interval(records, axis);
    IntervalTable table;
    table.method = to_string(method);
    table.values.assign(static_cast<std::size_t>(n_intervals), std::nullopt);
    table.counts.assign(static_cast<std::size_t>(n_intervals), 0);
    table.excluded.assign(static_cast<std::size_t>(n_intervals), 0);

    std::vector<std::vector<double>> groups(static_cast<std::size_t>(n_intervals));
    for (const auto& record : records) {
        const auto slot = static_cast<std::size_t>(interval_of(record, axis) - 1);
        const auto it = value_by_id.find(record.sample_id);
        if (it == value_by_id.end()) {
            ++table.excluded[slot];
            continue;
        }
        groups[slot].push_back(it->second);
        ++table.counts[slot];
    }

    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].empty()) continue;   // N/A cell
        if (method == Method::mle) {
            table.values[i] = mle_id_aggregate(groups[i]);
        } else {
            double sum = 0.0;
            for (const double v : groups[i]) sum += v;
            table.values[i] = sum / static_cast<double>(groups[i].size());
        }
    }
    return table;
}

IntervalTable ppca_by_interval(const PointSet& pts, std::span<const EnergyRecord> records,
                               IntervalAxis axis) {
    validate(pts);
    if (records.empty()) throw ValidationError("ppca_by_interval: no energy records");

    std::unordered_map<std::string, Index> row_by_id;
    for (Index i = 0; i < pts.size(); ++i) row_by_id.emplace(pts.ids[static_cast<std::size_t>(i)], i);

    const int n_intervals = max_interval(records, axis);
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(n_intervals));
    IntervalTable table;
    table.method = to_string(Method::ppca);
    table.values.assign(static_cast<std::size_t>(n_intervals), std::nullopt);
    table.counts.assign(static_cast<std::size_t>(n_intervals), 0);
    table.excluded.assign(static_cast<std::size_t>(n_intervals), 0);

    for (const auto& record : records) {
        const auto slot = static_cast<std::size_t>(interval_of(record, axis) - 1);
        const auto it = row_by_id.find(record.sample_id);
        if (it == row_by_id.end()) {
            ++table.excluded[slot];
            continue;
        }
        groups[slot].push_back(it->second);
        ++table.counts[slot];
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) continue;
        PointSet subset;
        subset.data.resize(static_cast<Index>(groups[g].size()), pts.dimension());
        for (std::size_t r = 0; r < groups[g].size(); ++r) {
            subset.data.row(static_cast<Index>(r)) = pts.data.row(groups[g][r]);
            subset.ids.push_back(pts.ids[static_cast<std::size_t>(groups[g][r])]);
        }
        try {
            table.values[g] = static_cast<double>(ppca_id_global(subset).q_star);
        } catch (const InsufficientSamplesError&) {
            table.values[g] = std::nullopt;   // the N/A cell
        }
    }
    return table;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double trend_check(const IntervalTable& table) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        if (!table.values[i]) continue;
        xs.push_back(static_cast<double>(i + 1));
        ys.push_back(*table.values[i]);
    }
    if (xs.size() < 3)
        throw NumericError("trend_check: need at least 3 non-N/A cells, got " +
                           std::to_string(xs.size()));

    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += rx[i];
        mean_y += ry[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = rx[i] - mean_x;
        const double dy = ry[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;   // all ranks tied
    return sxy / std::sqrt(sxx * syy);
}

PlotOutputs emit_plots(std::span<const JoinedRecord> records,
                       std::span<const SpectrumExport> spectra, const std::string& out_dir) {
    if (records.empty()) throw ValidationError("emit_plots: no joined records");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ValidationError("emit_plots: cannot create '" + out_dir + "'");

    PlotOutputs outputs;

    // Scatter data: one row per input record, plottable or not.
    CsvTable scatter;
    scatter.header = {"id", "snr", "id_estimate", "fr_class"};
    std::vector<svg::Point> marks;
    for (const auto& r : records) {
        scatter.rows.push_back({r.id, r.snr ? format_double(*r.snr) : "",
                                format_double(r.id_value), to_string(r.fr_class)});
        if (r.snr && *r.snr > 0.0 && r.id_value > 0.0)
            marks.push_back({*r.snr, r.id_value, r.fr_class});
    }
    outputs.scatter_csv = out_dir + "/snr_vs_id.csv";
    write_csv(outputs.scatter_csv, scatter);

    outputs.scatter_svg = out_dir + "/snr_vs_id.svg";
    {
        const std::string doc =
            svg::scatter_log_log(marks, "signal-to-noise ratio", "intrinsic dimension",
                                 "SNR vs intrinsic dimension");
        std::ofstream out(outputs.scatter_svg, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("emit_plots: cannot write '" + outputs.scatter_svg + "'");
        out.write(doc.data(), static_cast<std::streamsize>(doc.size()));
    }

    // Per-interval bar data over both axes.
    CsvTable bars;
    bars.header = {"axis", "interval", "mean_estimate", "count"};
    for (const IntervalAxis axis : {IntervalAxis::mean, IntervalAxis::std_dev}) {
        std::map<int, std::pair<double, int>> cells;
        for (const auto& r : records) {
            const auto iv = axis == IntervalAxis::mean ? r.mean_interval : r.std_interval;
            if (!iv) continue;
            auto& cell = cells[*iv];
            cell.first += r.id_value;
            cell.second += 1;
        }
        for (const auto& [interval, cell] : cells)
            bars.rows.push_back({to_string(axis), std::to_string(interval),
                                 format_double(cell.first / cell.second),
                                 std::to_string(cell.second)});
    }
    outputs.interval_csv = out_dir + "/id_by_interval.csv";
    write_csv(outputs.interval_csv, bars);

    // Score spectra: singular index (1-based) vs magnitude.
    for (const auto& spectrum : spectra) {
        CsvTable rows;
        rows.header = {"index", "magnitude"};
        for (std::size_t i = 0; i < spectrum.values.size(); ++i)
            rows.rows.push_back({std::to_string(i + 1), format_double(spectrum.values[i])});
        const std::string path = out_dir + "/spectrum_" + spectrum.id + ".csv";
        write_csv(path, rows);
        outputs.spectrum_csvs.push_back(path);
    }
    return outputs;
}

}  // namespace dimscope
