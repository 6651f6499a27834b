#include "dimscope/records_io.hpp"

#include <algorithm>

#include "dimscope/csv_io.hpp"
#include "dimscope/tensor_io.hpp"

namespace dimscope {

CatalogReadResult read_catalog_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto id_col = table.column("id");
    if (!id_col) throw ValidationError("catalog '" + path + "': missing 'id' column");
    const auto fr_col = table.column("fr_class");
    const auto consensus_col = table.column("consensus");
    const auto size_col = table.column("angular_size");
    const auto snr_col = table.column("snr");

    CatalogReadResult result;
    for (const auto& row : table.rows) {
        CatalogEntry entry;
        entry.sample_id = row[*id_col];
        if (entry.sample_id.empty())
            throw ValidationError("catalog '" + path + "': empty id");
        if (fr_col && !row[*fr_col].empty())
            entry.fr_class = fr_class_from_string(row[*fr_col]);
        if (consensus_col && !row[*consensus_col].empty())
            entry.consensus_level = parse_double(row[*consensus_col]);
        if (size_col && !row[*size_col].empty())
            entry.angular_size = parse_double(row[*size_col]);
        if (snr_col && !row[*snr_col].empty()) entry.snr = parse_double(row[*snr_col]);

        if (entry.consensus_level && *entry.consensus_level < 0.65) {
            ++result.rejected;
            continue;
        }
        if (entry.angular_size && *entry.angular_size <= 20.0) {
            ++result.rejected;
            continue;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

void write_estimates_csv(const std::string& path, std::span<const IdEstimate> estimates) {
    CsvTable table;
    table.header = {"id",        "method",        "k_hat",  "value",
                    "gap_index", "truncated",     "low_confidence", "params"};
    for (const auto& est : estimates) {
        table.rows.push_back({est.sample_id, to_string(est.method), std::to_string(est.k_hat),
                              format_double(est.value),
                              est.gap_index ? std::to_string(*est.gap_index) : "",
                              est.truncated ? "1" : "0", est.low_confidence ? "1" : "0",
                              est.params});
    }
    write_csv(path, table);
}

std::vector<IdEstimate> read_estimates_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto id_col = table.column("id");
    const auto method_col = table.column("method");
    const auto k_col = table.column("k_hat");
    const auto value_col = table.column("value");
    if (!id_col || !method_col || !k_col || !value_col)
        throw ValidationError("estimates '" + path +
                              "': need columns id, method, k_hat, value");
    const auto gap_col = table.column("gap_index");
    const auto trunc_col = table.column("truncated");
    const auto low_col = table.column("low_confidence");
    const auto params_col = table.column("params");

    std::vector<IdEstimate> estimates;
    estimates.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        IdEstimate est;
        est.sample_id = row[*id_col];
        est.method = method_from_string(row[*method_col]);
        est.k_hat = static_cast<int>(parse_long(row[*k_col]));
        est.value = parse_double(row[*value_col]);
        if (gap_col && !row[*gap_col].empty())
            est.gap_index = static_cast<int>(parse_long(row[*gap_col]));
        if (trunc_col && !row[*trunc_col].empty()) est.truncated = row[*trunc_col] == "1";
        if (low_col && !row[*low_col].empty()) est.low_confidence = row[*low_col] == "1";
        if (params_col) est.params = row[*params_col];
        estimates.push_back(std::move(est));
    }
    return estimates;
}

void write_exclusions_csv(const std::string& path, std::span<const Exclusion> exclusions) {
    CsvTable table;
    table.header = {"id", "reason"};
    for (const auto& e : exclusions) table.rows.push_back({e.sample_id, e.reason});
    write_csv(path, table);
}

void write_energy_csv(const std::string& path, std::span<const EnergyRecord> records) {
    CsvTable table;
    table.header = {"id", "energy_mean", "energy_std", "mean_interval", "std_interval"};
    for (const auto& r : records)
        table.rows.push_back({r.sample_id, format_double(r.energy_mean),
                              format_double(r.energy_std), std::to_string(r.mean_interval),
                              std::to_string(r.std_interval)});
    write_csv(path, table);
}

std::vector<EnergyRecord> read_energy_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto id_col = table.column("id");
    const auto mean_col = table.column("energy_mean");
    const auto std_col = table.column("energy_std");
    const auto mi_col = table.column("mean_interval");
    const auto si_col = table.column("std_interval");
    if (!id_col || !mean_col || !std_col || !mi_col || !si_col)
        throw ValidationError("energy records '" + path + "': need columns id, energy_mean, "
                              "energy_std, mean_interval, std_interval");
    std::vector<EnergyRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        EnergyRecord r;
        r.sample_id = row[*id_col];
        r.energy_mean = parse_double(row[*mean_col]);
        r.energy_std = parse_double(row[*std_col]);
        r.mean_interval = static_cast<int>(parse_long(row[*mi_col]));
        r.std_interval = static_cast<int>(parse_long(row[*si_col]));
        records.push_back(std::move(r));
    }
    return records;
}

void write_interval_tables_csv(const std::string& path,
                               std::span<const IntervalTable> tables) {
    CsvTable out;
    out.header = {"method", "interval", "value", "excluded_count"};
    for (const auto& table : tables) {
        for (std::size_t i = 0; i < table.values.size(); ++i) {
            out.rows.push_back({table.method, std::to_string(i + 1),
                                table.values[i] ? format_double(*table.values[i]) : "NA",
                                i < table.excluded.size()
                                    ? std::to_string(table.excluded[i])
                                    : "0"});
        }
    }
    write_csv(path, out);
}

std::vector<IntervalTable> read_interval_tables_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto method_col = table.column("method");
    const auto interval_col = table.column("interval");
    auto value_col = table.column("value");
    if (!value_col) value_col = table.column("estimate");
    if (!method_col || !interval_col || !value_col)
        throw ValidationError("interval tables '" + path +
                              "': need columns method, interval, value");

    std::vector<IntervalTable> tables;
    auto find = [&](const std::string& method) -> IntervalTable& {
        for (auto& t : tables)
            if (t.method == method) return t;
        tables.push_back({});
        tables.back().method = method;
        return tables.back();
    };

    for (const auto& row : table.rows) {
        IntervalTable& t = find(row[*method_col]);
        const long interval = parse_long(row[*interval_col]);
        if (interval < 1)
            throw ValidationError("interval tables '" + path + "': interval must be >= 1");
        const auto slot = static_cast<std::size_t>(interval - 1);
        if (t.values.size() <= slot) {
            t.values.resize(slot + 1, std::nullopt);
            t.counts.resize(slot + 1, 0);
            t.excluded.resize(slot + 1, 0);
        }
        const std::string& value = row[*value_col];
        if (!value.empty() && value != "NA") t.values[slot] = parse_double(value);
    }
    return tables;
}

void write_ids_csv(const std::string& path, std::span<const std::string> ids) {
    CsvTable table;
    table.header = {"id"};
    for (const auto& id : ids) table.rows.push_back({id});
    write_csv(path, table);
}

std::vector<std::string> read_ids_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto id_col = table.column("id");
    if (!id_col) throw ValidationError("ids '" + path + "': missing 'id' column");
    std::vector<std::string> ids;
    ids.reserve(table.rows.size());
    for (const auto& row : table.rows) ids.push_back(row[*id_col]);
    return ids;
}

void write_loss_trace_csv(const std::string& path,
                          std::span<const std::pair<long, double>> trace) {
    CsvTable table;
    table.header = {"step", "loss"};
    for (const auto& [step, loss] : trace)
        table.rows.push_back({std::to_string(step), format_double(loss)});
    write_csv(path, table);
}

void write_spectra_tensor(const std::string& path, std::span<const IdEstimate> estimates) {
    std::size_t max_len = 0;
    for (const auto& est : estimates) max_len = std::max(max_len, est.spectrum.size());
    if (max_len == 0)
        throw ValidationError("write_spectra_tensor: no spectra to write");
    Tensor t;
    t.dims = {static_cast<std::uint64_t>(estimates.size()),
              static_cast<std::uint64_t>(max_len)};
    t.values.assign(estimates.size() * max_len, 0.0);
    for (std::size_t r = 0; r < estimates.size(); ++r)
        for (std::size_t c = 0; c < estimates[r].spectrum.size(); ++c)
            t.values[r * max_len + c] = estimates[r].spectrum[c];
    write_tensor(path, t);
}

}  // namespace dimscope
