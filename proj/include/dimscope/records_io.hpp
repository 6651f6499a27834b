// Typed CSV schemas: catalog ingest with its filters, estimate and energy
// records, interval tables, id lists, loss traces.

#ifndef DIMSCOPE_RECORDS_IO_HPP
#define DIMSCOPE_RECORDS_IO_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dimscope/analysis.hpp"
#include "dimscope/core.hpp"
#include "dimscope/energy.hpp"

namespace dimscope {

struct CatalogReadResult {
    std::vector<CatalogEntry> entries;
    int rejected = 0;   // rows failing the consensus / angular-size filters
};

/// Reads a catalog CSV. 'id' is required; 'fr_class', 'consensus',
/// 'angular_size', and 'snr' are optional and unknown columns are ignored.
/// When the columns are present, rows need consensus >= 0.65 and
/// angular size > 20; filtered rows are counted, not errors.
CatalogReadResult read_catalog_csv(const std::string& path);

void write_estimates_csv(const std::string& path, std::span<const IdEstimate> estimates);
std::vector<IdEstimate> read_estimates_csv(const std::string& path);

void write_exclusions_csv(const std::string& path, std::span<const Exclusion> exclusions);

void write_energy_csv(const std::string& path, std::span<const EnergyRecord> records);
std::vector<EnergyRecord> read_energy_csv(const std::string& path);

/// Emits rows (method, interval, value|NA, excluded_count).
void write_interval_tables_csv(const std::string& path,
                               std::span<const IntervalTable> tables);

/// Reads interval tables grouped by method, in first-appearance order.
/// Accepts either 'value' or 'estimate' as the value column; a missing or
/// 'NA' value is an N/A cell.
std::vector<IntervalTable> read_interval_tables_csv(const std::string& path);

/// Single-column 'id' list.
void write_ids_csv(const std::string& path, std::span<const std::string> ids);
std::vector<std::string> read_ids_csv(const std::string& path);

void write_loss_trace_csv(const std::string& path,
                          std::span<const std::pair<long, double>> trace);

/// Packs per-sample spectra into a rank-2 (n, L) tensor, zero-padded to the
/// longest spectrum; rows follow the estimate order.
void write_spectra_tensor(const std::string& path, std::span<const IdEstimate> estimates);

}  // namespace dimscope

#endif  // DIMSCOPE_RECORDS_IO_HPP
