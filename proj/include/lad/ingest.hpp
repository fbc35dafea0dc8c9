#pragma once

#include "lad/detector.hpp"
#include "lad/temporal.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lad {

// Column mapping for long-format panel files (one row per id x time).
struct PanelSpec {
    std::vector<std::string> value_columns;
    std::string id_column;
    std::string time_column;
    std::optional<std::string> population_column;
    std::int64_t min_population = 50000;
    bool trim_leading = false; // varying-length mode
};

// Loads a delimiter-separated matrix. The first row is treated as a header
// when any of its cells is non-numeric. label_column selects the ground
// truth by header name or 0-based index; every other column must be a
// finite number. Errors name the offending row. Delimiter is auto-detected
// among comma/tab/semicolon unless given.
DataMatrix load_matrix(const std::filesystem::path& path,
                       const std::optional<std::string>& label_column = {},
                       std::optional<char> delimiter = {});

struct PanelLoadResult {
    TimeSeriesPanel panel;
    std::vector<double> populations;      // per series; empty without population_column
    std::vector<std::string> time_labels; // the T distinct time keys, in panel order
};

// Pivots a long-format file to an N x T x d panel. Missing (id,time) cells
// are zero-filled; series with population below spec.min_population are
// dropped when a population column is configured; trim_leading sets each
// series' start offset to its first step with any nonzero value.
PanelLoadResult load_panel(const std::filesystem::path& path, const PanelSpec& spec,
                           std::optional<char> delimiter = {});

// values[n,t,f] / populations[n]. Populations must be positive, one per
// series (std::domain_error otherwise).
TimeSeriesPanel per_capita(const TimeSeriesPanel& panel, std::span<const double> populations);

struct DiffResult {
    TimeSeriesPanel panel;
    std::size_t clamped = 0; // negative steps clamped to zero
};

// First differences along time, values[n,-1,f] = 0. Negative differences
// (data corrections) clamp to zero and are counted.
DiffResult diff_to_new_counts(const TimeSeriesPanel& panel);

} // namespace lad
