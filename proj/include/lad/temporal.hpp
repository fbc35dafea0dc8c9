#pragma once

#include "lad/detector.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lad {

// N multivariate series of length T with d features each. start_offsets
// (empty = all zero) give the first recorded step of each series; values
// before the offset are treated as absent.
struct TimeSeriesPanel {
    std::size_t series_count = 0;
    std::size_t length = 0;
    std::size_t feature_count = 0;
    std::vector<double> values; // (n,t,f) -> (n * length + t) * feature_count + f
    std::vector<std::size_t> start_offsets;
    std::vector<std::string> series_ids;

    TimeSeriesPanel() = default;
    TimeSeriesPanel(std::size_t n, std::size_t t, std::size_t d)
        : series_count(n), length(t), feature_count(d), values(n * t * d, 0.0) {}

    double at(std::size_t n, std::size_t t, std::size_t f) const {
        return values[(n * length + t) * feature_count + f];
    }
    double& at(std::size_t n, std::size_t t, std::size_t f) {
        return values[(n * length + t) * feature_count + f];
    }

    std::size_t start_of(std::size_t n) const {
        return start_offsets.empty() ? 0 : start_offsets[n];
    }

    // Throws std::invalid_argument on shape or offset violations.
    void validate() const;
};

// Whether the threshold re-arms to the configured initial value at each
// time step or keeps descending across steps.
enum class ThresholdCarry {
    reset,
    carry,
};

// Window of w+1 time steps ending at t, horizontally stacked into one row
// per series. Steps before a series' start (or before t = 0) are
// zero-filled; series that have not started by t are inactive.
struct StackedWindow {
    DataMatrix data;                  // N x (d * (w+1)), column (o*d + f) holds step t-w+o
    std::vector<std::uint8_t> active; // per series
};

StackedWindow stack_window(const TimeSeriesPanel& panel, std::size_t t, std::size_t w);

// One online step: carries flags and scores from prev (zeros when empty),
// seeds the threshold per the carry policy, and runs the detector loop on
// the stacked window. Carried flags seed the first subset selection and
// are re-evaluated by the loop.
ScoreState step(const TimeSeriesPanel& panel, std::size_t t,
                const std::optional<ScoreState>& prev, const LadConfig& cfg, std::size_t w,
                ThresholdCarry carry = ThresholdCarry::reset);

// Evolving scores and flags over all steps, the per-step final threshold,
// and the per-series aggregate: flagged steps divided by the series'
// effective length (T minus its start offset).
struct TemporalScores {
    std::size_t series_count = 0;
    std::size_t length = 0;
    std::vector<double> scores;        // n * T + t
    std::vector<std::uint8_t> flags;   // n * T + t
    std::vector<double> aggregate;     // per series, in [0,1]
    std::vector<double> thresholds;    // per step

    double score_at(std::size_t n, std::size_t t) const { return scores[n * length + t]; }
    bool flag_at(std::size_t n, std::size_t t) const { return flags[n * length + t] != 0; }
};

// Folds step over t = 0..T-1 with a fixed window.
TemporalScores run(const TimeSeriesPanel& panel, const LadConfig& cfg, std::size_t w,
                   ThresholdCarry carry = ThresholdCarry::reset);

// Window grows to cover the entire history (w = t at each step).
TemporalScores full_history_mode(const TimeSeriesPanel& panel, const LadConfig& cfg,
                                 ThresholdCarry carry = ThresholdCarry::reset);

} // namespace lad
