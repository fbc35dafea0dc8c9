#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lad {

// Dense observation matrix, column-major so the per-column kernels run on
// contiguous memory. labels, feature_names and row_ids are optional and
// empty unless a loader fills them.
struct DataMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values; // column-major: values[c * n_rows + r]
    std::optional<std::vector<std::uint8_t>> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> row_ids;

    DataMatrix() = default;
    DataMatrix(std::size_t rows, std::size_t cols)
        : n_rows(rows), n_cols(cols), values(rows * cols, 0.0) {}

    double at(std::size_t r, std::size_t c) const { return values[c * n_rows + r]; }
    double& at(std::size_t r, std::size_t c) { return values[c * n_rows + r]; }

    std::span<const double> column(std::size_t c) const {
        return {values.data() + c * n_rows, n_rows};
    }
    std::span<double> column(std::size_t c) {
        return {values.data() + c * n_rows, n_rows};
    }
};

// Tunables of the scoring loop. Defaults follow the reference settings:
// threshold and quantile level 0.95, five iterations with early stopping.
struct LadConfig {
    double initial_threshold = 0.95;
    double quantile_level = 0.95;
    std::size_t n_iter = 5;
    double epsilon = 1e-12;
    double min_unflagged_fraction = 0.05;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

// Result of a fit: min-max-normalized scores in [0,1], 0/1 anomaly flags,
// the final threshold and the number of committed iterations.
struct ScoreState {
    std::vector<double> scores;
    std::vector<std::uint8_t> flags;
    double threshold = 0.0;
    std::size_t iterations_run = 0;
};

// Z-scores every column of data against the mean and sample standard
// deviation of the rows with flag 0; all rows are transformed. The
// divisor is max(stddev, epsilon). Throws std::runtime_error when every
// row is flagged.
DataMatrix standardize(const DataMatrix& data, std::span<const std::uint8_t> flags,
                       double epsilon);

// One scoring pass: standardize, take the per-row projective maximum of
// z^2/(2N), then min-max normalize. All scores equal maps to all zeros.
std::vector<double> score_pass(const DataMatrix& data, std::span<const std::uint8_t> flags,
                               const LadConfig& cfg);

// Linear-interpolation sample quantile: h = (m-1)q over the sorted values,
// result v[floor(h)] + (h - floor(h)) * (v[ceil(h)] - v[floor(h)]).
// Throws std::domain_error on an empty vector or q outside (0,1).
double quantile(std::span<const double> values, double q);

// The iterative detector: standardize against the unflagged subset, score,
// tighten the threshold to min(threshold, quantile(scores)), relabel.
// Stops early on a flag fixed point, or returns the previous iteration's
// state when relabeling would leave fewer than min_unflagged_fraction * N
// rows unflagged. threshold_trace, when given, receives the threshold of
// each committed iteration. Requires N >= 2 (std::domain_error).
ScoreState fit(const DataMatrix& data, const LadConfig& cfg = {},
               std::vector<double>* threshold_trace = nullptr);

// Indices of the k largest scores, descending, ties broken by ascending
// index. Throws std::domain_error unless 1 <= k <= N.
std::vector<std::size_t> rank(std::span<const double> scores, std::size_t k);
std::vector<std::size_t> rank(const ScoreState& state, std::size_t k);

// Worker-thread cap for per-column work inside the loop. Column
// partitioning keeps results bitwise independent of the thread count.
// Default 1.
void set_worker_threads(unsigned n);
unsigned worker_threads();

namespace detail {

// Seed for one run of the scoring loop; temporal steps pass carried flags,
// scores and threshold, a batch fit passes zeros and the initial threshold.
struct LoopSeed {
    std::vector<double> scores;
    std::vector<std::uint8_t> flags;
    double threshold = 0.0;
};

// Shared inner loop. active (empty = all rows) limits subset statistics,
// min-max normalization, the quantile and flagging to active rows; inactive
// rows keep score 0 and flag 0. The scale divisor is the active-row count.
ScoreState lad_loop(const DataMatrix& data, std::span<const std::uint8_t> active,
                    LoopSeed seed, const LadConfig& cfg,
                    std::vector<double>* threshold_trace);

} // namespace detail

} // namespace lad
