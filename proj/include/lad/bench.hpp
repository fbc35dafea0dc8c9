#pragma once

#include "lad/detector.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lad::bench {

struct BenchPoint {
    std::size_t rows = 0;
    std::size_t dims = 0;
    double median_seconds = 0.0;
    std::size_t repeats = 0;
};

// Standard-Gaussian matrix from a fixed seed; the sweep data every timing
// run sees.
DataMatrix synthetic_gaussian(std::size_t rows, std::size_t dims, std::uint64_t seed);

// Wall time of fit() per sweep point, median over repeats. Data generation
// is excluded from the timing.
std::vector<BenchPoint> rows_sweep(std::span<const std::size_t> row_counts, std::size_t dims,
                                   std::size_t repeats, std::uint64_t seed,
                                   const LadConfig& cfg = {});
std::vector<BenchPoint> dims_sweep(std::span<const std::size_t> dim_counts, std::size_t rows,
                                   std::size_t repeats, std::uint64_t seed,
                                   const LadConfig& cfg = {});

// Least-squares slope of log(time) against log(rows) or log(dims).
double loglog_slope(std::span<const BenchPoint> points, bool against_rows);

} // namespace lad::bench
