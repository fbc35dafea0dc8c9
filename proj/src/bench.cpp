#include "lad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lad::bench {

namespace {

double time_fit(const DataMatrix& data, const LadConfig& cfg, std::size_t repeats) {
    std::vector<double> times;
    times.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto begin = std::chrono::steady_clock::now();
        volatile double sink = fit(data, cfg).threshold;
        (void)sink;
        const auto end = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(end - begin).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

} // namespace

DataMatrix synthetic_gaussian(std::size_t rows, std::size_t dims, std::uint64_t seed) {
    DataMatrix data(rows, dims);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : data.values) {
        v = gauss(rng);
    }
    return data;
}

std::vector<BenchPoint> rows_sweep(std::span<const std::size_t> row_counts, std::size_t dims,
                                   std::size_t repeats, std::uint64_t seed,
                                   const LadConfig& cfg) {
    if (repeats == 0) {
        throw std::invalid_argument("bench: repeats must be positive");
    }
    std::vector<BenchPoint> points;
    for (std::size_t rows : row_counts) {
        const DataMatrix data = synthetic_gaussian(rows, dims, seed);
        points.push_back({rows, dims, time_fit(data, cfg, repeats), repeats});
    }
    return points;
}

std::vector<BenchPoint> dims_sweep(std::span<const std::size_t> dim_counts, std::size_t rows,
                                   std::size_t repeats, std::uint64_t seed,
                                   const LadConfig& cfg) {
    if (repeats == 0) {
        throw std::invalid_argument("bench: repeats must be positive");
    }
    std::vector<BenchPoint> points;
    for (std::size_t dims : dim_counts) {
        const DataMatrix data = synthetic_gaussian(rows, dims, seed);
        points.push_back({rows, dims, time_fit(data, cfg, repeats), repeats});
    }
    return points;
}

double loglog_slope(std::span<const BenchPoint> points, bool against_rows) {
    if (points.size() < 2) {
        throw std::invalid_argument("loglog_slope: at least two points required");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = std::log(static_cast<double>(against_rows ? p.rows : p.dims));
        const double y = std::log(p.median_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace lad::bench
