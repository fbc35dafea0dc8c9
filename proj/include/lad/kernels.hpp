#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops of the scoring pipeline. Every kernel has a
// scalar reference implementation and may have SIMD variants (AVX2 on
// x86-64, NEON on aarch64); the active variant is selected once at
// startup from CPU capabilities and can be overridden with set_backend().
//
// Contract for variants: standardize, square_max, masked_minmax,
// scaled_copy and range_scale are elementwise or pure selections and must
// be bitwise identical to the scalar kernel. masked_sum and masked_sq_dev
// are reductions whose summation order may differ; variants must agree
// with the scalar kernel within 1e-12 relative. tests/test_kernels.cpp
// enforces both contracts.

namespace lad::kernels {

enum class Backend {
    scalar,
    avx2,
    neon,
};

// Backend chosen at startup (best supported), unless overridden.
Backend active_backend();

// Force a backend, e.g. to compare variants. Throws std::invalid_argument
// if the backend is not supported on this machine.
void set_backend(Backend b);

bool backend_supported(Backend b);

std::string_view backend_name(Backend b);

// Parses "scalar", "avx2", "neon" or "auto" (best supported).
Backend parse_backend(std::string_view name);

// Sum of x[i] over mask[i] != 0.
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);

// Sum of (x[i] - mean)^2 over mask[i] != 0.
double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean);

// y[i] = (x[i] - mean) / stddev for all i. stddev must be nonzero.
void standardize(double* y, const double* x, std::size_t n, double mean, double stddev);

// acc[i] = max(acc[i], z[i]*z[i]).
void square_max(double* acc, const double* z, std::size_t n);

// y[i] = x[i] / divisor.
void scaled_copy(double* y, const double* x, std::size_t n, double divisor);

struct MinMax {
    double lo;
    double hi;
};

// Min and max of x[i] over mask[i] != 0. At least one element must be
// selected by the mask.
MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n);

// y[i] = mask[i] ? (x[i] - lo) / (hi - lo) : 0. Requires hi > lo.
void range_scale(double* y, const double* x, const std::uint8_t* mask, std::size_t n,
                 double lo, double hi);

// Per-backend entry points, used by the equivalence tests.
namespace scalar {
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);
double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean);
void standardize(double* y, const double* x, std::size_t n, double mean, double stddev);
void square_max(double* acc, const double* z, std::size_t n);
void scaled_copy(double* y, const double* x, std::size_t n, double divisor);
MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n);
void range_scale(double* y, const double* x, const std::uint8_t* mask, std::size_t n,
                 double lo, double hi);
} // namespace scalar

} // namespace lad::kernels
