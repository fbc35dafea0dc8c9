#include "lad/kernels.hpp"

// Reference kernels. Plain loops, sequential accumulation order; the SIMD
// variants are tested against these.

namespace lad::kernels::scalar {

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i] != 0) {
            s += x[i];
        }
    }
    return s;
}

double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i] != 0) {
            const double d = x[i] - mean;
            s += d * d;
        }
    }
    return s;
}

void standardize(double* y, const double* x, std::size_t n, double mean, double stddev) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (x[i] - mean) / stddev;
    }
}

void square_max(double* acc, const double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double sq = z[i] * z[i];
        if (sq > acc[i]) {
            acc[i] = sq;
        }
    }
}

void scaled_copy(double* y, const double* x, std::size_t n, double divisor) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x[i] / divisor;
    }
}

MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n) {
    MinMax r{0.0, 0.0};
    bool seen = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i] == 0) {
            continue;
        }
        if (!seen) {
            r.lo = r.hi = x[i];
            seen = true;
        } else {
            if (x[i] < r.lo) r.lo = x[i];
            if (x[i] > r.hi) r.hi = x[i];
        }
    }
    return r;
}

void range_scale(double* y, const double* x, const std::uint8_t* mask, std::size_t n,
                 double lo, double hi) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = (mask[i] != 0) ? (x[i] - lo) / range : 0.0;
    }
}

} // namespace lad::kernels::scalar
