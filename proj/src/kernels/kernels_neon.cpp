#include "lad/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <limits>

// NEON variants, two double lanes per vector. Same contract as AVX2:
// elementwise kernels bitwise-match scalar, reductions match within
// rounding of the combine order.

namespace lad::kernels::neon {
namespace {

inline uint64x2_t mask2(const std::uint8_t* m) {
    const std::uint64_t lanes[2] = {m[0] != 0 ? ~0ull : 0ull, m[1] != 0 ? ~0ull : 0ull};
    return vld1q_u64(lanes);
}

} // namespace

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xv = vld1q_f64(x + i);
        const float64x2_t sel =
            vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(xv), mask2(mask + i)));
        acc = vaddq_f64(acc, sel);
    }
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) {
        if (mask[i] != 0) {
            s += x[i];
        }
    }
    return s;
}

double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean) {
    const float64x2_t mv = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), mv);
        const float64x2_t sq = vmulq_f64(d, d);
        const float64x2_t sel =
            vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(sq), mask2(mask + i)));
        acc = vaddq_f64(acc, sel);
    }
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) {
        if (mask[i] != 0) {
            const double d = x[i] - mean;
            s += d * d;
        }
    }
    return s;
}

void standardize(double* y, const double* x, std::size_t n, double mean, double stddev) {
    const float64x2_t mv = vdupq_n_f64(mean);
    const float64x2_t sv = vdupq_n_f64(stddev);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vdivq_f64(vsubq_f64(vld1q_f64(x + i), mv), sv));
    }
    for (; i < n; ++i) {
        y[i] = (x[i] - mean) / stddev;
    }
}

void square_max(double* acc, const double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t zv = vld1q_f64(z + i);
        vst1q_f64(acc + i, vmaxq_f64(vld1q_f64(acc + i), vmulq_f64(zv, zv)));
    }
    for (; i < n; ++i) {
        const double sq = z[i] * z[i];
        if (sq > acc[i]) {
            acc[i] = sq;
        }
    }
}

void scaled_copy(double* y, const double* x, std::size_t n, double divisor) {
    const float64x2_t dv = vdupq_n_f64(divisor);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vdivq_f64(vld1q_f64(x + i), dv));
    }
    for (; i < n; ++i) {
        y[i] = x[i] / divisor;
    }
}

MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n) {
    const float64x2_t pinf = vdupq_n_f64(std::numeric_limits<double>::infinity());
    const float64x2_t ninf = vdupq_n_f64(-std::numeric_limits<double>::infinity());
    float64x2_t vlo = pinf;
    float64x2_t vhi = ninf;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xv = vld1q_f64(x + i);
        const uint64x2_t m = mask2(mask + i);
        vlo = vminq_f64(vlo, vbslq_f64(m, xv, pinf));
        vhi = vmaxq_f64(vhi, vbslq_f64(m, xv, ninf));
    }
    double lo = vminvq_f64(vlo);
    double hi = vmaxvq_f64(vhi);
    for (; i < n; ++i) {
        if (mask[i] != 0) {
            if (x[i] < lo) lo = x[i];
            if (x[i] > hi) hi = x[i];
        }
    }
    return {lo, hi};
}

void range_scale(double* y, const double* x, const std::uint8_t* mask, std::size_t n,
                 double lo, double hi) {
    const double range = hi - lo;
    const float64x2_t lov = vdupq_n_f64(lo);
    const float64x2_t rv = vdupq_n_f64(range);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t scaled = vdivq_f64(vsubq_f64(vld1q_f64(x + i), lov), rv);
        const float64x2_t sel =
            vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(scaled), mask2(mask + i)));
        vst1q_f64(y + i, sel);
    }
    for (; i < n; ++i) {
        y[i] = (mask[i] != 0) ? (x[i] - lo) / range : 0.0;
    }
}

} // namespace lad::kernels::neon

#endif
