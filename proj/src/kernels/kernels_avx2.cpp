#include "lad/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__) || defined(_M_IX86)

#include <immintrin.h>

#include <cstring>
#include <limits>

// AVX2 variants. Elementwise kernels round identically to the scalar ones
// (IEEE sub/mul/div/min/max are correctly rounded); the two reductions
// accumulate four partial sums and combine in a fixed lane order, so they
// can differ from the sequential scalar sum in the last bits.

namespace lad::kernels::avx2 {
namespace {

// Widen 4 mask bytes to 4 all-ones/all-zeros double lanes.
inline __m256d mask4(const std::uint8_t* m) {
    std::uint32_t w;
    std::memcpy(&w, m, 4);
    const __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(w));
    const __m256i lanes = _mm256_cvtepu8_epi64(bytes);
    return _mm256_castsi256_pd(_mm256_cmpgt_epi64(lanes, _mm256_setzero_si256()));
}

// (lane0+lane2) + (lane1+lane3); fixed order keeps the kernel deterministic.
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmin(__m128d v) {
    return _mm_cvtsd_f64(_mm_min_sd(v, _mm_unpackhi_pd(v, v)));
}

inline double hmax(__m128d v) {
    return _mm_cvtsd_f64(_mm_max_sd(v, _mm_unpackhi_pd(v, v)));
}

} // namespace

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_and_pd(xv, mask4(mask + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (mask[i] != 0) {
            s += x[i];
        }
    }
    return s;
}

double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean) {
    const __m256d mv = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        const __m256d sq = _mm256_mul_pd(d, d);
        acc = _mm256_add_pd(acc, _mm256_and_pd(sq, mask4(mask + i)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (mask[i] != 0) {
            const double d = x[i] - mean;
            s += d * d;
        }
    }
    return s;
}

void standardize(double* y, const double* x, std::size_t n, double mean, double stddev) {
    const __m256d mv = _mm256_set1_pd(mean);
    const __m256d sv = _mm256_set1_pd(stddev);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d z = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), mv), sv);
        _mm256_storeu_pd(y + i, z);
    }
    for (; i < n; ++i) {
        y[i] = (x[i] - mean) / stddev;
    }
}

void square_max(double* acc, const double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d zv = _mm256_loadu_pd(z + i);
        const __m256d sq = _mm256_mul_pd(zv, zv);
        _mm256_storeu_pd(acc + i, _mm256_max_pd(_mm256_loadu_pd(acc + i), sq));
    }
    for (; i < n; ++i) {
        const double sq = z[i] * z[i];
        if (sq > acc[i]) {
            acc[i] = sq;
        }
    }
}

void scaled_copy(double* y, const double* x, std::size_t n, double divisor) {
    const __m256d dv = _mm256_set1_pd(divisor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_div_pd(_mm256_loadu_pd(x + i), dv));
    }
    for (; i < n; ++i) {
        y[i] = x[i] / divisor;
    }
}

MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n) {
    const __m256d pinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d vlo = pinf;
    __m256d vhi = ninf;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d m = mask4(mask + i);
        vlo = _mm256_min_pd(vlo, _mm256_blendv_pd(pinf, xv, m));
        vhi = _mm256_max_pd(vhi, _mm256_blendv_pd(ninf, xv, m));
    }
    double lo = hmin(_mm_min_pd(_mm256_castpd256_pd128(vlo), _mm256_extractf128_pd(vlo, 1)));
    double hi = hmax(_mm_max_pd(_mm256_castpd256_pd128(vhi), _mm256_extractf128_pd(vhi, 1)));
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
    const __m256d lov = _mm256_set1_pd(lo);
    const __m256d rv = _mm256_set1_pd(range);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d scaled =
            _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), lov), rv);
        _mm256_storeu_pd(y + i, _mm256_and_pd(scaled, mask4(mask + i)));
    }
    for (; i < n; ++i) {
        y[i] = (mask[i] != 0) ? (x[i] - lo) / range : 0.0;
    }
}

} // namespace lad::kernels::avx2

#endif
