#include "lad/kernels.hpp"

#include <stdexcept>
#include <string>

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__) || defined(_M_IX86)
#define LAD_X86 1
#else
#define LAD_X86 0
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
#define LAD_NEON 1
#else
#define LAD_NEON 0
#endif

namespace lad::kernels {

#if LAD_X86
namespace avx2 {
double masked_sum(const double*, const std::uint8_t*, std::size_t);
double masked_sq_dev(const double*, const std::uint8_t*, std::size_t, double);
void standardize(double*, const double*, std::size_t, double, double);
void square_max(double*, const double*, std::size_t);
void scaled_copy(double*, const double*, std::size_t, double);
MinMax masked_minmax(const double*, const std::uint8_t*, std::size_t);
void range_scale(double*, const double*, const std::uint8_t*, std::size_t, double, double);
} // namespace avx2
#endif

#if LAD_NEON
namespace neon {
double masked_sum(const double*, const std::uint8_t*, std::size_t);
double masked_sq_dev(const double*, const std::uint8_t*, std::size_t, double);
void standardize(double*, const double*, std::size_t, double, double);
void square_max(double*, const double*, std::size_t);
void scaled_copy(double*, const double*, std::size_t, double);
MinMax masked_minmax(const double*, const std::uint8_t*, std::size_t);
void range_scale(double*, const double*, const std::uint8_t*, std::size_t, double, double);
} // namespace neon
#endif

namespace {

struct KernelTable {
    double (*masked_sum)(const double*, const std::uint8_t*, std::size_t);
    double (*masked_sq_dev)(const double*, const std::uint8_t*, std::size_t, double);
    void (*standardize)(double*, const double*, std::size_t, double, double);
    void (*square_max)(double*, const double*, std::size_t);
    void (*scaled_copy)(double*, const double*, std::size_t, double);
    MinMax (*masked_minmax)(const double*, const std::uint8_t*, std::size_t);
    void (*range_scale)(double*, const double*, const std::uint8_t*, std::size_t, double, double);
};

constexpr KernelTable scalar_table{
    &scalar::masked_sum,  &scalar::masked_sq_dev, &scalar::standardize, &scalar::square_max,
    &scalar::scaled_copy, &scalar::masked_minmax, &scalar::range_scale,
};

#if LAD_X86
constexpr KernelTable avx2_table{
    &avx2::masked_sum,  &avx2::masked_sq_dev, &avx2::standardize, &avx2::square_max,
    &avx2::scaled_copy, &avx2::masked_minmax, &avx2::range_scale,
};
#endif

#if LAD_NEON
constexpr KernelTable neon_table{
    &neon::masked_sum,  &neon::masked_sq_dev, &neon::standardize, &neon::square_max,
    &neon::scaled_copy, &neon::masked_minmax, &neon::range_scale,
};
#endif

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &scalar_table;
#if LAD_X86
    case Backend::avx2:
        return &avx2_table;
#endif
#if LAD_NEON
    case Backend::neon:
        return &neon_table;
#endif
    default:
        return nullptr;
    }
}

Backend detect_backend() {
#if LAD_X86
    if (__builtin_cpu_supports("avx2")) {
        return Backend::avx2;
    }
#elif LAD_NEON
    return Backend::neon;
#endif
    return Backend::scalar;
}

Backend g_backend = detect_backend();
const KernelTable* g_table = table_for(g_backend);

} // namespace

Backend active_backend() {
    return g_backend;
}

bool backend_supported(Backend b) {
    if (b == Backend::scalar) {
        return true;
    }
#if LAD_X86
    if (b == Backend::avx2) {
        return __builtin_cpu_supports("avx2") != 0;
    }
#endif
#if LAD_NEON
    if (b == Backend::neon) {
        return true;
    }
#endif
    return false;
}

void set_backend(Backend b) {
    if (!backend_supported(b)) {
        throw std::invalid_argument("kernel backend not supported on this machine: " +
                                    std::string(backend_name(b)));
    }
    g_backend = b;
    g_table = table_for(b);
}

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    case Backend::neon:
        return "neon";
    }
    return "unknown";
}

Backend parse_backend(std::string_view name) {
    if (name == "auto") {
        return detect_backend();
    }
    if (name == "scalar") {
        return Backend::scalar;
    }
    if (name == "avx2") {
        return Backend::avx2;
    }
    if (name == "neon") {
        return Backend::neon;
    }
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
    return g_table->masked_sum(x, mask, n);
}

double masked_sq_dev(const double* x, const std::uint8_t* mask, std::size_t n, double mean) {
    return g_table->masked_sq_dev(x, mask, n, mean);
}

void standardize(double* y, const double* x, std::size_t n, double mean, double stddev) {
    g_table->standardize(y, x, n, mean, stddev);
}

void square_max(double* acc, const double* z, std::size_t n) {
    g_table->square_max(acc, z, n);
}

void scaled_copy(double* y, const double* x, std::size_t n, double divisor) {
    g_table->scaled_copy(y, x, n, divisor);
}

MinMax masked_minmax(const double* x, const std::uint8_t* mask, std::size_t n) {
    return g_table->masked_minmax(x, mask, n);
}

void range_scale(double* y, const double* x, const std::uint8_t* mask, std::size_t n,
                 double lo, double hi) {
    g_table->range_scale(y, x, mask, n, lo, hi);
}

} // namespace lad::kernels
