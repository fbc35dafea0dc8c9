#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lad {

// Large-deviations rate function. Only the standard-Gaussian instance is
// implemented; the enumeration leaves room for other families without an
// API change.
enum class RateFunction {
    gaussian_standard,
};

// Rate value at p. Non-negative, zero at p = 0, even in p.
// Gaussian: p^2 / 2. Throws std::domain_error on non-finite input.
double rate_eval(RateFunction rf, double p);

// Scaled rate scores of one standardized observation across dimensions,
// combined by the projective maximum.
struct ProjectiveScore {
    std::vector<double> per_dimension; // z_d^2 / (2n), one entry per dimension
    double combined = 0.0;             // max over per_dimension
    std::size_t scale_n = 0;           // the sample-count divisor n
};

// per_dimension[d] = z[d]^2 / (2n); combined = max_d per_dimension[d].
// Throws std::domain_error on an empty vector or n == 0.
ProjectiveScore raw_score(std::span<const double> z, std::size_t n);

} // namespace lad
