#include "lad/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace lad {

double rate_eval(RateFunction rf, double p) {
    if (!std::isfinite(p)) {
        throw std::domain_error("rate_eval: input must be finite");
    }
    switch (rf) {
    case RateFunction::gaussian_standard:
        return p * p / 2.0;
    }
    throw std::domain_error("rate_eval: unknown rate function");
}

ProjectiveScore raw_score(std::span<const double> z, std::size_t n) {
    if (z.empty()) {
        throw std::domain_error("raw_score: empty observation");
    }
    if (n == 0) {
        throw std::domain_error("raw_score: sample count must be positive");
    }
    ProjectiveScore score;
    score.scale_n = n;
    score.per_dimension.reserve(z.size());
    const double divisor = 2.0 * static_cast<double>(n);
    for (double zd : z) {
        score.per_dimension.push_back(zd * zd / divisor);
    }
    score.combined = score.per_dimension.front();
    for (double v : score.per_dimension) {
        if (v > score.combined) {
            score.combined = v;
        }
    }
    return score;
}

} // namespace lad
