#include "lad/detector.hpp"

#include "lad/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace lad {

namespace {

unsigned g_worker_threads = 1;

// Column stats over the subset rows, then z-scores of the whole column and
// the running per-row maximum of z^2.
void column_pass(std::span<const double> col, const std::uint8_t* subset, std::size_t m,
                 double epsilon, double* z, double* acc) {
    const std::size_t n = col.size();
    const double mean = kernels::masked_sum(col.data(), subset, n) / static_cast<double>(m);
    const double sq = kernels::masked_sq_dev(col.data(), subset, n, mean);
    const double sd = m > 1 ? std::sqrt(sq / static_cast<double>(m - 1)) : 0.0;
    const double denom = std::max(sd, epsilon);
    kernels::standardize(z, col.data(), n, mean, denom);
    kernels::square_max(acc, z, n);
}

// acc[i] = max over all columns of z_ic^2. Columns are partitioned across
// workers; each worker owns a private accumulator and the combine is an
// elementwise max, so the result does not depend on the thread count.
void accumulate_square_max(const DataMatrix& data, const std::uint8_t* subset, std::size_t m,
                           double epsilon, std::vector<double>& acc) {
    const std::size_t n = data.n_rows;
    const std::size_t d = data.n_cols;
    std::fill(acc.begin(), acc.end(), 0.0);

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(g_worker_threads, d));
    if (workers <= 1) {
        std::vector<double> z(n);
        for (std::size_t c = 0; c < d; ++c) {
            column_pass(data.column(c), subset, m, epsilon, z.data(), acc.data());
        }
        return;
    }

    std::vector<std::vector<double>> partial(workers, std::vector<double>(n, 0.0));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            std::vector<double> z(n);
            for (std::size_t c = w; c < d; c += workers) {
                column_pass(data.column(c), subset, m, epsilon, z.data(), partial[w].data());
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
        for (std::size_t i = 0; i < n; ++i) {
            if (partial[w][i] > acc[i]) {
                acc[i] = partial[w][i];
            }
        }
    }
}

} // namespace

void LadConfig::validate() const {
    if (!(initial_threshold > 0.0 && initial_threshold < 1.0)) {
        throw std::invalid_argument("config: initial_threshold must lie in (0,1)");
    }
    if (!(quantile_level > 0.0 && quantile_level < 1.0)) {
        throw std::invalid_argument("config: quantile_level must lie in (0,1)");
    }
    if (n_iter == 0) {
        throw std::invalid_argument("config: n_iter must be positive");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("config: epsilon must be a positive finite value");
    }
    if (!(min_unflagged_fraction > 0.0 && min_unflagged_fraction < 1.0)) {
        throw std::invalid_argument("config: min_unflagged_fraction must lie in (0,1)");
    }
}

void set_worker_threads(unsigned n) {
    g_worker_threads = std::max(1u, n);
}

unsigned worker_threads() {
    return g_worker_threads;
}

DataMatrix standardize(const DataMatrix& data, std::span<const std::uint8_t> flags,
                       double epsilon) {
    const std::size_t n = data.n_rows;
    if (flags.size() != n) {
        throw std::invalid_argument("standardize: flag vector length mismatch");
    }
    std::vector<std::uint8_t> subset(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        subset[i] = flags[i] == 0 ? 1 : 0;
        m += subset[i];
    }
    if (m == 0) {
        throw std::runtime_error("standardize: every row is flagged");
    }
    DataMatrix out(n, data.n_cols);
    for (std::size_t c = 0; c < data.n_cols; ++c) {
        const auto col = data.column(c);
        const double mean = kernels::masked_sum(col.data(), subset.data(), n) /
                            static_cast<double>(m);
        const double sq = kernels::masked_sq_dev(col.data(), subset.data(), n, mean);
        const double sd = m > 1 ? std::sqrt(sq / static_cast<double>(m - 1)) : 0.0;
        kernels::standardize(out.column(c).data(), col.data(), n, mean,
                             std::max(sd, epsilon));
    }
    return out;
}

std::vector<double> score_pass(const DataMatrix& data, std::span<const std::uint8_t> flags,
                               const LadConfig& cfg) {
    cfg.validate();
    const std::size_t n = data.n_rows;
    if (flags.size() != n) {
        throw std::invalid_argument("score_pass: flag vector length mismatch");
    }
    std::vector<std::uint8_t> subset(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        subset[i] = flags[i] == 0 ? 1 : 0;
        m += subset[i];
    }
    if (m == 0) {
        throw std::runtime_error("score_pass: every row is flagged");
    }

    std::vector<double> acc(n);
    accumulate_square_max(data, subset.data(), m, cfg.epsilon, acc);

    std::vector<double> raw(n);
    kernels::scaled_copy(raw.data(), acc.data(), n, 2.0 * static_cast<double>(n));

    const std::vector<std::uint8_t> all(n, 1);
    const auto mm = kernels::masked_minmax(raw.data(), all.data(), n);
    std::vector<double> scores(n, 0.0);
    if (mm.hi > mm.lo) {
        kernels::range_scale(scores.data(), raw.data(), all.data(), n, mm.lo, mm.hi);
    }
    return scores;
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) {
        throw std::domain_error("quantile: empty input");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("quantile: level must lie in (0,1)");
    }
    const std::size_t m = values.size();
    const double h = static_cast<double>(m - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);

    std::vector<double> buf(values.begin(), values.end());
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.end());
    const double vlo = buf[lo];
    if (frac == 0.0 || lo + 1 == m) {
        return vlo;
    }
    const double vhi =
        *std::min_element(buf.begin() + static_cast<std::ptrdiff_t>(lo) + 1, buf.end());
    return vlo + frac * (vhi - vlo);
}

namespace detail {

double quantile_01(std::span<const double> scores, std::span<const std::uint8_t> active,
                   double q) {
    constexpr std::size_t n_buckets = 2048;
    const std::size_t n = scores.size();

    std::size_t m = 0;
    std::array<std::uint32_t, n_buckets> hist{};
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i] == 0) {
            continue;
        }
        const auto b = std::min<std::size_t>(
            n_buckets - 1, static_cast<std::size_t>(scores[i] * n_buckets));
        ++hist[b];
        ++m;
    }
    if (m == 0) {
        throw std::domain_error("quantile: empty input");
    }

    const double h = static_cast<double>(m - 1) * q;
    const std::size_t k = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(k);
    const bool need_next = frac != 0.0 && k + 1 < m;

    // Buckets holding order statistics k and k+1.
    std::size_t below = 0;
    std::size_t b0 = 0;
    while (below + hist[b0] <= k) {
        below += hist[b0];
        ++b0;
    }
    std::size_t b1 = b0;
    if (need_next) {
        std::size_t cum = below + hist[b0];
        while (cum <= k + 1) {
            ++b1;
            cum += hist[b1];
        }
    }

    std::vector<double> candidates;
    candidates.reserve(64);
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i] == 0) {
            continue;
        }
        const auto b = std::min<std::size_t>(
            n_buckets - 1, static_cast<std::size_t>(scores[i] * n_buckets));
        if (b >= b0 && b <= b1) {
            candidates.push_back(scores[i]);
        }
    }
    std::sort(candidates.begin(), candidates.end());

    const double vlo = candidates[k - below];
    if (!need_next) {
        return vlo;
    }
    const double vhi = candidates[k + 1 - below];
    return vlo + frac * (vhi - vlo);
}

ScoreState lad_loop(const DataMatrix& data, std::span<const std::uint8_t> active,
                    LoopSeed seed, const LadConfig& cfg,
                    std::vector<double>* threshold_trace) {
    cfg.validate();
    const std::size_t n = data.n_rows;
    const std::size_t d = data.n_cols;
    if (n < 2) {
        throw std::domain_error("lad: at least two rows required");
    }
    if (d == 0) {
        throw std::domain_error("lad: at least one column required");
    }
    if (seed.scores.size() != n || seed.flags.size() != n) {
        throw std::invalid_argument("lad: seed length mismatch");
    }
    if (!active.empty() && active.size() != n) {
        throw std::invalid_argument("lad: active mask length mismatch");
    }

    std::vector<std::uint8_t> act(n, 1);
    std::size_t n_active = n;
    if (!active.empty()) {
        n_active = 0;
        for (std::size_t i = 0; i < n; ++i) {
            act[i] = active[i] != 0 ? 1 : 0;
            n_active += act[i];
        }
        if (n_active == 0) {
            throw std::domain_error("lad: no active rows");
        }
    }

    ScoreState state{std::move(seed.scores), std::move(seed.flags), seed.threshold, 0};

    std::vector<std::uint8_t> subset(n);
    std::vector<std::uint8_t> new_flags(n);
    std::vector<double> acc(n);
    std::vector<double> raw(n);
    std::vector<double> scores(n);
    const double divisor = 2.0 * static_cast<double>(n_active);

    for (std::size_t iter = 1; iter <= cfg.n_iter; ++iter) {
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            subset[i] = (act[i] != 0 && state.flags[i] == 0) ? 1 : 0;
            m += subset[i];
        }
        if (m == 0) {
            throw std::runtime_error("lad: every active row is flagged");
        }

        accumulate_square_max(data, subset.data(), m, cfg.epsilon, acc);
        kernels::scaled_copy(raw.data(), acc.data(), n, divisor);

        const auto mm = kernels::masked_minmax(raw.data(), act.data(), n);
        if (mm.hi > mm.lo) {
            kernels::range_scale(scores.data(), raw.data(), act.data(), n, mm.lo, mm.hi);
        } else {
            std::fill(scores.begin(), scores.end(), 0.0);
        }

        const double q = quantile_01(scores, act, cfg.quantile_level);
        const double new_th = std::min(state.threshold, q);

        std::size_t unflagged = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool f = act[i] != 0 && scores[i] > new_th;
            new_flags[i] = f ? 1 : 0;
            if (act[i] != 0 && !f) {
                ++unflagged;
            }
        }
        if (static_cast<double>(unflagged) <
            cfg.min_unflagged_fraction * static_cast<double>(n_active)) {
            break; // keep the previous iteration's state
        }

        const bool fixed_point =
            std::equal(new_flags.begin(), new_flags.end(), state.flags.begin());
        std::swap(state.scores, scores);
        std::swap(state.flags, new_flags);
        state.threshold = new_th;
        state.iterations_run = iter;
        if (threshold_trace != nullptr) {
            threshold_trace->push_back(new_th);
        }
        if (fixed_point) {
            break;
        }
    }
    return state;
}

} // namespace detail

ScoreState fit(const DataMatrix& data, const LadConfig& cfg,
               std::vector<double>* threshold_trace) {
    if (data.n_rows < 2) {
        throw std::domain_error("fit: at least two rows required");
    }
    detail::LoopSeed seed;
    seed.scores.assign(data.n_rows, 0.0);
    seed.flags.assign(data.n_rows, 0);
    seed.threshold = cfg.initial_threshold;
    return detail::lad_loop(data, {}, std::move(seed), cfg, threshold_trace);
}

std::vector<std::size_t> rank(std::span<const double> scores, std::size_t k) {
    const std::size_t n = scores.size();
    if (k == 0 || k > n) {
        throw std::domain_error("rank: k must lie in [1, N]");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) {
                              return scores[a] > scores[b];
                          }
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

std::vector<std::size_t> rank(const ScoreState& state, std::size_t k) {
    return rank(std::span<const double>(state.scores), k);
}

} // namespace lad
