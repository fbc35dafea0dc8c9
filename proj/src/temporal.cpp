#include "lad/temporal.hpp"

#include <algorithm>
#include <stdexcept>

namespace lad {

namespace {

TemporalScores run_impl(const TimeSeriesPanel& panel, const LadConfig& cfg,
                        ThresholdCarry carry, bool full_history, std::size_t w) {
    panel.validate();
    cfg.validate();
    if (panel.length == 0 || panel.series_count == 0) {
        throw std::domain_error("run: empty panel");
    }

    const std::size_t n = panel.series_count;
    const std::size_t t_len = panel.length;

    TemporalScores out;
    out.series_count = n;
    out.length = t_len;
    out.scores.assign(n * t_len, 0.0);
    out.flags.assign(n * t_len, 0);
    out.aggregate.assign(n, 0.0);
    out.thresholds.reserve(t_len);

    std::optional<ScoreState> prev;
    for (std::size_t t = 0; t < t_len; ++t) {
        ScoreState state = step(panel, t, prev, cfg, full_history ? t : w, carry);
        for (std::size_t i = 0; i < n; ++i) {
            out.scores[i * t_len + t] = state.scores[i];
            out.flags[i * t_len + t] = state.flags[i];
        }
        out.thresholds.push_back(state.threshold);
        prev = std::move(state);
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t flagged = 0;
        for (std::size_t t = 0; t < t_len; ++t) {
            flagged += out.flags[i * t_len + t];
        }
        const std::size_t effective = t_len - panel.start_of(i);
        out.aggregate[i] =
            static_cast<double>(flagged) / static_cast<double>(effective);
    }
    return out;
}

} // namespace

void TimeSeriesPanel::validate() const {
    if (values.size() != series_count * length * feature_count) {
        throw std::invalid_argument("panel: value buffer does not match dimensions");
    }
    if (!start_offsets.empty()) {
        if (start_offsets.size() != series_count) {
            throw std::invalid_argument("panel: start_offsets length mismatch");
        }
        for (std::size_t off : start_offsets) {
            if (off >= length) {
                throw std::invalid_argument("panel: start offset beyond panel length");
            }
        }
    }
    if (!series_ids.empty() && series_ids.size() != series_count) {
        throw std::invalid_argument("panel: series_ids length mismatch");
    }
}

StackedWindow stack_window(const TimeSeriesPanel& panel, std::size_t t, std::size_t w) {
    panel.validate();
    if (t >= panel.length) {
        throw std::domain_error("stack_window: time index out of range");
    }
    const std::size_t n = panel.series_count;
    const std::size_t d = panel.feature_count;

    StackedWindow sw;
    sw.data = DataMatrix(n, d * (w + 1));
    sw.active.assign(n, 1);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t start = panel.start_of(i);
        if (start > t) {
            sw.active[i] = 0; // row stays zero-filled
            continue;
        }
        for (std::size_t o = 0; o <= w; ++o) {
            // Window position o holds step t - w + o; earlier-than-start
            // positions stay zero.
            if (t + o < w) {
                continue;
            }
            const std::size_t step_t = t + o - w;
            if (step_t < start) {
                continue;
            }
            for (std::size_t f = 0; f < d; ++f) {
                sw.data.at(i, o * d + f) = panel.at(i, step_t, f);
            }
        }
    }
    if (!panel.series_ids.empty()) {
        sw.data.row_ids = panel.series_ids;
    }
    return sw;
}

ScoreState step(const TimeSeriesPanel& panel, std::size_t t,
                const std::optional<ScoreState>& prev, const LadConfig& cfg, std::size_t w,
                ThresholdCarry carry) {
    const std::size_t n = panel.series_count;
    StackedWindow sw = stack_window(panel, t, w);

    detail::LoopSeed seed;
    if (prev.has_value()) {
        if (prev->scores.size() != n || prev->flags.size() != n) {
            throw std::invalid_argument("step: previous state length mismatch");
        }
        seed.scores = prev->scores;
        seed.flags = prev->flags;
        seed.threshold =
            carry == ThresholdCarry::carry ? prev->threshold : cfg.initial_threshold;
        // A series that only just became active cannot inherit a flag.
        for (std::size_t i = 0; i < n; ++i) {
            if (sw.active[i] == 0) {
                seed.flags[i] = 0;
                seed.scores[i] = 0.0;
            }
        }
    } else {
        seed.scores.assign(n, 0.0);
        seed.flags.assign(n, 0);
        seed.threshold = cfg.initial_threshold;
    }
    return detail::lad_loop(sw.data, sw.active, std::move(seed), cfg, nullptr);
}

TemporalScores run(const TimeSeriesPanel& panel, const LadConfig& cfg, std::size_t w,
                   ThresholdCarry carry) {
    return run_impl(panel, cfg, carry, false, w);
}

TemporalScores full_history_mode(const TimeSeriesPanel& panel, const LadConfig& cfg,
                                 ThresholdCarry carry) {
    return run_impl(panel, cfg, carry, true, 0);
}

} // namespace lad
