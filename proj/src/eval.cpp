#include "lad/eval.hpp"

#include "lad/detector.hpp"
#include "lad/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lad {

namespace {

// Rank formulation with midranks for ties: the probability that a random
// positive outranks a random negative, ties counting one half.
double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> truth,
                std::size_t positives, std::size_t negatives) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]] != 0) {
                positive_rank_sum += midrank;
            }
        }
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

} // namespace

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    const std::size_t n = scores.size();
    if (truth.size() != n) {
        throw std::invalid_argument("roc_auc: length mismatch between scores and truth");
    }
    std::size_t positives = 0;
    for (auto v : truth) {
        positives += v != 0 ? 1 : 0;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw std::domain_error("roc_auc: truth must contain both classes");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0;
    std::size_t fp = 0;
    double auc = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            if (truth[order[j]] != 0) {
                ++tp;
            } else {
                ++fp;
            }
            ++j;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
        const auto& last = curve.points.back();
        auc += (fpr - last.first) * (tpr + last.second) / 2.0;
        curve.points.emplace_back(fpr, tpr);
        i = j;
    }
    curve.auc = auc;

    const double check = rank_auc(scores, truth, positives, negatives);
    if (std::abs(check - auc) > 1e-9) {
        throw std::logic_error("roc_auc: trapezoid and rank AUC disagree");
    }
    return curve;
}

std::vector<std::uint8_t> top_k_labels(std::span<const double> scores, std::size_t k) {
    const auto top = rank(scores, k);
    std::vector<std::uint8_t> labels(scores.size(), 0);
    for (std::size_t i : top) {
        labels[i] = 1;
    }
    return labels;
}

std::vector<double> read_score_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open score file: " + path.string());
    }
    std::vector<double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        std::size_t begin = 0;
        while (begin < line.size() && line[begin] == ' ') {
            ++begin;
        }
        if (begin == line.size()) {
            continue;
        }
        double value = 0.0;
        const auto* first = line.data() + begin;
        const auto* last = line.data() + line.size();
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc{} || res.ptr != last) {
            throw ParseError("score file " + path.string() + ": bad value at line " +
                             std::to_string(line_no));
        }
        scores.push_back(value);
    }
    return scores;
}

ScoreComparison score_file_compare(const RocCurve& ours,
                                   const std::filesystem::path& external_scores,
                                   std::span<const std::uint8_t> truth) {
    const auto external = read_score_file(external_scores);
    if (external.size() != truth.size()) {
        throw ParseError("score file " + external_scores.string() + ": has " +
                         std::to_string(external.size()) + " rows, expected " +
                         std::to_string(truth.size()));
    }
    ScoreComparison cmp;
    cmp.rows = external.size();
    cmp.our_auc = ours.auc;
    cmp.external_auc = roc_auc(external, truth).auc;
    cmp.difference = cmp.our_auc - cmp.external_auc;
    return cmp;
}

} // namespace lad
