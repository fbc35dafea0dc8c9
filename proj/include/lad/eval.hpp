#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace lad {

// ROC curve swept over all distinct score thresholds, tied scores collapsed
// into one step. auc is the trapezoidal area; construction cross-checks it
// against the rank (Mann-Whitney) formulation.
struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
};

// Throws std::domain_error unless truth contains both classes.
RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

// Flags exactly the k best-scored rows (ranking ties broken by index).
std::vector<std::uint8_t> top_k_labels(std::span<const double> scores, std::size_t k);

// Headerless single-column decimal text, one score per row.
std::vector<double> read_score_file(const std::filesystem::path& path);

struct ScoreComparison {
    double our_auc = 0.0;
    double external_auc = 0.0;
    double difference = 0.0; // our_auc - external_auc
    std::size_t rows = 0;
};

// AUC of an externally produced score file against the same truth, next to
// ours. Throws ParseError when the row counts do not line up.
ScoreComparison score_file_compare(const RocCurve& ours,
                                   const std::filesystem::path& external_scores,
                                   std::span<const std::uint8_t> truth);

} // namespace lad
