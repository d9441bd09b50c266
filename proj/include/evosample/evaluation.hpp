#pragma once

#include <cstddef>
#include <vector>

#include "evosample/dataset.hpp"

namespace evosample {

// Minority is the positive class.
struct ConfusionCounts {
    std::size_t true_pos = 0;
    std::size_t false_pos = 0;
    std::size_t true_neg = 0;
    std::size_t false_neg = 0;
};

struct ScoredPrediction {
    double score = 0.0;  // fraction of minority neighbors; higher = more minority-like
    ClassLabel true_label = ClassLabel::Majority;
};

// Predicted Minority iff score > 0.5; a tied vote goes to Majority.
inline ClassLabel predicted_label(const ScoredPrediction& p) {
    return p.score > 0.5 ? ClassLabel::Minority : ClassLabel::Majority;
}

// Deterministic kNN scorer: Euclidean distances, ties broken by training row
// index.
std::vector<ScoredPrediction> knn_classify(const Dataset& train, const Dataset& test,
                                           std::size_t k);

ConfusionCounts confusion(const std::vector<ScoredPrediction>& preds);

// sqrt(sensitivity * specificity); an undefined rate contributes 0.
double g_mean(const ConfusionCounts& c);

// Rank-based (Mann-Whitney) AUC; tied scores contribute one half.
double auc(const std::vector<ScoredPrediction>& preds);

}  // namespace evosample
