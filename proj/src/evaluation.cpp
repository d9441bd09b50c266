#include "evosample/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evosample {

std::vector<ScoredPrediction> knn_classify(const Dataset& train, const Dataset& test,
                                           std::size_t k) {
    if (train.size() == 0) throw ValidationError("knn needs a nonempty training set");
    if (k == 0 || k > train.size()) throw ValidationError("k must be in [1, |train|]");
    if (train.feature_count() != test.feature_count())
        throw ValidationError("train/test dimension mismatch");

    std::vector<ScoredPrediction> preds;
    preds.reserve(test.size());
    std::vector<std::size_t> order(train.size());
    std::vector<double> dist(train.size());
    for (std::size_t q = 0; q < test.size(); ++q) {
        for (std::size_t r = 0; r < train.size(); ++r)
            dist[r] = euclidean(test.instances[q], train.instances[r]);
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (dist[a] != dist[b]) return dist[a] < dist[b];
                              return a < b;
                          });
        std::size_t minority = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (train.labels[order[i]] == ClassLabel::Minority) ++minority;
        preds.push_back({static_cast<double>(minority) / static_cast<double>(k), test.labels[q]});
    }
    return preds;
}

ConfusionCounts confusion(const std::vector<ScoredPrediction>& preds) {
    ConfusionCounts c;
    for (const auto& p : preds) {
        bool actual_pos = p.true_label == ClassLabel::Minority;
        bool predicted_pos = predicted_label(p) == ClassLabel::Minority;
        if (actual_pos && predicted_pos) ++c.true_pos;
        else if (actual_pos) ++c.false_neg;
        else if (predicted_pos) ++c.false_pos;
        else ++c.true_neg;
    }
    return c;
}

double g_mean(const ConfusionCounts& c) {
    std::size_t pos = c.true_pos + c.false_neg;
    std::size_t neg = c.true_neg + c.false_pos;
    double sensitivity = pos ? static_cast<double>(c.true_pos) / static_cast<double>(pos) : 0.0;
    double specificity = neg ? static_cast<double>(c.true_neg) / static_cast<double>(neg) : 0.0;
    return std::sqrt(sensitivity * specificity);
}

double auc(const std::vector<ScoredPrediction>& preds) {
    std::size_t n_pos = 0;
    for (const auto& p : preds)
        if (p.true_label == ClassLabel::Minority) ++n_pos;
    std::size_t n_neg = preds.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw ValidationError("auc needs both classes in the test set");

    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return preds[a].score < preds[b].score; });

    // average ranks over tied scores, then the Mann-Whitney identity
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && preds[order[j]].score == preds[order[i]].score) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t)
            if (preds[order[t]].true_label == ClassLabel::Minority) pos_rank_sum += avg_rank;
        i = j;
    }
    double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace evosample
