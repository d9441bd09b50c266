#include "evosample/smote.hpp"

#include <algorithm>

namespace evosample {

std::vector<SmoteSample> smote_samples(const Dataset& train, std::size_t k,
                                       std::size_t n_to_generate, Rng& rng) {
    auto [maj_rows, min_rows] = class_partition(train);
    if (min_rows.size() < 2) throw ValidationError("smote needs at least 2 minority instances");
    if (k == 0 || k > min_rows.size() - 1)
        throw ValidationError("smote neighbor count must be in [1, |Min| - 1]");

    // exact neighbor lists; desk-scale data does not need an index
    std::vector<std::vector<std::size_t>> neighbors(min_rows.size());
    for (std::size_t i = 0; i < min_rows.size(); ++i) {
        std::vector<std::size_t> order;
        order.reserve(min_rows.size() - 1);
        for (std::size_t j = 0; j < min_rows.size(); ++j)
            if (j != i) order.push_back(j);
        std::vector<double> dist(min_rows.size(), 0.0);
        for (std::size_t j : order)
            dist[j] = euclidean(train.instances[min_rows[i]], train.instances[min_rows[j]]);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dist[a] != dist[b]) return dist[a] < dist[b];
            return min_rows[a] < min_rows[b];
        });
        order.resize(k);
        neighbors[i] = std::move(order);
    }

    std::vector<SmoteSample> out;
    out.reserve(n_to_generate);
    for (std::size_t g = 0; g < n_to_generate; ++g) {
        std::size_t i = rng.index(min_rows.size());
        std::size_t j = neighbors[i][rng.index(k)];
        double u = rng.open01();
        const Instance& xi = train.instances[min_rows[i]];
        const Instance& xj = train.instances[min_rows[j]];
        Instance point(xi.size());
        for (std::size_t c = 0; c < xi.size(); ++c) point[c] = xi[c] + (xj[c] - xi[c]) * u;
        out.push_back({std::move(point), min_rows[i], min_rows[j]});
    }
    return out;
}

Dataset smote(const Dataset& train, std::size_t k, std::size_t n_to_generate, Rng& rng) {
    auto samples = smote_samples(train, k, n_to_generate, rng);
    Dataset out = train;
    for (auto& s : samples) out.push_row(std::move(s.point), ClassLabel::Minority);
    return out;
}

}  // namespace evosample
