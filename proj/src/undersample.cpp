#include "evosample/undersample.hpp"

#include <algorithm>
#include <numeric>

namespace evosample::gb {

namespace {

// Uniform s-subset of the (sorted) candidate rows via partial Fisher-Yates.
std::vector<std::size_t> draw_rows(std::vector<std::size_t> candidates, std::size_t s, Rng& rng) {
    for (std::size_t i = 0; i < s; ++i) {
        std::size_t j = i + rng.index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(s);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

}  // namespace

double ball_distance(const GranularBall& b1, const GranularBall& b2) {
    return euclidean(b1.center, b2.center) - b1.radius - b2.radius;
}

std::vector<std::size_t> nearest_balls(std::size_t target, const BallSet& set, std::size_t k) {
    if (target >= set.balls.size()) throw ValidationError("target ball index out of range");
    std::vector<std::size_t> others;
    others.reserve(set.balls.size() - 1);
    for (std::size_t i = 0; i < set.balls.size(); ++i)
        if (i != target) others.push_back(i);

    std::vector<double> dist(set.balls.size(), 0.0);
    for (std::size_t i : others) dist[i] = ball_distance(set.balls[target], set.balls[i]);
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return set.balls[a].creation_order < set.balls[b].creation_order;
    });
    if (others.size() > k) others.resize(k);
    return others;
}

std::size_t removal_count(const GranularBall& target,
                          const std::vector<const GranularBall*>& neighbors) {
    if (neighbors.empty()) throw ValidationError("removal count needs at least one neighbor");
    std::size_t sum = 0;
    for (const GranularBall* nb : neighbors) {
        if (nb->label != target.label) sum += nb->member_rows.size();
    }
    std::size_t s = sum / neighbors.size();  // floor
    return std::min(s, target.member_rows.size());
}

Dataset undersample(const BallSet& balls, const Dataset& oversampled, std::size_t k, Rng& rng,
                    UndersampleReport* report) {
    const std::size_t n = oversampled.size();
    std::vector<char> covered(n, 0);
    for (const auto& b : balls.balls) {
        for (std::size_t r : b.member_rows) {
            if (r >= n || covered[r]) throw ValidationError("ball set does not partition the dataset");
            covered[r] = 1;
        }
    }
    if (static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 1)) != n)
        throw ValidationError("ball set does not partition the dataset");

    std::vector<char> removed(n, 0);

    // Phase 1: plans depend only on the pristine ball set; randomness is spent
    // solely on which members get deleted.
    for (std::size_t bi = 0; bi < balls.balls.size(); ++bi) {
        const GranularBall& ball = balls.balls[bi];
        auto neighbor_idx = nearest_balls(bi, balls, k);
        if (neighbor_idx.empty()) continue;  // single-ball set: nothing to compare against
        std::vector<const GranularBall*> neighbors;
        neighbors.reserve(neighbor_idx.size());
        for (std::size_t ni : neighbor_idx) neighbors.push_back(&balls.balls[ni]);
        std::size_t s = removal_count(ball, neighbors);

        BallRemoval rec;
        rec.ball_creation_order = ball.creation_order;
        rec.planned = s;
        rec.neighbor_shortfall = k - neighbor_idx.size();
        for (const auto* nb : neighbors) rec.neighbor_labels.push_back(nb->label);
        if (s > 0) {
            rec.removed_rows = draw_rows(ball.member_rows, s, rng);
            for (std::size_t r : rec.removed_rows) removed[r] = 1;
        }
        if (report) report->removals.push_back(std::move(rec));
    }

    auto class_counts = [&] {
        std::size_t maj = 0;
        std::size_t min = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (removed[r]) continue;
            (oversampled.labels[r] == ClassLabel::Majority ? maj : min)++;
        }
        return std::pair{maj, min};
    };

    // Phase 2: drop the smallest surviving ball of the larger class until the
    // counts meet; trim the last ball instead of overshooting.
    std::vector<std::vector<std::size_t>> survivors(balls.balls.size());
    for (std::size_t bi = 0; bi < balls.balls.size(); ++bi) {
        for (std::size_t r : balls.balls[bi].member_rows)
            if (!removed[r]) survivors[bi].push_back(r);
    }

    auto [maj, min] = class_counts();
    while (maj != min) {
        if (maj == 0 || min == 0)
            throw PipelineError("undersample: a class was fully eliminated while rebalancing");
        ClassLabel larger = maj > min ? ClassLabel::Majority : ClassLabel::Minority;
        std::size_t diff = maj > min ? maj - min : min - maj;

        std::size_t pick = balls.balls.size();
        for (std::size_t bi = 0; bi < balls.balls.size(); ++bi) {
            if (survivors[bi].empty() || balls.balls[bi].label != larger) continue;
            if (pick == balls.balls.size() || survivors[bi].size() < survivors[pick].size())
                pick = bi;  // creation order breaks ties: earlier bi wins
        }
        if (pick == balls.balls.size())
            throw PipelineError("undersample: no ball of the larger class left to remove");

        std::vector<std::size_t> larger_rows;
        for (std::size_t r : survivors[pick])
            if (oversampled.labels[r] == larger) larger_rows.push_back(r);

        BallRemoval rec;
        rec.ball_creation_order = balls.balls[pick].creation_order;
        rec.phase = 2;
        if (survivors[pick].size() > diff && larger_rows.size() >= diff) {
            // trimming exactly diff larger-class members lands the counts
            rec.planned = diff;
            rec.removed_rows = draw_rows(std::move(larger_rows), diff, rng);
            if (report) report->phase2_partial = true;
        } else {
            rec.planned = survivors[pick].size();
            rec.removed_rows = survivors[pick];
        }
        for (std::size_t r : rec.removed_rows) removed[r] = 1;
        survivors[pick].erase(std::remove_if(survivors[pick].begin(), survivors[pick].end(),
                                             [&](std::size_t r) { return removed[r]; }),
                              survivors[pick].end());
        if (report) report->removals.push_back(std::move(rec));

        std::tie(maj, min) = class_counts();
    }
    if (maj == 0)
        throw PipelineError("undersample: both classes were eliminated while rebalancing");

    Dataset out;
    out.feature_names = oversampled.feature_names;
    out.majority_name = oversampled.majority_name;
    out.minority_name = oversampled.minority_name;
    out.source = oversampled.source;
    for (std::size_t r = 0; r < n; ++r) {
        if (!removed[r]) out.push_row(oversampled.instances[r], oversampled.labels[r]);
    }
    return out;
}

}  // namespace evosample::gb
