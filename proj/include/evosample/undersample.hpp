#pragma once

#include <cstddef>
#include <vector>

#include "evosample/granular_ball.hpp"

namespace evosample::gb {

// Center distance minus both radii; negative for overlapping balls. Used only
// for ranking neighbors.
double ball_distance(const GranularBall& b1, const GranularBall& b2);

// Indices (into set.balls) of the k balls nearest to set.balls[target],
// ties by creation order. When fewer than k other balls exist all of them are
// returned and the caller sees the shortfall in the result size.
std::vector<std::size_t> nearest_balls(std::size_t target, const BallSet& set, std::size_t k);

// Eq.-style neighbor-weighted removal count: mean of opposite-labeled
// neighbor sizes, floored, clamped to the target's size.
std::size_t removal_count(const GranularBall& target,
                          const std::vector<const GranularBall*>& neighbors);

struct BallRemoval {
    std::size_t ball_creation_order = 0;
    std::size_t planned = 0;                  // s of the removal plan
    std::size_t neighbor_shortfall = 0;       // k minus neighbors actually found
    std::vector<ClassLabel> neighbor_labels;  // in nearest-first order
    std::vector<std::size_t> removed_rows;
    int phase = 1;
};

struct UndersampleReport {
    std::vector<BallRemoval> removals;
    bool phase2_partial = false;  // final ball trimmed instead of dropped whole
};

// Algorithm-2-style two-phase cleanup: per-ball noise removal planned against
// the pristine ball set, then smallest-ball deletion from the larger class
// until the classes balance (trimming the final ball to land exactly).
// Surviving rows keep their original order.
Dataset undersample(const BallSet& balls, const Dataset& oversampled, std::size_t k, Rng& rng,
                    UndersampleReport* report = nullptr);

}  // namespace evosample::gb
