#pragma once

#include <cstddef>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/rng.hpp"

namespace evosample::gb {

// A granule over dataset rows: center is the member mean, radius the mean
// member-to-center distance, quality the dominant-class fraction.
struct GranularBall {
    std::vector<std::size_t> member_rows;  // sorted ascending
    Instance center;
    double radius = 0.0;
    ClassLabel label = ClassLabel::Majority;
    double quality = 1.0;
    std::size_t creation_order = 0;
};

// Pairwise-disjoint balls covering every dataset row, ordered by creation.
struct BallSet {
    std::vector<GranularBall> balls;
};

struct BallStats {
    Instance center;
    double radius;
    ClassLabel label;  // majority class among members; ties go to Minority
    double quality;
};

BallStats ball_stats(const std::vector<std::size_t>& member_rows, const Dataset& d);

GranularBall make_ball(std::vector<std::size_t> member_rows, const Dataset& d,
                       std::size_t creation_order);

// Splits an impure ball around a uniformly chosen member of a class other
// than the ball's label: members strictly closer to that seed form one child,
// the rest (ties included) stay with the center-seeded child. Children get
// creation orders next_creation_order and next_creation_order + 1.
// Requires quality < threshold semantics: throws ValidationError when called
// on a ball whose members are single-class.
std::pair<GranularBall, GranularBall> split_ball(const GranularBall& ball, const Dataset& d,
                                                 Rng& rng, std::size_t next_creation_order);

// Starts from one all-rows ball and splits (in creation order) until every
// ball's quality reaches the threshold; threshold must be in (0.5, 1].
BallSet generate_balls(const Dataset& d, double threshold, Rng& rng);

}  // namespace evosample::gb
