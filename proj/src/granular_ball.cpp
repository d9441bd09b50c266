#include "evosample/granular_ball.hpp"

#include <algorithm>
#include <deque>

namespace evosample::gb {

BallStats ball_stats(const std::vector<std::size_t>& member_rows, const Dataset& d) {
    if (member_rows.empty()) throw ValidationError("ball must have at least one member");
    BallStats s;
    s.center = Instance(d.feature_count(), 0.0);
    std::size_t minority = 0;
    for (std::size_t r : member_rows) {
        for (std::size_t c = 0; c < s.center.size(); ++c) s.center[c] += d.instances[r][c];
        if (d.labels[r] == ClassLabel::Minority) ++minority;
    }
    for (double& v : s.center) v /= static_cast<double>(member_rows.size());

    s.radius = 0.0;
    for (std::size_t r : member_rows) s.radius += euclidean(d.instances[r], s.center);
    s.radius /= static_cast<double>(member_rows.size());

    std::size_t majority = member_rows.size() - minority;
    s.label = majority > minority ? ClassLabel::Majority : ClassLabel::Minority;
    s.quality = static_cast<double>(std::max(majority, minority)) /
                static_cast<double>(member_rows.size());
    return s;
}

GranularBall make_ball(std::vector<std::size_t> member_rows, const Dataset& d,
                       std::size_t creation_order) {
    std::sort(member_rows.begin(), member_rows.end());
    BallStats s = ball_stats(member_rows, d);
    return {std::move(member_rows), std::move(s.center), s.radius, s.label, s.quality,
            creation_order};
}

std::pair<GranularBall, GranularBall> split_ball(const GranularBall& ball, const Dataset& d,
                                                 Rng& rng, std::size_t next_creation_order) {
    std::vector<std::size_t> off_class;
    for (std::size_t r : ball.member_rows)
        if (d.labels[r] != ball.label) off_class.push_back(r);
    if (off_class.empty())
        throw ValidationError("split_ball called on a ball at or above the quality threshold");

    std::size_t seed_row = off_class[rng.index(off_class.size())];
    const Instance& seed = d.instances[seed_row];

    std::vector<std::size_t> center_members;
    std::vector<std::size_t> seed_members;
    for (std::size_t r : ball.member_rows) {
        double to_seed = euclidean(d.instances[r], seed);
        double to_center = euclidean(d.instances[r], ball.center);
        (to_seed < to_center ? seed_members : center_members).push_back(r);
    }

    if (center_members.empty()) {
        // everything sits strictly closer to the seed: hand the member nearest
        // the old center back so both children are nonempty
        std::size_t keep = 0;
        double keep_dist = 0.0;
        for (std::size_t i = 0; i < seed_members.size(); ++i) {
            double dist = euclidean(d.instances[seed_members[i]], ball.center);
            if (i == 0 || dist < keep_dist) {
                keep = i;
                keep_dist = dist;
            }
        }
        center_members.push_back(seed_members[keep]);
        seed_members.erase(seed_members.begin() + static_cast<long>(keep));
    } else if (seed_members.empty()) {
        // duplicate coordinates: the seed ties with the center, so claim the
        // seed row itself to guarantee progress
        auto it = std::find(center_members.begin(), center_members.end(), seed_row);
        center_members.erase(it);
        seed_members.push_back(seed_row);
    }

    return {make_ball(std::move(center_members), d, next_creation_order),
            make_ball(std::move(seed_members), d, next_creation_order + 1)};
}

BallSet generate_balls(const Dataset& d, double threshold, Rng& rng) {
    if (!(threshold > 0.5 && threshold <= 1.0))
        throw ValidationError("quality threshold must be in (0.5, 1]");
    if (d.size() == 0) throw ValidationError("cannot build balls over an empty dataset");

    std::vector<std::size_t> all(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) all[i] = i;

    std::deque<GranularBall> work;
    work.push_back(make_ball(std::move(all), d, 0));
    std::size_t next_order = 1;

    BallSet out;
    while (!work.empty()) {
        GranularBall ball = std::move(work.front());
        work.pop_front();
        if (ball.quality >= threshold) {
            out.balls.push_back(std::move(ball));
            continue;
        }
        auto [center_child, seed_child] = split_ball(ball, d, rng, next_order);
        next_order += 2;
        work.push_back(std::move(center_child));
        work.push_back(std::move(seed_child));
    }

    std::sort(out.balls.begin(), out.balls.end(),
              [](const GranularBall& a, const GranularBall& b) {
                  return a.creation_order < b.creation_order;
              });
    return out;
}

}  // namespace evosample::gb
