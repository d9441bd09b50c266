#include "evosample/fitness.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace evosample {

double feasibility_threshold() {
    static const double t = (std::exp(1.0) - std::exp(0.5)) / (std::exp(1.0) - 1.0);
    return t;
}

Triangle triangle_sides(const Instance& synthetic, const Instance& maj_t, const Instance& min_t) {
    return {euclidean(synthetic, min_t), euclidean(synthetic, maj_t), euclidean(min_t, maj_t)};
}

double distance_score(const Triangle& t) {
    if (t.a + t.b <= 0.0)
        throw ValidationError("distance score undefined: synthetic coincides with both targets");
    const double e = std::exp(1.0);
    return (e - std::exp(t.a / (t.a + t.b))) / (e - 1.0);
}

double angle_score(const Triangle& t) {
    if (t.a <= 0.0 || t.b <= 0.0)
        throw ValidationError("angle undefined for a degenerate triangle side");
    double cosine = (t.a * t.a + t.b * t.b - t.c * t.c) / (2.0 * t.a * t.b);
    cosine = std::clamp(cosine, -1.0, 1.0);
    return std::acos(cosine) * 180.0 / std::acos(-1.0);
}

FitnessValue evaluate_fitness(const Instance& synthetic, const Instance& maj_t,
                              const Instance& min_t) {
    Triangle t = triangle_sides(synthetic, maj_t, min_t);
    if (t.a + t.b <= 0.0) return FitnessValue::worst();
    FitnessValue f;
    f.d_score = distance_score(t);
    // a clone of a target has no angle; rank it at the bottom of its band
    f.theta_degrees = (t.a == 0.0 || t.b == 0.0) ? 0.0 : angle_score(t);
    f.feasible = f.d_score > feasibility_threshold();
    return f;
}

int compare(const FitnessValue& f1, const FitnessValue& f2) {
    if (f1.feasible != f2.feasible) return f1.feasible ? 1 : -1;
    if (f1.feasible) {
        if (f1.theta_degrees != f2.theta_degrees) return f1.theta_degrees > f2.theta_degrees ? 1 : -1;
        if (f1.d_score != f2.d_score) return f1.d_score > f2.d_score ? 1 : -1;
        return 0;
    }
    // infeasible: higher D keeps a gradient back toward feasibility
    if (f1.d_score != f2.d_score) return f1.d_score > f2.d_score ? 1 : -1;
    return 0;
}

std::size_t best_index(const std::vector<FitnessValue>& fitnesses) {
    if (fitnesses.empty()) throw ValidationError("best_index on empty fitness list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < fitnesses.size(); ++i) {
        if (better(fitnesses[i], fitnesses[best])) best = i;
    }
    return best;
}

std::size_t tournament_select(const std::vector<FitnessValue>& fitnesses,
                              std::size_t tournament_size, Rng& rng) {
    std::size_t n = fitnesses.size();
    if (n == 0) throw ValidationError("tournament on an empty population");
    if (tournament_size == 0 || tournament_size > n)
        throw ValidationError("tournament size must be in [1, population size]");

    std::array<std::size_t, 64> small{};
    std::vector<std::size_t> large;
    std::size_t* drawn = small.data();
    if (tournament_size > small.size()) {
        large.resize(tournament_size);
        drawn = large.data();
    }
    // without replacement; rejection is cheap for the small sizes used here
    for (std::size_t i = 0; i < tournament_size; ++i) {
        std::size_t pick;
        bool fresh;
        do {
            pick = rng.index(n);
            fresh = true;
            for (std::size_t j = 0; j < i; ++j) {
                if (drawn[j] == pick) {
                    fresh = false;
                    break;
                }
            }
        } while (!fresh);
        drawn[i] = pick;
    }

    std::size_t winner = drawn[0];
    for (std::size_t i = 1; i < tournament_size; ++i) {
        int c = compare(fitnesses[drawn[i]], fitnesses[winner]);
        if (c > 0 || (c == 0 && drawn[i] < winner)) winner = drawn[i];
    }
    return winner;
}

}  // namespace evosample
