#pragma once

#include <cstddef>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/rng.hpp"

namespace evosample {

// Side lengths of the triangle formed by a synthetic instance and its task
// targets: a = synthetic..Min_t, b = synthetic..Maj_t, c = Min_t..Maj_t.
struct Triangle {
    double a;
    double b;
    double c;
};

// Lexicographic fitness: feasible individuals rank by angle then distance
// score, infeasible ones by distance score alone.
struct FitnessValue {
    double d_score = 0.0;        // in [0, 1]
    double theta_degrees = 0.0;  // in [0, 180]
    bool feasible = false;       // d_score strictly above feasibility_threshold()

    static FitnessValue worst() { return {}; }
};

// (e - e^0.5) / (e - 1); d_score above it iff the synthetic instance is
// strictly closer to Min_t than to Maj_t.
double feasibility_threshold();

Triangle triangle_sides(const Instance& synthetic, const Instance& maj_t, const Instance& min_t);

// D = (e - e^(a/(a+b))) / (e - 1), strictly decreasing in a/(a+b).
// Throws ValidationError when a + b = 0.
double distance_score(const Triangle& t);

// Angle between sides a and b via the law of cosines, in degrees. The cosine
// argument is clamped to [-1, 1] so floating-point triangle violations never
// produce NaN. Throws ValidationError when a = 0 or b = 0.
double angle_score(const Triangle& t);

// Composes the two scores; degenerate triangles (a = 0 or b = 0 gives
// theta = 0, a + b = 0 gives the worst fitness) are mapped instead of thrown.
FitnessValue evaluate_fitness(const Instance& synthetic, const Instance& maj_t,
                              const Instance& min_t);

// Total order: -1 when f1 ranks below f2, 0 on ties, +1 when above.
int compare(const FitnessValue& f1, const FitnessValue& f2);
inline bool better(const FitnessValue& f1, const FitnessValue& f2) { return compare(f1, f2) > 0; }

// Index of the best element under compare; equal-fitness ties go to the
// lowest index.
std::size_t best_index(const std::vector<FitnessValue>& fitnesses);

// Draws tournament_size distinct indices uniformly and returns the winner
// under compare, ties by lowest index.
std::size_t tournament_select(const std::vector<FitnessValue>& fitnesses,
                              std::size_t tournament_size, Rng& rng);

}  // namespace evosample
