#pragma once

#include <cstddef>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/rng.hpp"

namespace evosample {

// One interpolated point plus the minority rows it was generated between.
struct SmoteSample {
    Instance point;
    std::size_t base_row;
    std::size_t neighbor_row;
};

// Classic linear-interpolation oversampling: pick a minority instance, pick
// one of its k nearest minority neighbors, emit a uniform point on the open
// segment between them. Requires |Min| >= 2 and 1 <= k <= |Min| - 1.
std::vector<SmoteSample> smote_samples(const Dataset& train, std::size_t k,
                                       std::size_t n_to_generate, Rng& rng);

// train plus n_to_generate interpolated rows labeled Minority.
Dataset smote(const Dataset& train, std::size_t k, std::size_t n_to_generate, Rng& rng);

}  // namespace evosample
