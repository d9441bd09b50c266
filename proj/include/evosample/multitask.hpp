#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/gp.hpp"

namespace evosample::multitask {

// One instance-generation task: evolve a synthetic minority instance against
// a (Maj_t, Min_t) target pair.
struct Task {
    std::size_t id = 0;
    std::size_t maj_row = 0;  // training-set row of Maj_t
    std::size_t min_row = 0;  // training-set row of Min_t; doubles as the group key
    Instance maj_target;
    Instance min_target;
    std::optional<std::size_t> auxiliary_id;
};

// Tasks sharing the same Min_t.
struct TaskGroup {
    std::size_t min_target_key = 0;
    std::vector<std::size_t> member_task_ids;
};

struct RunConfig {
    std::size_t population_size_per_task = 30;
    std::size_t generations = 50;
    std::size_t tournament_size = 3;
    double rate_standard_crossover = 0.50;
    double rate_transfer_crossover = 0.30;
    double rate_mutation = 0.20;
    int max_depth = 10;
    double elite_fraction_for_transfer = 0.30;
    std::size_t auxiliary_update_period = 10;
    double gb_quality_threshold = 1.0;
    std::size_t gb_neighbors = 3;
    std::uint64_t master_seed = 0;

    void validate() const;  // operator rates sum to 1; counts positive
};

struct GenerationRecord {
    std::size_t task_id = 0;
    std::size_t generation = 0;  // 1-based
    double best_d = 0.0;
    double best_theta = 0.0;
    bool feasible = false;
    std::optional<std::size_t> auxiliary_id;
};

struct EvolveResult {
    std::vector<Instance> synthetic;         // one per task, in task order
    std::vector<GenerationRecord> log;       // ordered by (generation, task)
    std::vector<std::string> warnings;       // tasks whose best never became feasible
};

// Componentwise mean of a nonempty instance set.
Instance class_center(const std::vector<Instance>& instances);

// Steps 1..3 of task construction: target majority instances are the
// n = |Maj| - |Min| nearest to the majority center, paired in rank order with
// the minority instances nearest the minority center (reused cyclically when
// the minority class is smaller than n). Already-balanced data yields an
// empty task list.
std::vector<Task> assign_tasks(const Dataset& train);

std::vector<TaskGroup> group_tasks(const std::vector<Task>& tasks);

// Nearest Maj_t within each group (ties by lowest task id); singleton groups
// fall back to the globally nearest Maj_t task. A lone task keeps no
// auxiliary.
void initial_auxiliary(std::vector<Task>& tasks, const std::vector<TaskGroup>& groups);

// Same nearest-neighbor rule over the tasks' current best phenotypes.
std::vector<std::optional<std::size_t>> update_auxiliary(
    const std::vector<Instance>& best_phenotypes, const std::vector<Task>& tasks,
    const std::vector<TaskGroup>& groups);

// Runs one GP population per task for cfg.generations generations with
// elitism of 1 and per-offspring operator probabilities; transfer crossover
// grafts from the auxiliary population's elite snapshot taken at the previous
// generation barrier. Deterministic under master_seed for any worker count.
EvolveResult evolve_all(const Dataset& train, const RunConfig& cfg, bool transfer_enabled = true,
                        int workers = 1);

// Appends evolve_all's synthetic instances as minority rows: |Maj| == |Min|
// afterwards.
Dataset oversample(const Dataset& train, const RunConfig& cfg, bool transfer_enabled = true,
                   int workers = 1, EvolveResult* result_out = nullptr);

}  // namespace evosample::multitask
