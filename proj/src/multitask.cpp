#include "evosample/multitask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace evosample::multitask {

namespace {

// Contiguous-chunk parallel for; chunk boundaries do not affect results
// because each task owns its random stream.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    std::size_t w = workers > 1 ? std::min<std::size_t>(static_cast<std::size_t>(workers), n) : 1;
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(w);
    std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
        std::size_t begin = t * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

// Rows sorted by ascending distance to a reference point, ties by row index.
std::vector<std::size_t> rows_by_distance(const Dataset& d, const std::vector<std::size_t>& rows,
                                          const Instance& reference) {
    std::vector<std::size_t> order = rows;
    std::vector<double> dist(d.size(), 0.0);
    for (std::size_t r : rows) dist[r] = euclidean(d.instances[r], reference);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
    });
    return order;
}

// Nearest other member by point distance, ties by lowest task id.
std::optional<std::size_t> nearest_task(std::size_t self, const std::vector<std::size_t>& candidates,
                                        const std::vector<Instance>& points) {
    std::optional<std::size_t> best;
    double best_dist = 0.0;
    for (std::size_t cand : candidates) {
        if (cand == self) continue;
        double dist = euclidean(points[self], points[cand]);
        if (!best || dist < best_dist || (dist == best_dist && cand < *best)) {
            best = cand;
            best_dist = dist;
        }
    }
    return best;
}

FitnessValue fitness_of(const gp::Program& program, const std::vector<Instance>& pool,
                        const Task& task) {
    try {
        return evaluate_fitness(gp::evaluate(program, pool), task.maj_target, task.min_target);
    } catch (const EvalError&) {
        return FitnessValue::worst();  // overflow maps to infeasible worst
    }
}

void evaluate_population(gp::Population& pop, const std::vector<Instance>& pool, const Task& task) {
    pop.fitnesses.clear();
    pop.fitnesses.reserve(pop.programs.size());
    for (const auto& program : pop.programs) pop.fitnesses.push_back(fitness_of(program, pool, task));
}

std::vector<gp::Program> elite_snapshot(const gp::Population& pop, double fraction) {
    std::size_t count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pop.programs.size()))));
    count = std::min(count, pop.programs.size());
    std::vector<std::size_t> order(pop.programs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return compare(pop.fitnesses[a], pop.fitnesses[b]) > 0;
    });
    std::vector<gp::Program> elites;
    elites.reserve(count);
    for (std::size_t i = 0; i < count; ++i) elites.push_back(pop.programs[order[i]]);
    return elites;
}

}  // namespace

void RunConfig::validate() const {
    if (population_size_per_task < 2) throw ConfigError("population size must be at least 2");
    if (generations == 0) throw ConfigError("generations must be positive");
    if (tournament_size == 0 || tournament_size > population_size_per_task)
        throw ConfigError("tournament size must be in [1, population size]");
    if (max_depth < 2) throw ConfigError("max depth must be at least 2");
    if (auxiliary_update_period == 0) throw ConfigError("auxiliary update period must be positive");
    if (gb_neighbors == 0) throw ConfigError("gb neighbor count must be positive");
    if (!(gb_quality_threshold > 0.5 && gb_quality_threshold <= 1.0))
        throw ConfigError("gb quality threshold must be in (0.5, 1]");
    if (rate_standard_crossover < 0 || rate_transfer_crossover < 0 || rate_mutation < 0)
        throw ConfigError("operator rates must be nonnegative");
    double sum = rate_standard_crossover + rate_transfer_crossover + rate_mutation;
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("operator rates must sum to 1");
    if (!(elite_fraction_for_transfer > 0.0 && elite_fraction_for_transfer <= 1.0))
        throw ConfigError("elite fraction must be in (0, 1]");
}

Instance class_center(const std::vector<Instance>& instances) {
    if (instances.empty()) throw ValidationError("class center of an empty set");
    Instance center(instances.front().size(), 0.0);
    for (const auto& x : instances) {
        for (std::size_t c = 0; c < center.size(); ++c) center[c] += x[c];
    }
    for (double& v : center) v /= static_cast<double>(instances.size());
    return center;
}

std::vector<Task> assign_tasks(const Dataset& train) {
    auto [maj_rows, min_rows] = class_partition(train);
    if (maj_rows.empty() || min_rows.empty())
        throw ValidationError("task assignment needs both classes");
    if (maj_rows.size() <= min_rows.size()) return {};  // already balanced

    std::size_t n = maj_rows.size() - min_rows.size();
    Instance maj_center = class_center(gather_rows(train, maj_rows));
    Instance min_center = class_center(gather_rows(train, min_rows));

    auto maj_order = rows_by_distance(train, maj_rows, maj_center);
    auto min_order = rows_by_distance(train, min_rows, min_center);

    std::vector<Task> tasks;
    tasks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Task t;
        t.id = i;
        t.maj_row = maj_order[i];
        // rank-order pairing; minority targets are reused cyclically when the
        // minority class has fewer than n instances
        t.min_row = min_order[i % min_order.size()];
        t.maj_target = train.instances[t.maj_row];
        t.min_target = train.instances[t.min_row];
        tasks.push_back(std::move(t));
    }
    return tasks;
}

std::vector<TaskGroup> group_tasks(const std::vector<Task>& tasks) {
    std::vector<TaskGroup> groups;
    for (const auto& t : tasks) {
        auto hit = std::find_if(groups.begin(), groups.end(),
                                [&](const TaskGroup& g) { return g.min_target_key == t.min_row; });
        if (hit == groups.end()) {
            groups.push_back({t.min_row, {t.id}});
        } else {
            hit->member_task_ids.push_back(t.id);
        }
    }
    return groups;
}

void initial_auxiliary(std::vector<Task>& tasks, const std::vector<TaskGroup>& groups) {
    if (tasks.size() < 2) return;
    std::vector<Instance> maj_points(tasks.size());
    for (const auto& t : tasks) maj_points[t.id] = t.maj_target;

    std::vector<std::size_t> all_ids(tasks.size());
    std::iota(all_ids.begin(), all_ids.end(), 0);

    for (const auto& g : groups) {
        const auto& members = g.member_task_ids.size() >= 2 ? g.member_task_ids : all_ids;
        for (std::size_t id : g.member_task_ids) {
            tasks[id].auxiliary_id = nearest_task(id, members, maj_points);
        }
    }
}

std::vector<std::optional<std::size_t>> update_auxiliary(
    const std::vector<Instance>& best_phenotypes, const std::vector<Task>& tasks,
    const std::vector<TaskGroup>& groups) {
    std::vector<std::optional<std::size_t>> aux(tasks.size());
    if (tasks.size() < 2) return aux;
    if (best_phenotypes.size() != tasks.size())
        throw ValidationError("need one best phenotype per task");

    std::vector<std::size_t> all_ids(tasks.size());
    std::iota(all_ids.begin(), all_ids.end(), 0);

    for (const auto& g : groups) {
        const auto& members = g.member_task_ids.size() >= 2 ? g.member_task_ids : all_ids;
        for (std::size_t id : g.member_task_ids) {
            aux[id] = nearest_task(id, members, best_phenotypes);
        }
    }
    return aux;
}

EvolveResult evolve_all(const Dataset& train, const RunConfig& cfg, bool transfer_enabled,
                        int workers) {
    cfg.validate();
    EvolveResult result;
    std::vector<Task> tasks = assign_tasks(train);
    if (tasks.empty()) return result;

    auto groups = group_tasks(tasks);
    initial_auxiliary(tasks, groups);

    auto [maj_rows, min_rows] = class_partition(train);
    const std::vector<Instance> pool = gather_rows(train, min_rows);

    const std::size_t n_tasks = tasks.size();
    std::vector<Rng> streams;
    streams.reserve(n_tasks);
    for (std::size_t t = 0; t < n_tasks; ++t)
        streams.push_back(Rng::derive(cfg.master_seed, static_cast<std::uint64_t>(t)));

    std::vector<gp::Population> pops(n_tasks);
    parallel_for(n_tasks, workers, [&](std::size_t t) {
        pops[t] = gp::init_ramped_half_and_half(cfg.population_size_per_task, cfg.max_depth,
                                                pool.size(), streams[t]);
        evaluate_population(pops[t], pool, tasks[t]);
    });

    auto best_of = [&](std::size_t t) { return best_index(pops[t].fitnesses); };

    auto best_phenotype = [&](std::size_t t) -> Instance {
        try {
            return gp::evaluate(pops[t].programs[best_of(t)], pool);
        } catch (const EvalError&) {
            return tasks[t].min_target;  // keep aux distances finite
        }
    };

    std::vector<std::vector<gp::Program>> elite_snapshots(n_tasks);
    std::vector<gp::Population> next(n_tasks);

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        // transfer reads the previous generation's state; snapshots make the
        // result independent of breeding order
        parallel_for(n_tasks, workers, [&](std::size_t t) {
            elite_snapshots[t] = elite_snapshot(pops[t], cfg.elite_fraction_for_transfer);
        });

        parallel_for(n_tasks, workers, [&](std::size_t t) {
            Rng& rng = streams[t];
            const gp::Population& cur = pops[t];
            gp::Population bred;
            bred.programs.reserve(cfg.population_size_per_task);
            bred.fitnesses.reserve(cfg.population_size_per_task);

            std::size_t elite = best_of(t);
            bred.programs.push_back(cur.programs[elite]);
            bred.fitnesses.push_back(cur.fitnesses[elite]);

            auto push = [&](gp::Program&& child) {
                bred.fitnesses.push_back(fitness_of(child, pool, tasks[t]));
                bred.programs.push_back(std::move(child));
            };
            auto select_parent = [&] {
                return tournament_select(cur.fitnesses, cfg.tournament_size, rng);
            };

            while (bred.programs.size() < cfg.population_size_per_task) {
                double r = rng.real01();
                if (r < cfg.rate_standard_crossover) {
                    const gp::Program& p1 = cur.programs[select_parent()];
                    const gp::Program& p2 = cur.programs[select_parent()];
                    auto [c1, c2] = gp::crossover_standard(p1, p2, cfg.max_depth, rng);
                    push(std::move(c1));
                    if (bred.programs.size() < cfg.population_size_per_task) push(std::move(c2));
                } else if (r < cfg.rate_standard_crossover + cfg.rate_transfer_crossover) {
                    const gp::Program& parent = cur.programs[select_parent()];
                    const auto& aux = tasks[t].auxiliary_id;
                    if (transfer_enabled && aux.has_value()) {
                        const auto& elites = elite_snapshots[*aux];
                        const gp::Program& partner = elites[rng.index(elites.size())];
                        push(gp::crossover_transfer(parent, partner, cfg.max_depth, rng));
                    } else {
                        // no auxiliary population: degrade to standard
                        // crossover, keeping one child
                        const gp::Program& p2 = cur.programs[select_parent()];
                        auto [c1, c2] = gp::crossover_standard(parent, p2, cfg.max_depth, rng);
                        push(std::move(c1));
                    }
                } else {
                    const gp::Program& parent = cur.programs[select_parent()];
                    push(gp::mutate(parent, cfg.max_depth, pool.size(), rng));
                }
            }
            next[t] = std::move(bred);
        });

        for (std::size_t t = 0; t < n_tasks; ++t) pops[t] = std::move(next[t]);

        for (std::size_t t = 0; t < n_tasks; ++t) {
            const FitnessValue& best = pops[t].fitnesses[best_of(t)];
            result.log.push_back({tasks[t].id, gen, best.d_score, best.theta_degrees, best.feasible,
                                  tasks[t].auxiliary_id});
        }

        if (gen % cfg.auxiliary_update_period == 0 && gen < cfg.generations) {
            std::vector<Instance> phenotypes(n_tasks);
            parallel_for(n_tasks, workers, [&](std::size_t t) { phenotypes[t] = best_phenotype(t); });
            auto aux = update_auxiliary(phenotypes, tasks, groups);
            for (std::size_t t = 0; t < n_tasks; ++t) tasks[t].auxiliary_id = aux[t];
        }
    }

    result.synthetic.resize(n_tasks);
    for (std::size_t t = 0; t < n_tasks; ++t) {
        std::size_t best = best_of(t);
        if (!pops[t].fitnesses[best].feasible) {
            result.warnings.push_back("task " + std::to_string(t) +
                                      ": best individual never became feasible");
        }
        result.synthetic[t] = best_phenotype(t);
    }
    return result;
}

Dataset oversample(const Dataset& train, const RunConfig& cfg, bool transfer_enabled, int workers,
                   EvolveResult* result_out) {
    EvolveResult res = evolve_all(train, cfg, transfer_enabled, workers);
    Dataset out = train;
    for (const auto& synthetic : res.synthetic) out.push_row(synthetic, ClassLabel::Minority);
    if (result_out) *result_out = std::move(res);
    return out;
}

}  // namespace evosample::multitask
