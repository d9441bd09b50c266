#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "evosample/multitask.hpp"
#include "test_util.hpp"

using namespace evosample;
using namespace evosample::multitask;

namespace {

// tasks with prescribed Maj_t coordinates, all sharing one Min_t key
std::vector<Task> tasks_at(const std::vector<double>& maj_positions) {
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < maj_positions.size(); ++i) {
        Task t;
        t.id = i;
        t.maj_row = i;
        t.min_row = 100;
        t.maj_target = {maj_positions[i]};
        t.min_target = {50.0};
        tasks.push_back(std::move(t));
    }
    return tasks;
}

}  // namespace

TEST_CASE("class_center is the componentwise mean") {
    CHECK(class_center({{0.0, 0.0}, {2.0, 2.0}}) == Instance{1.0, 1.0});
    CHECK(class_center({{3.0, -1.0}}) == Instance{3.0, -1.0});

    SUBCASE("matches an independent summation within 1e-12") {
        Rng rng(5);
        std::vector<Instance> pts;
        for (int i = 0; i < 10; ++i) pts.push_back({rng.range(-9, 9), rng.range(-9, 9)});
        Instance center = class_center(pts);
        for (std::size_t c = 0; c < 2; ++c) {
            double sum = 0.0;
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) sum += (*it)[c];  // reverse order
            CHECK(center[c] == doctest::Approx(sum / 10.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("assign_tasks builds n = |Maj| - |Min| target pairs") {
    SUBCASE("cyclic minority reuse when |Min| < n") {
        Dataset d = testutil::two_gaussians(20, 2, 2, 31);
        auto tasks = assign_tasks(d);
        REQUIRE(tasks.size() == 18);
        std::map<std::size_t, int> uses;
        for (const auto& t : tasks) ++uses[t.min_row];
        REQUIRE(uses.size() == 2);
        for (const auto& [row, count] : uses) CHECK(count == 9);
    }

    SUBCASE("single task pairs the instances nearest both centers") {
        Dataset d = testutil::dataset_of(
            {{0.0, 0.0}, {1.0, 0.0}, {4.0, 0.0}, {-3.0, 0.0}, {2.0, 0.0},
             {10.0, 0.0}, {11.0, 0.0}, {13.0, 0.0}, {10.5, 0.0}},
            {ClassLabel::Majority, ClassLabel::Majority, ClassLabel::Majority,
             ClassLabel::Majority, ClassLabel::Majority, ClassLabel::Minority,
             ClassLabel::Minority, ClassLabel::Minority, ClassLabel::Minority});
        // Maj center = 0.8 -> nearest majority is row 1 (x=1)
        // Min center = 11.125 -> nearest minority is row 6 (x=11)
        auto tasks = assign_tasks(d);
        REQUIRE(tasks.size() == 1);
        CHECK(tasks[0].maj_row == 1);
        CHECK(tasks[0].min_row == 6);
    }

    SUBCASE("balanced data yields no tasks") {
        Dataset d = testutil::dataset_of({{0.0}, {1.0}},
                                         {ClassLabel::Majority, ClassLabel::Minority});
        CHECK(assign_tasks(d).empty());
    }

    SUBCASE("majority targets are distinct rows") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Dataset d = testutil::random_dataset(40, 3, seed, 0.25);
            auto tasks = assign_tasks(d);
            std::set<std::size_t> rows;
            for (const auto& t : tasks) rows.insert(t.maj_row);
            CHECK(rows.size() == tasks.size());
        }
    }
}

TEST_CASE("group_tasks partitions by the shared minority target") {
    Dataset d = testutil::two_gaussians(20, 2, 2, 31);
    auto tasks = assign_tasks(d);
    auto groups = group_tasks(tasks);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].member_task_ids.size() == 9);
    CHECK(groups[1].member_task_ids.size() == 9);

    std::size_t total = 0;
    for (const auto& g : groups) {
        total += g.member_task_ids.size();
        for (std::size_t id : g.member_task_ids) CHECK(tasks[id].min_row == g.min_target_key);
    }
    CHECK(total == tasks.size());
}

TEST_CASE("initial auxiliaries are the nearest majority targets within a group") {
    SUBCASE("a group of two is mutual") {
        auto tasks = tasks_at({0.0, 1.0});
        auto groups = group_tasks(tasks);
        initial_auxiliary(tasks, groups);
        CHECK(tasks[0].auxiliary_id == 1);
        CHECK(tasks[1].auxiliary_id == 0);
    }

    SUBCASE("colinear targets at 0, 1, 3") {
        auto tasks = tasks_at({0.0, 1.0, 3.0});
        auto groups = group_tasks(tasks);
        initial_auxiliary(tasks, groups);
        CHECK(tasks[0].auxiliary_id == 1);
        CHECK(tasks[1].auxiliary_id == 0);
        CHECK(tasks[2].auxiliary_id == 1);
    }

    SUBCASE("auxiliary is never the task itself") {
        Dataset d = testutil::random_dataset(50, 3, 77, 0.2);
        auto tasks = assign_tasks(d);
        auto groups = group_tasks(tasks);
        initial_auxiliary(tasks, groups);
        for (const auto& t : tasks) {
            REQUIRE(t.auxiliary_id.has_value());
            CHECK(*t.auxiliary_id != t.id);
        }
    }

    SUBCASE("singleton groups fall back to the globally nearest majority target") {
        auto tasks = tasks_at({0.0, 0.5, 9.0});
        tasks[2].min_row = 200;  // own group
        auto groups = group_tasks(tasks);
        REQUIRE(groups.size() == 2);
        initial_auxiliary(tasks, groups);
        CHECK(tasks[2].auxiliary_id == 1);  // nearest over all tasks
    }

    SUBCASE("a lone task has no auxiliary") {
        auto tasks = tasks_at({4.0});
        auto groups = group_tasks(tasks);
        initial_auxiliary(tasks, groups);
        CHECK_FALSE(tasks[0].auxiliary_id.has_value());
    }
}

TEST_CASE("update_auxiliary follows the best phenotypes") {
    auto tasks = tasks_at({0.0, 1.0, 3.0});
    auto groups = group_tasks(tasks);

    SUBCASE("identical phenotypes tie-break to the lowest id") {
        std::vector<Instance> same = {{5.0}, {5.0}, {5.0}};
        auto aux = update_auxiliary(same, tasks, groups);
        CHECK(aux[0] == 1);
        CHECK(aux[1] == 0);
        CHECK(aux[2] == 0);
    }

    SUBCASE("phenotype distances can invert the initial assignment") {
        initial_auxiliary(tasks, groups);
        CHECK(tasks[2].auxiliary_id == 1);
        // make task 2's phenotype closest to task 0's
        std::vector<Instance> phen = {{10.0}, {99.0}, {10.5}};
        auto aux = update_auxiliary(phen, tasks, groups);
        CHECK(aux[2] == 0);
        CHECK(aux[0] == 2);
    }

    SUBCASE("updates stay within the group when the group has two or more members") {
        auto mixed = tasks_at({0.0, 1.0, 2.0, 30.0});
        mixed[3].min_row = 200;  // singleton group
        auto gs = group_tasks(mixed);
        std::vector<Instance> phen = {{0.0}, {1.0}, {2.0}, {2.1}};
        auto aux = update_auxiliary(phen, mixed, gs);
        std::set<std::size_t> group0(gs[0].member_task_ids.begin(), gs[0].member_task_ids.end());
        for (std::size_t id : gs[0].member_task_ids) {
            REQUIRE(aux[id].has_value());
            CHECK(group0.count(*aux[id]) == 1);
        }
        CHECK(aux[3] == 2);  // singleton may leave its group
    }
}

TEST_CASE("evolve_all produces one synthetic instance per task") {
    Dataset d = testutil::two_gaussians(25, 5, 3, 71);
    RunConfig cfg;
    cfg.population_size_per_task = 12;
    cfg.generations = 8;
    cfg.auxiliary_update_period = 3;
    cfg.master_seed = 9;

    EvolveResult res = evolve_all(d, cfg);
    CHECK(res.synthetic.size() == 20);
    for (const auto& s : res.synthetic) {
        REQUIRE(s.size() == 3);
        for (double v : s) CHECK(std::isfinite(v));
    }

    SUBCASE("appending the output balances the classes") {
        Dataset grown = oversample(d, cfg);
        CHECK(grown.count(ClassLabel::Majority) == grown.count(ClassLabel::Minority));
    }

    SUBCASE("per-task log has one record per generation") {
        std::map<std::size_t, std::size_t> per_task;
        for (const auto& r : res.log) ++per_task[r.task_id];
        CHECK(per_task.size() == 20);
        for (const auto& [task, count] : per_task) CHECK(count == cfg.generations);
    }

    SUBCASE("best fitness never regresses under the selection order") {
        std::map<std::size_t, FitnessValue> last;
        for (const auto& r : res.log) {
            FitnessValue f{r.best_d, r.best_theta, r.feasible};
            auto it = last.find(r.task_id);
            if (it != last.end()) CHECK(compare(f, it->second) >= 0);
            last[r.task_id] = f;
        }
    }
}

TEST_CASE("evolve_all is deterministic across runs and worker counts") {
    Dataset d = testutil::two_gaussians(30, 6, 2, 41);
    RunConfig cfg;
    cfg.population_size_per_task = 10;
    cfg.generations = 6;
    cfg.master_seed = 123;

    EvolveResult serial = evolve_all(d, cfg, true, 1);
    EvolveResult parallel = evolve_all(d, cfg, true, 4);
    EvolveResult repeat = evolve_all(d, cfg, true, 2);

    CHECK(serial.synthetic == parallel.synthetic);
    CHECK(serial.synthetic == repeat.synthetic);
    REQUIRE(serial.log.size() == parallel.log.size());
    for (std::size_t i = 0; i < serial.log.size(); ++i) {
        CHECK(serial.log[i].best_d == parallel.log[i].best_d);
        CHECK(serial.log[i].best_theta == parallel.log[i].best_theta);
    }

    SUBCASE("different seeds change the output") {
        RunConfig other = cfg;
        other.master_seed = 124;
        CHECK(evolve_all(d, other).synthetic != serial.synthetic);
    }
}

TEST_CASE("RunConfig validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    RunConfig bad_rates = cfg;
    bad_rates.rate_mutation = 0.3;
    CHECK_THROWS_AS(bad_rates.validate(), ConfigError);
    RunConfig zero_gen = cfg;
    zero_gen.generations = 0;
    CHECK_THROWS_AS(zero_gen.validate(), ConfigError);
    RunConfig big_tournament = cfg;
    big_tournament.tournament_size = 99;
    CHECK_THROWS_AS(big_tournament.validate(), ConfigError);
}
