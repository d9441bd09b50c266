#include <doctest.h>

#include <cmath>

#include "evosample/fitness.hpp"
#include "test_util.hpp"

using namespace evosample;

TEST_CASE("triangle sides are the three pairwise distances") {
    Instance min_t{0.0, 0.0};
    Instance maj_t{3.0, 0.0};
    Instance synthetic{0.0, 4.0};
    Triangle t = triangle_sides(synthetic, maj_t, min_t);
    CHECK(t.a == doctest::Approx(4.0));
    CHECK(t.b == doctest::Approx(5.0));
    CHECK(t.c == doctest::Approx(3.0));

    Triangle clone_min = triangle_sides(min_t, maj_t, min_t);
    CHECK(clone_min.a == 0.0);
    CHECK(clone_min.b == clone_min.c);

    Triangle clone_maj = triangle_sides(maj_t, maj_t, min_t);
    CHECK(clone_maj.b == 0.0);
    CHECK(clone_maj.a == clone_maj.c);

    CHECK_THROWS_AS(triangle_sides({1.0}, maj_t, min_t), ValidationError);
}

TEST_CASE("distance score anchors") {
    CHECK(distance_score({0.0, 2.0, 2.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance_score({2.0, 0.0, 2.0}) == doctest::Approx(0.0).epsilon(1e-12));
    // a = b puts the exponent at 0.5, the feasibility threshold itself
    CHECK(distance_score({3.0, 3.0, 1.0}) ==
          doctest::Approx(0.62245933120185448).epsilon(1e-12));
    CHECK(feasibility_threshold() == doctest::Approx(0.62245933120185448).epsilon(1e-15));
    CHECK_THROWS_AS(distance_score({0.0, 0.0, 1.0}), ValidationError);
}

TEST_CASE("angle score anchors") {
    CHECK(angle_score({1.0, 2.0, 3.0}) == doctest::Approx(180.0).epsilon(1e-12));  // colinear
    CHECK(angle_score({2.0, 2.0, 2.0}) == doctest::Approx(60.0).epsilon(1e-12));   // equilateral
    CHECK(angle_score({3.0, 4.0, 5.0}) == doctest::Approx(90.0).epsilon(1e-12));   // right angle
    CHECK_THROWS_AS(angle_score({0.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("evaluate_fitness handles the degenerate placements") {
    Instance min_t{0.0, 0.0};
    Instance maj_t{2.0, 0.0};

    FitnessValue clone = evaluate_fitness(min_t, maj_t, min_t);
    CHECK(clone.d_score == doctest::Approx(1.0));
    CHECK(clone.feasible);
    CHECK(clone.theta_degrees == 0.0);

    FitnessValue midpoint = evaluate_fitness({1.0, 0.0}, maj_t, min_t);
    CHECK(midpoint.d_score == doctest::Approx(feasibility_threshold()).epsilon(1e-12));
    CHECK_FALSE(midpoint.feasible);  // strict inequality
    CHECK(midpoint.theta_degrees == doctest::Approx(180.0));

    FitnessValue both = evaluate_fitness(min_t, min_t, min_t);
    CHECK_FALSE(both.feasible);
    CHECK(both.d_score == 0.0);
}

TEST_CASE("compare is the two-stage selection order") {
    FitnessValue a{0.7, 90.0, true};
    FitnessValue b{0.65, 120.0, true};
    CHECK(compare(b, a) > 0);  // theta dominates among feasible

    FitnessValue c{0.8, 90.0, true};
    CHECK(compare(c, a) > 0);  // D breaks theta ties

    FitnessValue infeasible{0.99, 179.0, false};
    CHECK(compare(a, infeasible) > 0);  // any feasible beats any infeasible

    FitnessValue low{0.1, 0.0, false};
    CHECK(compare(infeasible, low) > 0);  // infeasible ranked by D
    CHECK(compare(a, a) == 0);
}

TEST_CASE("compare behaves as a total order on random fitness values") {
    Rng rng(17);
    auto random_fitness = [&] {
        return FitnessValue{rng.real01(), rng.range(0.0, 180.0), rng.chance(0.5)};
    };
    for (int i = 0; i < 2000; ++i) {
        FitnessValue x = random_fitness();
        FitnessValue y = random_fitness();
        FitnessValue z = random_fitness();
        CHECK(compare(x, y) == -compare(y, x));
        if (compare(x, y) >= 0 && compare(y, z) >= 0) CHECK(compare(x, z) >= 0);
    }
}

TEST_CASE("threshold equivalence: feasible iff a < b") {
    Rng rng(23);
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
        double a = rng.open01() * 10.0;
        double b = rng.open01() * 10.0;
        double gamma = rng.real01() * std::acos(-1.0);
        double c = std::sqrt(a * a + b * b - 2.0 * a * b * std::cos(gamma));
        FitnessValue f = {distance_score({a, b, c}), 0.0, false};
        f.feasible = f.d_score > feasibility_threshold();
        CHECK(f.feasible == (a < b));
        ++checked;
    }
    CHECK(checked == 100000);
}

TEST_CASE("distance score decreases as a/(a+b) grows") {
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
        double a1 = rng.open01();
        double a2 = a1 + rng.open01();
        // same a+b total, larger a
        double total = a2 + rng.open01();
        double d1 = distance_score({a1, total - a1, 1.0});
        double d2 = distance_score({a2, total - a2, 1.0});
        CHECK(d1 > d2);
    }
}

TEST_CASE("angle score is symmetric and scale invariant, and never NaN") {
    Rng rng(41);
    for (int i = 0; i < 5000; ++i) {
        double a = rng.open01() * 10.0;
        double b = rng.open01() * 10.0;
        double c = rng.real01() * 25.0;  // may violate the triangle inequality
        double theta = angle_score({a, b, c});
        CHECK(std::isfinite(theta));
        CHECK(theta >= 0.0);
        CHECK(theta <= 180.0);
        CHECK(angle_score({b, a, c}) == doctest::Approx(theta).epsilon(1e-12));
        double k = 1.0 + rng.real01() * 9.0;
        CHECK(angle_score({k * a, k * b, k * c}) == doctest::Approx(theta).epsilon(1e-9));
    }
}

TEST_CASE("tournament selection follows the two-stage rule") {
    std::vector<FitnessValue> pool = {
        {0.9, 10.0, false},  // high D but infeasible
        {0.63, 20.0, true},  // the only feasible entry
        {0.8, 170.0, false},
    };
    Rng rng(5);
    for (int i = 0; i < 50; ++i) CHECK(tournament_select(pool, 3, rng) == 1);

    SUBCASE("all infeasible: highest D wins") {
        std::vector<FitnessValue> infeasible = {
            {0.2, 0.0, false}, {0.6, 0.0, false}, {0.4, 0.0, false}};
        Rng r2(6);
        for (int i = 0; i < 50; ++i) CHECK(tournament_select(infeasible, 3, r2) == 1);
    }

    SUBCASE("tournament of the whole population returns the global best") {
        Rng r3(7);
        std::vector<FitnessValue> pop;
        for (int i = 0; i < 30; ++i)
            pop.push_back({r3.real01(), r3.range(0.0, 180.0), r3.chance(0.7)});
        std::size_t winner = tournament_select(pop, pop.size(), r3);
        for (const auto& f : pop) CHECK(compare(f, pop[winner]) <= 0);
    }

    SUBCASE("exact ties go to the lowest index") {
        std::vector<FitnessValue> tied = {
            {0.7, 90.0, true}, {0.7, 90.0, true}, {0.7, 90.0, true}};
        Rng r4(8);
        for (int i = 0; i < 20; ++i) CHECK(tournament_select(tied, 3, r4) == 0);
    }

    SUBCASE("preconditions") {
        Rng r5(9);
        CHECK_THROWS_AS(tournament_select({}, 1, r5), ValidationError);
        CHECK_THROWS_AS(tournament_select(pool, 4, r5), ValidationError);
    }
}
