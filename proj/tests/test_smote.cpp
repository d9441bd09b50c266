#include <doctest.h>

#include <algorithm>

#include "evosample/smote.hpp"
#include "test_util.hpp"

using namespace evosample;

TEST_CASE("smote points lie on the segment between their generating pair") {
    Dataset d = testutil::two_gaussians(40, 8, 3, 55);
    Rng rng(2);
    auto samples = smote_samples(d, 3, 10000, rng);
    REQUIRE(samples.size() == 10000);
    for (const auto& s : samples) {
        const Instance& xi = d.instances[s.base_row];
        const Instance& xj = d.instances[s.neighbor_row];
        CHECK(d.labels[s.base_row] == ClassLabel::Minority);
        CHECK(d.labels[s.neighbor_row] == ClassLabel::Minority);
        for (std::size_t c = 0; c < xi.size(); ++c) {
            CHECK(s.point[c] >= std::min(xi[c], xj[c]));
            CHECK(s.point[c] <= std::max(xi[c], xj[c]));
        }
    }
}

TEST_CASE("smote balances when asked for the full deficit") {
    Dataset d = testutil::two_gaussians(50, 10, 2, 66);
    Rng rng(3);
    Dataset out = smote(d, 5, 40, rng);
    CHECK(out.count(ClassLabel::Majority) == 50);
    CHECK(out.count(ClassLabel::Minority) == 50);
    CHECK(out.size() == d.size() + 40);
    // original rows are untouched
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(out.instances[i] == d.instances[i]);
}

TEST_CASE("smote is deterministic under the seed") {
    Dataset d = testutil::two_gaussians(20, 5, 2, 77);
    Rng r1(9);
    Rng r2(9);
    CHECK(same_content(smote(d, 3, 15, r1), smote(d, 3, 15, r2)));
}

TEST_CASE("smote preconditions") {
    Rng rng(1);
    Dataset one_min = testutil::dataset_of(
        {{0.0}, {1.0}, {2.0}},
        {ClassLabel::Majority, ClassLabel::Majority, ClassLabel::Minority});
    CHECK_THROWS_AS(smote(one_min, 1, 1, rng), ValidationError);

    Dataset d = testutil::two_gaussians(10, 4, 2, 3);
    CHECK_THROWS_AS(smote(d, 4, 1, rng), ValidationError);  // k > |Min| - 1
    CHECK_THROWS_AS(smote(d, 0, 1, rng), ValidationError);
    CHECK_NOTHROW(smote(d, 3, 1, rng));
}
