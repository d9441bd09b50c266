#include <doctest.h>

#include "evosample/dataset.hpp"
#include "test_util.hpp"

using namespace evosample;

namespace {

const char* kKeelSample =
    "@relation toy\n"
    "@attribute f1 real [0.0, 5.0]\n"
    "@attribute f2 real [0.0, 5.0]\n"
    "@attribute Class {negative, positive}\n"
    "@data\n"
    "1.0, 2.0, negative\n"
    "2.0, 3.0, negative\n"
    "3.0, 1.0, negative\n"
    "4.0, 4.0, positive\n";

}  // namespace

TEST_CASE("parse_keel maps the rarer class to Minority") {
    Dataset d = parse_keel(kKeelSample);
    CHECK(d.size() == 4);
    CHECK(d.feature_count() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"f1", "f2"});
    CHECK(d.minority_name == "positive");
    CHECK(d.majority_name == "negative");
    CHECK(d.count(ClassLabel::Minority) == 1);
    CHECK(d.labels[3] == ClassLabel::Minority);
    CHECK(d.instances[2] == Instance{3.0, 1.0});
}

TEST_CASE("parse_keel rejects missing values with the line number") {
    std::string text =
        "@relation toy\n@attribute a real\n@attribute c {x,y}\n@data\n1.0,x\n?,y\n";
    try {
        parse_keel(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 6);
    }
}

TEST_CASE("parse_keel rejects non-numeric features and single-class data") {
    CHECK_THROWS_AS(
        parse_keel("@relation t\n@attribute a real\n@attribute c {x,y}\n@data\nfoo,x\n1,y\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_keel("@relation t\n@attribute a real\n@attribute c {x,y}\n@data\n1,x\n2,x\n"),
        ValidationError);
    CHECK_THROWS_AS(parse_keel("@relation t\n@attribute a real\n@attribute c {x,y}\n1,x\n"),
                    ParseError);  // data row before @data
}

TEST_CASE("class attribute declaration order does not matter") {
    // derived check: only observed frequencies decide the minority role
    std::string first =
        "@relation t\n@attribute a real\n@attribute c {pos, neg}\n@data\n"
        "1,neg\n2,neg\n3,neg\n4,neg\n5,pos\n6,pos\n";
    std::string second =
        "@relation t\n@attribute a real\n@attribute c {neg, pos}\n@data\n"
        "1,neg\n2,neg\n3,neg\n4,neg\n5,pos\n6,pos\n";
    Dataset a = parse_keel(first);
    Dataset b = parse_keel(second);
    CHECK(same_content(a, b));
    CHECK(a.minority_name == b.minority_name);
    CHECK(a.minority_name == "pos");
}

TEST_CASE("equal class counts break ties lexicographically") {
    std::string text = "@relation t\n@attribute a real\n@attribute c {b,a}\n@data\n1,b\n2,a\n";
    Dataset d = parse_keel(text);
    CHECK(d.minority_name == "a");
    CHECK(d.majority_name == "b");
}

TEST_CASE("parse_csv basics and label column selection") {
    Dataset d = parse_csv("f1,f2,class\n1,2,neg\n3,4,neg\n5,6,pos\n");
    CHECK(d.feature_count() == 2);
    CHECK(d.size() == 3);
    CHECK(d.minority_name == "pos");

    Dataset by_name = parse_csv("class,f1,f2\nneg,1,2\nneg,3,4\npos,5,6\n", "class");
    CHECK(same_content(d, by_name));

    Dataset by_index = parse_csv("class,f1,f2\nneg,1,2\nneg,3,4\npos,5,6\n", "0");
    CHECK(same_content(d, by_index));

    CHECK_THROWS_AS(parse_csv("f1,f2,class\n1,2,neg\n", "3"), ParseError);   // index == columns
    CHECK_THROWS_AS(parse_csv("f1,f2,class\n1,2,neg\n", "nope"), ParseError);
    CHECK_THROWS_AS(parse_csv("f1,f2,class\n1,2\n"), ParseError);            // ragged
    CHECK_THROWS_AS(parse_csv("f1,f2,class\n1,x,neg\n2,2,pos\n"), ParseError);
}

TEST_CASE("csv and keel parsers agree on the same content") {
    std::string csv = "f1,f2,class\n1,2,negative\n2,3,negative\n3,1,negative\n4,4,positive\n";
    Dataset from_csv = parse_csv(csv);
    Dataset from_keel = parse_keel(kKeelSample);
    CHECK(same_content(from_csv, from_keel));
}

TEST_CASE("write_csv round-trips") {
    Dataset d = parse_keel(kKeelSample);
    Dataset back = parse_csv(write_csv(d));
    CHECK(same_content(d, back));

    SUBCASE("awkward doubles survive the round trip exactly") {
        Rng rng(99);
        std::vector<Instance> rows;
        std::vector<ClassLabel> labels;
        for (int i = 0; i < 40; ++i) {
            rows.push_back({rng.range(-1e6, 1e6), rng.open01() * 1e-7, -rng.open01()});
            labels.push_back(i < 30 ? ClassLabel::Majority : ClassLabel::Minority);
        }
        Dataset fuzz = testutil::dataset_of(std::move(rows), std::move(labels));
        Dataset round = parse_csv(write_csv(fuzz));
        REQUIRE(round.size() == fuzz.size());
        for (std::size_t i = 0; i < fuzz.size(); ++i) CHECK(round.instances[i] == fuzz.instances[i]);
        CHECK(same_content(fuzz, round));
    }

    SUBCASE("no features is an error") {
        Dataset empty;
        empty.instances = {{}, {}};
        empty.labels = {ClassLabel::Majority, ClassLabel::Minority};
        CHECK_THROWS_AS(write_csv(empty), ValidationError);
    }
}

TEST_CASE("stratified_split keeps per-class proportions") {
    Dataset d = testutil::two_gaussians(100, 10, 3, 7);
    Rng rng(11);
    auto [train, test] = stratified_split(d, 0.7, rng);
    CHECK(train.count(ClassLabel::Majority) == 70);
    CHECK(train.count(ClassLabel::Minority) == 7);
    CHECK(test.count(ClassLabel::Majority) == 30);
    CHECK(test.count(ClassLabel::Minority) == 3);
    CHECK(train.size() + test.size() == d.size());

    SUBCASE("union is the original multiset") {
        std::vector<Instance> all = train.instances;
        all.insert(all.end(), test.instances.begin(), test.instances.end());
        std::sort(all.begin(), all.end());
        std::vector<Instance> orig = d.instances;
        std::sort(orig.begin(), orig.end());
        CHECK(all == orig);
    }
}

TEST_CASE("stratified_split edge cases") {
    Dataset four = testutil::dataset_of({{0.0}, {1.0}, {2.0}, {3.0}},
                                        {ClassLabel::Majority, ClassLabel::Majority,
                                         ClassLabel::Minority, ClassLabel::Minority});
    Rng rng(3);
    auto [train, test] = stratified_split(four, 0.5, rng);
    CHECK(train.count(ClassLabel::Majority) == 1);
    CHECK(train.count(ClassLabel::Minority) == 1);
    CHECK(test.count(ClassLabel::Majority) == 1);
    CHECK(test.count(ClassLabel::Minority) == 1);

    Rng a(5);
    Rng b(5);
    auto [t1, s1] = stratified_split(four, 0.5, a);
    auto [t2, s2] = stratified_split(four, 0.5, b);
    CHECK(same_content(t1, t2));
    CHECK(same_content(s1, s2));

    Dataset tiny = testutil::dataset_of(
        {{0.0}, {1.0}, {2.0}},
        {ClassLabel::Majority, ClassLabel::Majority, ClassLabel::Minority});
    Rng c(1);
    CHECK_THROWS_AS(stratified_split(tiny, 0.7, c), ValidationError);
}

TEST_CASE("class_partition is exhaustive and order preserving") {
    Dataset d = testutil::dataset_of(
        {{0.0}, {1.0}, {2.0}},
        {ClassLabel::Majority, ClassLabel::Minority, ClassLabel::Majority});
    auto [maj, min] = class_partition(d);
    CHECK(maj == std::vector<std::size_t>{0, 2});
    CHECK(min == std::vector<std::size_t>{1});

    SUBCASE("all-minority input still partitions") {
        Dataset m = testutil::dataset_of({{0.0}, {1.0}},
                                         {ClassLabel::Minority, ClassLabel::Minority});
        auto [mj, mn] = class_partition(m);
        CHECK(mj.empty());
        CHECK(mn == std::vector<std::size_t>{0, 1});
    }

    SUBCASE("sizes always sum to the dataset size") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Dataset f = testutil::random_dataset(1 + seed * 7 % 50 + 2, 3, seed);
            auto [mj, mn] = class_partition(f);
            CHECK(mj.size() + mn.size() == f.size());
        }
    }
}

TEST_CASE("min-max scaler maps features to the unit box") {
    Dataset d = testutil::two_gaussians(30, 5, 4, 21);
    Dataset scaled = MinMaxScaler::fit(d).transform(d);
    for (const auto& row : scaled.instances) {
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}
