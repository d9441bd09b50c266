#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "evosample/errors.hpp"
#include "evosample/rng.hpp"

namespace evosample {

// One row of numeric feature values; length is fixed per dataset and every
// component is finite.
using Instance = std::vector<double>;

enum class ClassLabel { Majority, Minority };

// Binary-labeled feature matrix. The rarer class is always mapped to Minority
// at parse time; on equal counts the class whose name sorts lexicographically
// first becomes Minority.
struct Dataset {
    std::vector<Instance> instances;
    std::vector<ClassLabel> labels;
    std::vector<std::string> feature_names;
    std::string majority_name = "majority";
    std::string minority_name = "minority";
    std::string source;

    std::size_t size() const { return instances.size(); }
    std::size_t feature_count() const { return instances.empty() ? 0 : instances.front().size(); }
    const std::string& label_name(ClassLabel l) const {
        return l == ClassLabel::Majority ? majority_name : minority_name;
    }
    std::size_t count(ClassLabel l) const;
    // |Maj| / |Min|
    double imbalance_ratio() const;
    void push_row(Instance features, ClassLabel label);
};

// Feature matrix, feature names and per-row class names match; source and the
// Majority/Minority role assignment are ignored.
bool same_content(const Dataset& a, const Dataset& b);

double euclidean(const Instance& a, const Instance& b);

// Builds a Dataset from raw rows and label strings, applying the class-role
// normalization above. Exactly two distinct label strings are required.
Dataset make_dataset(std::vector<Instance> rows, const std::vector<std::string>& row_labels,
                     std::vector<std::string> feature_names, std::string source);

Dataset parse_keel(const std::string& text, std::string source = "");

// label_column: header name, or a 0-based column index given as digits, or
// empty for the last column.
Dataset parse_csv(const std::string& text, const std::string& label_column = "",
                  std::string source = "");

std::string write_csv(const Dataset& d);

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double train_fraction, Rng& rng);

// (majority row indices, minority row indices), original order preserved
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> class_partition(const Dataset& d);

std::vector<Instance> gather_rows(const Dataset& d, const std::vector<std::size_t>& rows);

// Per-feature min-max scaling to [0, 1]; constant features map to 0.
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;
    static MinMaxScaler fit(const Dataset& d);
    Dataset transform(const Dataset& d) const;
};

}  // namespace evosample
