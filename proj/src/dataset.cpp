#include "evosample/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace evosample {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_finite_double(const std::string& token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) return false;
    return std::isfinite(out);
}

// RFC-style cell splitting: double-quoted cells may contain commas, "" escapes
// a quote. Good enough for numeric data plus occasional quoted headers.
std::vector<std::string> split_cells(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote", line_no);
    cells.push_back(trim(cur));
    return cells;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

std::size_t Dataset::count(ClassLabel l) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

double Dataset::imbalance_ratio() const {
    std::size_t min_n = count(ClassLabel::Minority);
    if (min_n == 0) throw ValidationError("imbalance ratio undefined: no minority instances");
    return static_cast<double>(count(ClassLabel::Majority)) / static_cast<double>(min_n);
}

void Dataset::push_row(Instance features, ClassLabel label) {
    instances.push_back(std::move(features));
    labels.push_back(label);
}

bool same_content(const Dataset& a, const Dataset& b) {
    if (a.size() != b.size() || a.feature_names != b.feature_names) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.instances[i] != b.instances[i]) return false;
        if (a.label_name(a.labels[i]) != b.label_name(b.labels[i])) return false;
    }
    return true;
}

double euclidean(const Instance& a, const Instance& b) {
    if (a.size() != b.size()) throw ValidationError("dimension mismatch in distance");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

Dataset make_dataset(std::vector<Instance> rows, const std::vector<std::string>& row_labels,
                     std::vector<std::string> feature_names, std::string source) {
    if (rows.empty()) throw ValidationError("dataset has no rows");
    if (rows.size() != row_labels.size()) throw ValidationError("row/label count mismatch");

    std::map<std::string, std::size_t> counts;
    for (const auto& l : row_labels) ++counts[l];
    if (counts.size() < 2) throw ValidationError("single-class data: need both classes");
    if (counts.size() > 2) throw ValidationError("more than two classes; binary data required");

    auto it = counts.begin();
    auto [name_a, count_a] = *it;
    auto [name_b, count_b] = *std::next(it);
    // rarer class is Minority; counts equal -> the lexicographically first
    // name (name_a, map order) is Minority
    std::string minority = count_a <= count_b ? name_a : name_b;
    std::string majority = count_a <= count_b ? name_b : name_a;

    Dataset d;
    d.instances = std::move(rows);
    d.feature_names = std::move(feature_names);
    d.majority_name = majority;
    d.minority_name = minority;
    d.source = std::move(source);
    d.labels.reserve(row_labels.size());
    for (const auto& l : row_labels) {
        d.labels.push_back(l == minority ? ClassLabel::Minority : ClassLabel::Majority);
    }
    return d;
}

Dataset parse_keel(const std::string& text, std::string source) {
    std::vector<std::string> attr_names;
    std::vector<Instance> rows;
    std::vector<std::string> row_labels;
    bool in_data = false;
    bool saw_relation = false;

    auto lines = split_lines(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::size_t line_no = li + 1;
        std::string line = trim(lines[li]);
        if (line.empty() || line[0] == '%') continue;

        if (!in_data && line[0] == '@') {
            std::string low = lower(line);
            if (low.rfind("@relation", 0) == 0) {
                saw_relation = true;
            } else if (low.rfind("@attribute", 0) == 0) {
                std::string rest = trim(line.substr(10));
                if (rest.empty()) throw ParseError("@attribute without a name", line_no);
                std::size_t e = 0;
                while (e < rest.size() && !std::isspace(static_cast<unsigned char>(rest[e])) &&
                       rest[e] != '{' && rest[e] != '[')
                    ++e;
                attr_names.push_back(rest.substr(0, e));
            } else if (low.rfind("@inputs", 0) == 0 || low.rfind("@input", 0) == 0 ||
                       low.rfind("@outputs", 0) == 0 || low.rfind("@output", 0) == 0) {
                // informational; the last attribute is the class
            } else if (low.rfind("@data", 0) == 0) {
                if (!saw_relation) throw ParseError("@data before @relation", line_no);
                if (attr_names.size() < 2)
                    throw ParseError("need at least one feature attribute and a class attribute",
                                     line_no);
                in_data = true;
            } else {
                throw ParseError("unknown header keyword: " + line, line_no);
            }
            continue;
        }

        if (!in_data) throw ParseError("data row before @data section", line_no);

        auto cells = split_cells(line, line_no);
        if (cells.size() != attr_names.size())
            throw ParseError("row has " + std::to_string(cells.size()) + " values, expected " +
                                 std::to_string(attr_names.size()),
                             line_no);
        Instance features(cells.size() - 1);
        for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
            if (cells[c] == "?")
                throw ParseError("missing value '?' in feature '" + attr_names[c] + "'", line_no);
            if (!parse_finite_double(cells[c], features[c]))
                throw ParseError("non-numeric feature value '" + cells[c] + "'", line_no);
        }
        if (cells.back() == "?") throw ParseError("missing class value", line_no);
        rows.push_back(std::move(features));
        row_labels.push_back(cells.back());
    }

    if (!in_data) throw ParseError("no @data section");
    std::vector<std::string> feature_names(attr_names.begin(), attr_names.end() - 1);
    return make_dataset(std::move(rows), row_labels, std::move(feature_names), std::move(source));
}

Dataset parse_csv(const std::string& text, const std::string& label_column, std::string source) {
    auto lines = split_lines(text);
    std::size_t li = 0;
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li == lines.size()) throw ParseError("empty document: header row required");

    auto header = split_cells(trim(lines[li]), li + 1);
    if (header.size() < 2) throw ParseError("need at least one feature column and a label column", li + 1);

    std::size_t label_idx = header.size() - 1;
    if (!label_column.empty()) {
        auto hit = std::find(header.begin(), header.end(), label_column);
        if (hit != header.end()) {
            label_idx = static_cast<std::size_t>(hit - header.begin());
        } else if (std::all_of(label_column.begin(), label_column.end(),
                               [](unsigned char c) { return std::isdigit(c); })) {
            label_idx = std::stoul(label_column);
            if (label_idx >= header.size())
                throw ParseError("label column index " + label_column + " out of range (" +
                                 std::to_string(header.size()) + " columns)");
        } else {
            throw ParseError("unknown label column '" + label_column + "'");
        }
    }

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx) feature_names.push_back(header[c]);

    std::vector<Instance> rows;
    std::vector<std::string> row_labels;
    for (++li; li < lines.size(); ++li) {
        std::size_t line_no = li + 1;
        std::string line = trim(lines[li]);
        if (line.empty()) continue;
        auto cells = split_cells(line, line_no);
        if (cells.size() != header.size())
            throw ParseError("ragged row: " + std::to_string(cells.size()) + " values, expected " +
                                 std::to_string(header.size()),
                             line_no);
        Instance features;
        features.reserve(header.size() - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) continue;
            if (cells[c] == "?")
                throw ParseError("missing value '?' in column '" + header[c] + "'", line_no);
            double v;
            if (!parse_finite_double(cells[c], v))
                throw ParseError("non-numeric feature value '" + cells[c] + "'", line_no);
            features.push_back(v);
        }
        rows.push_back(std::move(features));
        row_labels.push_back(cells[label_idx]);
    }

    return make_dataset(std::move(rows), row_labels, std::move(feature_names), std::move(source));
}

std::string write_csv(const Dataset& d) {
    if (d.feature_count() == 0) throw ValidationError("cannot write a dataset with no features");
    std::string out;
    auto quote_if_needed = [](const std::string& name) {
        if (name.find_first_of(",\"\n") == std::string::npos) return name;
        std::string q = "\"";
        for (char c : name) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    };
    for (const auto& name : d.feature_names) {
        out += quote_if_needed(name);
        out += ',';
    }
    out += "class\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double v : d.instances[i]) {
            format_double(out, v);
            out += ',';
        }
        out += d.label_name(d.labels[i]);
        out += '\n';
    }
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double train_fraction, Rng& rng) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("train fraction must be in (0, 1)");
    auto [maj, min] = class_partition(d);
    if (maj.size() < 2 || min.size() < 2)
        throw ValidationError("both classes need at least 2 instances to split");

    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (auto* cls : {&maj, &min}) {
        std::vector<std::size_t> idx = *cls;
        rng.shuffle(idx);
        auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
        if (k == 0 || k == idx.size())
            throw ValidationError("class too small to appear in both splits");
        train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + static_cast<long>(k));
        test_rows.insert(test_rows.end(), idx.begin() + static_cast<long>(k), idx.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    auto take = [&](const std::vector<std::size_t>& rows) {
        Dataset out;
        out.feature_names = d.feature_names;
        out.majority_name = d.majority_name;
        out.minority_name = d.minority_name;
        out.source = d.source;
        for (std::size_t r : rows) out.push_row(d.instances[r], d.labels[r]);
        return out;
    };
    return {take(train_rows), take(test_rows)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> class_partition(const Dataset& d) {
    std::vector<std::size_t> maj;
    std::vector<std::size_t> min;
    for (std::size_t i = 0; i < d.size(); ++i) {
        (d.labels[i] == ClassLabel::Majority ? maj : min).push_back(i);
    }
    return {std::move(maj), std::move(min)};
}

std::vector<Instance> gather_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
    std::vector<Instance> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(d.instances[r]);
    return out;
}

MinMaxScaler MinMaxScaler::fit(const Dataset& d) {
    if (d.size() == 0) throw ValidationError("cannot fit scaler on empty dataset");
    MinMaxScaler s;
    s.mins = d.instances.front();
    s.maxs = d.instances.front();
    for (const auto& row : d.instances) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            s.mins[c] = std::min(s.mins[c], row[c]);
            s.maxs[c] = std::max(s.maxs[c], row[c]);
        }
    }
    return s;
}

Dataset MinMaxScaler::transform(const Dataset& d) const {
    if (d.feature_count() != mins.size()) throw ValidationError("scaler dimension mismatch");
    Dataset out = d;
    for (auto& row : out.instances) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            double span = maxs[c] - mins[c];
            row[c] = span > 0.0 ? (row[c] - mins[c]) / span : 0.0;
        }
    }
    return out;
}

}  // namespace evosample
