#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evosample/pipeline.hpp"
#include "evosample/smote.hpp"

namespace py = pybind11;
using namespace evosample;

namespace {

Dataset dataset_from_rows(std::vector<Instance> rows, const std::vector<std::string>& labels,
                          std::vector<std::string> feature_names) {
    if (feature_names.empty() && !rows.empty()) {
        for (std::size_t i = 0; i < rows.front().size(); ++i)
            feature_names.push_back("f" + std::to_string(i));
    }
    return make_dataset(std::move(rows), labels, std::move(feature_names), "python");
}

std::vector<std::string> row_label_names(const Dataset& d) {
    std::vector<std::string> out;
    out.reserve(d.size());
    for (auto l : d.labels) out.push_back(d.label_name(l));
    return out;
}

pipeline::PipelineConfig default_config() {
    pipeline::PipelineConfig cfg;
    cfg.input_path = "<memory>";
    return cfg;
}

py::dict evaluate_dict(const pipeline::EvaluateOutcome& out) {
    py::dict d;
    d["auc"] = out.auc;
    d["g_mean"] = out.g_mean;
    d["true_pos"] = out.confusion.true_pos;
    d["false_pos"] = out.confusion.false_pos;
    d["true_neg"] = out.confusion.true_neg;
    d["false_neg"] = out.confusion.false_neg;
    d["train_majority"] = out.train_majority;
    d["train_minority"] = out.train_minority;
    d["resampled_majority"] = out.resampled_majority;
    d["resampled_minority"] = out.resampled_minority;
    d["test_majority"] = out.test_majority;
    d["test_minority"] = out.test_minority;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hybrid resampling for binary imbalanced data: multi-task GP oversampling with "
              "knowledge transfer plus granular-ball undersampling";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&dataset_from_rows), py::arg("rows"), py::arg("labels"),
             py::arg("feature_names") = std::vector<std::string>{},
             "Build a dataset from feature rows and per-row label strings; the rarer "
             "label becomes the minority class")
        .def_property_readonly("rows", [](const Dataset& d) { return d.instances; })
        .def_property_readonly("labels", &row_label_names)
        .def_readonly("feature_names", &Dataset::feature_names)
        .def_readonly("majority_name", &Dataset::majority_name)
        .def_readonly("minority_name", &Dataset::minority_name)
        .def_readonly("source", &Dataset::source)
        .def("__len__", &Dataset::size)
        .def_property_readonly("feature_count", &Dataset::feature_count)
        .def_property_readonly("majority_count",
                               [](const Dataset& d) { return d.count(ClassLabel::Majority); })
        .def_property_readonly("minority_count",
                               [](const Dataset& d) { return d.count(ClassLabel::Minority); })
        .def("imbalance_ratio", &Dataset::imbalance_ratio)
        .def("to_csv", &write_csv)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return same_content(a, b); });

    py::class_<pipeline::PipelineConfig>(m, "Config")
        .def(py::init(&default_config))
        .def_property(
            "method",
            [](const pipeline::PipelineConfig& c) { return pipeline::method_name(c.method); },
            [](pipeline::PipelineConfig& c, const std::string& v) {
                c.method = pipeline::parse_method(v);
            })
        .def_property(
            "seed", [](const pipeline::PipelineConfig& c) { return c.run.master_seed; },
            [](pipeline::PipelineConfig& c, std::uint64_t v) { c.run.master_seed = v; })
        .def_property(
            "population_size",
            [](const pipeline::PipelineConfig& c) { return c.run.population_size_per_task; },
            [](pipeline::PipelineConfig& c, std::size_t v) { c.run.population_size_per_task = v; })
        .def_property(
            "generations", [](const pipeline::PipelineConfig& c) { return c.run.generations; },
            [](pipeline::PipelineConfig& c, std::size_t v) { c.run.generations = v; })
        .def_property(
            "tournament_size",
            [](const pipeline::PipelineConfig& c) { return c.run.tournament_size; },
            [](pipeline::PipelineConfig& c, std::size_t v) { c.run.tournament_size = v; })
        .def_property(
            "max_depth", [](const pipeline::PipelineConfig& c) { return c.run.max_depth; },
            [](pipeline::PipelineConfig& c, int v) { c.run.max_depth = v; })
        .def_property(
            "gb_quality_threshold",
            [](const pipeline::PipelineConfig& c) { return c.run.gb_quality_threshold; },
            [](pipeline::PipelineConfig& c, double v) { c.run.gb_quality_threshold = v; })
        .def_property(
            "gb_neighbors", [](const pipeline::PipelineConfig& c) { return c.run.gb_neighbors; },
            [](pipeline::PipelineConfig& c, std::size_t v) { c.run.gb_neighbors = v; })
        .def_property(
            "aux_update_period",
            [](const pipeline::PipelineConfig& c) { return c.run.auxiliary_update_period; },
            [](pipeline::PipelineConfig& c, std::size_t v) { c.run.auxiliary_update_period = v; })
        .def_readwrite("transfer_enabled", &pipeline::PipelineConfig::transfer_enabled)
        .def_readwrite("scale", &pipeline::PipelineConfig::scale)
        .def_readwrite("smote_k", &pipeline::PipelineConfig::smote_k)
        .def_readwrite("knn_k", &pipeline::PipelineConfig::knn_k)
        .def_readwrite("train_fraction", &pipeline::PipelineConfig::train_fraction)
        .def_readwrite("workers", &pipeline::PipelineConfig::workers);

    m.def("parse_keel", &parse_keel, py::arg("text"), py::arg("source") = "");
    m.def("parse_csv", &parse_csv, py::arg("text"), py::arg("label_column") = "",
          py::arg("source") = "");
    m.def("write_csv", &write_csv);

    m.def(
        "stratified_split",
        [](const Dataset& d, double train_fraction, std::uint64_t seed) {
            Rng rng = Rng::derive(seed, pipeline::kStreamSplit);
            return stratified_split(d, train_fraction, rng);
        },
        py::arg("dataset"), py::arg("train_fraction") = 0.7, py::arg("seed") = 0);

    m.def("class_partition", &class_partition);

    m.def(
        "smote",
        [](const Dataset& d, std::size_t k, std::size_t n, std::uint64_t seed) {
            Rng rng = Rng::derive(seed, pipeline::kStreamSmote);
            return smote(d, k, n, rng);
        },
        py::arg("dataset"), py::arg("k") = 5, py::arg("n_to_generate") = 0, py::arg("seed") = 0);

    m.def(
        "resample",
        [](const Dataset& d, const pipeline::PipelineConfig& cfg) {
            py::gil_scoped_release release;
            return pipeline::run_resample(d, cfg).output;
        },
        py::arg("dataset"), py::arg("config"),
        "Run the configured resampling pipeline and return the rebalanced dataset");

    m.def(
        "evaluate",
        [](const Dataset& d, const pipeline::PipelineConfig& cfg) {
            pipeline::EvaluateOutcome out;
            {
                py::gil_scoped_release release;
                out = pipeline::run_evaluate(d, cfg);
            }
            return evaluate_dict(out);
        },
        py::arg("dataset"), py::arg("config"),
        "Stratified split, resample the training side, kNN-score the untouched test side");

    m.def(
        "generate_balls",
        [](const Dataset& d, double threshold, std::uint64_t seed) {
            Rng rng = Rng::derive(seed, pipeline::kStreamBalls);
            auto balls = gb::generate_balls(d, threshold, rng);
            py::list out;
            for (const auto& b : balls.balls) {
                py::dict e;
                e["id"] = b.creation_order;
                e["size"] = b.member_rows.size();
                e["label"] = d.label_name(b.label);
                e["radius"] = b.radius;
                e["quality"] = b.quality;
                e["members"] = b.member_rows;
                out.append(std::move(e));
            }
            return out;
        },
        py::arg("dataset"), py::arg("threshold") = 1.0, py::arg("seed") = 0);

    m.def(
        "knn_scores",
        [](const Dataset& train, const Dataset& test, std::size_t k) {
            auto preds = knn_classify(train, test, k);
            std::vector<double> scores;
            scores.reserve(preds.size());
            for (const auto& p : preds) scores.push_back(p.score);
            return scores;
        },
        py::arg("train"), py::arg("test"), py::arg("k") = 5,
        "Minority-fraction score per test row");

    m.def(
        "auc",
        [](const std::vector<double>& scores, const std::vector<bool>& is_minority) {
            if (scores.size() != is_minority.size())
                throw ValidationError("scores and labels differ in length");
            std::vector<ScoredPrediction> preds(scores.size());
            for (std::size_t i = 0; i < scores.size(); ++i)
                preds[i] = {scores[i],
                            is_minority[i] ? ClassLabel::Minority : ClassLabel::Majority};
            return auc(preds);
        },
        py::arg("scores"), py::arg("is_minority"));

    m.def(
        "g_mean",
        [](std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
            return g_mean(ConfusionCounts{tp, fp, tn, fn});
        },
        py::arg("true_pos"), py::arg("false_pos"), py::arg("true_neg"), py::arg("false_neg"));

    m.def("feasibility_threshold", &feasibility_threshold);
}
