#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/evaluation.hpp"
#include "evosample/granular_ball.hpp"
#include "evosample/multitask.hpp"
#include "evosample/undersample.hpp"

namespace evosample::pipeline {

enum class Method { Evosampling, Smote, None };
enum class InputFormat { Auto, Keel, Csv };

Method parse_method(const std::string& name);
const char* method_name(Method m);
InputFormat parse_format(const std::string& name);
const char* format_name(InputFormat f);

struct PipelineConfig {
    multitask::RunConfig run;
    std::string input_path;
    InputFormat format = InputFormat::Auto;
    std::string label_column;  // "" = last column
    Method method = Method::Evosampling;
    bool transfer_enabled = true;
    bool scale = false;
    std::string output_path;
    std::string report_path;
    std::string metrics_path;
    std::string log_path;
    std::size_t smote_k = 5;
    std::size_t knn_k = 5;
    double train_fraction = 0.7;
    int workers = 1;
    int verbosity = 0;

    void validate() const;
};

// Flat key=value config-file entries; '#' starts a comment. Unknown keys are
// rejected so typos fail loudly.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);
void load_config_text(PipelineConfig& cfg, const std::string& text);
void load_config_file(PipelineConfig& cfg, const std::string& path);
// The full effective configuration as config-file entries (reproducibility).
std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& cfg);

Dataset load_input(const PipelineConfig& cfg);

struct StageCounts {
    std::string stage;
    std::size_t majority = 0;
    std::size_t minority = 0;
};

struct ResampleOutcome {
    Dataset output;
    std::vector<StageCounts> stages;
    multitask::EvolveResult evolve;  // empty for smote/none
    gb::UndersampleReport undersample_report;
    double wall_ms = 0.0;
};

// method=none copies the input through; smote balances by interpolation;
// evosampling runs oversampling, ball generation and undersampling.
ResampleOutcome run_resample(const Dataset& input, const PipelineConfig& cfg);

struct EvaluateOutcome {
    double auc = 0.0;
    double g_mean = 0.0;
    ConfusionCounts confusion;
    std::size_t train_majority = 0;
    std::size_t train_minority = 0;
    std::size_t resampled_majority = 0;
    std::size_t resampled_minority = 0;
    std::size_t test_majority = 0;
    std::size_t test_minority = 0;
    double wall_ms = 0.0;
};

// Stratified split, resample the training side only, score the untouched test
// side with kNN. Throws PipelineError if the test split is ever modified.
EvaluateOutcome run_evaluate(const Dataset& input, const PipelineConfig& cfg);

struct AblateOutcome {
    multitask::EvolveResult with_kt;
    multitask::EvolveResult without_kt;
    std::size_t generations = 0;
    std::size_t task_count = 0;
};

// Runs evolve_all twice on identical seeds, transfer on and off.
AblateOutcome run_ablate(const Dataset& input, const PipelineConfig& cfg);

// Formatting helpers shared by the CLI and bindings; all line-delimited
// key=value text.
std::string format_report(const PipelineConfig& cfg, const std::vector<StageCounts>& stages,
                          double wall_ms, const std::vector<std::string>& warnings);
std::string metrics_csv_header();
std::string metrics_csv_row(const PipelineConfig& cfg, const EvaluateOutcome& out);
std::string format_metrics_text(const PipelineConfig& cfg, const EvaluateOutcome& out);
std::string format_convergence_log(const multitask::EvolveResult& result,
                                   const std::string& arm = "");
std::string format_ablate_log(const AblateOutcome& out);
std::string format_ball_dump(const gb::BallSet& balls, const Dataset& d);

// Stream ids for non-task randomness; task streams use ids [0, task count).
inline constexpr std::uint64_t kStreamSplit = (1ULL << 32) + 1;
inline constexpr std::uint64_t kStreamSmote = (1ULL << 32) + 2;
inline constexpr std::uint64_t kStreamBalls = (1ULL << 32) + 3;
inline constexpr std::uint64_t kStreamUndersample = (1ULL << 32) + 4;

}  // namespace evosample::pipeline
