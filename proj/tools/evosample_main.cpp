#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "evosample/pipeline.hpp"

namespace {

using evosample::pipeline::PipelineConfig;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPipeline = 3;

struct FlagValues {
    std::string config_path;
    std::string input;
    std::string format;
    std::string label_column;
    std::string method;
    std::string output;
    std::string report;
    std::string metrics;
    std::string log;
    std::uint64_t seed = 0;
    std::size_t population = 0;
    std::size_t generations = 0;
    std::size_t tournament = 0;
    double rate_standard = 0;
    double rate_transfer = 0;
    double rate_mutation = 0;
    int max_depth = 0;
    double elite_fraction = 0;
    std::size_t aux_period = 0;
    double gb_threshold = 0;
    std::size_t gb_neighbors = 0;
    std::size_t smote_k = 0;
    std::size_t knn_k = 0;
    double train_fraction = 0;
    int workers = 0;
    bool no_transfer = false;
    bool scale = false;
    int verbosity = 0;
};

void add_common_options(CLI::App* sub, FlagValues& f) {
    sub->add_option("-c,--config", f.config_path, "Flat key=value config file; flags override it");
    sub->add_option("-i,--input", f.input, "Input dataset (.dat KEEL or .csv)");
    sub->add_option("--format", f.format, "Input format: auto|keel|csv");
    sub->add_option("--label-column", f.label_column, "CSV label column name or 0-based index");
    sub->add_option("-s,--seed", f.seed, "Master seed (env EVOSAMPLE_SEED supplies the default)");
    sub->add_option("--workers", f.workers, "Worker threads for task evolution");
    sub->add_flag("--scale", f.scale, "Min-max scale features before resampling");
    sub->add_option("--population-size", f.population, "GP population size per task");
    sub->add_option("--generations", f.generations, "GP generations");
    sub->add_option("--tournament-size", f.tournament, "Tournament size");
    sub->add_option("--rate-standard-crossover", f.rate_standard, "Standard crossover rate");
    sub->add_option("--rate-transfer-crossover", f.rate_transfer, "Transfer crossover rate");
    sub->add_option("--rate-mutation", f.rate_mutation, "Mutation rate");
    sub->add_option("--max-depth", f.max_depth, "Maximum GP tree depth");
    sub->add_option("--elite-fraction", f.elite_fraction, "Elite fraction offered for transfer");
    sub->add_option("--aux-update-period", f.aux_period, "Generations between auxiliary updates");
    sub->add_option("--gb-threshold", f.gb_threshold, "Granular-ball quality threshold");
    sub->add_option("--gb-neighbors", f.gb_neighbors, "Neighbor balls for undersampling");
    sub->add_option("--smote-k", f.smote_k, "SMOTE neighbor count");
    sub->add_option("--knn-k", f.knn_k, "kNN neighbor count for evaluation");
    sub->add_option("--train-fraction", f.train_fraction, "Training fraction for evaluate");
    sub->add_flag("--no-transfer", f.no_transfer, "Disable knowledge transfer (ablation arm)");
    sub->add_flag("-v,--verbose", f.verbosity, "Verbose output");
}

// precedence: builtin defaults < EVOSAMPLE_SEED < config file < flags
PipelineConfig build_config(const CLI::App* sub, const FlagValues& f) {
    PipelineConfig cfg;
    if (const char* env_seed = std::getenv("EVOSAMPLE_SEED")) {
        try {
            cfg.run.master_seed = std::stoull(env_seed);
        } catch (const std::exception&) {
            throw evosample::ConfigError("EVOSAMPLE_SEED is not an integer");
        }
    }
    if (!f.config_path.empty()) evosample::pipeline::load_config_file(cfg, f.config_path);

    auto set = [&](const char* flag) { return sub->count(flag) > 0; };
    if (set("--input")) cfg.input_path = f.input;
    if (set("--format")) cfg.format = evosample::pipeline::parse_format(f.format);
    if (set("--label-column")) cfg.label_column = f.label_column;
    if (set("--seed")) cfg.run.master_seed = f.seed;
    if (set("--workers")) cfg.workers = f.workers;
    if (set("--scale")) cfg.scale = true;
    if (set("--population-size")) cfg.run.population_size_per_task = f.population;
    if (set("--generations")) cfg.run.generations = f.generations;
    if (set("--tournament-size")) cfg.run.tournament_size = f.tournament;
    if (set("--rate-standard-crossover")) cfg.run.rate_standard_crossover = f.rate_standard;
    if (set("--rate-transfer-crossover")) cfg.run.rate_transfer_crossover = f.rate_transfer;
    if (set("--rate-mutation")) cfg.run.rate_mutation = f.rate_mutation;
    if (set("--max-depth")) cfg.run.max_depth = f.max_depth;
    if (set("--elite-fraction")) cfg.run.elite_fraction_for_transfer = f.elite_fraction;
    if (set("--aux-update-period")) cfg.run.auxiliary_update_period = f.aux_period;
    if (set("--gb-threshold")) cfg.run.gb_quality_threshold = f.gb_threshold;
    if (set("--gb-neighbors")) cfg.run.gb_neighbors = f.gb_neighbors;
    if (set("--smote-k")) cfg.smote_k = f.smote_k;
    if (set("--knn-k")) cfg.knn_k = f.knn_k;
    if (set("--train-fraction")) cfg.train_fraction = f.train_fraction;
    if (set("--no-transfer")) cfg.transfer_enabled = false;
    if (set("--verbose")) cfg.verbosity = f.verbosity;
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw evosample::PipelineError("cannot write file: " + path);
    out << text;
}

void append_metrics_row(const std::string& path, const std::string& row) {
    bool need_header = true;
    {
        std::ifstream probe(path, std::ios::binary);
        need_header = !probe || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw evosample::PipelineError("cannot write file: " + path);
    if (need_header) out << evosample::pipeline::metrics_csv_header();
    out << row;
}

int cmd_resample(const PipelineConfig& cfg) {
    cfg.validate();
    if (cfg.output_path.empty()) throw evosample::ConfigError("resample requires an output path");
    evosample::Dataset input = evosample::pipeline::load_input(cfg);
    auto outcome = evosample::pipeline::run_resample(input, cfg);
    write_text(cfg.output_path, evosample::write_csv(outcome.output));

    std::string report = evosample::pipeline::format_report(cfg, outcome.stages, outcome.wall_ms,
                                                            outcome.evolve.warnings);
    if (!cfg.report_path.empty()) write_text(cfg.report_path, report);
    if (!cfg.log_path.empty())
        write_text(cfg.log_path, evosample::pipeline::format_convergence_log(outcome.evolve));
    if (cfg.verbosity > 0) std::cout << report;
    return 0;
}

int cmd_evaluate(const PipelineConfig& cfg) {
    cfg.validate();
    evosample::Dataset input = evosample::pipeline::load_input(cfg);
    auto outcome = evosample::pipeline::run_evaluate(input, cfg);
    std::cout << evosample::pipeline::format_metrics_text(cfg, outcome);
    if (!cfg.metrics_path.empty())
        append_metrics_row(cfg.metrics_path, evosample::pipeline::metrics_csv_row(cfg, outcome));
    return 0;
}

int cmd_ablate(const PipelineConfig& cfg) {
    cfg.validate();
    evosample::Dataset input = evosample::pipeline::load_input(cfg);
    auto outcome = evosample::pipeline::run_ablate(input, cfg);
    std::string log = evosample::pipeline::format_ablate_log(outcome);
    if (!cfg.log_path.empty()) {
        write_text(cfg.log_path, log);
    } else {
        std::cout << log;
    }
    return 0;
}

int cmd_gb_inspect(const PipelineConfig& cfg) {
    cfg.validate();
    evosample::Dataset input = evosample::pipeline::load_input(cfg);
    evosample::Rng rng =
        evosample::Rng::derive(cfg.run.master_seed, evosample::pipeline::kStreamBalls);
    auto balls = evosample::gb::generate_balls(input, cfg.run.gb_quality_threshold, rng);
    std::string dump = evosample::pipeline::format_ball_dump(balls, input);
    if (!cfg.output_path.empty()) {
        write_text(cfg.output_path, dump);
    } else {
        std::cout << dump;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid resampling for binary imbalanced data: multi-task GP oversampling with "
                 "knowledge transfer plus granular-ball undersampling"};
    app.require_subcommand(1);

    auto* resample = app.add_subcommand("resample", "Rebalance a dataset and write it as CSV");
    auto* evaluate =
        app.add_subcommand("evaluate", "Split, resample the training side, score with kNN");
    auto* ablate =
        app.add_subcommand("ablate", "Run evolution with and without transfer, log convergence");
    auto* gb_inspect = app.add_subcommand("gb-inspect", "Dump the granular-ball decomposition");

    // one value block per subcommand: CLI11 runs result callbacks for every
    // subcommand, so shared targets would be clobbered by the unparsed ones
    std::array<CLI::App*, 4> subs{resample, evaluate, ablate, gb_inspect};
    std::array<FlagValues, 4> values;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        add_common_options(subs[i], values[i]);
        subs[i]->add_option("--method", values[i].method,
                            "Resampling method: evosampling|smote|none");
        subs[i]->add_option("-o,--output", values[i].output, "Output path");
        subs[i]->add_option("--report", values[i].report, "Run report path");
        subs[i]->add_option("--metrics", values[i].metrics,
                            "Metrics CSV path (appends one row per run)");
        subs[i]->add_option("--log", values[i].log, "Convergence log path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const FlagValues& flags =
        values[static_cast<std::size_t>(std::find(subs.begin(), subs.end(), sub) - subs.begin())];
    try {
        PipelineConfig cfg = build_config(sub, flags);
        if (sub->count("--method")) cfg.method = evosample::pipeline::parse_method(flags.method);
        if (sub->count("--output")) cfg.output_path = flags.output;
        if (sub->count("--report")) cfg.report_path = flags.report;
        if (sub->count("--metrics")) cfg.metrics_path = flags.metrics;
        if (sub->count("--log")) cfg.log_path = flags.log;

        if (sub == resample) return cmd_resample(cfg);
        if (sub == evaluate) return cmd_evaluate(cfg);
        if (sub == ablate) return cmd_ablate(cfg);
        return cmd_gb_inspect(cfg);
    } catch (const evosample::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const evosample::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const evosample::ValidationError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    }
}
