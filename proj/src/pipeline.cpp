#include "evosample/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evosample/smote.hpp"

namespace evosample::pipeline {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + value);
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

StageCounts stage_counts(const std::string& stage, const Dataset& d) {
    return {stage, d.count(ClassLabel::Majority), d.count(ClassLabel::Minority)};
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "evosampling") return Method::Evosampling;
    if (name == "smote") return Method::Smote;
    if (name == "none") return Method::None;
    throw ConfigError("unknown method '" + name + "' (expected evosampling, smote or none)");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Evosampling: return "evosampling";
        case Method::Smote: return "smote";
        case Method::None: return "none";
    }
    return "?";
}

InputFormat parse_format(const std::string& name) {
    if (name == "auto") return InputFormat::Auto;
    if (name == "keel" || name == "dat") return InputFormat::Keel;
    if (name == "csv") return InputFormat::Csv;
    throw ConfigError("unknown input format '" + name + "' (expected auto, keel or csv)");
}

const char* format_name(InputFormat f) {
    switch (f) {
        case InputFormat::Auto: return "auto";
        case InputFormat::Keel: return "keel";
        case InputFormat::Csv: return "csv";
    }
    return "?";
}

void PipelineConfig::validate() const {
    run.validate();
    if (input_path.empty()) throw ConfigError("input path is required");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must be in (0, 1)");
    if (smote_k == 0) throw ConfigError("smote_k must be positive");
    if (knn_k == 0) throw ConfigError("knn_k must be positive");
    if (workers < 1) throw ConfigError("workers must be at least 1");
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input_path = value;
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "label_column") cfg.label_column = value;
    else if (key == "method") cfg.method = parse_method(value);
    else if (key == "transfer_enabled") cfg.transfer_enabled = parse_bool(key, value);
    else if (key == "scale") cfg.scale = parse_bool(key, value);
    else if (key == "output") cfg.output_path = value;
    else if (key == "report") cfg.report_path = value;
    else if (key == "metrics") cfg.metrics_path = value;
    else if (key == "log") cfg.log_path = value;
    else if (key == "population_size") cfg.run.population_size_per_task = parse_count(key, value);
    else if (key == "generations") cfg.run.generations = parse_count(key, value);
    else if (key == "tournament_size") cfg.run.tournament_size = parse_count(key, value);
    else if (key == "rate_standard_crossover") cfg.run.rate_standard_crossover = parse_real(key, value);
    else if (key == "rate_transfer_crossover") cfg.run.rate_transfer_crossover = parse_real(key, value);
    else if (key == "rate_mutation") cfg.run.rate_mutation = parse_real(key, value);
    else if (key == "max_depth") cfg.run.max_depth = static_cast<int>(parse_count(key, value));
    else if (key == "elite_fraction") cfg.run.elite_fraction_for_transfer = parse_real(key, value);
    else if (key == "aux_update_period") cfg.run.auxiliary_update_period = parse_count(key, value);
    else if (key == "gb_quality_threshold") cfg.run.gb_quality_threshold = parse_real(key, value);
    else if (key == "gb_neighbors") cfg.run.gb_neighbors = parse_count(key, value);
    else if (key == "seed") cfg.run.master_seed = parse_count(key, value);
    else if (key == "smote_k") cfg.smote_k = parse_count(key, value);
    else if (key == "knn_k") cfg.knn_k = parse_count(key, value);
    else if (key == "train_fraction") cfg.train_fraction = parse_real(key, value);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_count(key, value));
    else if (key == "verbosity") cfg.verbosity = static_cast<int>(parse_count(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_text(PipelineConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    load_config_text(cfg, buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& cfg) {
    return {
        {"input", cfg.input_path},
        {"format", format_name(cfg.format)},
        {"label_column", cfg.label_column},
        {"method", method_name(cfg.method)},
        {"transfer_enabled", cfg.transfer_enabled ? "true" : "false"},
        {"scale", cfg.scale ? "true" : "false"},
        {"output", cfg.output_path},
        {"report", cfg.report_path},
        {"metrics", cfg.metrics_path},
        {"log", cfg.log_path},
        {"population_size", std::to_string(cfg.run.population_size_per_task)},
        {"generations", std::to_string(cfg.run.generations)},
        {"tournament_size", std::to_string(cfg.run.tournament_size)},
        {"rate_standard_crossover", fmt_real(cfg.run.rate_standard_crossover)},
        {"rate_transfer_crossover", fmt_real(cfg.run.rate_transfer_crossover)},
        {"rate_mutation", fmt_real(cfg.run.rate_mutation)},
        {"max_depth", std::to_string(cfg.run.max_depth)},
        {"elite_fraction", fmt_real(cfg.run.elite_fraction_for_transfer)},
        {"aux_update_period", std::to_string(cfg.run.auxiliary_update_period)},
        {"gb_quality_threshold", fmt_real(cfg.run.gb_quality_threshold)},
        {"gb_neighbors", std::to_string(cfg.run.gb_neighbors)},
        {"seed", std::to_string(cfg.run.master_seed)},
        {"smote_k", std::to_string(cfg.smote_k)},
        {"knn_k", std::to_string(cfg.knn_k)},
        {"train_fraction", fmt_real(cfg.train_fraction)},
        {"workers", std::to_string(cfg.workers)},
        {"verbosity", std::to_string(cfg.verbosity)},
    };
}

Dataset load_input(const PipelineConfig& cfg) {
    if (cfg.input_path.empty()) throw ConfigError("input path is required");
    InputFormat fmt = cfg.format;
    if (fmt == InputFormat::Auto) {
        auto dot = cfg.input_path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : cfg.input_path.substr(dot + 1);
        fmt = (ext == "dat" || ext == "arff" || ext == "keel") ? InputFormat::Keel : InputFormat::Csv;
    }
    std::string text = read_file(cfg.input_path);
    return fmt == InputFormat::Keel ? parse_keel(text, cfg.input_path)
                                    : parse_csv(text, cfg.label_column, cfg.input_path);
}

ResampleOutcome run_resample(const Dataset& input, const PipelineConfig& cfg) {
    cfg.run.validate();
    auto start = std::chrono::steady_clock::now();
    ResampleOutcome out;

    Dataset work = cfg.scale ? MinMaxScaler::fit(input).transform(input) : input;
    out.stages.push_back(stage_counts("input", work));

    switch (cfg.method) {
        case Method::None:
            out.output = std::move(work);
            break;
        case Method::Smote: {
            auto [maj_rows, min_rows] = class_partition(work);
            std::size_t n = maj_rows.size() > min_rows.size() ? maj_rows.size() - min_rows.size() : 0;
            if (n == 0) {
                out.output = std::move(work);
            } else {
                Rng rng = Rng::derive(cfg.run.master_seed, kStreamSmote);
                out.output = smote(work, cfg.smote_k, n, rng);
            }
            out.stages.push_back(stage_counts("oversampled", out.output));
            break;
        }
        case Method::Evosampling: {
            Dataset oversampled;
            try {
                oversampled = multitask::oversample(work, cfg.run, cfg.transfer_enabled,
                                                    cfg.workers, &out.evolve);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw PipelineError(std::string("oversample: ") + e.what());
            }
            out.stages.push_back(stage_counts("oversampled", oversampled));

            gb::BallSet balls;
            try {
                Rng rng = Rng::derive(cfg.run.master_seed, kStreamBalls);
                balls = gb::generate_balls(oversampled, cfg.run.gb_quality_threshold, rng);
            } catch (const Error& e) {
                throw PipelineError(std::string("granular-ball generation: ") + e.what());
            }

            try {
                Rng rng = Rng::derive(cfg.run.master_seed, kStreamUndersample);
                out.output = gb::undersample(balls, oversampled, cfg.run.gb_neighbors, rng,
                                             &out.undersample_report);
            } catch (const PipelineError&) {
                throw;
            } catch (const Error& e) {
                throw PipelineError(std::string("undersample: ") + e.what());
            }
            break;
        }
    }
    out.stages.push_back(stage_counts("final", out.output));
    out.wall_ms = elapsed_ms(start);
    return out;
}

EvaluateOutcome run_evaluate(const Dataset& input, const PipelineConfig& cfg) {
    cfg.run.validate();
    auto start = std::chrono::steady_clock::now();

    Rng split_rng = Rng::derive(cfg.run.master_seed, kStreamSplit);
    auto [train, test] = stratified_split(input, cfg.train_fraction, split_rng);

    if (cfg.scale) {
        // fit on the training split only; the test split is transformed, never fitted
        MinMaxScaler scaler = MinMaxScaler::fit(train);
        train = scaler.transform(train);
        test = scaler.transform(test);
    }

    const std::string test_before = write_csv(test);

    PipelineConfig resample_cfg = cfg;
    resample_cfg.scale = false;  // already applied split-wise above
    ResampleOutcome resampled = run_resample(train, resample_cfg);

    if (write_csv(test) != test_before)
        throw PipelineError("evaluate: leakage guard tripped, the test split was modified");

    EvaluateOutcome out;
    out.train_majority = train.count(ClassLabel::Majority);
    out.train_minority = train.count(ClassLabel::Minority);
    out.resampled_majority = resampled.output.count(ClassLabel::Majority);
    out.resampled_minority = resampled.output.count(ClassLabel::Minority);
    out.test_majority = test.count(ClassLabel::Majority);
    out.test_minority = test.count(ClassLabel::Minority);

    auto preds = knn_classify(resampled.output, test, cfg.knn_k);
    out.confusion = confusion(preds);
    out.auc = auc(preds);
    out.g_mean = g_mean(out.confusion);
    out.wall_ms = elapsed_ms(start);
    return out;
}

AblateOutcome run_ablate(const Dataset& input, const PipelineConfig& cfg) {
    cfg.run.validate();
    Dataset work = cfg.scale ? MinMaxScaler::fit(input).transform(input) : input;
    AblateOutcome out;
    out.with_kt = multitask::evolve_all(work, cfg.run, /*transfer_enabled=*/true, cfg.workers);
    out.without_kt = multitask::evolve_all(work, cfg.run, /*transfer_enabled=*/false, cfg.workers);
    out.generations = cfg.run.generations;
    out.task_count = out.with_kt.synthetic.size();
    return out;
}

std::string format_report(const PipelineConfig& cfg, const std::vector<StageCounts>& stages,
                          double wall_ms, const std::vector<std::string>& warnings) {
    std::string s;
    s += "seed=" + std::to_string(cfg.run.master_seed) + "\n";
    s += "method=" + std::string(method_name(cfg.method)) + "\n";
    for (const auto& st : stages) {
        s += "stage." + st.stage + ".majority=" + std::to_string(st.majority) + "\n";
        s += "stage." + st.stage + ".minority=" + std::to_string(st.minority) + "\n";
    }
    s += "wall_ms=" + fmt_score(wall_ms) + "\n";
    for (const auto& w : warnings) s += "warning=" + w + "\n";
    for (const auto& [k, v] : config_entries(cfg)) s += "config." + k + "=" + v + "\n";
    return s;
}

std::string metrics_csv_header() {
    return "input,method,seed,train_maj,train_min,resampled_maj,resampled_min,test_maj,test_min,"
           "auc,g_mean,wall_ms\n";
}

std::string metrics_csv_row(const PipelineConfig& cfg, const EvaluateOutcome& out) {
    std::string s;
    s += cfg.input_path + "," + method_name(cfg.method) + "," + std::to_string(cfg.run.master_seed);
    s += "," + std::to_string(out.train_majority) + "," + std::to_string(out.train_minority);
    s += "," + std::to_string(out.resampled_majority) + "," + std::to_string(out.resampled_minority);
    s += "," + std::to_string(out.test_majority) + "," + std::to_string(out.test_minority);
    s += "," + fmt_score(out.auc) + "," + fmt_score(out.g_mean) + "," + fmt_score(out.wall_ms);
    s += "\n";
    return s;
}

std::string format_metrics_text(const PipelineConfig& cfg, const EvaluateOutcome& out) {
    std::string s;
    s += "auc=" + fmt_score(out.auc) + "\n";
    s += "g_mean=" + fmt_score(out.g_mean) + "\n";
    s += "true_pos=" + std::to_string(out.confusion.true_pos) + "\n";
    s += "false_pos=" + std::to_string(out.confusion.false_pos) + "\n";
    s += "true_neg=" + std::to_string(out.confusion.true_neg) + "\n";
    s += "false_neg=" + std::to_string(out.confusion.false_neg) + "\n";
    s += "train_majority=" + std::to_string(out.train_majority) + "\n";
    s += "train_minority=" + std::to_string(out.train_minority) + "\n";
    s += "resampled_majority=" + std::to_string(out.resampled_majority) + "\n";
    s += "resampled_minority=" + std::to_string(out.resampled_minority) + "\n";
    s += "test_majority=" + std::to_string(out.test_majority) + "\n";
    s += "test_minority=" + std::to_string(out.test_minority) + "\n";
    s += "seed=" + std::to_string(cfg.run.master_seed) + "\n";
    s += "wall_ms=" + fmt_score(out.wall_ms) + "\n";
    return s;
}

std::string format_convergence_log(const multitask::EvolveResult& result, const std::string& arm) {
    std::string s;
    std::string prefix = arm.empty() ? "" : "arm=" + arm + " ";
    for (const auto& r : result.log) {
        s += prefix + "task=" + std::to_string(r.task_id) + " gen=" + std::to_string(r.generation);
        s += " best_d=" + fmt_score(r.best_d) + " best_theta=" + fmt_score(r.best_theta);
        s += " feasible=" + std::string(r.feasible ? "1" : "0");
        s += " aux=" + (r.auxiliary_id ? std::to_string(*r.auxiliary_id) : std::string("none"));
        s += "\n";
    }
    return s;
}

namespace {

// mean best_d / best_theta across tasks, indexed by generation (1-based)
void append_generation_means(std::string& s, const multitask::EvolveResult& result,
                             const std::string& arm) {
    std::map<std::size_t, std::pair<double, double>> sums;
    std::map<std::size_t, std::size_t> counts;
    for (const auto& r : result.log) {
        sums[r.generation].first += r.best_d;
        sums[r.generation].second += r.best_theta;
        counts[r.generation] += 1;
    }
    for (const auto& [gen, sum] : sums) {
        double n = static_cast<double>(counts[gen]);
        s += "arm=" + arm + " gen=" + std::to_string(gen);
        s += " mean_best_d=" + fmt_score(sum.first / n);
        s += " mean_best_theta=" + fmt_score(sum.second / n) + "\n";
    }
}

}  // namespace

std::string format_ablate_log(const AblateOutcome& out) {
    std::string s;
    s += format_convergence_log(out.with_kt, "with_kt");
    s += format_convergence_log(out.without_kt, "without_kt");
    append_generation_means(s, out.with_kt, "with_kt");
    append_generation_means(s, out.without_kt, "without_kt");
    return s;
}

std::string format_ball_dump(const gb::BallSet& balls, const Dataset& d) {
    std::string s;
    for (const auto& b : balls.balls) {
        s += "ball=" + std::to_string(b.creation_order);
        s += " size=" + std::to_string(b.member_rows.size());
        s += " label=" + d.label_name(b.label);
        s += " radius=" + fmt_score(b.radius);
        s += " quality=" + fmt_score(b.quality);
        s += " members=";
        for (std::size_t i = 0; i < b.member_rows.size(); ++i) {
            if (i) s += ';';
            s += std::to_string(b.member_rows[i]);
        }
        s += "\n";
    }
    return s;
}

}  // namespace evosample::pipeline
