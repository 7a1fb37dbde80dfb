#include "evopipe/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evopipe/csv.hpp"
#include "evopipe/errors.hpp"
#include "evopipe/metrics.hpp"

namespace evopipe {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::uint64_t kSaltFinalEval = 0xF1A47E57ULL;

}  // namespace

std::uint64_t final_eval_seed(std::uint64_t rep_seed) { return splitmix64(rep_seed ^ kSaltFinalEval); }

ExperimentSpec spec_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentSpec spec;
    try {
        if (j.contains("experiment")) spec.experiment = j.at("experiment").get<std::string>();
        if (j.contains("data")) spec.data = j.at("data").get<std::string>();
        if (j.contains("target") && !j.at("target").is_null()) spec.target = j.at("target").get<std::string>();
        if (j.contains("task") && !j.at("task").is_null()) spec.task = j.at("task").get<std::string>();
        if (j.contains("reps")) spec.reps = j.at("reps").get<int>();
        if (j.contains("seed_base")) spec.seed_base = j.at("seed_base").get<std::uint64_t>();
        if (j.contains("out")) spec.out_dir = j.at("out").get<std::string>();
        if (j.contains("generations")) spec.generations = j.at("generations").get<int>();
        if (j.contains("time_limit_s") && !j.at("time_limit_s").is_null()) {
            spec.time_limit_s = j.at("time_limit_s").get<double>();
        }
        if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
        if (j.contains("train_fraction")) spec.train_fraction = j.at("train_fraction").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return spec;
}

std::string spec_to_json_text(const ExperimentSpec& spec) {
    json j;
    j["experiment"] = spec.experiment;
    j["data"] = spec.data;
    j["target"] = spec.target.has_value() ? json(*spec.target) : json(nullptr);
    j["task"] = spec.task.has_value() ? json(*spec.task) : json(nullptr);
    j["reps"] = spec.reps;
    j["seed_base"] = spec.seed_base;
    j["out"] = spec.out_dir;
    j["generations"] = spec.generations;
    j["time_limit_s"] = spec.time_limit_s.has_value() ? json(*spec.time_limit_s) : json(nullptr);
    j["threads"] = spec.threads;
    j["train_fraction"] = spec.train_fraction;
    return j.dump(2) + "\n";
}

std::vector<std::string> experiment_variants(const std::string& experiment, TaskType task) {
    if (experiment == "exp1") return {"single_objective", "single_objective_penalty", "multi_objective"};
    if (experiment == "exp2") return {"nsga2", "spea2"};
    if (experiment == "exp3") return {"parameter_free_fd", "parameter_free", "steady_state_fd", "steady_state"};
    if (experiment == "baseline") {
        if (task == TaskType::BinaryClassification) return {"baseline_bagged_trees", "baseline_majority"};
        return {"baseline_bagged_trees", "baseline_mean"};
    }
    throw ConfigError("unknown experiment \"" + experiment + "\" (expected exp1|exp2|exp3|baseline)");
}

Dataset load_dataset(const std::string& data_spec, const std::optional<std::string>& target,
                     const std::optional<std::string>& task) {
    if (data_spec.rfind("synth:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(data_spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 4) {
            throw ConfigError("synthetic data spec must be synth:<kind>:<n>:<noise>, got \"" + data_spec + "\"");
        }
        int n = 0;
        double noise = 0.0;
        try {
            n = std::stoi(parts[2]);
            noise = std::stod(parts[3]);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse n/noise in data spec \"" + data_spec + "\"");
        }
        // Synthetic draws are derived from a fixed seed so that the dataset
        // is a pure function of its spec string.
        return synth_dataset(synth_kind_from_string(parts[1]), n, noise, 0xDA7A ^ static_cast<std::uint64_t>(n));
    }

    ColumnRef column = 0;
    if (target.has_value()) {
        try {
            std::size_t consumed = 0;
            const int idx = std::stoi(*target, &consumed);
            column = consumed == target->size() ? ColumnRef(idx) : ColumnRef(*target);
        } catch (const std::exception&) {
            column = *target;
        }
    } else {
        // Default target: the last column.
        std::ifstream in(data_spec, std::ios::binary);
        if (!in) throw DataError("cannot open \"" + data_spec + "\"");
        std::string header;
        std::getline(in, header);
        column = static_cast<int>(std::count(header.begin(), header.end(), ','));
    }

    if (task.has_value()) return load_csv(data_spec, column, task_from_string(*task));

    // Infer the task: a {0,1}-valued target means classification.
    Dataset d = load_csv(data_spec, column, TaskType::Regression);
    bool binary = true;
    for (Eigen::Index i = 0; i < d.target.size() && binary; ++i) {
        binary = d.target[i] == 0.0 || d.target[i] == 1.0;
    }
    if (binary) d.task = TaskType::BinaryClassification;
    return d;
}

std::string pareto_to_csv(const ParetoArchive& archive) {
    std::ostringstream out;
    const int arity = archive.entries.empty() ? 2 : archive.entries.front().objectives.arity();
    out << "objective_0,objective_1";
    if (arity == 3) out << ",objective_2";
    out << ",genotype_json\n";
    for (const Individual& e : archive.entries) {
        out << format_double(e.objectives.q) << ',' << format_double(e.objectives.s);
        if (arity == 3) out << ',' << format_double(*e.objectives.p);
        out << ',' << csv_quote(serialize(e.graph)) << '\n';
    }
    return out.str();
}

namespace {

struct VariantOutcome {
    FinalRecord final;
    std::optional<RunTrace> trace;
    std::optional<ParetoArchive> archive;
};

OptimizerConfig variant_config(const std::string& variant, const ExperimentSpec& spec) {
    OptimizerConfig config;
    config.threads = spec.threads;
    config.clock = spec.time_limit_s.has_value() ? ClockMode::Wall : ClockMode::Deterministic;
    if (variant == "single_objective" || variant == "single_objective_penalty") {
        config.fixed_depth = 3;
        if (variant == "single_objective_penalty") config.penalty = PenaltyWeights{};
    } else if (variant == "multi_objective" || variant == "parameter_free" || variant == "spea2") {
        config.selection = SelectionKind::Spea2;
    } else if (variant == "nsga2") {
        config.selection = SelectionKind::Nsga2;
    } else if (variant == "parameter_free_fd") {
        config.fixed_depth = 3;
    } else if (variant == "steady_state" ) {
        config.selection = SelectionKind::Spea2;
    } else if (variant == "steady_state_fd") {
        config.selection = SelectionKind::Spea2;
        config.fixed_depth = 3;
    }
    return config;
}

double display_quality(double q, TaskType task) {
    return task == TaskType::BinaryClassification ? -q : q;
}

VariantOutcome run_variant(const std::string& variant, const ExperimentSpec& spec, const Dataset& train,
                           const Dataset& test, int rep) {
    const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(rep);
    VariantOutcome outcome;
    outcome.final.variant = variant;
    outcome.final.rep = rep;
    outcome.final.seed = seed;

    if (variant.rfind("baseline_", 0) == 0) {
        ModelKind kind = ModelKind::BaggedTrees;
        if (variant == "baseline_majority") kind = ModelKind::MajorityBaseline;
        if (variant == "baseline_mean") kind = ModelKind::MeanBaseline;
        const PipelineGraph graph{make_node(kind)};
        const Individual final_eval =
            evaluate_on(graph, train, test, false, final_eval_seed(seed), nullptr);
        outcome.final.q = final_eval.objectives.q;
        outcome.final.quality = display_quality(final_eval.objectives.q, train.task);
        outcome.final.gs = size(graph);
        outcome.final.gd = depth(graph);
        outcome.final.best_genotype = serialize(graph);
        return outcome;
    }

    const OptimizerConfig config = variant_config(variant, spec);
    Budget budget;
    budget.generation_limit = spec.generations;
    budget.time_limit_s = spec.time_limit_s;

    RunResult result;
    if (variant == "single_objective" || variant == "single_objective_penalty") {
        result = run_single_objective(train, config, budget, seed);
    } else if (variant == "steady_state" || variant == "steady_state_fd") {
        result = run_steady_state_mo(train, config, budget, seed);
    } else {
        result = run_parameter_free(train, config, budget, seed);
    }

    // Reported pipeline: the single-objective champion, or the best-quality
    // Pareto member (archive entries are sorted with minimal q first).
    const bool single_objective = variant.rfind("single_objective", 0) == 0;
    const PipelineGraph best_graph =
        single_objective ? result.best.graph : result.archive.entries.front().graph;

    const Individual final_eval =
        evaluate_on(best_graph, train, test, false, final_eval_seed(seed), nullptr);
    outcome.final.q = final_eval.objectives.q;
    outcome.final.quality = display_quality(final_eval.objectives.q, train.task);
    outcome.final.gs = size(best_graph);
    outcome.final.gd = depth(best_graph);
    std::vector<ObjectiveVector> front;
    front.reserve(result.archive.entries.size());
    for (const Individual& e : result.archive.entries) front.push_back(e.objectives);
    outcome.final.hv = normalized_hypervolume(front, result.bounds);
    outcome.final.nf = static_cast<int>(result.archive.size());
    outcome.final.best_genotype = serialize(best_graph);
    outcome.trace = std::move(result.trace);
    outcome.archive = std::move(result.archive);
    return outcome;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string rep_tag(int rep) {
    std::string tag = std::to_string(rep);
    if (tag.size() < 2) tag.insert(tag.begin(), '0');
    return tag;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write \"" + path.string() + "\"");
    out << content;
}

std::string finals_to_csv(const std::vector<FinalRecord>& finals) {
    std::ostringstream out;
    out << "variant,rep,seed,quality,q,gs,gd,hv,nf\n";
    for (const FinalRecord& f : finals) {
        out << f.variant << ',' << f.rep << ',' << f.seed << ',' << format_double(f.quality) << ','
            << format_double(f.q) << ',' << f.gs << ',' << f.gd << ','
            << (f.hv.has_value() ? format_double(*f.hv) : std::string()) << ','
            << (f.nf.has_value() ? std::to_string(*f.nf) : std::string()) << '\n';
    }
    return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "variant,quality_median,quality_spread,spread_gt_5pct,gs_best,gd_best,hv_median,nf_median\n";
    for (const SummaryRow& r : rows) {
        out << r.variant << ',' << format_double(r.quality_median) << ',' << format_double(r.quality_spread)
            << ',' << (r.spread_exceeds_5pct ? 1 : 0) << ',' << r.gs_best << ',' << r.gd_best << ','
            << (r.hv_median.has_value() ? format_double(*r.hv_median) : std::string()) << ','
            << (r.nf_median.has_value() ? format_double(*r.nf_median) : std::string()) << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<FinalRecord>& finals) {
    std::vector<std::string> variants;
    for (const FinalRecord& f : finals) {
        if (std::find(variants.begin(), variants.end(), f.variant) == variants.end()) {
            variants.push_back(f.variant);
        }
    }
    std::vector<SummaryRow> rows;
    for (const std::string& variant : variants) {
        SummaryRow row;
        row.variant = variant;
        std::vector<double> quality, hv, nf;
        const FinalRecord* best = nullptr;
        for (const FinalRecord& f : finals) {
            if (f.variant != variant) continue;
            quality.push_back(f.quality);
            if (f.hv.has_value()) hv.push_back(*f.hv);
            if (f.nf.has_value()) nf.push_back(static_cast<double>(*f.nf));
            // Display quality: ROC AUC is maximized, RMSE minimized; f.q is
            // always minimized, so the best run has the smallest q.
            if (best == nullptr || f.q < best->q) best = &f;
        }
        row.quality_median = median(quality);
        const auto [lo, hi] = std::minmax_element(quality.begin(), quality.end());
        row.quality_spread = row.quality_median != 0.0 ? (*hi - *lo) / std::abs(row.quality_median) : 0.0;
        row.spread_exceeds_5pct = row.quality_spread > 0.05;
        row.gs_best = best->gs;
        row.gd_best = best->gd;
        if (!hv.empty()) row.hv_median = median(hv);
        if (!nf.empty()) row.nf_median = median(nf);
        rows.push_back(row);
    }
    return rows;
}

SummaryReport run_experiment(const ExperimentSpec& spec) {
    if (spec.reps < 1) throw ConfigError("reps must be >= 1");
    if (spec.generations < 0) throw ConfigError("generations must be >= 0");

    const Dataset full = load_dataset(spec.data, spec.target, spec.task);
    const SplitResult split = train_test_split(full, spec.train_fraction, splitmix64(spec.seed_base));

    const fs::path out_dir(spec.out_dir);
    fs::create_directories(out_dir / "traces");
    fs::create_directories(out_dir / "pareto");
    fs::create_directories(out_dir / "best");
    write_file(out_dir / "run_config.json", spec_to_json_text(spec));
    store_csv(split.train, (out_dir / "data_train.csv").string());
    store_csv(split.test, (out_dir / "data_test.csv").string());

    SummaryReport report;
    for (const std::string& variant : experiment_variants(spec.experiment, full.task)) {
        for (int rep = 0; rep < spec.reps; ++rep) {
            VariantOutcome outcome = run_variant(variant, spec, split.train, split.test, rep);
            const std::string tag = variant + "_rep" + rep_tag(rep);
            if (outcome.trace.has_value()) {
                write_file(out_dir / "traces" / (tag + ".csv"), outcome.trace->to_csv());
            }
            if (outcome.archive.has_value()) {
                write_file(out_dir / "pareto" / (tag + ".csv"), pareto_to_csv(*outcome.archive));
            }
            write_file(out_dir / "best" / (tag + ".json"), outcome.final.best_genotype + "\n");
            report.finals.push_back(std::move(outcome.final));
        }
    }
    report.rows = summarize(report.finals);
    write_file(out_dir / "finals.csv", finals_to_csv(report.finals));
    write_file(out_dir / "summary.csv", summary_to_csv(report.rows));
    return report;
}

}  // namespace evopipe
