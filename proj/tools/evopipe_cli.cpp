#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "evopipe/errors.hpp"
#include "evopipe/experiment.hpp"
#include "evopipe/plots.hpp"

namespace {

using namespace evopipe;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_run(const ExperimentSpec& spec) {
    const SummaryReport report = run_experiment(spec);
    std::cout << "experiment " << spec.experiment << " on " << spec.data << " (" << spec.reps
              << " repetitions)\n";
    std::cout << "variant,quality_median,quality_spread,gs_best,gd_best,hv_median,nf_median\n";
    for (const SummaryRow& row : report.rows) {
        std::cout << row.variant << ',' << row.quality_median << ',' << row.quality_spread << ','
                  << row.gs_best << ';' << row.gd_best << ','
                  << (row.hv_median ? std::to_string(*row.hv_median) : std::string("-")) << ','
                  << (row.nf_median ? std::to_string(*row.nf_median) : std::string("-")) << '\n';
        if (row.spread_exceeds_5pct) {
            std::cout << "  warning: " << row.variant << " quality spread "
                      << row.quality_spread * 100.0 << "% exceeds 5%\n";
        }
    }
    std::cout << "outputs written to " << spec.out_dir << '\n';
    return 0;
}

int cmd_pareto(const std::string& in_dir, const std::string& variant, const std::string& out_file) {
    namespace fs = std::filesystem;
    const fs::path finals = fs::path(in_dir) / "finals.csv";
    if (!fs::exists(finals)) throw DataError("\"" + in_dir + "\" has no finals.csv");

    // Frontier of the repetition with the best (smallest) test objective.
    std::istringstream in(read_file(finals.string()));
    std::string line;
    std::getline(in, line);
    int best_rep = -1;
    double best_q = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        if (cell != variant) continue;
        std::getline(row, cell, ',');
        const int rep = std::stoi(cell);
        std::getline(row, cell, ',');  // seed
        std::getline(row, cell, ',');  // quality
        std::getline(row, cell, ',');  // q
        const double q = std::stod(cell);
        if (best_rep < 0 || q < best_q) {
            best_rep = rep;
            best_q = q;
        }
    }
    if (best_rep < 0) throw ConfigError("variant \"" + variant + "\" not found in " + finals.string());

    std::string tag = std::to_string(best_rep);
    if (tag.size() < 2) tag.insert(tag.begin(), '0');
    const fs::path front = fs::path(in_dir) / "pareto" / (variant + "_rep" + tag + ".csv");
    if (!fs::exists(front)) throw DataError("no frontier stored for variant \"" + variant + "\"");
    const std::string csv = read_file(front.string());
    if (out_file.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_file, std::ios::binary);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary composer of machine-learning pipelines"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment");
    run->add_option("--config", config_path, "JSON config file (flags override its values)");
    auto* opt_experiment = run->add_option("--experiment", spec.experiment, "exp1|exp2|exp3|baseline");
    auto* opt_data = run->add_option("--data", spec.data, "CSV path or synth:<kind>:<n>:<noise>");
    std::string target, task;
    auto* opt_target = run->add_option("--target", target, "Target column name or index (default: last)");
    auto* opt_task = run->add_option("--task", task, "classification|regression (default: inferred)");
    auto* opt_reps = run->add_option("--reps", spec.reps, "Repetitions per variant");
    auto* opt_seed = run->add_option("--seed-base", spec.seed_base, "Base seed; repetition k uses seed base+k");
    auto* opt_out = run->add_option("--out", spec.out_dir, "Output directory");
    double time_limit = 0.0;
    auto* opt_time = run->add_option("--time-limit", time_limit, "Wall-time budget per run, seconds");
    auto* opt_gens = run->add_option("--generations", spec.generations, "Generation budget per run");
    auto* opt_threads = run->add_option("--threads", spec.threads, "Offspring evaluation threads");
    auto* opt_frac = run->add_option("--train-fraction", spec.train_fraction, "Train share of the data");

    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "Render SVG charts from stored traces");
    plot->add_option("--in", plot_dir, "Results directory")->required();

    std::string pareto_dir, pareto_variant, pareto_out;
    auto* pareto = app.add_subcommand("pareto", "Print a stored Pareto frontier");
    pareto->add_option("--in", pareto_dir, "Results directory")->required();
    pareto->add_option("--variant", pareto_variant, "Variant name")->required();
    pareto->add_option("--out", pareto_out, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            if (!config_path.empty()) {
                ExperimentSpec from_file = spec_from_json_text(read_file(config_path));
                // CLI flags override config values.
                if (!*opt_experiment) spec.experiment = from_file.experiment;
                if (!*opt_data) spec.data = from_file.data;
                if (!*opt_target && from_file.target) target = *from_file.target;
                if (!*opt_task && from_file.task) task = *from_file.task;
                if (!*opt_reps) spec.reps = from_file.reps;
                if (!*opt_seed) spec.seed_base = from_file.seed_base;
                if (!*opt_out) spec.out_dir = from_file.out_dir;
                if (!*opt_gens) spec.generations = from_file.generations;
                if (!*opt_time && from_file.time_limit_s) spec.time_limit_s = from_file.time_limit_s;
                if (!*opt_threads) spec.threads = from_file.threads;
                if (!*opt_frac) spec.train_fraction = from_file.train_fraction;
            }
            if (*opt_time) spec.time_limit_s = time_limit;
            if (!target.empty()) spec.target = target;
            if (!task.empty()) spec.task = task;
            if (spec.experiment.empty()) throw ConfigError("--experiment is required (or set it in --config)");
            if (spec.data.empty()) throw ConfigError("--data is required (or set it in --config)");
            return cmd_run(spec);
        }
        if (plot->parsed()) {
            render_plots(plot_dir);
            std::cout << "plots written to " << plot_dir << '\n';
            return 0;
        }
        if (pareto->parsed()) return cmd_pareto(pareto_dir, pareto_variant, pareto_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
