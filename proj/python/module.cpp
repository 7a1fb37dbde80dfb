#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evopipe/experiment.hpp"
#include "evopipe/metrics.hpp"
#include "evopipe/optimizer.hpp"

namespace py = pybind11;
using namespace evopipe;

namespace {

ObjectiveVector to_objective(const std::vector<double>& v) {
    if (v.size() != 2 && v.size() != 3) throw ArityMismatchError("objective vectors have 2 or 3 components");
    ObjectiveVector out;
    out.q = v[0];
    out.s = v[1];
    if (v.size() == 3) out.p = v[2];
    return out;
}

std::vector<ObjectiveVector> to_objectives(const std::vector<std::vector<double>>& vs) {
    std::vector<ObjectiveVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(to_objective(v));
    return out;
}

py::dict result_to_dict(const RunResult& result) {
    py::list archive;
    for (const Individual& e : result.archive.entries) {
        py::dict row;
        row["objectives"] = e.objectives.components();
        row["genotype"] = serialize(e.graph);
        archive.append(row);
    }
    py::list trace;
    for (const GenerationRecord& r : result.trace.records) {
        py::dict row;
        row["gen"] = r.generation;
        row["best_q"] = r.best_q;
        row["hv"] = r.hv;
        row["mu"] = r.mu;
        row["lambda"] = r.lambda;
        row["cross_rate"] = r.cross_rate;
        row["mut_rate"] = r.mut_rate;
        row["max_depth"] = r.max_depth;
        row["elapsed_s"] = r.elapsed_s;
        trace.append(row);
    }
    py::dict best;
    best["objectives"] = result.best.objectives.components();
    best["genotype"] = serialize(result.best.graph);
    best["fit_seconds"] = result.best.fit_seconds;
    py::dict out;
    out["archive"] = archive;
    out["trace"] = trace;
    out["best"] = best;
    return out;
}

OptimizerConfig config_from_kwargs(const std::string& selection, std::optional<int> fixed_depth, int mu,
                                   std::optional<std::pair<double, double>> penalty, int threads,
                                   bool use_time_objective, bool wall_clock) {
    OptimizerConfig config;
    config.selection = selection_from_string(selection);
    config.fixed_depth = fixed_depth;
    config.mu = mu;
    if (penalty.has_value()) config.penalty = PenaltyWeights{penalty->first, penalty->second};
    config.threads = threads;
    config.use_time_objective = use_time_objective;
    config.clock = wall_clock ? ClockMode::Wall : ClockMode::Deterministic;
    return config;
}

Budget make_budget(std::optional<int> generations, std::optional<double> time_limit_s) {
    Budget budget;
    budget.generation_limit = generations;
    budget.time_limit_s = time_limit_s;
    return budget;
}

}  // namespace

PYBIND11_MODULE(evopipe, m) {
    m.doc() = "Evolutionary composer of machine-learning pipelines";

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](Eigen::MatrixXd features, Eigen::VectorXd target, const std::string& task) {
                 Dataset d;
                 d.features = std::move(features);
                 d.target = std::move(target);
                 d.task = task_from_string(task);
                 return d;
             }),
             py::arg("features"), py::arg("target"), py::arg("task"))
        .def_readwrite("features", &Dataset::features)
        .def_readwrite("target", &Dataset::target)
        .def_property(
            "task", [](const Dataset& d) { return to_string(d.task); },
            [](Dataset& d, const std::string& t) { d.task = task_from_string(t); })
        .def_readwrite("feature_names", &Dataset::feature_names)
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::to_string(d.n_samples()) + "x" + std::to_string(d.n_features()) +
                   " " + to_string(d.task) + ">";
        });

    m.def(
        "synth_dataset",
        [](const std::string& kind, int n, double noise, std::uint64_t seed) {
            return synth_dataset(synth_kind_from_string(kind), n, noise, seed);
        },
        py::arg("kind"), py::arg("n"), py::arg("noise") = 0.1, py::arg("seed") = 0);
    m.def(
        "load_csv",
        [](const std::string& path, const std::string& target, const std::string& task) {
            return load_dataset(path, target.empty() ? std::nullopt : std::optional(target),
                                task.empty() ? std::nullopt : std::optional(task));
        },
        py::arg("path"), py::arg("target") = "", py::arg("task") = "");
    m.def(
        "train_test_split",
        [](const Dataset& d, double train_fraction, std::uint64_t seed) {
            const SplitResult split = train_test_split(d, train_fraction, seed);
            return py::make_tuple(split.train, split.test);
        },
        py::arg("dataset"), py::arg("train_fraction") = 0.7, py::arg("seed") = 0);
    m.def(
        "imbalance_metric",
        [](const Eigen::VectorXd& target, int classes) { return imbalance_metric(target, classes); },
        py::arg("target"), py::arg("classes") = 2);

    m.def("rmse", &rmse, py::arg("y"), py::arg("yhat"));
    m.def("roc_auc", &roc_auc, py::arg("y"), py::arg("scores"));
    m.def(
        "penalty_fitness",
        [](const std::vector<double>& v, double w1, double w2) {
            return penalty_fitness(to_objective(v), PenaltyWeights{w1, w2});
        },
        py::arg("objectives"), py::arg("w1") = 0.01, py::arg("w2") = 0.001);
    m.def(
        "dominates",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return dominates(to_objective(a), to_objective(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "hypervolume",
        [](const std::vector<std::vector<double>>& front, const std::vector<double>& ref) {
            return hypervolume(to_objectives(front), to_objective(ref));
        },
        py::arg("front"), py::arg("ref"));

    m.def(
        "random_pipeline",
        [](const std::string& task, int max_depth, std::uint64_t seed) {
            Rng rng(seed);
            return serialize(random_pipeline(full_catalog(), task_from_string(task), max_depth, rng));
        },
        py::arg("task"), py::arg("max_depth") = 3, py::arg("seed") = 0);
    m.def(
        "validate",
        [](const std::string& genotype, const std::string& task, int depth_cap) {
            return validate(deserialize(genotype), task_from_string(task), depth_cap).violations;
        },
        py::arg("genotype"), py::arg("task"), py::arg("depth_cap") = 6);
    m.def(
        "pipeline_size", [](const std::string& genotype) { return size(deserialize(genotype)); },
        py::arg("genotype"));
    m.def(
        "pipeline_depth", [](const std::string& genotype) { return depth(deserialize(genotype)); },
        py::arg("genotype"));

    py::class_<FittedPipeline>(m, "FittedPipeline")
        .def_property_readonly("fit_seconds", [](const FittedPipeline& f) { return f.fit_seconds; })
        .def_property_readonly("genotype", [](const FittedPipeline& f) { return serialize(f.graph); })
        .def("predict",
             [](const FittedPipeline& f, const Eigen::MatrixXd& features) { return predict(f, features); });

    m.def(
        "fit_pipeline",
        [](const std::string& genotype, const Dataset& train, std::uint64_t seed) {
            Rng rng(seed);
            return fit(deserialize(genotype), train, rng);
        },
        py::arg("genotype"), py::arg("train"), py::arg("seed") = 0);

    m.def(
        "run_parameter_free",
        [](const Dataset& train, std::optional<int> generations, std::optional<double> time_limit_s,
           std::uint64_t seed, const std::string& selection, std::optional<int> fixed_depth, int threads,
           bool use_time_objective, bool wall_clock) {
            const OptimizerConfig config = config_from_kwargs(selection, fixed_depth, 20, std::nullopt,
                                                              threads, use_time_objective, wall_clock);
            return result_to_dict(
                run_parameter_free(train, config, make_budget(generations, time_limit_s), seed));
        },
        py::arg("train"), py::arg("generations") = 30, py::arg("time_limit_s") = py::none(),
        py::arg("seed") = 0, py::arg("selection") = "spea2", py::arg("fixed_depth") = py::none(),
        py::arg("threads") = 1, py::arg("use_time_objective") = false, py::arg("wall_clock") = false);

    m.def(
        "run_steady_state",
        [](const Dataset& train, std::optional<int> generations, std::optional<double> time_limit_s,
           std::uint64_t seed, const std::string& selection, std::optional<int> fixed_depth, int mu,
           int threads, bool wall_clock) {
            const OptimizerConfig config =
                config_from_kwargs(selection, fixed_depth, mu, std::nullopt, threads, false, wall_clock);
            return result_to_dict(
                run_steady_state_mo(train, config, make_budget(generations, time_limit_s), seed));
        },
        py::arg("train"), py::arg("generations") = 30, py::arg("time_limit_s") = py::none(),
        py::arg("seed") = 0, py::arg("selection") = "spea2", py::arg("fixed_depth") = py::none(),
        py::arg("mu") = 20, py::arg("threads") = 1, py::arg("wall_clock") = false);

    m.def(
        "run_single_objective",
        [](const Dataset& train, std::optional<int> generations, std::optional<double> time_limit_s,
           std::uint64_t seed, std::optional<std::pair<double, double>> penalty, int mu, int threads,
           bool wall_clock) {
            OptimizerConfig config =
                config_from_kwargs("spea2", 3, mu, penalty, threads, false, wall_clock);
            return result_to_dict(
                run_single_objective(train, config, make_budget(generations, time_limit_s), seed));
        },
        py::arg("train"), py::arg("generations") = 30, py::arg("time_limit_s") = py::none(),
        py::arg("seed") = 0, py::arg("penalty") = py::none(), py::arg("mu") = 20, py::arg("threads") = 1,
        py::arg("wall_clock") = false);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
}
