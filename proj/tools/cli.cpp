// Copyright 2026 The foresttune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "foresttune/bench.hpp"
#include "foresttune/data.hpp"
#include "foresttune/error.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/metrics.hpp"
#include "foresttune/oob.hpp"
#include "foresttune/smbo.hpp"
#include "foresttune/space.hpp"
#include "foresttune/tuner.hpp"

namespace foresttune::cli {

namespace {

// Bad flag values found after CLI11 parsing; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_workers() {
  const unsigned cores = std::thread::hardware_concurrency();
  return cores == 0 ? 1 : static_cast<int>(cores);
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid seed '" + text + "' from " + source);
  }
  return value;
}

struct SeedOption {
  std::optional<std::string> text;

  void attach(CLI::App* app) {
    app->add_option("--seed", text,
                    "Master seed (default: $FORESTTUNE_SEED, else drawn at random)");
  }

  std::uint64_t resolve(std::ostream& err) const {
    std::uint64_t seed = 0;
    if (text) {
      seed = parse_seed(*text, "--seed");
    } else if (const char* env = std::getenv("FORESTTUNE_SEED"); env != nullptr && *env != '\0') {
      seed = parse_seed(env, "FORESTTUNE_SEED");
    } else {
      std::random_device device;
      seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    }
    err << "seed: " << seed << '\n';
    return seed;
  }
};

struct DataOptions {
  std::string path;
  std::string target;
  std::vector<std::string> categorical;
  std::optional<std::string> task;

  void attach(CLI::App* app, bool required = true) {
    auto* data = app->add_option("--data", path, "Training data CSV with a header row");
    auto* target_opt = app->add_option("--target", target, "Name of the target column");
    if (required) {
      data->required();
      target_opt->required();
    }
    app->add_option("--categorical", categorical,
                    "Columns to read as categorical even if they look numeric")
        ->delimiter(',');
    app->add_option("--task", task,
                    "classification or regression (default: inferred from the target column "
                    "and the measure)")
        ->check(CLI::IsMember({"classification", "regression"}));
  }

  Dataset load(std::optional<Measure> measure = std::nullopt) const {
    CsvOptions options;
    for (const auto& name : categorical) {
      if (name == target) {
        options.target_hint = TypeHint::kCategorical;
      } else {
        options.overrides[name] = TypeHint::kCategorical;
      }
    }
    if (task) {
      options.target_hint =
          *task == "classification" ? TypeHint::kCategorical : TypeHint::kNumeric;
    } else if (measure && measure_info(*measure).classification) {
      options.target_hint = TypeHint::kCategorical;
    }
    return load_csv(path, target, options);
  }
};

struct HyperOptions {
  std::optional<int> mtry;
  std::optional<double> sample_fraction;
  std::optional<bool> replace;
  std::optional<int> min_node_size;
  int num_trees = 500;
  std::optional<std::string> split_rule;
  std::optional<int> num_random_cuts;
  std::optional<int> max_depth;

  void attach(CLI::App* app, bool with_tuned = true) {
    if (with_tuned) {
      app->add_option("--mtry", mtry,
                      "Candidate features per split (default: floor(sqrt(p)) for "
                      "classification, max(1, floor(p/3)) for regression)");
      app->add_option("--sample-fraction", sample_fraction,
                      "Fraction of rows drawn per tree (default: 1 with replacement)");
      app->add_option("--replace", replace,
                      "Draw the bag with replacement: true/false (default: true)");
      app->add_option("--min-node-size", min_node_size,
                      "Nodes of at most this size are not split (default: 1 for "
                      "classification, 5 for regression)");
    }
    app->add_option("--num-trees", num_trees, "Number of trees")->capture_default_str();
    app->add_option("--split-rule", split_rule,
                    "gini, variance or extratrees (default: gini for classification, "
                    "variance for regression)");
    app->add_option("--num-random-cuts", num_random_cuts,
                    "Random cutpoints per feature for extratrees (default: 1)");
    app->add_option("--max-depth", max_depth, "Optional depth cap (default: none)");
  }

  std::optional<SplitRule> rule(Task task) const {
    if (!split_rule && !num_random_cuts) return std::nullopt;
    SplitRule out = SplitRule::default_for(task);
    if (split_rule) {
      const auto kind = parse_split_rule(*split_rule);
      if (!kind) throw UsageError("unknown split rule '" + *split_rule + "'");
      out.kind = *kind;
    }
    if (num_random_cuts) {
      if (out.kind != SplitRule::Kind::kExtraRandom) {
        throw UsageError("--num-random-cuts requires --split-rule extratrees");
      }
      out.num_random_cuts = *num_random_cuts;
    }
    return out;
  }

  HyperParams build(const Dataset& dataset) const {
    HyperParams params = HyperParams::defaults(dataset.task, dataset.p());
    if (mtry) params.mtry = *mtry;
    if (replace) params.replace = *replace;
    if (sample_fraction) {
      params.sample_fraction = *sample_fraction;
    }
    if (min_node_size) params.min_node_size = *min_node_size;
    params.num_trees = num_trees;
    if (auto r = rule(dataset.task)) params.split_rule = *r;
    if (max_depth) params.max_depth = *max_depth;
    params.validate(dataset.task, dataset.p());
    return params;
  }
};

Measure measure_from(const std::string& name) {
  const auto measure = parse_measure(name);
  if (!measure) {
    throw UsageError("unknown measure '" + name +
                     "' (expected mmce, auc, binary-brier, brier, logloss or mse)");
  }
  return *measure;
}

std::optional<Measure> optional_measure(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  return measure_from(*name);
}

// Either a file or the standard output stream.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary);
      if (!file_) throw Error("cli", "cannot open output file '" + *path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// --- subcommands ---------------------------------------------------------

struct TrainCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  std::string out;
  std::optional<std::string> measure;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app);
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--out", out, "Model file to write")->required();
    app->add_option("--measure", measure, "Also report this OOB measure");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    const auto m = optional_measure(measure);
    const Dataset dataset = data.load(m);
    const HyperParams params = hyper.build(dataset);
    const std::uint64_t s = seed.resolve(err);
    const Forest forest = train(dataset, params, s, workers);
    save_model(forest, out);
    const Measure report = m.value_or(default_importance_measure(dataset.task));
    stdout_stream << "oob_" << measure_name(report) << ','
                  << oob_measure(forest, dataset, report, workers) << '\n';
    return kExitOk;
  }
};

struct PredictCommand {
  std::string model;
  std::string data;
  std::optional<std::string> out;
  int workers = default_workers();

  void attach(CLI::App* app) {
    app->add_option("--model", model, "Model file written by train or tune")->required();
    app->add_option("--data", data,
                    "CSV with the training feature columns (matched by name; others ignored)")
        ->required();
    app->add_option("--out", out, "Predictions CSV (default: standard output)");
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
  }

  int run(std::ostream& stdout_stream, std::ostream&) {
    const Forest forest = load_model(model);
    const FeatureBlock rows = read_rows_csv(forest, data);
    Sink sink(out, stdout_stream);
    std::ostream& o = sink.get();
    o.precision(17);
    if (forest.task() == Task::kClassification) {
      const auto proba = forest.predict_proba(rows, workers);
      const std::size_t k = forest.num_classes();
      const auto& labels = forest.schema().class_labels;
      o << "prediction";
      for (const auto& label : labels) o << ",prob." << label;
      o << '\n';
      for (std::size_t r = 0; r < rows.rows; ++r) {
        const std::span<const double> row(proba.data() + r * k, k);
        o << labels[argmax_first(row)];
        for (double v : row) o << ',' << v;
        o << '\n';
      }
    } else {
      o << "prediction\n";
      for (double v : forest.predict(rows, workers)) o << v << '\n';
    }
    return kExitOk;
  }
};

std::set<TunedParam> parse_tuned(const std::vector<std::string>& names) {
  std::set<TunedParam> out;
  for (const auto& name : names) {
    const auto param = parse_tuned_param(name);
    if (!param) throw UsageError("unknown tunable parameter '" + name + "'");
    out.insert(*param);
  }
  return out;
}

struct TuneCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  std::optional<std::string> measure;
  TuneConfig config;
  std::vector<std::string> tuned{"mtry", "min.node.size", "sample.fraction"};
  std::optional<std::string> out;
  std::optional<std::string> log;
  std::optional<std::string> history;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app, false);
    hyper.num_trees = config.num_trees;
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--measure", measure,
                    "OOB objective (default: brier for classification, mse for regression)");
    app->add_option("--warmup", config.warmup, "Initial uniform design size")
        ->capture_default_str();
    app->add_option("--iters", config.iters, "Model-based iterations")->capture_default_str();
    app->add_option("--candidates", config.candidates,
                    "Uniform candidates scored by expected improvement per iteration")
        ->capture_default_str();
    app->add_option("--tune", tuned,
                    "Parameters to tune: mtry, min.node.size, sample.fraction, replace")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--out", out, "Write the final model here");
    app->add_option("--log", log, "Write the per-iteration log here");
    app->add_option("--history", history, "Write the evaluation history CSV here");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    config.measure = optional_measure(measure);
    config.tuned = parse_tuned(tuned);
    const Dataset dataset = data.load(config.measure);
    config.num_trees = hyper.num_trees;
    config.split_rule = hyper.rule(dataset.task);
    config.workers = workers;
    config.seed = seed.resolve(err);

    std::optional<Sink> log_sink;
    TuneLogSink sink_fn;
    if (log) {
      log_sink.emplace(log, err);
      sink_fn = [&](const std::string& line) { log_sink->get() << line << '\n'; };
    }
    const TuneResult result = tune(dataset, config, sink_fn);
    stdout_stream << format_recommendation(result);
    err << "exec.time: " << result.wall_seconds << "s\n";
    if (out) save_model(result.model, *out);
    if (history) {
      Sink h(history, stdout_stream);
      write_history_csv(h.get(), result.history);
    }
    return kExitOk;
  }
};

struct EstimateCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  TuneConfig config;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app, false);
    hyper.num_trees = config.num_trees;
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--warmup", config.warmup, "Initial design size")->capture_default_str();
    app->add_option("--iters", config.iters, "Model-based iterations")->capture_default_str();
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    const Dataset dataset = data.load();
    config.num_trees = hyper.num_trees;
    config.split_rule = hyper.rule(dataset.task);
    config.workers = workers;
    config.seed = seed.resolve(err);
    const TimeEstimate estimate = estimate_time(dataset, config);
    err << "training_seconds: " << estimate.training_seconds << '\n';
    stdout_stream << estimate.formatted << '\n';
    return kExitOk;
  }
};

struct CurveCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  std::vector<std::string> measures;
  std::vector<int> grid;
  std::optional<std::string> out;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app);
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--measures", measures,
                    "Measures to trace (default: mmce,brier,logloss or mse)")
        ->delimiter(',');
    app->add_option("--grid", grid,
                    "Increasing tree counts (default: 10, 20, ... up to --num-trees)")
        ->delimiter(',');
    app->add_option("--out", out, "Curve CSV (default: standard output)");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    std::vector<Measure> list;
    for (const auto& name : measures) list.push_back(measure_from(name));
    const Dataset dataset = data.load(list.empty() ? std::nullopt : std::optional(list.front()));
    if (list.empty()) {
      if (dataset.task == Task::kClassification) {
        list = {Measure::kMmce, Measure::kBrierMulticlass, Measure::kLogLoss};
      } else {
        list = {Measure::kMse};
      }
    }
    const HyperParams params = hyper.build(dataset);
    if (grid.empty()) {
      const int step = std::max(1, params.num_trees / 50);
      for (int t = step; t < params.num_trees; t += step) grid.push_back(t);
      grid.push_back(params.num_trees);
    }
    const Forest forest = train(dataset, params, seed.resolve(err), workers);
    const OobCurve curve = oob_curve(forest, dataset, list, grid);
    Sink sink(out, stdout_stream);
    write_curve_csv(sink.get(), curve);
    return kExitOk;
  }
};

struct ImportanceCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  std::optional<std::string> measure;
  int repetitions = 1;
  std::optional<std::string> out;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app);
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--measure", measure,
                    "Per-tree OOB measure (default: mmce for classification, mse for "
                    "regression)");
    app->add_option("--repetitions", repetitions, "Permutations per tree and feature")
        ->capture_default_str();
    app->add_option("--out", out, "Importance CSV (default: standard output)");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    const auto m = optional_measure(measure);
    const Dataset dataset = data.load(m);
    const HyperParams params = hyper.build(dataset);
    const std::uint64_t s = seed.resolve(err);
    const Forest forest = train(dataset, params, s, workers);
    const ImportanceReport report = permutation_importance(
        forest, dataset, m.value_or(default_importance_measure(dataset.task)), repetitions,
        derive_seed(s, 1), workers);
    Sink sink(out, stdout_stream);
    write_importance_csv(sink.get(), report);
    return kExitOk;
  }
};

struct StabilityCommand {
  DataOptions data;
  HyperOptions hyper;
  SeedOption seed;
  int workers = default_workers();
  int forests = 5;
  std::uint64_t stride = 1;
  std::optional<std::string> out;

  void attach(CLI::App* app) {
    data.attach(app);
    hyper.attach(app);
    seed.attach(app);
    app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    app->add_option("--forests", forests, "Forests trained with seeds seed + i * stride")
        ->capture_default_str();
    app->add_option("--seed-stride", stride, "Seed increment between forests")
        ->capture_default_str();
    app->add_option("--out", out, "Correlation matrix CSV (default: standard output)");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    const Dataset dataset = data.load();
    const HyperParams params = hyper.build(dataset);
    const StabilityReport report =
        importance_stability(dataset, params, forests, seed.resolve(err), stride, workers);
    Sink sink(out, stdout_stream);
    std::ostream& o = sink.get();
    o.precision(17);
    o << "seed";
    for (auto s : report.seeds) o << ',' << s;
    o << '\n';
    for (std::size_t i = 0; i < report.seeds.size(); ++i) {
      o << report.seeds[i];
      for (double v : report.correlation[i]) o << ',' << v;
      o << '\n';
    }
    err << "mean_spearman: " << report.mean_off_diagonal() << '\n';
    return kExitOk;
  }
};

struct SynthCommand {
  std::string kind;
  std::string out;
  SeedOption seed;
  std::size_t n = 1000;
  std::size_t informative = 20;
  std::size_t noise = 480;
  double shift = 0.5;

  void attach(CLI::App* app) {
    app->add_option("kind", kind, "monks2 or sparse")
        ->required()
        ->check(CLI::IsMember({"monks2", "sparse"}));
    app->add_option("--out", out, "CSV file to write")->required();
    seed.attach(app);
    app->add_option("--n", n, "Rows (sparse only)")->capture_default_str();
    app->add_option("--informative", informative, "Informative columns (sparse only)")
        ->capture_default_str();
    app->add_option("--noise", noise, "Noise columns (sparse only)")->capture_default_str();
    app->add_option("--shift", shift, "Class mean shift in sd units (sparse only)")
        ->capture_default_str();
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    const std::uint64_t s = seed.resolve(err);
    const Dataset dataset =
        kind == "monks2" ? synth_monks2(s) : synth_sparse_signal(n, informative, noise, s, shift);
    write_csv(dataset, out);
    stdout_stream << "wrote " << dataset.n() << " rows x " << dataset.p() << " features to "
                  << out << '\n';
    return kExitOk;
  }
};

struct BenchmarkCommand {
  std::vector<std::string> paths;
  std::string target;
  std::vector<std::string> categorical;
  std::optional<std::string> task;
  std::vector<std::string> methods{"default", "tuned"};
  std::vector<std::string> measures;
  int folds = 5;
  int reps = 10;
  int num_trees = 500;
  int tune_trees = 500;
  int warmup = 30;
  int iters = 70;
  int workers = default_workers();
  std::string out_dir = ".";
  SeedOption seed;

  void attach(CLI::App* app) {
    app->add_option("--data", paths, "Dataset CSVs (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    app->add_option("--target", target, "Target column shared by all datasets")->required();
    app->add_option("--categorical", categorical, "Columns to read as categorical")
        ->delimiter(',');
    app->add_option("--task", task, "classification or regression")
        ->check(CLI::IsMember({"classification", "regression"}));
    app->add_option("--methods", methods,
                    "default, tuned, mtry-walk, caret, random")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--measures", measures,
                    "Measures (default: mmce,auc,brier,logloss for binary, mse for "
                    "regression)")
        ->delimiter(',');
    app->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
    app->add_option("--reps", reps, "Cross-validation repetitions")->capture_default_str();
    app->add_option("--num-trees", num_trees, "Trees in each final model")
        ->capture_default_str();
    app->add_option("--tune-trees", tune_trees, "Trees per tuning evaluation")
        ->capture_default_str();
    app->add_option("--warmup", warmup, "SMBO initial design size")->capture_default_str();
    app->add_option("--iters", iters, "SMBO iterations")->capture_default_str();
    app->add_option("--workers", workers, "Folds evaluated concurrently")
        ->capture_default_str();
    app->add_option("--out-dir", out_dir, "Directory for means.csv, ranks.csv, cells.csv, "
                                          "manifest.json")
        ->capture_default_str();
    seed.attach(app);
  }

  BenchMethod method(const std::string& name) const {
    if (name == "default") return default_method(num_trees);
    if (name == "tuned") {
      TuneConfig config;
      config.num_trees = tune_trees;
      config.warmup = warmup;
      config.iters = iters;
      return tuned_method(config);
    }
    if (name == "mtry-walk") return mtry_walk_method(num_trees);
    if (name == "caret") return caret_method(num_trees);
    if (name == "random") return random_search_method(num_trees, warmup + iters);
    throw UsageError("unknown method '" + name + "'");
  }

  int run(std::ostream& stdout_stream, std::ostream& err) {
    std::vector<Measure> list;
    for (const auto& name : measures) list.push_back(measure_from(name));
    std::vector<BenchMethod> competitors;
    for (const auto& name : methods) competitors.push_back(method(name));

    DataOptions loader;
    loader.target = target;
    loader.categorical = categorical;
    loader.task = task;
    std::vector<Dataset> datasets;
    for (const auto& path : paths) {
      loader.path = path;
      Dataset d = loader.load(list.empty() ? std::nullopt : std::optional(list.front()));
      d.name = std::filesystem::path(path).stem().string();
      datasets.push_back(std::move(d));
    }
    if (list.empty()) {
      const bool binary = datasets.front().task == Task::kClassification &&
                          datasets.front().num_classes() == 2;
      if (datasets.front().task == Task::kRegression) {
        list = {Measure::kMse};
      } else if (binary) {
        list = {Measure::kMmce, Measure::kAuc, Measure::kBrierMulticlass, Measure::kLogLoss};
      } else {
        list = {Measure::kMmce, Measure::kBrierMulticlass, Measure::kLogLoss};
      }
    }

    BenchConfig config;
    config.folds = folds;
    config.repetitions = reps;
    config.measures = list;
    config.workers = workers;
    config.seed = seed.resolve(err);
    const BenchResult raw = run_benchmark(datasets, competitors, config);
    const BenchResult imputed = impute_failures(raw);
    const RankTable ranks = aggregate_ranks(imputed);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::function<void(std::ostream&)>& fn) {
      Sink sink((dir / name).string(), stdout_stream);
      fn(sink.get());
    };
    write("means.csv", [&](std::ostream& o) { write_means_csv(o, imputed); });
    write("ranks.csv", [&](std::ostream& o) { write_ranks_csv(o, ranks); });
    write("cells.csv", [&](std::ostream& o) { write_cells_csv(o, imputed); });
    write("manifest.json", [&](std::ostream& o) { write_manifest_json(o, imputed); });
    write_ranks_csv(stdout_stream, ranks);
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"foresttune: random forests with model-based hyperparameter tuning",
               "foresttune"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("foresttune ") + FORESTTUNE_CLI_VERSION);

  TrainCommand train_cmd;
  PredictCommand predict_cmd;
  TuneCommand tune_cmd;
  EstimateCommand estimate_cmd;
  CurveCommand curve_cmd;
  ImportanceCommand importance_cmd;
  StabilityCommand stability_cmd;
  SynthCommand synth_cmd;
  BenchmarkCommand bench_cmd;

  std::map<CLI::App*, std::function<int()>> handlers;
  auto add = [&](auto& command, const char* name, const char* description) {
    CLI::App* sub = app.add_subcommand(name, description);
    command.attach(sub);
    handlers[sub] = [&command, &out, &err] { return command.run(out, err); };
  };
  add(train_cmd, "train", "Fit a forest and save the model");
  add(predict_cmd, "predict", "Predict with a saved model");
  add(tune_cmd, "tune", "Tune mtry, sample fraction and node size by SMBO on OOB error");
  add(estimate_cmd, "estimate-time", "Estimate the wall time of a tuning run");
  add(curve_cmd, "oob-curve", "OOB measures as a function of the number of trees");
  add(importance_cmd, "importance", "Permutation variable importance on OOB rows");
  add(stability_cmd, "stability", "Rank agreement of importances across seeds");
  add(synth_cmd, "synth", "Write a synthetic fixture dataset");
  add(bench_cmd, "benchmark", "Repeated cross-validation comparison of tuners");

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: cli: " << message << '\n';
    return kExitUsage;
  }

  try {
    for (const auto& [sub, handler] : handlers) {
      if (sub->parsed()) return handler();
    }
    err << "error: cli: no subcommand given\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: cli: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: cli: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace foresttune::cli
