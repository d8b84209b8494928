#include "classim/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "classim/classifiers/model_io.hpp"
#include "classim/classifiers/train.hpp"
#include "classim/cli/config.hpp"
#include "classim/cli/formats.hpp"
#include "classim/cli/manifest.hpp"
#include "classim/cli/predictions_io.hpp"
#include "classim/core/counting.hpp"
#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"
#include "classim/oracle/sampling.hpp"
#include "classim/oracle/scenario_io.hpp"
#include "classim/oracle/validate.hpp"
#include "classim/pd/parametric_distance.hpp"
#include "classim/twolevel/evaluate.hpp"
#include "classim/twolevel/persist.hpp"
#include "classim/twolevel/pipeline.hpp"

#ifndef CLASSIM_VERSION
#define CLASSIM_VERSION "unknown"
#endif

namespace classim::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using classifiers::TrainConfig;

std::shared_ptr<spdlog::logger> logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto log = spdlog::stderr_logger_mt("classim");
    log->set_pattern("[%l] %v");
    log->set_level(spdlog::level::err);
    return log;
  }();
  return instance;
}

void configure_logging() {
  const char* env = std::getenv("CLASSIM_LOG");
  const std::string level = env ? env : "error";
  if (level == "error") {
    logger()->set_level(spdlog::level::err);
  } else if (level == "info") {
    logger()->set_level(spdlog::level::info);
  } else if (level == "debug") {
    logger()->set_level(spdlog::level::debug);
  } else {
    throw UsageError("CLASSIM_LOG must be error, info or debug, got '" + level + "'");
  }
}

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 1;
  std::string format = "csv";
  std::vector<std::string> arguments;
};

/// Output directory held for the duration of one subcommand.
class OutDir {
public:
  OutDir(const fs::path& dir, std::string command, const Globals& g)
      : dir_((fs::create_directories(dir), dir)),
        lock_(dir_),
        manifest_(std::move(command), g.arguments),
        start_(std::chrono::steady_clock::now()) {}

  const fs::path& path() const { return dir_; }
  RunManifest& manifest() { return manifest_; }

  void write(const std::string& name, std::string_view bytes) {
    write_file(dir_ / name, bytes);
    manifest_.add_output(name);
    logger()->info("wrote {}", (dir_ / name).string());
  }

  void finish() {
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start_;
    manifest_.write(dir_, wall.count());
  }

private:
  fs::path dir_;
  OutputLock lock_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

TrainConfig train_config(const std::string& path, std::uint64_t seed) {
  if (path.empty()) {
    TrainConfig config;
    config.seed = seed;
    return config;
  }
  return load_train_config(path, seed);
}

std::size_t clamp_k(std::size_t k, const ClassSet& classes) {
  return std::min(k, classes.size() - 1);
}

void write_matrix(OutDir& out, const std::string& stem, const MatrixTable& table, std::size_t k,
                  const std::string& format) {
  if (format == "json") {
    out.write(stem + ".json", render_matrix_json(table));
    out.write("topk.json", render_top_k_json(table, k));
  } else {
    out.write(stem + ".csv", render_matrix(table));
    out.write("topk.csv", render_top_k(table, k));
  }
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string signed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.3f", v);
  return buf;
}

// sim ------------------------------------------------------------------------

struct SimArgs {
  std::string features, mode, predictions, train_config, out_dir, eval_split = "validation";
  std::size_t top_k = 3;
};

int run_sim(const SimArgs& a, const Globals& g, std::ostream& out) {
  const PredictionMode mode = parse_prediction_mode(a.mode);
  const Split eval_split = parse_split(a.eval_split);
  const SplitDataset data = ingest_features(a.features, g.seed);
  const LabeledFeatureSet& eval_set = data.get(eval_split);
  logger()->info("{} classes; evaluating on {} {} samples", data.classes.size(), eval_set.size(),
                 to_string(eval_split));

  OutDir dir(a.out_dir, "sim", g);
  dir.manifest().add_input("features", a.features);
  json config{{"mode", a.mode}, {"eval_split", a.eval_split}, {"top_k", a.top_k}, {"format", g.format}};

  std::optional<PredictionTable> table;
  if (!a.predictions.empty()) {
    dir.manifest().add_input("predictions", a.predictions);
    table = ingest_predictions(a.predictions, mode, data, eval_split);
  } else {
    if (!a.train_config.empty()) dir.manifest().add_input("train_config", a.train_config);
    const TrainConfig tc = train_config(a.train_config, g.seed);
    config["train"] = classifiers::train_config_to_json(tc);
    switch (mode) {
      case PredictionMode::ovr: {
        const auto models = classifiers::train_ovr_all(data.train, tc, g.threads);
        table = classifiers::predict_all(models, eval_set, PredictionMode::ovr);
        break;
      }
      case PredictionMode::multi:
        table = classifiers::predict(classifiers::train_multi(data.train, tc), eval_set);
        break;
      case PredictionMode::pairwise: {
        const auto models = classifiers::train_pairwise_all(data.train, tc, g.threads);
        table = classifiers::predict_all(models, eval_set, PredictionMode::pairwise);
        break;
      }
    }
  }

  const ConfusionCounts counts = mode == PredictionMode::ovr     ? count_misclass_ovr(eval_set, *table)
                                 : mode == PredictionMode::multi ? count_misclass_multi(eval_set, *table)
                                                                 : count_misclass_pairwise_all(eval_set, *table);
  const MatrixTable matrix = to_table(similarity_matrix(counts));
  const std::size_t k = clamp_k(a.top_k, data.classes);
  write_matrix(dir, "similarity", matrix, k, g.format);
  dir.manifest().set_seed(g.seed);
  dir.manifest().set_config(config);
  dir.finish();
  out << render_top_k(matrix, k);
  return kExitOk;
}

// pd -------------------------------------------------------------------------

struct PdArgs {
  std::string features, out_dir;
  std::size_t top_k = 3;
};

int run_pd(const PdArgs& a, const Globals& g, std::ostream& out) {
  const SplitDataset data = ingest_features(a.features, g.seed);
  OutDir dir(a.out_dir, "pd", g);
  dir.manifest().add_input("features", a.features);
  const MatrixTable matrix = to_table(pd::pd_matrix(data.train, g.threads));
  const std::size_t k = clamp_k(a.top_k, data.classes);
  write_matrix(dir, "pd", matrix, k, g.format);
  dir.manifest().set_seed(g.seed);
  dir.manifest().set_config({{"split", "train"}, {"top_k", a.top_k}, {"format", g.format}});
  dir.finish();
  out << render_top_k(matrix, k);
  return kExitOk;
}

// twolevel -------------------------------------------------------------------

struct BuildArgs {
  std::string features, sim, out_dir, train_config, order;
  double threshold = twolevel::kDefaultSimilarityThreshold;
};

int run_build(const BuildArgs& a, const Globals& g, std::ostream& out) {
  const SplitDataset data = ingest_features(a.features, g.seed);
  const SimilarityMatrix sim = to_similarity(read_matrix(a.sim));
  if (!(sim.classes() == data.classes)) {
    throw DataError(a.sim + ": classes differ from those in " + a.features);
  }
  const auto sets = twolevel::select_similar(sim, a.threshold);
  std::vector<std::size_t> order;
  if (!a.order.empty()) order = twolevel::load_order_file(a.order, data.classes);
  const TrainConfig tc = train_config(a.train_config, g.seed);

  OutDir dir(a.out_dir, "twolevel build", g);
  dir.manifest().add_input("features", a.features);
  dir.manifest().add_input("sim", a.sim);
  if (!a.train_config.empty()) dir.manifest().add_input("train_config", a.train_config);
  if (!a.order.empty()) dir.manifest().add_input("order", a.order);

  const auto model = twolevel::build_from_split(data, sets, tc, g.threads, order);
  twolevel::save_two_level(model, dir.path());
  const json doc = json::parse(read_file(dir.path() / twolevel::kTwoLevelDocument));
  dir.manifest().add_output(twolevel::kTwoLevelDocument);
  for (const char* level : {"first_level", "second_level"}) {
    for (const auto& [label, file] : doc.at(level).items()) dir.manifest().add_output(file.get<std::string>());
  }
  dir.manifest().set_seed(g.seed);
  dir.manifest().set_config({{"threshold", a.threshold}, {"train", classifiers::train_config_to_json(tc)}});
  dir.finish();

  out << "similar sets (ClassSim > " << a.threshold << "):\n";
  for (std::size_t c = 0; c < data.classes.size(); ++c) {
    out << "  " << data.classes.label(c) << ":";
    if (sets.sets[c].empty()) out << " (none)";
    for (const auto& s : sets.sets[c]) out << ' ' << s;
    out << '\n';
  }
  out << "second-level models: " << model.second_level_count() << " of " << data.classes.size() << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string model_dir, features, out_dir;
};

std::string confusion_csv(const twolevel::AccuracyReport& r) {
  const std::size_t n = r.classes.size();
  std::string s = "class";
  for (const auto& l : r.classes.labels()) s += ',' + l;
  s += ",none\n";
  for (std::size_t i = 0; i < n; ++i) {
    s += r.classes.label(i);
    for (std::size_t j = 0; j <= n; ++j) s += ',' + std::to_string(r.confusion[i * (n + 1) + j]);
    s += '\n';
  }
  return s;
}

json report_json(const twolevel::AccuracyReport& r) {
  return {{"accuracy", r.accuracy},  {"correct", r.correct},     {"total", r.total},
          {"none", r.none_count},    {"recall", r.recall},       {"class_totals", r.class_totals},
          {"confusion", r.confusion}};
}

int run_eval(const EvalArgs& a, const Globals& g, std::ostream& out) {
  const auto model = twolevel::load_two_level(a.model_dir);
  const SplitDataset data = ingest_features(a.features, g.seed);
  if (!(data.classes == model.classes)) {
    throw DataError(a.features + ": classes differ from those of the model in " + a.model_dir);
  }
  const auto baseline = twolevel::evaluate(
      [&](std::span<const double> x) { return twolevel::route_baseline(model, x); }, data.test, g.threads);
  const auto two = twolevel::evaluate([&](std::span<const double> x) { return twolevel::route(model, x); },
                                      data.test, g.threads);

  out << "test samples: " << two.total << '\n';
  out << "baseline accuracy:  " << fixed3(baseline.accuracy) << " (" << baseline.correct << '/'
      << baseline.total << ", none " << baseline.none_count << ")\n";
  out << "two-level accuracy: " << fixed3(two.accuracy) << " (" << two.correct << '/' << two.total
      << ", none " << two.none_count << ")\n";
  out << "delta: " << signed3(two.accuracy - baseline.accuracy) << '\n';
  out << "recall (baseline -> two-level):\n";
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    out << "  " << model.classes.label(c) << ": " << fixed3(baseline.recall[c]) << " -> "
        << fixed3(two.recall[c]) << '\n';
  }

  if (a.out_dir.empty()) return kExitOk;
  OutDir dir(a.out_dir, "twolevel eval", g);
  dir.manifest().add_input("model", fs::path(a.model_dir) / twolevel::kTwoLevelDocument);
  dir.manifest().add_input("features", a.features);
  if (g.format == "json") {
    json doc{{"classes", model.classes.labels()},
             {"baseline", report_json(baseline)},
             {"two_level", report_json(two)}};
    dir.write("eval.json", doc.dump(2) + "\n");
  } else {
    std::string acc = "router,accuracy,correct,total,none\n";
    for (const auto& [name, r] : {std::pair{"baseline", &baseline}, std::pair{"two_level", &two}}) {
      acc += std::string(name) + ',' + format17(r->accuracy) + ',' + std::to_string(r->correct) + ',' +
             std::to_string(r->total) + ',' + std::to_string(r->none_count) + '\n';
    }
    std::string recall = "class,baseline,two_level\n";
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
      recall += model.classes.label(c) + ',' + format17(baseline.recall[c]) + ',' + format17(two.recall[c]) + '\n';
    }
    dir.write("accuracy.csv", acc);
    dir.write("recall.csv", recall);
    dir.write("confusion_baseline.csv", confusion_csv(baseline));
    dir.write("confusion_two_level.csv", confusion_csv(two));
  }
  dir.manifest().set_seed(g.seed);
  dir.manifest().set_config({{"split", "test"}, {"format", g.format}});
  dir.finish();
  return kExitOk;
}

// oracle ---------------------------------------------------------------------

struct OracleArgs {
  std::string scenario, mode, out_dir, train_config;
};

oracle::Scenario scenario_for(const std::string& path, const Globals& g) {
  auto scenario = oracle::load_scenario(path);
  if (g.seed_given) scenario.seed = g.seed;
  return scenario;
}

std::string report_csv(const oracle::ValidationReport& report) {
  std::string s =
      "first,second,n_first,n_second,second_given_first,first_given_second,class_sim,empirical,exact,"
      "deviation,se_bound,equal_priors,within_bound\n";
  for (const auto& p : report.pairs) {
    s += p.first + ',' + p.second + ',' + std::to_string(p.n_first) + ',' + std::to_string(p.n_second) + ',' +
         std::to_string(p.second_given_first) + ',' + std::to_string(p.first_given_second) + ',' +
         format17(p.class_sim) + ',' + format17(p.empirical) + ',' + format17(p.exact) + ',' +
         format17(p.deviation) + ',' + format17(p.se_bound) + ',' + (p.equal_priors ? "true" : "false") +
         ',' + (p.within_bound ? "true" : "false") + '\n';
  }
  return s;
}

json report_json(const oracle::ValidationReport& report) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"n_first", p.n_first},
                     {"n_second", p.n_second},
                     {"second_given_first", p.second_given_first},
                     {"first_given_second", p.first_given_second},
                     {"class_sim", p.class_sim},
                     {"empirical", p.empirical},
                     {"exact", p.exact},
                     {"deviation", p.deviation},
                     {"se_bound", p.se_bound},
                     {"equal_priors", p.equal_priors},
                     {"within_bound", p.within_bound}});
  }
  return {{"mode", oracle::to_string(report.mode)},
          {"evaluated_samples", report.evaluated_samples},
          {"pairs", pairs}};
}

int run_oracle(const OracleArgs& a, const Globals& g, std::ostream& out) {
  const auto mode = oracle::parse_validation_mode(a.mode);
  if (mode == oracle::ValidationMode::ideal && !a.train_config.empty()) {
    throw UsageError("--train-config has no effect with --mode ideal");
  }
  const auto scenario = scenario_for(a.scenario, g);
  const TrainConfig tc = train_config(a.train_config, scenario.seed);

  OutDir dir(a.out_dir, "oracle run", g);
  dir.manifest().add_input("scenario", a.scenario);
  if (!a.train_config.empty()) dir.manifest().add_input("train_config", a.train_config);
  const auto report = oracle::validate_classim(scenario, mode, tc, g.threads);
  if (g.format == "json") {
    dir.write("report.json", report_json(report).dump(2) + "\n");
  } else {
    dir.write("report.csv", report_csv(report));
  }
  json config{{"mode", a.mode}, {"format", g.format}};
  if (mode != oracle::ValidationMode::ideal) config["train"] = classifiers::train_config_to_json(tc);
  dir.manifest().set_seed(scenario.seed);
  dir.manifest().set_config(config);
  dir.finish();

  std::size_t bounded = 0, within = 0;
  out << "mode " << a.mode << ", " << report.evaluated_samples << " evaluated samples\n";
  for (const auto& p : report.pairs) {
    out << "  " << p.first << '-' << p.second << ": empirical " << fixed3(p.empirical) << " exact "
        << fixed3(p.exact) << " deviation " << signed3(p.deviation) << " bound " << fixed3(p.se_bound);
    if (p.equal_priors) {
      ++bounded;
      if (p.within_bound) ++within;
      out << (p.within_bound ? " within" : " OUTSIDE");
    } else {
      out << " (unequal priors, no bound)";
    }
    out << '\n';
  }
  out << within << " of " << bounded << " equal-prior pairs within 3 SE\n";
  return kExitOk;
}

struct SampleArgs {
  std::string scenario, out_dir;
};

int run_sample(const SampleArgs& a, const Globals& g, std::ostream& out) {
  const auto scenario = scenario_for(a.scenario, g);
  OutDir dir(a.out_dir, "oracle sample", g);
  dir.manifest().add_input("scenario", a.scenario);
  const SplitDataset data = oracle::sample_split(scenario, g.threads);
  dir.write("features.csv", render_features(data));
  dir.manifest().set_seed(scenario.seed);
  dir.manifest().set_config(json::object());
  dir.finish();
  out << "sampled " << data.train.size() + data.validation.size() + data.test.size() << " rows ("
      << data.train.size() << " train, " << data.validation.size() << " validation, " << data.test.size()
      << " test)\n";
  return kExitOk;
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

int fail(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << "error: " << kind << ": " << one_line(message) << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inter-class similarity from misclassification ratios", "classim"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", CLASSIM_VERSION);

  Globals g;
  g.threads = default_thread_count();
  for (int k = 1; k < argc; ++k) g.arguments.emplace_back(argv[k]);
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for splits and training (default 0)");
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1u, 4096u));
  app.add_option("--format", g.format, "Machine output format")->check(CLI::IsMember({"csv", "json"}));

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "ClassSim matrix and top-k table");
  sim_cmd->add_option("--features", sim.features, "Features CSV")->required();
  sim_cmd->add_option("--mode", sim.mode, "Counting mode")
      ->required()
      ->check(CLI::IsMember({"pairwise", "ovr", "multi"}));
  auto* preds_opt = sim_cmd->add_option("--predictions", sim.predictions, "External scores (JSONL)");
  auto* cfg_opt = sim_cmd->add_option("--train-config", sim.train_config, "Training configuration TOML");
  preds_opt->excludes(cfg_opt);
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  sim_cmd->add_option("--top-k", sim.top_k, "Entries per top-k row")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--eval-split", sim.eval_split, "Split the counts come from")
      ->check(CLI::IsMember({"train", "validation", "test"}));

  PdArgs pda;
  auto* pd_cmd = app.add_subcommand("pd", "Parametric distance matrix and ascending top-k table");
  pd_cmd->add_option("--features", pda.features, "Features CSV")->required();
  pd_cmd->add_option("--out-dir", pda.out_dir, "Output directory")->required();
  pd_cmd->add_option("--top-k", pda.top_k, "Entries per top-k row")->check(CLI::PositiveNumber);

  auto* tl_cmd = app.add_subcommand("twolevel", "Two-level model");
  tl_cmd->require_subcommand(1);
  BuildArgs build;
  auto* build_cmd = tl_cmd->add_subcommand("build", "Select similar sets and train both levels");
  build_cmd->add_option("--features", build.features, "Features CSV")->required();
  build_cmd->add_option("--sim", build.sim, "Similarity matrix (CSV or JSON)")->required();
  build_cmd->add_option("--threshold", build.threshold, "Similar-set threshold (strict)");
  build_cmd->add_option("--out-dir", build.out_dir, "Model directory")->required();
  build_cmd->add_option("--train-config", build.train_config, "Training configuration TOML");
  build_cmd->add_option("--order", build.order, "Routing order, one class per line");
  EvalArgs eval;
  auto* eval_cmd = tl_cmd->add_subcommand("eval", "Baseline vs two-level accuracy on the test split");
  eval_cmd->add_option("--model-dir", eval.model_dir, "Model directory")->required();
  eval_cmd->add_option("--features", eval.features, "Features CSV")->required();
  eval_cmd->add_option("--out-dir", eval.out_dir, "Write report tables here");

  auto* or_cmd = app.add_subcommand("oracle", "Synthetic scenarios with known overlap");
  or_cmd->require_subcommand(1);
  OracleArgs orun;
  auto* run_cmd = or_cmd->add_subcommand("run", "Compare 2*ClassSim with the exact overlap");
  run_cmd->add_option("--scenario", orun.scenario, "Scenario TOML")->required();
  run_cmd->add_option("--mode", orun.mode, "Classifier")
      ->required()
      ->check(CLI::IsMember({"ideal", "ovr", "multi"}));
  run_cmd->add_option("--out-dir", orun.out_dir, "Output directory")->required();
  run_cmd->add_option("--train-config", orun.train_config, "Training configuration TOML");
  SampleArgs samp;
  auto* sample_cmd = or_cmd->add_subcommand("sample", "Export a scenario as a features CSV");
  sample_cmd->add_option("--scenario", samp.scenario, "Scenario TOML")->required();
  sample_cmd->add_option("--out-dir", samp.out_dir, "Output directory")->required();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << CLASSIM_VERSION << '\n';
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      return fail(err, "usage", e.what(), kExitUsage);
    }
    g.seed_given = seed_opt->count() > 0;
    configure_logging();
    logger()->debug("threads={} seed={} format={}", g.threads, g.seed, g.format);

    if (sim_cmd->parsed()) return run_sim(sim, g, out);
    if (pd_cmd->parsed()) return run_pd(pda, g, out);
    if (build_cmd->parsed()) return run_build(build, g, out);
    if (eval_cmd->parsed()) return run_eval(eval, g, out);
    if (run_cmd->parsed()) return run_oracle(orun, g, out);
    if (sample_cmd->parsed()) return run_sample(samp, g, out);
    return fail(err, "usage", "no subcommand given", kExitUsage);
  } catch (const UsageError& e) {
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const DataError& e) {
    return fail(err, "data", e.what(), kExitData);
  } catch (const fs::filesystem_error& e) {
    return fail(err, "data", e.what(), kExitData);
  } catch (const NumericalError& e) {
    return fail(err, "numerical", e.what(), kExitNumerical);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), kExitInternal);
  }
}

}  // namespace classim::cli
