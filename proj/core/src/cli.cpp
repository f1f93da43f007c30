#include "hierdoc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "hierdoc/error.hpp"

namespace hierdoc::cli {

namespace {

// Rejects keys missing from `defaults` and values whose JSON kind differs.
void check_section(const Json& j, const Json& defaults, const std::string& section) {
  if (!j.is_object()) throw SchemaError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw SchemaError("unknown key '" + section + "." + key + "'");
    const auto& def = defaults.at(key);
    const bool ok = def.is_boolean()  ? value.is_boolean()
                    : def.is_number() ? value.is_number()
                    : def.is_string() ? value.is_string()
                    : def.is_array()  ? value.is_array()
                                      : true;
    if (!ok) throw SchemaError("config key '" + section + "." + key + "' has the wrong type");
    if (def.is_number_unsigned() && value.is_number_integer() && value.get<std::int64_t>() < 0)
      throw SchemaError("config key '" + section + "." + key + "' must be non-negative");
  }
}

template <class T>
void get(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

Json corpus_json(const CorpusSection& c) {
  return {{"mode", std::string(corpus::mode_name(c.mode))},
          {"split_ratios", c.split_ratios},
          {"split_seed", c.split_seed}};
}

Json text_json(const text::VocabConfig& c) {
  return {{"cap", c.cap}, {"min_freq", c.min_freq}, {"shared", c.shared}};
}

Json features_json(const features::FitConfig& c) {
  return {{"k_levels", c.k_levels}, {"static_dim", c.static_dim}, {"window", c.window}, {"seed", c.seed}};
}

Json eval_json(const EvalSection& c) {
  return {{"beam", c.beam}, {"max_len", c.max_len}, {"n_resamples", c.n_resamples}, {"seed", c.seed}};
}

std::array<double, 3> check_ratios(const std::vector<double>& r) {
  if (r.size() != 3) throw SchemaError("split ratios need exactly three values");
  double sum = 0.0;
  for (double x : r) {
    if (!(x >= 0.0)) throw SchemaError("split ratios must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw SchemaError("split ratios must sum to 1");
  return {r[0], r[1], r[2]};
}

fs::path checkpoint_dir(const fs::path& ckpt) { return fs::is_directory(ckpt) ? ckpt : ckpt.parent_path(); }

fs::path checkpoint_file(const fs::path& ckpt) { return fs::is_directory(ckpt) ? ckpt / "best.ckpt" : ckpt; }

void make_parent(const fs::path& out) {
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

Json RunConfig::to_json() const {
  return {{"corpus", corpus_json(corpus)},
          {"text", text_json(text)},
          {"features", features_json(features)},
          {"model", model.to_json()},
          {"training", training.to_json()},
          {"eval", eval_json(eval)}};
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("run config must be a JSON object");
  RunConfig c;
  const Json defaults = c.to_json();
  for (const auto& [key, value] : j.items())
    if (!defaults.contains(key)) throw SchemaError("unknown config section '" + key + "'");

  if (j.contains("corpus")) {
    const auto& s = j.at("corpus");
    check_section(s, defaults.at("corpus"), "corpus");
    if (s.contains("mode")) c.corpus.mode = corpus::parse_mode(s.at("mode").get<std::string>());
    if (s.contains("split_ratios")) c.corpus.split_ratios = check_ratios(s.at("split_ratios").get<std::vector<double>>());
    get(s, "split_seed", c.corpus.split_seed);
  }
  if (j.contains("text")) {
    const auto& s = j.at("text");
    check_section(s, defaults.at("text"), "text");
    get(s, "cap", c.text.cap);
    get(s, "min_freq", c.text.min_freq);
    get(s, "shared", c.text.shared);
    if (c.text.cap < static_cast<std::size_t>(text::kNumReserved)) throw SchemaError("text.cap must be at least 4");
    if (!c.text.shared) throw SchemaError("text.shared=false is not supported");
  }
  if (j.contains("features")) {
    const auto& s = j.at("features");
    check_section(s, defaults.at("features"), "features");
    get(s, "k_levels", c.features.k_levels);
    get(s, "static_dim", c.features.static_dim);
    get(s, "window", c.features.window);
    get(s, "seed", c.features.seed);
    if (c.features.static_dim == 0 || c.features.window == 0)
      throw SchemaError("features.static_dim and features.window must be positive");
  }
  if (j.contains("model")) c.model = model::ModelConfig::from_json(j.at("model"));
  if (j.contains("training")) c.training = training::TrainingConfig::from_json(j.at("training"));
  if (j.contains("eval")) {
    const auto& s = j.at("eval");
    check_section(s, defaults.at("eval"), "eval");
    get(s, "beam", c.eval.beam);
    get(s, "max_len", c.eval.max_len);
    get(s, "n_resamples", c.eval.n_resamples);
    get(s, "seed", c.eval.seed);
    if (c.eval.beam == 0 || c.eval.max_len == 0 || c.eval.n_resamples == 0)
      throw SchemaError("eval.beam, eval.max_len and eval.n_resamples must be positive");
  }
  if (c.features.k_levels != c.model.k_levels)
    throw SchemaError("features.k_levels (" + std::to_string(c.features.k_levels) + ") and model.k_levels (" +
                      std::to_string(c.model.k_levels) + ") differ");
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  require_exists(path);
  try {
    return from_json(read_json(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

RunConfig resolve_config(const std::optional<fs::path>& path) {
  if (path) return RunConfig::load(*path);
  if (const char* env = std::getenv(kConfigEnv); env && *env) return RunConfig::load(env);
  return RunConfig{};
}

void require_exists(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("no such file or directory: " + path.string());
}

// ---------------------------------------------------------------------------
// Commands

MineSummary cmd_mine(const fs::path& src_dir, const fs::path& out, corpus::CommentMode mode) {
  require_exists(src_dir);
  if (!fs::is_directory(src_dir)) throw UsageError("not a directory: " + src_dir.string());
  const auto r = corpus::mine_directory(src_dir, mode);
  make_parent(out);
  corpus::write_examples(out, r.examples);
  return {r.files, r.classes, r.pairs, r.examples.size(), r.diagnostics.size()};
}

corpus::DatasetSplit cmd_split(const fs::path& in, const fs::path& out_dir, std::array<double, 3> ratios,
                               std::uint64_t seed) {
  require_exists(in);
  check_ratios({ratios.begin(), ratios.end()});
  auto split = corpus::partition_by_project(corpus::read_examples(in), ratios, seed);
  fs::create_directories(out_dir);
  corpus::write_examples(out_dir / "train.jsonl", split.train);
  corpus::write_examples(out_dir / "valid.jsonl", split.valid);
  corpus::write_examples(out_dir / "test.jsonl", split.test);
  Json projects = Json::object();
  for (const auto& [project, s] : split.project_split) projects[project] = std::string(corpus::split_name(s));
  write_json(out_dir / "projects.json", {{"seed", seed}, {"ratios", ratios}, {"projects", projects}});
  return split;
}

features::FeatureArtifacts cmd_fit(const fs::path& train, const fs::path& artifacts_out, const RunConfig& config) {
  require_exists(train);
  const auto examples = corpus::read_examples(train);
  auto art = features::fit_artifacts(examples, config.corpus.mode, config.features, features::file_hash(train));
  make_parent(artifacts_out);
  features::save_artifacts(artifacts_out, art);
  return art;
}

training::TrainResult cmd_train(const RunConfig& config, const fs::path& data_dir, const fs::path& ckpt_dir,
                                model::Ablation ablation) {
  require_exists(data_dir);
  require_exists(data_dir / "train.jsonl");
  const auto train = corpus::read_examples(data_dir / "train.jsonl");
  if (train.empty()) throw UsageError("empty training split: " + (data_dir / "train.jsonl").string());
  std::vector<corpus::OverrideExample> valid;
  if (fs::exists(data_dir / "valid.jsonl")) valid = corpus::read_examples(data_dir / "valid.jsonl");

  const auto mode = config.corpus.mode;
  features::FeatureArtifacts art =
      fs::exists(data_dir / "artifacts.bin")
          ? features::load_artifacts(data_dir / "artifacts.bin")
          : features::fit_artifacts(train, mode, config.features, features::file_hash(data_dir / "train.jsonl"));
  if (art.mode != mode)
    throw SchemaError("artifacts were fitted in mode '" + std::string(corpus::mode_name(art.mode)) +
                      "' but the config asks for '" + std::string(corpus::mode_name(mode)) + "'");
  if (art.specificity.k != config.model.k_levels)
    throw SchemaError("artifacts use " + std::to_string(art.specificity.k) + " levels, model.k_levels is " +
                      std::to_string(config.model.k_levels));

  RunConfig resolved = config;
  resolved.model = model::apply_ablation(config.model, ablation);

  const auto vocab = training::build_vocabulary(train, mode, resolved.text);
  model::Model m(resolved.model, vocab, resolved.training.seed);
  const auto train_set = training::make_train_examples(train, art, vocab, resolved.model);
  const auto valid_set = training::make_train_examples(valid, art, vocab, resolved.model);

  fs::create_directories(ckpt_dir);
  features::save_artifacts(ckpt_dir / "artifacts.bin", art);
  Json run = resolved.to_json();
  run["ablation"] = std::string(model::ablation_name(ablation));
  write_json(ckpt_dir / "run_config.json", run);

  training::TrainOptions opts;
  opts.out_dir = ckpt_dir;
  auto result = training::train(m, train_set, valid_set, resolved.training, opts);
  // A run that diverged before its first improvement never wrote a checkpoint.
  if (!fs::exists(ckpt_dir / "best.ckpt"))
    training::save_checkpoint(ckpt_dir / "best.ckpt", m, nullptr,
                              {{"config_hash", resolved.model.hash()}, {"training", resolved.training.to_json()}});

  write_json(ckpt_dir / "summary.json", {{"ablation", std::string(model::ablation_name(ablation))},
                                         {"epochs", result.log.size()},
                                         {"best_epoch", result.best_epoch},
                                         {"best_valid_mle", result.best_valid},
                                         {"stop_reason", result.stop_reason},
                                         {"error", result.error},
                                         {"train_examples", train_set.size()},
                                         {"valid_examples", valid_set.size()},
                                         {"vocab_size", vocab.size()}});
  return result;
}

std::vector<eval::Prediction> cmd_generate(const fs::path& ckpt, const fs::path& split, const fs::path& out,
                                           const GenerateOptions& options) {
  require_exists(ckpt);
  require_exists(split);
  const fs::path dir = checkpoint_dir(ckpt);
  require_exists(checkpoint_file(ckpt));
  require_exists(dir / "run_config.json");
  Json run = read_json(dir / "run_config.json");
  run.erase("ablation");
  const RunConfig config = RunConfig::from_json(run);

  auto m = model::Model::load(checkpoint_file(ckpt));
  const int K = m.config().k_levels;
  const int spec = options.spec_level.value_or(K);
  const int coh = options.coh_level.value_or(K);
  if (spec < 1 || spec > K || coh < 1 || coh > K)
    throw UsageError("levels must lie in 1.." + std::to_string(K));
  const std::size_t beam = options.beam.value_or(config.eval.beam);
  const std::size_t max_len = options.max_len.value_or(config.eval.max_len);
  if (beam == 0 || max_len == 0) throw UsageError("--beam and --max-len must be positive");

  const auto examples = corpus::read_examples(split);
  std::vector<features::ExampleInputs> inputs;
  for (const auto& ex : examples) inputs.push_back(features::prepare_example(ex, config.corpus.mode));
  std::vector<std::pair<int, int>> levels(examples.size(), {spec, coh});
  if (options.gold_levels) {
    require_exists(dir / "artifacts.bin");
    levels = training::assign_levels(inputs, features::load_artifacts(dir / "artifacts.bin"));
  }

  std::vector<eval::Prediction> preds;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto [s, c] = levels[i];
    const auto mi = model::make_input(inputs[i], m.vocab(), m.config(), s, c);
    preds.push_back({examples[i].id, model::generate(m, mi, beam, max_len, s, c)});
  }
  make_parent(out);
  eval::write_predictions(out, preds);
  return preds;
}

std::vector<eval::Prediction> cmd_baseline(const fs::path& split, const fs::path& out, baselines::Kind kind,
                                           corpus::CommentMode mode) {
  require_exists(split);
  std::vector<eval::Prediction> preds;
  for (const auto& ex : corpus::read_examples(split)) preds.push_back({ex.id, baselines::run(kind, ex, mode)});
  make_parent(out);
  eval::write_predictions(out, preds);
  return preds;
}

eval::MetricReport cmd_eval(const fs::path& predictions, const fs::path& gold, const fs::path& report,
                            corpus::CommentMode mode) {
  require_exists(predictions);
  require_exists(gold);
  const auto preds = eval::read_predictions(predictions);
  const auto examples = corpus::read_examples(gold);
  auto r = eval::score(preds, examples, mode, predictions.stem().string());
  make_parent(report);
  write_json(report, r.to_json());
  return r;
}

eval::Comparison cmd_compare(const std::vector<fs::path>& reports, eval::TestKind test, std::size_t n_resamples,
                             std::uint64_t seed, const fs::path& json_out, const fs::path& csv_out) {
  if (reports.size() < 2) throw UsageError("compare needs at least two reports");
  std::vector<eval::MetricReport> loaded;
  std::set<std::string> names;
  for (const auto& p : reports) {
    require_exists(p);
    auto r = eval::MetricReport::from_json(read_json(p));
    if (r.name.empty() || names.count(r.name)) r.name = p.stem().string();
    // Same stem twice (a/report.json, b/report.json): fall back to the full path.
    if (names.count(r.name)) r.name = p.string();
    names.insert(r.name);
    loaded.push_back(std::move(r));
  }
  auto cmp = eval::compare(loaded, test, n_resamples, seed);
  if (!json_out.empty()) {
    make_parent(json_out);
    write_json(json_out, cmp.to_json());
  }
  if (!csv_out.empty()) {
    make_parent(csv_out);
    write_file(csv_out, cmp.to_csv());
  }
  return cmp;
}

eval::NiwfReport cmd_niwf(const fs::path& examples, const fs::path& artifacts, const fs::path& out) {
  require_exists(examples);
  require_exists(artifacts);
  const auto art = features::load_artifacts(artifacts);
  auto r = eval::niwf_report(corpus::read_examples(examples), art.stats, art.mode);
  if (!out.empty()) {
    make_parent(out);
    write_json(out, r.to_json());
  }
  return r;
}

}  // namespace hierdoc::cli
