#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hierdoc/baselines.hpp"
#include "hierdoc/corpus.hpp"
#include "hierdoc/eval.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/model.hpp"
#include "hierdoc/text.hpp"
#include "hierdoc/training.hpp"

// Pipeline commands behind the `hierdoc` executable. Each one reads and writes
// files only, so the executable is a thin argument parser over these.
namespace hierdoc::cli {

namespace fs = std::filesystem;

struct CorpusSection {
  corpus::CommentMode mode = corpus::CommentMode::kFirst;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 1;
};

struct EvalSection {
  std::size_t beam = 20;
  std::size_t max_len = 30;
  std::size_t n_resamples = 10000;
  std::uint64_t seed = 1;
};

/// Sections corpus, text, features, model, training, eval. Missing keys take
/// their defaults; unknown keys and wrong types raise SchemaError.
struct RunConfig {
  CorpusSection corpus;
  text::VocabConfig text;
  features::FitConfig features;
  model::ModelConfig model;
  training::TrainingConfig training;
  EvalSection eval;

  Json to_json() const;
  static RunConfig from_json(const Json& j);
  static RunConfig load(const fs::path& path);
};

/// Environment variable naming a default RunConfig file.
inline constexpr const char* kConfigEnv = "HIERDOC_CONFIG";

/// Loads `path` if given, else the file named by HIERDOC_CONFIG, else defaults.
RunConfig resolve_config(const std::optional<fs::path>& path);

/// UsageError("no such file or directory: ...") when `path` is absent.
void require_exists(const fs::path& path);

struct MineSummary {
  std::size_t files = 0;
  std::size_t classes = 0;
  std::size_t pairs = 0;
  std::size_t examples = 0;
  std::size_t diagnostics = 0;
};
MineSummary cmd_mine(const fs::path& src_dir, const fs::path& out, corpus::CommentMode mode);

/// Writes train/valid/test.jsonl and projects.json under `out_dir`.
corpus::DatasetSplit cmd_split(const fs::path& in, const fs::path& out_dir, std::array<double, 3> ratios,
                               std::uint64_t seed);

features::FeatureArtifacts cmd_fit(const fs::path& train, const fs::path& artifacts_out, const RunConfig& config);

/// Reads `data_dir`/{train,valid}.jsonl and, when present, `data_dir`/artifacts.bin
/// (fitted on the training split otherwise). Writes best.ckpt, train_log.jsonl,
/// artifacts.bin, run_config.json and summary.json into `ckpt_dir`.
training::TrainResult cmd_train(const RunConfig& config, const fs::path& data_dir, const fs::path& ckpt_dir,
                                model::Ablation ablation);

struct GenerateOptions {
  std::optional<std::size_t> beam;     // run_config eval.beam when unset
  std::optional<std::size_t> max_len;  // run_config eval.max_len when unset
  std::optional<int> spec_level;       // K when unset
  std::optional<int> coh_level;        // K when unset
  /// Condition on the levels of each example's own C-sub (oracle levels, as in training).
  bool gold_levels = false;
};

/// `ckpt` is a training output directory or a best.ckpt inside one.
std::vector<eval::Prediction> cmd_generate(const fs::path& ckpt, const fs::path& split, const fs::path& out,
                                           const GenerateOptions& options = {});

std::vector<eval::Prediction> cmd_baseline(const fs::path& split, const fs::path& out, baselines::Kind kind,
                                           corpus::CommentMode mode);

eval::MetricReport cmd_eval(const fs::path& predictions, const fs::path& gold, const fs::path& report,
                            corpus::CommentMode mode);

/// The first report is the reference system. Either output path may be empty.
eval::Comparison cmd_compare(const std::vector<fs::path>& reports, eval::TestKind test, std::size_t n_resamples,
                             std::uint64_t seed, const fs::path& json_out, const fs::path& csv_out);

/// NIWF of C-sub against C-sup over `examples`, scored with the fitted stats.
eval::NiwfReport cmd_niwf(const fs::path& examples, const fs::path& artifacts, const fs::path& out);

}  // namespace hierdoc::cli
