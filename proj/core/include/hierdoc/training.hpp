#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hierdoc/checkpoint.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/model.hpp"

namespace hierdoc::training {

/// Which negative positions the unlikelihood term covers.
enum class UlScope {
  kSuffix,  // from the first removed position on (the shared prefix is left to MLE)
  kFull,    // every token of the negative
};
UlScope parse_ul_scope(std::string_view s);
std::string_view ul_scope_name(UlScope s);

struct TrainingConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  double alpha = 1.0;
  std::size_t patience = 10;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 1;
  double negative_removal_rate = 0.1;
  UlScope ul_scope = UlScope::kSuffix;
  /// Also report eval-mode training perplexity every epoch.
  bool eval_train_ppl = false;
  /// Stop once eval-mode training perplexity drops below this (0 disables; implies eval_train_ppl).
  double stop_train_ppl = 0.0;

  Json to_json() const;
  static TrainingConfig from_json(const Json& j);
  bool operator==(const TrainingConfig&) const = default;
};

struct NegativeExample {
  std::vector<std::string> tokens;
  std::vector<std::size_t> removed;  // ascending positions in the positive
};

/// Removes n = max(1, round(rate * |c_sub|)) positions, drawn first from
/// tokens that also occur in c_sup, then from the rest.
NegativeExample make_negative(std::span<const std::string> c_sub, std::span<const std::string> c_sup, double rate,
                              Rng& rng);

/// One training item: the model view plus the raw comments for negatives.
struct TrainExample {
  std::string id;
  model::ModelInput input;
  features::Tokens c_sub;
  features::Tokens c_sup;
};

/// Vocabulary over the training split: the three encoder streams as code
/// tokens, C-sub as comment tokens. Only the shared layout is supported.
text::Vocabulary build_vocabulary(std::span<const corpus::OverrideExample> train, corpus::CommentMode mode,
                                  const text::VocabConfig& config);

/// Per-example (specificity, coherence) levels of the gold C-sub.
std::vector<std::pair<int, int>> assign_levels(std::span<const features::ExampleInputs> inputs,
                                               const features::FeatureArtifacts& art);

std::vector<TrainExample> make_train_examples(std::span<const corpus::OverrideExample> examples,
                                              const features::FeatureArtifacts& art, const text::Vocabulary& vocab,
                                              const model::ModelConfig& config);

/// Extended ids of the negative (no EOS), taken from the positive's target.
std::vector<std::int32_t> negative_target(const model::ModelInput& in, const NegativeExample& neg);

/// -sum log(1 - min(p, 1 - 1e-10)) over a [1 x n] row.
model::Var unlikelihood_from_probs(model::Var probs);

/// unlikelihood_from_probs over the covered positions of the negative.
model::Var unlikelihood_nll(model::Model& model, model::Pass& pass, const model::Memory& mem,
                            const model::DecoderState& init, const model::ModelInput& in, const NegativeExample& neg,
                            UlScope scope);

/// mean(mle) + alpha * mean(ul) (the second term only when use_ul).
double total_loss(std::span<const double> mle, std::span<const double> ul, double alpha, bool use_ul);

class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}
  /// Records one epoch's validation loss; true when it improves on the best so far.
  bool update(double loss);
  bool should_stop() const { return bad_epochs_ >= patience_; }
  double best() const { return best_; }

 private:
  std::size_t patience_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs_ = 0;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_mle = 0.0;  // mean per example, training mode
  double train_ul = 0.0;
  double train_ule = 0.0;
  double valid_mle = 0.0;  // mean per example, eval mode
  double valid_ppl = 0.0;
  std::optional<double> train_ppl;
  bool improved = false;
  double elapsed_s = 0.0;

  Json to_json() const;
};

struct TrainResult {
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  double best_valid = 0.0;
  std::string stop_reason;  // "patience", "max_epochs", "train_ppl", "diverged"
  std::string error;        // set when diverged
};

struct TrainOptions {
  /// best.ckpt and train_log.jsonl go here when non-empty.
  std::filesystem::path out_dir;
  std::function<void(const EpochLog&)> on_epoch;
};

/// Epoch loop with seeded shuffling, per-epoch negatives, Adam, and early
/// stopping on validation MLE. The model ends holding the best parameters.
/// Divergence stops the loop (stop_reason "diverged") with the best epoch kept.
TrainResult train(model::Model& model, std::span<const TrainExample> train_set,
                  std::span<const TrainExample> valid_set, const TrainingConfig& config,
                  const TrainOptions& options = {});

/// exp(total NLL / total target tokens) in eval mode.
double perplexity(model::Model& model, std::span<const TrainExample> examples);
/// Mean per-example NLL in eval mode.
double mean_nll(model::Model& model, std::span<const TrainExample> examples);

void save_checkpoint(const std::filesystem::path& path, const model::Model& model, const nn::AdamState* adam,
                     const Json& meta);

}  // namespace hierdoc::training
