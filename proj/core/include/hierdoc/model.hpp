#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hierdoc/checkpoint.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/json_io.hpp"
#include "hierdoc/tensor.hpp"
#include "hierdoc/text.hpp"

namespace hierdoc::model {

using nn::Parameter;
using nn::Tape;
using nn::Tensor;
using nn::Var;

struct ModelConfig {
  std::size_t embed_dim = 64;
  std::size_t enc_hidden = 64;
  std::size_t enc_layers = 2;
  std::size_t dec_hidden = 128;
  std::size_t dec_layers = 2;
  double dropout = 0.7;
  int k_levels = 5;
  std::size_t level_embed_dim = 16;
  /// Width of the per-stream projection of the token feature vector.
  std::size_t feature_proj_dim = 16;
  /// Source streams longer than this are cut (0 keeps everything).
  std::size_t max_source_len = 0;

  bool use_class_name_encoder = true;
  bool use_sup_comment_encoder = true;
  bool use_features = true;
  bool use_specificity = true;
  bool use_coherence = true;
  bool use_unlikelihood = true;

  bool stream_enabled(features::Stream s) const;
  Json to_json() const;
  /// Rejects unknown keys with SchemaError.
  static ModelConfig from_json(const Json& j);
  /// FNV-1a of the canonical JSON.
  std::string hash() const;
  bool operator==(const ModelConfig&) const = default;
};

/// Component ablations plus the plain encoder-decoder baseline.
enum class Ablation { kFull, kNoUl, kNoUlSpec, kNoUlSpecFeats, kNoClassName, kNoSupComment, kSeq2Seq };
Ablation parse_ablation(std::string_view name);
std::string_view ablation_name(Ablation a);
ModelConfig apply_ablation(ModelConfig base, Ablation a);

/// Id-level view of one example, restricted to the streams the config enables.
struct ModelInput {
  std::array<std::vector<std::int32_t>, features::kNumStreams> ids;      // vocabulary ids, UNK for OOV
  std::array<std::vector<std::int32_t>, features::kNumStreams> ext_ids;  // ids in the extended vocabulary
  std::array<Tensor, features::kNumStreams> features;                    // T x kFeatureDim (zeros when disabled)
  std::vector<std::string> oov;                                          // extended id V+k -> oov[k]
  std::vector<std::int32_t> target;                                      // gold ext ids followed by EOS
  int spec_level = 1;
  int coh_level = 1;

  std::size_t extended_size(std::size_t vocab_size) const { return vocab_size + oov.size(); }
  /// Extended id of `token` (vocabulary first, then source OOVs), or UNK.
  std::int32_t ext_id_of(const std::string& token, const text::Vocabulary& vocab) const;
};

ModelInput make_input(const features::ExampleInputs& in, const text::Vocabulary& vocab, const ModelConfig& config,
                      int spec_level = 1, int coh_level = 1);

struct EncoderOutput {
  Var states;               // T x 2*enc_hidden (T >= 1)
  std::vector<Var> finals;  // per layer: 1 x 2*enc_hidden (forward ⧺ backward)
};

struct DecoderState {
  std::vector<Var> h;  // per layer, 1 x dec_hidden
  std::size_t step = 0;
};

/// Attention memory shared by every decoding step of one example.
struct Memory {
  Var states;                          // S x 2*enc_hidden over the enabled streams
  Var keys_t;                          // dec_hidden x S
  std::vector<std::int32_t> ext_ids;   // S
  std::vector<features::Stream> tags;  // S, which stream each position came from
  std::size_t extended_size = 0;
};

struct StepOutput {
  Var final_dist;  // 1 x (V + |oov|)
  Var p_vocab;     // 1 x V
  Var p_gen;       // 1 x 1
  Var attn;        // 1 x S
  Var dec_input;   // 1 x (embed + 2*level_embed)
  DecoderState state;
};

/// Forward-pass context: one tape, train flag, dropout randomness.
struct Pass {
  Tape& tape;
  bool train = false;
  Rng* rng = nullptr;
  /// When in [0,1], replaces the learned copy gate (testing hook).
  double force_p_gen = -1.0;
};

class Model {
 public:
  Model(ModelConfig config, text::Vocabulary vocab, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const text::Vocabulary& vocab() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }

  /// Parameters in a fixed (name-sorted) order.
  std::vector<Parameter*> parameters();
  Parameter& param(const std::string& name);
  const Parameter& param(const std::string& name) const;
  bool has_param(const std::string& name) const { return params_.count(name) != 0; }

  EncoderOutput encode_stream(Pass& pass, const ModelInput& in, features::Stream s);
  /// Encodes the enabled streams and builds the attention memory and the initial decoder state.
  std::pair<Memory, DecoderState> encode(Pass& pass, const ModelInput& in);
  /// finals[s] empty means the stream is absent and contributes zeros.
  DecoderState init_decoder(Pass& pass, const std::array<std::vector<Var>, features::kNumStreams>& finals);
  StepOutput decode_step(Pass& pass, const DecoderState& state, std::int32_t prev_token, int spec_level,
                         int coh_level, const Memory& memory);

  /// [1 x n] probability of each token of `target` under teacher forcing
  /// (inputs BOS, target[0..n-2]). Equivalent to chaining decode_step.
  Var teacher_forced_probs(Pass& pass, const ModelInput& in, const std::vector<std::int32_t>& target);
  /// Same, reusing an encoding (several targets can share one encoder pass).
  Var teacher_forced_probs(Pass& pass, const Memory& memory, const DecoderState& init, const ModelInput& in,
                           const std::vector<std::int32_t>& target);
  /// Sum of -log(max(p, 1e-10)) over in.target.
  Var forward_nll(Pass& pass, const ModelInput& in);

  void save(const std::filesystem::path& path, const Json& extra_meta = Json::object()) const;
  /// Parameters plus a header holding the config and vocabulary.
  nn::TensorArchive to_archive(const Json& extra_meta = Json::object()) const;
  static Model load(const std::filesystem::path& path, Json* meta_out = nullptr);

 private:
  Parameter& add(const std::string& name, Tensor value);
  void init_params(std::uint64_t seed);
  std::vector<nn::GruWeights> gru_stack(const std::string& prefix, std::size_t layers);

  ModelConfig config_;
  text::Vocabulary vocab_;
  std::map<std::string, std::unique_ptr<Parameter>> params_;
};

inline constexpr double kProbFloor = 1e-10;

/// -sum log(max(p, kProbFloor)) over a [1 x n] row of probabilities.
Var nll_from_probs(Var probs);

// ---------------------------------------------------------------------------
// Beam search

/// Supplies log-probabilities for beam search. States are opaque handles.
class BeamStepper {
 public:
  virtual ~BeamStepper() = default;
  virtual std::size_t initial_state() = 0;
  /// Log-probabilities over the output space after feeding `token` to `state`, plus the successor state.
  virtual std::pair<std::vector<double>, std::size_t> step(std::size_t state, std::int32_t token) = 0;
};

struct BeamResult {
  std::vector<std::int32_t> tokens;  // without EOS
  double log_prob = 0.0;
  double score = 0.0;                // log_prob / length, EOS counted when emitted
  bool finished = false;
};

struct BeamOptions {
  std::size_t beam = 20;
  std::size_t max_len = 30;
  std::int32_t bos = text::kBos;
  std::int32_t eos = text::kEos;
  /// Tokens never emitted.
  std::vector<std::int32_t> banned{text::kPad, text::kBos};
};

/// Length-normalised beam search; the greedy path always competes for the final pick.
BeamResult beam_search(BeamStepper& stepper, const BeamOptions& options);
BeamResult greedy_search(BeamStepper& stepper, const BeamOptions& options);

/// Decodes `in` at the given levels and maps ids back to surface strings.
std::vector<std::string> generate(Model& model, const ModelInput& in, std::size_t beam, std::size_t max_len,
                                  int spec_level, int coh_level, BeamResult* raw = nullptr);

}  // namespace hierdoc::model
