#include "hierdoc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "hierdoc/checkpoint.hpp"
#include "hierdoc/error.hpp"

namespace hierdoc::model {

using features::kFeatureDim;
using features::kNumStreams;
using features::Stream;

namespace {

constexpr std::array<const char*, kNumStreams> kStreamNames{"method", "class_name", "sup_comment"};

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

bool ModelConfig::stream_enabled(Stream s) const {
  switch (s) {
    case Stream::kMethod:
      return true;
    case Stream::kClassName:
      return use_class_name_encoder;
    case Stream::kSupComment:
      return use_sup_comment_encoder;
  }
  return false;
}

Json ModelConfig::to_json() const {
  return {{"embed_dim", embed_dim},
          {"enc_hidden", enc_hidden},
          {"enc_layers", enc_layers},
          {"dec_hidden", dec_hidden},
          {"dec_layers", dec_layers},
          {"dropout", dropout},
          {"k_levels", k_levels},
          {"level_embed_dim", level_embed_dim},
          {"feature_proj_dim", feature_proj_dim},
          {"max_source_len", max_source_len},
          {"use_class_name_encoder", use_class_name_encoder},
          {"use_sup_comment_encoder", use_sup_comment_encoder},
          {"use_features", use_features},
          {"use_specificity", use_specificity},
          {"use_coherence", use_coherence},
          {"use_unlikelihood", use_unlikelihood}};
}

ModelConfig ModelConfig::from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("model config must be an object");
  ModelConfig c;
  const Json defaults = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw SchemaError("unknown model config key '" + key + "'");
    const auto& def = defaults.at(key);
    if (def.is_boolean() != value.is_boolean() || def.is_number() != value.is_number())
      throw SchemaError("model config key '" + key + "' has the wrong type");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("embed_dim", c.embed_dim);
  get("enc_hidden", c.enc_hidden);
  get("enc_layers", c.enc_layers);
  get("dec_hidden", c.dec_hidden);
  get("dec_layers", c.dec_layers);
  get("dropout", c.dropout);
  get("k_levels", c.k_levels);
  get("level_embed_dim", c.level_embed_dim);
  get("feature_proj_dim", c.feature_proj_dim);
  get("max_source_len", c.max_source_len);
  get("use_class_name_encoder", c.use_class_name_encoder);
  get("use_sup_comment_encoder", c.use_sup_comment_encoder);
  get("use_features", c.use_features);
  get("use_specificity", c.use_specificity);
  get("use_coherence", c.use_coherence);
  get("use_unlikelihood", c.use_unlikelihood);
  if (c.embed_dim == 0 || c.enc_hidden == 0 || c.enc_layers == 0 || c.dec_hidden == 0 || c.dec_layers == 0 ||
      c.level_embed_dim == 0 || c.feature_proj_dim == 0)
    throw SchemaError("model dimensions must be positive");
  if (c.dropout < 0.0 || c.dropout >= 1.0) throw SchemaError("dropout must be in [0, 1)");
  if (c.k_levels < 2) throw SchemaError("k_levels must be at least 2");
  return c;
}

std::string ModelConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

Ablation parse_ablation(std::string_view name) {
  for (auto a : {Ablation::kFull, Ablation::kNoUl, Ablation::kNoUlSpec, Ablation::kNoUlSpecFeats,
                 Ablation::kNoClassName, Ablation::kNoSupComment, Ablation::kSeq2Seq})
    if (ablation_name(a) == name) return a;
  throw UsageError("unknown ablation '" + std::string(name) + "'");
}

std::string_view ablation_name(Ablation a) {
  switch (a) {
    case Ablation::kFull:
      return "full";
    case Ablation::kNoUl:
      return "-ul";
    case Ablation::kNoUlSpec:
      return "-ul-spec";
    case Ablation::kNoUlSpecFeats:
      return "-ul-spec-feats";
    case Ablation::kNoClassName:
      return "-classname";
    case Ablation::kNoSupComment:
      return "-supcomment";
    case Ablation::kSeq2Seq:
      return "seq2seq";
  }
  return "?";
}

ModelConfig apply_ablation(ModelConfig c, Ablation a) {
  c.use_class_name_encoder = c.use_sup_comment_encoder = c.use_features = true;
  c.use_specificity = c.use_coherence = c.use_unlikelihood = true;
  // Rows cumulate: each removes one more component from the row above; the
  // encoder rows are taken relative to row (3).
  const bool no_ul = a != Ablation::kFull;
  const bool no_levels = no_ul && a != Ablation::kNoUl;
  const bool no_feats = a == Ablation::kNoUlSpecFeats || a == Ablation::kNoClassName ||
                        a == Ablation::kNoSupComment || a == Ablation::kSeq2Seq;
  c.use_unlikelihood = !no_ul;
  c.use_specificity = c.use_coherence = !no_levels;
  c.use_features = !no_feats;
  if (a == Ablation::kNoClassName || a == Ablation::kSeq2Seq) c.use_class_name_encoder = false;
  if (a == Ablation::kNoSupComment || a == Ablation::kSeq2Seq) c.use_sup_comment_encoder = false;
  return c;
}

// ---------------------------------------------------------------------------
// Inputs

std::int32_t ModelInput::ext_id_of(const std::string& token, const text::Vocabulary& vocab) const {
  if (vocab.contains(token)) return vocab.id_of(token);
  for (std::size_t k = 0; k < oov.size(); ++k)
    if (oov[k] == token) return static_cast<std::int32_t>(vocab.size() + k);
  return text::kUnk;
}

ModelInput make_input(const features::ExampleInputs& in, const text::Vocabulary& vocab, const ModelConfig& config,
                      int spec_level, int coh_level) {
  ModelInput out;
  out.spec_level = spec_level;
  out.coh_level = coh_level;
  std::unordered_map<std::string, std::int32_t> oov_ids;
  for (std::size_t s = 0; s < kNumStreams; ++s) {
    if (!config.stream_enabled(static_cast<Stream>(s))) continue;
    const auto& stream = in.streams[s];
    std::size_t n = stream.tokens.size();
    if (config.max_source_len > 0) n = std::min(n, config.max_source_len);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& tok = stream.tokens[i];
      const std::int32_t id = vocab.id_of(tok);
      out.ids[s].push_back(id);
      if (vocab.contains(tok)) {
        out.ext_ids[s].push_back(id);
      } else {
        auto [it, fresh] = oov_ids.emplace(tok, static_cast<std::int32_t>(vocab.size() + out.oov.size()));
        if (fresh) out.oov.push_back(tok);
        out.ext_ids[s].push_back(it->second);
      }
    }
    if (n > 0) {
      out.features[s] = Tensor::matrix(n, kFeatureDim);
      if (config.use_features)
        for (std::size_t i = 0; i < n; ++i) {
          const auto row = stream.features[i].encode();
          std::copy(row.begin(), row.end(), out.features[s].data() + i * kFeatureDim);
        }
    }
  }
  for (const auto& tok : in.sub_comment) {
    if (vocab.contains(tok)) {
      out.target.push_back(vocab.id_of(tok));
    } else {
      auto it = oov_ids.find(tok);
      out.target.push_back(it == oov_ids.end() ? text::kUnk : it->second);
    }
  }
  out.target.push_back(text::kEos);
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

Parameter& Model::add(const std::string& name, Tensor value) {
  auto p = std::make_unique<Parameter>(name, std::move(value));
  auto& ref = *p;
  params_[name] = std::move(p);
  return ref;
}

Parameter& Model::param(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw UsageError("no parameter named '" + name + "'");
  return *it->second;
}

const Parameter& Model::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw UsageError("no parameter named '" + name + "'");
  return *it->second;
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& [name, p] : params_) out.push_back(p.get());
  return out;
}

Model::Model(ModelConfig config, text::Vocabulary vocab, std::uint64_t seed)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  init_params(seed);
}

void Model::init_params(std::uint64_t seed) {
  const auto& c = config_;
  const std::size_t V = vocab_.size();
  const std::size_t enc_in = c.embed_dim + c.feature_proj_dim;
  const std::size_t enc_out = 2 * c.enc_hidden;
  const std::size_t dec_in = c.embed_dim + 2 * c.level_embed_dim;
  const std::size_t finals = kNumStreams * c.enc_layers * enc_out;
  const std::size_t K = static_cast<std::size_t>(c.k_levels);

  // Each tensor draws from its own stream keyed by name, so adding or removing
  // one parameter never shifts the others.
  auto draw = [&](const std::string& name, std::size_t rows, std::size_t cols, double bound) {
    Rng rng(fnv1a64(name, fnv1a64(std::to_string(seed))));
    Tensor t = Tensor::matrix(rows, cols);
    if (bound > 0.0)
      for (double& v : t.values()) v = rng.uniform(-bound, bound);
    add(name, std::move(t));
  };
  auto xavier = [](std::size_t in, std::size_t out) { return std::sqrt(6.0 / static_cast<double>(in + out)); };

  draw("embed.tokens", V, c.embed_dim, 0.1);
  draw("embed.spec_level", K, c.level_embed_dim, 0.1);
  draw("embed.coh_level", K, c.level_embed_dim, 0.1);
  for (std::size_t s = 0; s < kNumStreams; ++s) {
    const std::string stream = kStreamNames[s];
    draw("feat." + stream, kFeatureDim, c.feature_proj_dim, xavier(kFeatureDim, c.feature_proj_dim));
    const double gb = 1.0 / std::sqrt(static_cast<double>(c.enc_hidden));
    for (std::size_t l = 0; l < c.enc_layers; ++l)
      for (const char* dir : {"f", "b"}) {
        const std::string pre = "enc." + stream + ".l" + std::to_string(l) + "." + dir + ".";
        draw(pre + "w_x", l == 0 ? enc_in : enc_out, 3 * c.enc_hidden, gb);
        draw(pre + "w_h", c.enc_hidden, 3 * c.enc_hidden, gb);
        draw(pre + "b_x", 1, 3 * c.enc_hidden, gb);
        draw(pre + "b_h", 1, 3 * c.enc_hidden, gb);
      }
  }
  draw("init.w", finals, c.dec_layers * c.dec_hidden, xavier(finals, c.dec_layers * c.dec_hidden));
  draw("init.b", 1, c.dec_layers * c.dec_hidden, 0.0);
  const double db = 1.0 / std::sqrt(static_cast<double>(c.dec_hidden));
  for (std::size_t l = 0; l < c.dec_layers; ++l) {
    const std::string pre = "dec.l" + std::to_string(l) + ".";
    draw(pre + "w_x", l == 0 ? dec_in : c.dec_hidden, 3 * c.dec_hidden, db);
    draw(pre + "w_h", c.dec_hidden, 3 * c.dec_hidden, db);
    draw(pre + "b_x", 1, 3 * c.dec_hidden, db);
    draw(pre + "b_h", 1, 3 * c.dec_hidden, db);
  }
  draw("attn.w", c.dec_hidden, enc_out, xavier(c.dec_hidden, enc_out));
  draw("out.w", c.dec_hidden + enc_out, V, xavier(c.dec_hidden + enc_out, V));
  draw("out.b", 1, V, 0.0);
  draw("gen.w", c.dec_hidden + enc_out + dec_in, 1, xavier(c.dec_hidden + enc_out + dec_in, 1));
  draw("gen.b", 1, 1, 0.0);
}

std::vector<nn::GruWeights> Model::gru_stack(const std::string& prefix, std::size_t layers) {
  std::vector<nn::GruWeights> out;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::string pre = prefix + ".l" + std::to_string(l) + ".";
    out.push_back({&param(pre + "w_x"), &param(pre + "w_h"), &param(pre + "b_x"), &param(pre + "b_h")});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forward

EncoderOutput Model::encode_stream(Pass& pass, const ModelInput& in, Stream s) {
  const auto si = static_cast<std::size_t>(s);
  const std::string stream = kStreamNames[si];
  Tape& tape = pass.tape;
  std::vector<std::int32_t> ids = in.ids[si];
  Tensor feats = in.features[si];
  if (ids.empty()) {
    // A single PAD step keeps attention and the final states defined.
    ids = {text::kPad};
    feats = Tensor::matrix(1, kFeatureDim);
  }
  if (feats.rows() != ids.size() || feats.cols() != kFeatureDim)
    throw ShapeError("encode_stream: features " + feats.shape_str() + " do not match " + std::to_string(ids.size()) +
                     " tokens");
  Var emb = nn::embedding_gather(tape.param(param("embed.tokens")), ids);
  Var proj = nn::matmul(tape.constant(std::move(feats)), tape.param(param("feat." + stream)));
  Var x = nn::concat({emb, proj}, 1);
  if (pass.rng) x = nn::dropout(x, config_.dropout, *pass.rng, pass.train);

  std::vector<nn::GruWeights> fwd, bwd;
  for (std::size_t l = 0; l < config_.enc_layers; ++l) {
    const std::string pre = "enc." + stream + ".l" + std::to_string(l) + ".";
    fwd.push_back({&param(pre + "f.w_x"), &param(pre + "f.w_h"), &param(pre + "f.b_x"), &param(pre + "f.b_h")});
    bwd.push_back({&param(pre + "b.w_x"), &param(pre + "b.w_h"), &param(pre + "b.b_x"), &param(pre + "b.b_h")});
  }
  auto enc = nn::bigru_encode(tape, x, fwd, bwd, config_.dropout, pass.rng, pass.train);
  EncoderOutput out;
  out.states = enc.states;
  for (std::size_t l = 0; l < config_.enc_layers; ++l)
    out.finals.push_back(nn::concat({enc.final_fwd[l], enc.final_bwd[l]}, 1));
  return out;
}

DecoderState Model::init_decoder(Pass& pass, const std::array<std::vector<Var>, kNumStreams>& finals) {
  Tape& tape = pass.tape;
  const std::size_t per_stream = config_.enc_layers * 2 * config_.enc_hidden;
  std::vector<Var> parts;
  for (std::size_t s = 0; s < kNumStreams; ++s) {
    if (finals[s].empty()) {
      parts.push_back(tape.constant(Tensor::matrix(1, per_stream)));
    } else {
      if (finals[s].size() != config_.enc_layers) throw ShapeError("init_decoder: wrong number of encoder finals");
      parts.push_back(nn::concat(std::span<const Var>(finals[s]), 1));
    }
  }
  Var cat = nn::concat(std::span<const Var>(parts), 1);
  Var h0 = nn::tanh(nn::add_bias(nn::matmul(cat, tape.param(param("init.w"))), tape.param(param("init.b"))));
  DecoderState st;
  for (std::size_t l = 0; l < config_.dec_layers; ++l)
    st.h.push_back(nn::slice(h0, 1, l * config_.dec_hidden, (l + 1) * config_.dec_hidden));
  return st;
}

std::pair<Memory, DecoderState> Model::encode(Pass& pass, const ModelInput& in) {
  Memory mem;
  std::array<std::vector<Var>, kNumStreams> finals;
  std::vector<Var> states;
  for (std::size_t s = 0; s < kNumStreams; ++s) {
    const auto stream = static_cast<Stream>(s);
    if (!config_.stream_enabled(stream)) continue;
    auto enc = encode_stream(pass, in, stream);
    finals[s] = enc.finals;
    states.push_back(enc.states);
    if (in.ext_ids[s].empty()) {
      mem.ext_ids.push_back(text::kPad);
      mem.tags.push_back(stream);
    } else {
      mem.ext_ids.insert(mem.ext_ids.end(), in.ext_ids[s].begin(), in.ext_ids[s].end());
      mem.tags.insert(mem.tags.end(), in.ext_ids[s].size(), stream);
    }
  }
  mem.states = states.size() == 1 ? states.front() : nn::concat(std::span<const Var>(states), 0);
  mem.keys_t = nn::transpose(nn::matmul(mem.states, nn::transpose(pass.tape.param(param("attn.w")))));
  mem.extended_size = in.extended_size(vocab_.size());
  return {mem, init_decoder(pass, finals)};
}

StepOutput Model::decode_step(Pass& pass, const DecoderState& state, std::int32_t prev_token, int spec_level,
                              int coh_level, const Memory& memory) {
  if (spec_level < 1 || spec_level > config_.k_levels || coh_level < 1 || coh_level > config_.k_levels)
    throw UsageError("level out of range: specificity " + std::to_string(spec_level) + ", coherence " +
                     std::to_string(coh_level) + " (expected 1.." + std::to_string(config_.k_levels) + ")");
  if (state.h.size() != config_.dec_layers) throw ShapeError("decode_step: decoder state has the wrong depth");
  Tape& tape = pass.tape;
  const std::size_t V = vocab_.size();
  const std::int32_t in_id =
      prev_token < 0 || static_cast<std::size_t>(prev_token) >= V ? text::kUnk : prev_token;

  const std::int32_t tok[1] = {in_id};
  Var emb = nn::embedding_gather(tape.param(param("embed.tokens")), tok);
  auto level_vec = [&](bool on, const char* table, int level) {
    if (!on) return tape.constant(Tensor::matrix(1, config_.level_embed_dim));
    const std::int32_t row[1] = {level - 1};
    return nn::embedding_gather(tape.param(param(table)), row);
  };
  Var spec = level_vec(config_.use_specificity, "embed.spec_level", spec_level);
  Var coh = level_vec(config_.use_coherence, "embed.coh_level", coh_level);
  Var x = nn::concat({emb, spec, coh}, 1);

  StepOutput out;
  out.dec_input = x;
  Var layer_in = pass.rng ? nn::dropout(x, config_.dropout, *pass.rng, pass.train) : x;
  auto dec = gru_stack("dec", config_.dec_layers);
  for (std::size_t l = 0; l < config_.dec_layers; ++l) {
    Var h = nn::gru_cell(tape, layer_in, state.h[l], dec[l]);
    out.state.h.push_back(h);
    layer_in = (pass.rng && l + 1 < config_.dec_layers) ? nn::dropout(h, config_.dropout, *pass.rng, pass.train) : h;
  }
  out.state.step = state.step + 1;
  Var top = out.state.h.back();

  out.attn = nn::softmax(nn::matmul(top, memory.keys_t), 1);
  Var ctx = nn::matmul(out.attn, memory.states);
  Var hc = nn::concat({top, ctx}, 1);
  out.p_vocab = nn::softmax(nn::add_bias(nn::matmul(hc, tape.param(param("out.w"))), tape.param(param("out.b"))), 1);
  if (pass.force_p_gen >= 0.0) {
    out.p_gen = tape.constant(Tensor::scalar(pass.force_p_gen));
  } else {
    Var gen_in = nn::concat({hc, x}, 1);
    out.p_gen =
        nn::sigmoid(nn::add_bias(nn::matmul(gen_in, tape.param(param("gen.w"))), tape.param(param("gen.b"))));
  }
  Var pv = out.p_vocab;
  if (memory.extended_size > V) pv = nn::concat({pv, tape.constant(Tensor::matrix(1, memory.extended_size - V))}, 1);
  Var copy = nn::scatter_add_cols(out.attn, memory.ext_ids, memory.extended_size);
  out.final_dist = nn::add(nn::scale_by(out.p_gen, pv), nn::scale_by(nn::one_minus(out.p_gen), copy));
  return out;
}

Var Model::teacher_forced_probs(Pass& pass, const Memory& mem, const DecoderState& init, const ModelInput& in,
                                const std::vector<std::int32_t>& target) {
  if (target.empty()) throw UsageError("teacher forcing needs a non-empty target");
  if (in.spec_level < 1 || in.spec_level > config_.k_levels || in.coh_level < 1 || in.coh_level > config_.k_levels)
    throw UsageError("level out of range");
  if (init.h.size() != config_.dec_layers) throw ShapeError("teacher forcing: decoder state has the wrong depth");
  Tape& tape = pass.tape;
  const std::size_t V = vocab_.size(), T = target.size();
  std::vector<std::int32_t> prev(T);
  for (std::size_t t = 0; t < T; ++t) {
    const std::int32_t y = target[t];
    if (y < 0 || static_cast<std::size_t>(y) >= mem.extended_size)
      throw UsageError("target id outside the extended vocabulary");
    if (t + 1 < T) prev[t + 1] = static_cast<std::size_t>(y) >= V ? text::kUnk : y;
  }
  prev[0] = text::kBos;

  // Without input feeding the decoder stack only depends on the previous
  // tokens, so every layer runs over the whole sequence at once and the
  // attention/output stages become matrix products.
  Var emb = nn::embedding_gather(tape.param(param("embed.tokens")), prev);
  auto levels = [&](bool on, const char* table, int level) {
    if (!on) return tape.constant(Tensor::matrix(T, config_.level_embed_dim));
    const std::vector<std::int32_t> rows(T, level - 1);
    return nn::embedding_gather(tape.param(param(table)), rows);
  };
  Var x = nn::concat({emb, levels(config_.use_specificity, "embed.spec_level", in.spec_level),
                      levels(config_.use_coherence, "embed.coh_level", in.coh_level)},
                     1);
  Var layer_in = pass.rng ? nn::dropout(x, config_.dropout, *pass.rng, pass.train) : x;
  auto dec = gru_stack("dec", config_.dec_layers);
  for (std::size_t l = 0; l < config_.dec_layers; ++l) {
    Var gx = nn::add_bias(nn::matmul(layer_in, tape.param(*dec[l].w_x)), tape.param(*dec[l].b_x));
    Var wh = tape.param(*dec[l].w_h), bh = tape.param(*dec[l].b_h);
    Var h = init.h[l];
    std::vector<Var> rows;
    rows.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
      h = nn::gru_step(T == 1 ? gx : nn::slice(gx, 0, t, t + 1), h, wh, bh);
      rows.push_back(h);
    }
    Var hs = T == 1 ? rows.front() : nn::concat(std::span<const Var>(rows), 0);
    layer_in = (pass.rng && l + 1 < config_.dec_layers) ? nn::dropout(hs, config_.dropout, *pass.rng, pass.train) : hs;
  }
  Var top = layer_in;

  Var attn = nn::softmax(nn::matmul(top, mem.keys_t), 1);
  Var hc = nn::concat({top, nn::matmul(attn, mem.states)}, 1);
  Var pv = nn::softmax(nn::add_bias(nn::matmul(hc, tape.param(param("out.w"))), tape.param(param("out.b"))), 1);
  Var p_gen = pass.force_p_gen >= 0.0
                  ? tape.constant(Tensor::matrix(T, 1, pass.force_p_gen))
                  : nn::sigmoid(nn::add_bias(nn::matmul(nn::concat({hc, x}, 1), tape.param(param("gen.w"))),
                                             tape.param(param("gen.b"))));
  if (mem.extended_size > V) pv = nn::concat({pv, tape.constant(Tensor::matrix(T, mem.extended_size - V))}, 1);
  Var copy = nn::scatter_add_cols(attn, mem.ext_ids, mem.extended_size);
  Var final_dist = nn::add(nn::scale_rows(p_gen, pv), nn::scale_rows(nn::one_minus(p_gen), copy));
  return nn::pick(final_dist, target);
}

Var Model::teacher_forced_probs(Pass& pass, const ModelInput& in, const std::vector<std::int32_t>& target) {
  auto [mem, state] = encode(pass, in);
  return teacher_forced_probs(pass, mem, state, in, target);
}

Var Model::forward_nll(Pass& pass, const ModelInput& in) {
  if (in.target.empty()) throw UsageError("forward_nll needs a target");
  return nll_from_probs(teacher_forced_probs(pass, in, in.target));
}

Var nll_from_probs(Var probs) { return nn::scale(nn::sum_all(nn::log_clamped(probs, kProbFloor)), -1.0); }

// ---------------------------------------------------------------------------
// Persistence

void Model::save(const std::filesystem::path& path, const Json& extra_meta) const {
  nn::save_archive(path, to_archive(extra_meta));
}

nn::TensorArchive Model::to_archive(const Json& extra_meta) const {
  nn::TensorArchive ar;
  ar.meta["kind"] = "model";
  ar.meta["config"] = config_.to_json();
  ar.meta["vocab"] = vocab_.to_json(text::VocabConfig{});
  for (const auto& [k, v] : extra_meta.items()) ar.meta[k] = v;
  for (const auto& [name, p] : params_) ar.add(name, p->value);
  return ar;
}

Model Model::load(const std::filesystem::path& path, Json* meta_out) {
  auto ar = nn::load_archive(path);
  if (ar.meta.value("kind", std::string{}) != "model") throw SchemaError(path.string() + ": not a model checkpoint");
  if (!ar.meta.contains("config") || !ar.meta.contains("vocab"))
    throw SchemaError(path.string() + ": checkpoint header lacks config or vocab");
  Model m(ModelConfig::from_json(ar.meta.at("config")), text::Vocabulary::from_json(ar.meta.at("vocab")), 0);
  for (auto& [name, p] : m.params_) {
    if (!ar.has(name)) throw SchemaError(path.string() + ": missing tensor '" + name + "'");
    const Tensor& t = ar.get(name);
    if (!t.same_shape(p->value))
      throw SchemaError(path.string() + ": tensor '" + name + "' has shape " + t.shape_str() + ", expected " +
                        p->value.shape_str());
    p->value = t;
  }
  if (meta_out) *meta_out = ar.meta;
  return m;
}

// ---------------------------------------------------------------------------
// Beam search

namespace {

struct Hyp {
  std::vector<std::int32_t> tokens;
  double log_prob = 0.0;
  std::size_t state = 0;
};

bool better(const BeamResult& a, const BeamResult& b) { return a.score > b.score; }

BeamResult finish(const Hyp& h, bool eos) {
  BeamResult r;
  r.tokens = h.tokens;
  r.log_prob = h.log_prob;
  r.finished = eos;
  const double len = static_cast<double>(h.tokens.size() + (eos ? 1 : 0));
  r.score = len > 0 ? h.log_prob / len : h.log_prob;
  return r;
}

// Indices of the `k` largest entries of `lp` that are not banned, best first, ties by index.
std::vector<std::int32_t> top_k(const std::vector<double>& lp, std::size_t k, const std::vector<std::int32_t>& banned) {
  std::vector<std::int32_t> idx;
  idx.reserve(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i)
    if (std::find(banned.begin(), banned.end(), static_cast<std::int32_t>(i)) == banned.end())
      idx.push_back(static_cast<std::int32_t>(i));
  k = std::min(k, idx.size());
  auto cmp = [&](std::int32_t a, std::int32_t b) {
    const double x = lp[static_cast<std::size_t>(a)], y = lp[static_cast<std::size_t>(b)];
    return x != y ? x > y : a < b;
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), cmp);
  idx.resize(k);
  return idx;
}

}  // namespace

BeamResult greedy_search(BeamStepper& stepper, const BeamOptions& options) {
  Hyp h{{}, 0.0, stepper.initial_state()};
  for (std::size_t t = 0; t < options.max_len; ++t) {
    auto [lp, next] = stepper.step(h.state, h.tokens.empty() ? options.bos : h.tokens.back());
    const auto best = top_k(lp, 1, options.banned);
    if (best.empty()) break;
    h.log_prob += lp[static_cast<std::size_t>(best[0])];
    if (best[0] == options.eos) return finish(h, true);
    h.tokens.push_back(best[0]);
    h.state = next;
  }
  return finish(h, false);
}

BeamResult beam_search(BeamStepper& stepper, const BeamOptions& options) {
  if (options.beam == 0) throw UsageError("beam size must be positive");
  std::vector<Hyp> live{{{}, 0.0, stepper.initial_state()}};
  std::vector<BeamResult> done;
  for (std::size_t t = 0; t < options.max_len && !live.empty(); ++t) {
    struct Cand {
      std::size_t parent;
      std::int32_t token;
      double log_prob;
      std::size_t state;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const auto& h = live[i];
      auto [lp, next] = stepper.step(h.state, h.tokens.empty() ? options.bos : h.tokens.back());
      for (auto tok : top_k(lp, options.beam, options.banned))
        cands.push_back({i, tok, h.log_prob + lp[static_cast<std::size_t>(tok)], next});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.log_prob > b.log_prob; });
    if (cands.size() > options.beam) cands.resize(options.beam);
    std::vector<Hyp> next_live;
    for (const auto& c : cands) {
      Hyp h{live[c.parent].tokens, c.log_prob, c.state};
      if (c.token == options.eos) {
        done.push_back(finish(h, true));
      } else {
        h.tokens.push_back(c.token);
        next_live.push_back(std::move(h));
      }
    }
    live = std::move(next_live);
    if (done.size() >= options.beam) break;
  }
  for (const auto& h : live) done.push_back(finish(h, false));
  done.push_back(greedy_search(stepper, options));
  std::stable_sort(done.begin(), done.end(), better);
  return done.front();
}

namespace {

class ModelStepper : public BeamStepper {
 public:
  ModelStepper(Model& model, Pass& pass, const Memory& mem, DecoderState init, int spec, int coh)
      : model_(model), pass_(pass), mem_(mem), spec_(spec), coh_(coh) {
    states_.push_back(std::move(init));
  }

  std::size_t initial_state() override { return 0; }

  std::pair<std::vector<double>, std::size_t> step(std::size_t state, std::int32_t token) override {
    auto out = model_.decode_step(pass_, states_[state], token, spec_, coh_, mem_);
    const auto& dist = out.final_dist.value().values();
    std::vector<double> lp(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) lp[i] = std::log(std::max(dist[i], kProbFloor));
    states_.push_back(std::move(out.state));
    return {std::move(lp), states_.size() - 1};
  }

 private:
  Model& model_;
  Pass& pass_;
  const Memory& mem_;
  int spec_, coh_;
  std::vector<DecoderState> states_;
};

}  // namespace

std::vector<std::string> generate(Model& model, const ModelInput& in, std::size_t beam, std::size_t max_len,
                                  int spec_level, int coh_level, BeamResult* raw) {
  Tape tape;
  Pass pass{tape, false, nullptr};
  auto [mem, init] = model.encode(pass, in);
  ModelStepper stepper(model, pass, mem, std::move(init), spec_level, coh_level);
  BeamOptions opts;
  opts.beam = beam;
  opts.max_len = max_len;
  const auto result = beam_search(stepper, opts);
  std::vector<std::string> words;
  const std::size_t V = model.vocab_size();
  for (auto id : result.tokens)
    words.push_back(static_cast<std::size_t>(id) < V ? model.vocab().token_of(id)
                                                     : in.oov[static_cast<std::size_t>(id) - V]);
  if (raw) *raw = result;
  return words;
}

}  // namespace hierdoc::model
