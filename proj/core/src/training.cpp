#include "hierdoc/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "hierdoc/error.hpp"

namespace hierdoc::training {

using model::Model;
using model::Pass;
using model::Var;

UlScope parse_ul_scope(std::string_view s) {
  if (s == "suffix") return UlScope::kSuffix;
  if (s == "full") return UlScope::kFull;
  throw UsageError("unknown ul_scope '" + std::string(s) + "' (expected suffix or full)");
}

std::string_view ul_scope_name(UlScope s) { return s == UlScope::kSuffix ? "suffix" : "full"; }

Json TrainingConfig::to_json() const {
  return {{"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"alpha", alpha},
          {"patience", patience},
          {"max_epochs", max_epochs},
          {"seed", seed},
          {"negative_removal_rate", negative_removal_rate},
          {"ul_scope", ul_scope_name(ul_scope)},
          {"eval_train_ppl", eval_train_ppl},
          {"stop_train_ppl", stop_train_ppl}};
}

TrainingConfig TrainingConfig::from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("training config must be an object");
  TrainingConfig c;
  const Json defaults = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw SchemaError("unknown training config key '" + key + "'");
    const auto& def = defaults.at(key);
    if (def.is_boolean() != value.is_boolean() || def.is_number() != value.is_number() ||
        def.is_string() != value.is_string())
      throw SchemaError("training config key '" + key + "' has the wrong type");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("learning_rate", c.learning_rate);
  get("batch_size", c.batch_size);
  get("alpha", c.alpha);
  get("patience", c.patience);
  get("max_epochs", c.max_epochs);
  get("seed", c.seed);
  get("negative_removal_rate", c.negative_removal_rate);
  if (j.contains("ul_scope")) c.ul_scope = parse_ul_scope(j.at("ul_scope").get<std::string>());
  get("eval_train_ppl", c.eval_train_ppl);
  get("stop_train_ppl", c.stop_train_ppl);
  if (c.alpha < 0.0) throw SchemaError("alpha must be non-negative");
  if (!(c.negative_removal_rate > 0.0 && c.negative_removal_rate < 1.0))
    throw SchemaError("negative_removal_rate must be in (0, 1)");
  if (c.batch_size == 0) throw SchemaError("batch_size must be positive");
  if (c.learning_rate <= 0.0) throw SchemaError("learning_rate must be positive");
  return c;
}

// ---------------------------------------------------------------------------

NegativeExample make_negative(std::span<const std::string> c_sub, std::span<const std::string> c_sup, double rate,
                              Rng& rng) {
  if (c_sub.empty()) throw UsageError("cannot build a negative from an empty comment");
  const std::size_t len = c_sub.size();
  std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(rate * static_cast<double>(len))));
  n = std::min(n, len);
  const std::unordered_set<std::string> sup(c_sup.begin(), c_sup.end());
  std::vector<std::size_t> shared, rest;
  for (std::size_t i = 0; i < len; ++i) (sup.count(c_sub[i]) ? shared : rest).push_back(i);

  // Partial Fisher-Yates: the first k entries become a uniform k-subset.
  auto draw = [&](std::vector<std::size_t>& pool, std::size_t k, std::vector<std::size_t>& out) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
  };
  NegativeExample neg;
  if (shared.size() >= n) {
    draw(shared, n, neg.removed);
  } else {
    neg.removed = shared;
    draw(rest, n - shared.size(), neg.removed);
  }
  std::sort(neg.removed.begin(), neg.removed.end());
  std::size_t k = 0;
  for (std::size_t i = 0; i < len; ++i) {
    if (k < neg.removed.size() && neg.removed[k] == i) {
      ++k;
      continue;
    }
    neg.tokens.push_back(c_sub[i]);
  }
  return neg;
}

text::Vocabulary build_vocabulary(std::span<const corpus::OverrideExample> train, corpus::CommentMode mode,
                                  const text::VocabConfig& config) {
  if (!config.shared) throw UsageError("separate code/comment vocabularies are not supported (vocab.shared=false)");
  std::vector<text::TokenSequence> seqs;
  seqs.reserve(train.size() * 4);
  for (const auto& ex : train) {
    auto in = features::prepare_example(ex, mode);
    seqs.push_back({std::move(in.streams[0].tokens), text::Origin::kCode});
    seqs.push_back({std::move(in.streams[1].tokens), text::Origin::kClassName});
    seqs.push_back({std::move(in.streams[2].tokens), text::Origin::kComment});
    seqs.push_back({std::move(in.sub_comment), text::Origin::kComment});
  }
  return text::Vocabulary::build(seqs, config.cap, config.min_freq);
}

std::vector<std::pair<int, int>> assign_levels(std::span<const features::ExampleInputs> inputs,
                                               const features::FeatureArtifacts& art) {
  std::vector<std::pair<int, int>> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.emplace_back(art.specificity_level(in.sub_comment), art.coherence_level(in));
  return out;
}

std::vector<TrainExample> make_train_examples(std::span<const corpus::OverrideExample> examples,
                                              const features::FeatureArtifacts& art, const text::Vocabulary& vocab,
                                              const model::ModelConfig& config) {
  std::vector<TrainExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    auto in = features::prepare_example(ex, art.mode);
    if (in.sub_comment.empty()) throw SchemaError("example " + ex.id + " has an empty target comment");
    const int spec = art.specificity_level(in.sub_comment);
    const int coh = art.coherence_level(in);
    TrainExample te;
    te.id = ex.id;
    te.input = model::make_input(in, vocab, config, spec, coh);
    te.c_sub = in.sub_comment;
    te.c_sup = in.streams[static_cast<std::size_t>(features::Stream::kSupComment)].tokens;
    out.push_back(std::move(te));
  }
  return out;
}

std::vector<std::int32_t> negative_target(const model::ModelInput& in, const NegativeExample& neg) {
  std::vector<std::int32_t> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < in.target.size(); ++i) {  // last entry is EOS
    if (k < neg.removed.size() && neg.removed[k] == i) {
      ++k;
      continue;
    }
    out.push_back(in.target[i]);
  }
  return out;
}

Var unlikelihood_nll(Model& model, Pass& pass, const model::Memory& mem, const model::DecoderState& init,
                     const model::ModelInput& in, const NegativeExample& neg, UlScope scope) {
  const auto target = negative_target(in, neg);
  const std::size_t start = scope == UlScope::kSuffix && !neg.removed.empty() ? neg.removed.front() : 0;
  if (start >= target.size()) return pass.tape.constant(nn::Tensor::scalar(0.0));
  Var p = model.teacher_forced_probs(pass, mem, init, in, target);
  if (start > 0) p = nn::slice(p, 1, start, target.size());
  return unlikelihood_from_probs(p);
}

Var unlikelihood_from_probs(Var probs) {
  // log(max(1 - p, 1e-10)) is the complement-log of p clamped to 1 - 1e-10.
  return nn::scale(nn::sum_all(nn::log_clamped(nn::one_minus(probs), model::kProbFloor)), -1.0);
}

double total_loss(std::span<const double> mle, std::span<const double> ul, double alpha, bool use_ul) {
  if (mle.empty()) throw UsageError("total_loss of an empty batch");
  const double m = std::accumulate(mle.begin(), mle.end(), 0.0) / static_cast<double>(mle.size());
  if (!use_ul) return m;
  if (ul.size() != mle.size()) throw UsageError("total_loss: MLE and UL batches differ in size");
  return m + alpha * std::accumulate(ul.begin(), ul.end(), 0.0) / static_cast<double>(ul.size());
}

bool EarlyStopper::update(double loss) {
  if (loss < best_) {
    best_ = loss;
    bad_epochs_ = 0;
    return true;
  }
  ++bad_epochs_;
  return false;
}

Json EpochLog::to_json() const {
  Json j{{"epoch", epoch},         {"train_mle", train_mle}, {"train_ul", train_ul},
         {"train_ule", train_ule}, {"valid_mle", valid_mle}, {"valid_ppl", valid_ppl}};
  j["train_ppl"] = train_ppl ? Json(*train_ppl) : Json(nullptr);
  j["improved"] = improved;
  j["elapsed_s"] = elapsed_s;
  return j;
}

// ---------------------------------------------------------------------------

namespace {

double nll_sum(Model& model, std::span<const TrainExample> examples, std::size_t* tokens) {
  double total = 0.0;
  for (const auto& ex : examples) {
    nn::Tape tape;
    Pass pass{tape};
    total += model.forward_nll(pass, ex.input).item();
    if (tokens) *tokens += ex.input.target.size();
  }
  return total;
}

}  // namespace

double perplexity(Model& model, std::span<const TrainExample> examples) {
  std::size_t tokens = 0;
  const double total = nll_sum(model, examples, &tokens);
  return tokens == 0 ? 1.0 : std::exp(total / static_cast<double>(tokens));
}

double mean_nll(Model& model, std::span<const TrainExample> examples) {
  if (examples.empty()) return 0.0;
  return nll_sum(model, examples, nullptr) / static_cast<double>(examples.size());
}

void save_checkpoint(const std::filesystem::path& path, const Model& model, const nn::AdamState* adam,
                     const Json& meta) {
  auto ar = model.to_archive(meta);
  if (adam && !adam->m.empty()) {
    // Moments follow Model::parameters() order, which is name-sorted.
    std::vector<std::string> names;
    for (const auto& n : ar.names) names.push_back(n);
    for (std::size_t k = 0; k < adam->m.size() && k < names.size(); ++k) {
      ar.add("adam.m/" + names[k], adam->m[k]);
      ar.add("adam.v/" + names[k], adam->v[k]);
    }
    ar.meta["adam"] = {{"step", adam->step}, {"lr", adam->lr}, {"beta1", adam->beta1}, {"beta2", adam->beta2},
                       {"eps", adam->eps}};
  }
  nn::save_archive(path, ar);
}

TrainResult train(Model& model, std::span<const TrainExample> train_set, std::span<const TrainExample> valid_set,
                  const TrainingConfig& config, const TrainOptions& options) {
  if (train_set.empty()) throw UsageError("training set is empty");
  const bool use_ul = model.config().use_unlikelihood && config.alpha > 0.0;
  auto params = model.parameters();
  nn::AdamState adam;
  adam.lr = config.learning_rate;
  Rng rng(config.seed);
  EarlyStopper stopper(config.patience);
  TrainResult result;
  std::vector<nn::Tensor> best_values;
  const bool want_train_ppl = config.eval_train_ppl || config.stop_train_ppl > 0.0;

  std::ofstream log_file;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    log_file.open(options.out_dir / "train_log.jsonl", std::ios::trunc);
    if (!log_file) throw UsageError("cannot write " + (options.out_dir / "train_log.jsonl").string());
  }
  const Json meta_base{{"config_hash", model.config().hash()}, {"training", config.to_json()}};

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    EpochLog entry;
    entry.epoch = epoch;
    bool diverged = false;
    try {
      for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
        const std::size_t end = std::min(order.size(), begin + config.batch_size);
        const double inv_b = 1.0 / static_cast<double>(end - begin);
        for (auto* p : params) p->zero_grad();
        for (std::size_t k = begin; k < end; ++k) {
          const auto& ex = train_set[order[k]];
          nn::Tape tape;
          Pass pass{tape, true, &rng};
          auto [mem, init] = model.encode(pass, ex.input);
          Var mle = model::nll_from_probs(model.teacher_forced_probs(pass, mem, init, ex.input, ex.input.target));
          Var loss = mle;
          double ul_value = 0.0;
          if (use_ul) {
            const auto neg = make_negative(ex.c_sub, ex.c_sup, config.negative_removal_rate, rng);
            Var ul = unlikelihood_nll(model, pass, mem, init, ex.input, neg, config.ul_scope);
            ul_value = ul.item();
            loss = nn::add(mle, nn::scale(ul, config.alpha));
          }
          const double mle_value = mle.item();
          if (!std::isfinite(mle_value) || !std::isfinite(ul_value))
            throw DivergedError("non-finite loss on example " + ex.id);
          entry.train_mle += mle_value;
          entry.train_ul += ul_value;
          tape.backward(nn::scale(loss, inv_b));
        }
        nn::adam_step(params, adam);
      }
    } catch (const DivergedError& e) {
      diverged = true;
      result.error = e.what();
    }
    if (diverged) {
      result.stop_reason = "diverged";
      break;
    }
    const double n = static_cast<double>(train_set.size());
    entry.train_mle /= n;
    entry.train_ul /= n;
    entry.train_ule = entry.train_mle + (use_ul ? config.alpha * entry.train_ul : 0.0);

    // Early stopping watches validation MLE; with no validation split it falls back to training MLE.
    const auto watched = valid_set.empty() ? train_set : valid_set;
    std::size_t tokens = 0;
    const double total = nll_sum(model, watched, &tokens);
    entry.valid_mle = total / static_cast<double>(watched.size());
    entry.valid_ppl = std::exp(total / static_cast<double>(std::max<std::size_t>(tokens, 1)));
    if (want_train_ppl) entry.train_ppl = valid_set.empty() ? entry.valid_ppl : perplexity(model, train_set);
    if (!std::isfinite(entry.valid_mle)) {
      result.stop_reason = "diverged";
      result.error = "diverged: non-finite validation loss";
      break;
    }
    entry.improved = stopper.update(entry.valid_mle);
    entry.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (entry.improved) {
      result.best_epoch = epoch;
      result.best_valid = entry.valid_mle;
      best_values.clear();
      for (auto* p : params) best_values.push_back(p->value);
      if (!options.out_dir.empty()) {
        Json meta = meta_base;
        meta["epoch"] = epoch;
        meta["valid_mle"] = entry.valid_mle;
        save_checkpoint(options.out_dir / "best.ckpt", model, &adam, meta);
      }
    }
    result.log.push_back(entry);
    if (log_file) {
      log_file << entry.to_json().dump() << "\n";
      log_file.flush();
    }
    if (options.on_epoch) options.on_epoch(entry);
    if (config.stop_train_ppl > 0.0 && entry.train_ppl && *entry.train_ppl < config.stop_train_ppl) {
      result.stop_reason = "train_ppl";
      break;
    }
    if (stopper.should_stop()) {
      result.stop_reason = "patience";
      break;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "max_epochs";
  if (!best_values.empty())
    for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = best_values[k];
  return result;
}

}  // namespace hierdoc::training
