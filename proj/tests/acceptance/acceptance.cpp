// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// non-zero when any of them fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_metrics.hpp"
#include "hierdoc/baselines.hpp"
#include "hierdoc/cli.hpp"
#include "hierdoc/error.hpp"
#include "hierdoc/eval.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/model.hpp"
#include "hierdoc/rng.hpp"
#include "hierdoc/training.hpp"

using namespace hierdoc;
namespace fs = std::filesystem;
using Tokens = std::vector<std::string>;

namespace {

const fs::path kSource = HIERDOC_SOURCE_DIR;
const fs::path kToy = kSource / "data" / "toy_corpus";

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

fs::path workdir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "hierdoc_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

corpus::OverrideExample info_access_example() {
  corpus::OverrideExample ex;
  ex.id = "ias";
  ex.project_id = "bc";
  ex.sub_class_name = "InfoAccessSyntax";
  ex.sup_class_name = "Object";
  ex.sub_method_raw = "public byte[] getEncoded() { return info.toASN1Primitive().getEncoded(); }";
  ex.sup_method_raw = "public byte[] getEncoded() throws IOException { return toASN1Primitive().getEncoded(); }";
  ex.sub_comment_first = ex.sub_comment_full = "Returns ASN.1 encoded form of this info access syntax.";
  ex.sup_comment_first = ex.sup_comment_full = "Returns encoded form of the object.";
  return ex;
}

// Vocabulary over every stream of `in` minus `drop`, so dropped words are source-only OOVs.
text::Vocabulary vocab_without(const features::ExampleInputs& in, const std::set<std::string>& drop) {
  std::vector<text::TokenSequence> seqs;
  auto keep = [&](const Tokens& t) {
    Tokens out;
    for (const auto& w : t)
      if (!drop.count(w)) out.push_back(w);
    return out;
  };
  for (const auto& s : in.streams) seqs.push_back({keep(s.tokens), text::Origin::kCode});
  seqs.push_back({keep(in.sub_comment), text::Origin::kComment});
  return text::Vocabulary::build(seqs, 1000, 1);
}

model::ModelConfig small_model(std::size_t embed, std::size_t enc, std::size_t dec) {
  model::ModelConfig c;
  c.embed_dim = embed;
  c.enc_hidden = enc;
  c.enc_layers = 1;
  c.dec_hidden = dec;
  c.dec_layers = 1;
  c.level_embed_dim = 8;
  c.feature_proj_dim = 8;
  c.dropout = 0.0;
  return c;
}

// ---------------------------------------------------------------------------
// 1. Gradient integrity

Outcome gradient_integrity() {
  Stopwatch sw;
  const auto in = features::prepare_example(info_access_example(), corpus::CommentMode::kFirst);
  const auto vocab = vocab_without(in, {"syntax"});
  model::ModelConfig cfg;
  cfg.embed_dim = 4;
  cfg.enc_hidden = 8;
  cfg.enc_layers = 2;
  cfg.dec_hidden = 16;
  cfg.dec_layers = 2;
  cfg.level_embed_dim = 2;
  cfg.feature_proj_dim = 3;
  cfg.dropout = 0.0;
  model::Model m(cfg, vocab, 21);
  auto mi = model::make_input(in, vocab, cfg, 4, 2);
  // Every sequence cut to at most 4 positions.
  for (std::size_t s = 0; s < features::kNumStreams; ++s) {
    const std::size_t keep = std::min<std::size_t>(4, mi.ids[s].size());
    mi.ids[s].resize(keep);
    mi.ext_ids[s].resize(keep);
    nn::Tensor t = nn::Tensor::matrix(keep, features::kFeatureDim);
    std::copy(mi.features[s].data(), mi.features[s].data() + t.size(), t.data());
    mi.features[s] = t;
  }
  const auto oov = static_cast<std::int32_t>(vocab.size());
  mi.ext_ids[0][2] = oov;
  mi.target = {mi.ext_ids[0][0], oov, mi.ext_ids[2][1], text::kEos};
  // Drop the first token: the negative is target[1..2] and the UL term covers both positions.
  training::NegativeExample neg;
  neg.removed = {0};
  neg.tokens = {"syntax", vocab.token_of(mi.target[2])};

  const auto mle = nn::grad_check_report(
      [&](nn::Tape& tape) {
        model::Pass pass{tape};
        return m.forward_nll(pass, mi);
      },
      m.parameters(), 1e-5, 1e-5);
  const auto ul = nn::grad_check_report(
      [&](nn::Tape& tape) {
        model::Pass pass{tape};
        auto [mem, init] = m.encode(pass, mi);
        return training::unlikelihood_nll(m, pass, mem, init, mi, neg, training::UlScope::kSuffix);
      },
      m.parameters(), 1e-5, 1e-5);
  const double secs = sw.seconds();
  const bool ok = mle.max_rel < 1e-4 && ul.max_rel < 1e-4 && secs < 30.0 && mle.entries > 0;
  return {ok, "L_MLE max rel " + fmt("%.2e", mle.max_rel) + ", L_UL max rel " + fmt("%.2e", ul.max_rel) + " over " +
                  std::to_string(mle.entries) + " entries, " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------------------
// 2. Distributional soundness

Outcome distributional_soundness() {
  const auto in = features::prepare_example(info_access_example(), corpus::CommentMode::kFirst);
  const auto vocab = vocab_without(in, {"syntax"});
  Rng rng(2);
  std::size_t steps = 0, bad_sum = 0, negative = 0, no_copy = 0;
  double worst = 0.0;
  for (std::uint64_t trial = 0; steps < 1000; ++trial) {
    auto cfg = small_model(8 + rng.below(9), 8 + rng.below(9), 12 + rng.below(9));
    cfg.dec_layers = 1 + rng.below(2);
    model::Model m(cfg, vocab, 100 + trial);
    const auto mi = model::make_input(in, vocab, cfg);
    const auto syntax = mi.ext_id_of("syntax", vocab);
    nn::Tape tape;
    model::Pass pass{tape};
    auto [mem, st] = m.encode(pass, mi);
    std::int32_t prev = text::kBos;
    for (int t = 0; t < 25 && steps < 1000; ++t, ++steps) {
      const int sl = 1 + static_cast<int>(rng.below(5)), cl = 1 + static_cast<int>(rng.below(5));
      auto out = m.decode_step(pass, st, prev, sl, cl, mem);
      const auto& d = out.final_dist.value().values();
      double total = 0.0;
      for (double p : d) {
        if (p < 0.0) ++negative;
        total += p;
      }
      worst = std::max(worst, std::abs(total - 1.0));
      if (std::abs(total - 1.0) > 1e-6) ++bad_sum;
      if (!(d[static_cast<std::size_t>(syntax)] > 0.0)) ++no_copy;
      // Feed a random in-vocabulary token next.
      prev = static_cast<std::int32_t>(rng.below(vocab.size()));
      st = out.state;
    }
  }
  const bool ok = bad_sum == 0 && negative == 0 && no_copy == 0;
  return {ok, std::to_string(steps) + " steps, max |sum-1| " + fmt("%.1e", worst) + ", negative entries " +
                  std::to_string(negative) + ", steps without OOV copy mass " + std::to_string(no_copy)};
}

// ---------------------------------------------------------------------------
// 3. Overfit oracle

Outcome overfit_oracle() {
  if (!fs::exists(kToy)) return {false, "toy corpus missing"};
  Stopwatch sw;
  const auto dir = workdir("overfit");
  cli::cmd_mine(kToy, dir / "data" / "train.jsonl", corpus::CommentMode::kFirst);
  fs::copy_file(dir / "data" / "train.jsonl", dir / "data" / "valid.jsonl");
  cli::RunConfig cfg;
  cfg.text.min_freq = 1;
  cfg.model.dropout = 0.0;
  cfg.training.batch_size = 8;
  cfg.training.max_epochs = 200;
  cfg.training.patience = 200;
  cfg.training.stop_train_ppl = 1.02;
  const auto result = cli::cmd_train(cfg, dir / "data", dir / "ckpt", model::Ablation::kFull);
  double best_ppl = 1e300;
  std::size_t epoch_at = 0;
  for (const auto& e : result.log)
    if (e.train_ppl && *e.train_ppl < best_ppl) {
      best_ppl = *e.train_ppl;
      epoch_at = e.epoch;
    }
  cli::GenerateOptions opts;
  opts.gold_levels = true;
  cli::cmd_generate(dir / "ckpt", dir / "data" / "train.jsonl", dir / "pred.jsonl", opts);
  const auto report = cli::cmd_eval(dir / "pred.jsonl", dir / "data" / "train.jsonl", dir / "report.json",
                                    corpus::CommentMode::kFirst);
  const double secs = sw.seconds();
  const bool ok = best_ppl < 1.1 && report.bleu4 >= 0.95 && result.log.size() <= 200 && secs < 600.0;
  return {ok, "train ppl " + fmt("%.4f", best_ppl) + " (epoch " + std::to_string(epoch_at) + "), BLEU-4 " +
                  fmt("%.4f", report.bleu4) + " on " + std::to_string(report.count()) + " examples, " +
                  fmt("%.0f s", secs)};
}

// ---------------------------------------------------------------------------
// 4. Unlikelihood effect

// C-sup shares exactly one word (the "anchor") with C-sub, and C-sub has 9 or
// 10 tokens, so the single removal always hits the anchor. The designated word
// sits right after it and becomes the first unlikelihood target.
struct UlCorpus {
  std::vector<corpus::OverrideExample> examples;
  std::vector<std::size_t> anchor_pos;  // position of the anchor in C-sub
};

UlCorpus ul_corpus(std::size_t n, std::uint64_t seed, std::size_t first_id) {
  static const Tokens fillers{"alpha", "bravo", "charlie", "delta", "echo",  "foxtrot", "golf",  "hotel",
                              "india", "juliet", "kilo",   "lima",  "mike",  "oscar",   "papa",  "quebec",
                              "romeo", "sierra", "tango",  "victor", "whisky", "xray",  "yankee", "zulu"};
  static const Tokens anchors{"anchor", "pivot", "hinge", "keystone"};
  static const Tokens designated{"marked", "flagged", "tagged"};
  Rng rng(seed);
  UlCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    // Zipf-ish filler draw keeps the specificity scores spread.
    auto filler = [&] { return fillers[rng.below(1 + rng.below(fillers.size()))]; };
    const std::size_t before = 1 + rng.below(3);
    const std::size_t after = 9 - before - 2 + rng.below(2);
    Tokens c;
    for (std::size_t k = 0; k < before; ++k) c.push_back(filler());
    const auto& anchor = anchors[rng.below(anchors.size())];
    c.push_back(anchor);
    c.push_back(designated[rng.below(designated.size())]);
    for (std::size_t k = 0; k + 1 < after; ++k) c.push_back(filler());
    // Tail word from a wide pool with a skewed draw spreads the specificity levels.
    c.push_back("t" + std::to_string(rng.below(1 + rng.below(80))));
    corpus::OverrideExample ex;
    ex.id = "ul" + std::to_string(first_id + i);
    ex.project_id = "p" + std::to_string(i % 5);
    ex.sup_class_name = "Base" + std::string(1, static_cast<char>('A' + rng.below(4)));
    std::string head = c.front();
    head[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(head[0])));
    ex.sub_class_name = head + "Worker";
    static const Tokens objects{"state", "cache", "buffer", "queue", "index", "ledger", "socket", "handle"};
    const auto& obj = objects[rng.below(objects.size())];
    ex.sup_method_raw = "public void run() { " + obj + ".go(); }";
    ex.sub_method_raw = "public void run() { " + obj + "." + c.front() + "(); " + c.back() + "(); }";
    ex.sup_comment_first = ex.sup_comment_full = anchor + " keeps the " + obj;
    ex.sub_comment_first = ex.sub_comment_full = text::join(c);
    out.anchor_pos.push_back(before);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

Outcome unlikelihood_effect() {
  const auto train = ul_corpus(300, 41, 0);
  const auto held = ul_corpus(240, 42, 1000);
  const auto mode = corpus::CommentMode::kFirst;
  const auto art = features::fit_artifacts(train.examples, mode, features::FitConfig{5, 16, 5, 7});
  const auto vocab = training::build_vocabulary(train.examples, mode, text::VocabConfig{1000, 1, true});
  auto cfg = small_model(16, 16, 32);
  training::TrainingConfig tc;
  tc.max_epochs = 12;
  tc.patience = 100;
  tc.batch_size = 16;
  tc.learning_rate = 0.005;
  tc.seed = 5;

  auto fit = [&](bool use_ul) {
    auto c = cfg;
    c.use_unlikelihood = use_ul;
    model::Model m(c, vocab, 17);
    const auto set = training::make_train_examples(train.examples, art, vocab, c);
    training::train(m, set, {}, tc);
    return m;
  };
  auto ul_model = fit(true);
  auto mle_model = fit(false);

  // Probability of the designated word right after the anchor is removed.
  auto probe = [&](model::Model& m) {
    const auto set = training::make_train_examples(held.examples, art, vocab, m.config());
    std::vector<double> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& ex = set[i];
      const std::size_t r = held.anchor_pos[i];
      training::NegativeExample neg;
      neg.removed = {r};
      for (std::size_t k = 0; k < ex.c_sub.size(); ++k)
        if (k != r) neg.tokens.push_back(ex.c_sub[k]);
      const auto y = training::negative_target(ex.input, neg);
      nn::Tape tape;
      model::Pass pass{tape};
      auto [mem, init] = m.encode(pass, ex.input);
      const auto probs = m.teacher_forced_probs(pass, mem, init, ex.input, y);
      out.push_back(probs.value().at(0, r));
    }
    return out;
  };
  const auto p_mle = probe(mle_model);
  const auto p_ul = probe(ul_model);
  const auto test = eval::bootstrap_test(p_mle, p_ul, 10000, 4);
  const double mean_mle = std::accumulate(p_mle.begin(), p_mle.end(), 0.0) / double(p_mle.size());
  const double mean_ul = std::accumulate(p_ul.begin(), p_ul.end(), 0.0) / double(p_ul.size());
  const bool ok = mean_ul < mean_mle && test.p_value < 0.05 && p_ul.size() >= 200;
  return {ok, "mean p(designated) UL " + fmt("%.4g", mean_ul) + " vs MLE " + fmt("%.4g", mean_mle) + " over " +
                  std::to_string(p_ul.size()) + " contexts, bootstrap p " + fmt("%.4f", test.p_value)};
}

// ---------------------------------------------------------------------------
// 5. Specificity conditioning

std::vector<corpus::OverrideExample> spec_corpus(std::size_t n, std::uint64_t seed, std::size_t first_id) {
  static const Tokens things{"node", "edge", "graph", "vertex", "path", "cycle", "tree", "forest"};
  static const Tokens props{"weight", "label", "degree", "color", "rank", "depth"};
  Tokens rare;
  for (const char* w : {"dijkstra", "tarjan", "kruskal", "prim",   "kosaraju", "hopcroft", "karp",   "edmonds",
                        "bellman",  "floyd",  "warshall", "johnson", "boruvka", "kahn",    "fleury", "hierholzer",
                        "euler",    "konig",  "menger",   "dinic",   "gabow",   "yen",     "suurballe", "brandes"})
    rare.push_back(w);
  Rng rng(seed);
  std::vector<corpus::OverrideExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& thing = things[rng.below(things.size())];
    const auto& prop = props[rng.below(props.size())];
    std::string sub = "returns the " + prop + " of this " + thing;
    // Half the comments end with a named algorithm, drawn with a skew so its frequency varies.
    if (rng.below(2) == 0) sub += " using " + rare[rng.below(1 + rng.below(rare.size()))];
    corpus::OverrideExample ex;
    ex.id = "sp" + std::to_string(first_id + i);
    ex.project_id = "p" + std::to_string(i % 6);
    ex.sup_class_name = "Graph";
    ex.sub_class_name = "WeightedGraph";
    ex.sup_method_raw = "public int " + prop + "() { return 0; }";
    ex.sub_method_raw = "public int " + prop + "() { return " + thing + "." + prop + "; }";
    ex.sup_comment_first = ex.sup_comment_full = "returns the " + prop + " .";
    ex.sub_comment_first = ex.sub_comment_full = sub + " .";
    out.push_back(std::move(ex));
  }
  return out;
}

Outcome specificity_conditioning() {
  const auto train = spec_corpus(400, 51, 0);
  const auto test = spec_corpus(60, 52, 5000);
  const auto mode = corpus::CommentMode::kFirst;
  const auto art = features::fit_artifacts(train, mode, features::FitConfig{5, 16, 5, 9});
  const auto vocab = training::build_vocabulary(train, mode, text::VocabConfig{1000, 1, true});
  auto cfg = small_model(16, 16, 32);
  model::Model m(cfg, vocab, 23);
  training::TrainingConfig tc;
  tc.max_epochs = 10;
  tc.patience = 100;
  tc.batch_size = 16;
  tc.learning_rate = 0.005;
  tc.seed = 6;
  const auto set = training::make_train_examples(train, art, vocab, cfg);
  training::train(m, set, {}, tc);

  std::vector<double> hi, lo;
  const int K = cfg.k_levels;
  for (const auto& ex : test) {
    const auto in = features::prepare_example(ex, mode);
    auto niwf_at = [&](int level) {
      const auto mi = model::make_input(in, vocab, cfg, level, K);
      const auto out = model::generate(m, mi, 5, 20, level, K);
      return out.empty() ? 0.0 : features::niwf(out, art.stats);
    };
    hi.push_back(niwf_at(K));
    lo.push_back(niwf_at(1));
  }
  const auto w = eval::wilcoxon_signed_rank(hi, lo);
  const double mh = std::accumulate(hi.begin(), hi.end(), 0.0) / double(hi.size());
  const double ml = std::accumulate(lo.begin(), lo.end(), 0.0) / double(lo.size());
  const bool ok = mh > ml && w.p_value < 0.05;
  return {ok, "mean NIWF level 5 " + fmt("%.4f", mh) + " vs level 1 " + fmt("%.4f", ml) + " over " +
                  std::to_string(hi.size()) + " test examples, Wilcoxon p " + fmt("%.3g", w.p_value)};
}

// ---------------------------------------------------------------------------
// 6. Baseline exactness

Outcome baseline_exactness() {
  const auto mode = corpus::CommentMode::kFirst;
  std::size_t copy_checked = 0, copy_bad = 0, absent_checked = 0, absent_bad = 0;
  if (fs::exists(kToy)) {
    for (const auto& ex : corpus::mine_directory(kToy, mode).examples) {
      const auto in = features::prepare_example(ex, mode);
      ++copy_checked;
      if (baselines::run(baselines::Kind::kCopy, ex, mode) != text::tokenize_comment(ex.sup_comment_first).tokens)
        ++copy_bad;
      // K-sup never spelled out in C-sup: substitution must be the identity.
      auto probe = ex;
      probe.sup_class_name = "Zzyzx";
      ++absent_checked;
      if (baselines::run(baselines::Kind::kClassName, probe, mode) != baselines::copy_baseline(in)) ++absent_bad;
    }
  }
  const auto sub_out = text::join(baselines::run(baselines::Kind::kClassName, info_access_example(), mode));
  const bool sub_ok = sub_out == "returns encoded form of the info access syntax .";
  const auto copy_out = text::join(baselines::run(baselines::Kind::kCopy, info_access_example(), mode));
  const bool ok = copy_checked > 0 && copy_bad == 0 && absent_bad == 0 && sub_ok &&
                  copy_out == "returns encoded form of the object .";
  return {ok, "copy exact on " + std::to_string(copy_checked - copy_bad) + "/" + std::to_string(copy_checked) +
                  ", identity without K-sup on " + std::to_string(absent_checked - absent_bad) + "/" +
                  std::to_string(absent_checked) + ", substitution gives \"" + sub_out + "\""};
}

// ---------------------------------------------------------------------------
// 7. Metric oracles

Outcome metric_oracles() {
  const auto oracles = read_json(kSource / "tests" / "data" / "eval_oracles.json");
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& p : oracles.at("pairs")) {
    const auto ref = p.at("ref").get<Tokens>();
    const auto hyp = p.at("hyp").get<Tokens>();
    worst = std::max({worst, std::abs(eval::bleu4(ref, hyp) - hierdoc::testing::naive_bleu(ref, hyp)),
                      std::abs(eval::rouge_l(ref, hyp) - hierdoc::testing::brute_rouge_l(ref, hyp)),
                      std::abs(eval::meteor(ref, hyp) - hierdoc::testing::brute_meteor(ref, hyp))});
    ++pairs;
  }
  std::size_t meteor_bad = 0;
  Rng rng(7);
  for (std::size_t m = 1; m <= 40; ++m) {
    Tokens x;
    for (std::size_t i = 0; i < m; ++i) x.push_back("w" + std::to_string(rng.below(6)));
    const double md = static_cast<double>(m);
    if (eval::meteor(x, x) != 1.0 - 0.5 / (md * md * md)) ++meteor_bad;
  }
  const bool ok = pairs >= 50 && worst <= 1e-9 && meteor_bad == 0;
  return {ok, std::to_string(pairs) + " pairs, max deviation " + fmt("%.1e", worst) + ", METEOR(x,x) exact for " +
                  std::to_string(40 - meteor_bad) + "/40 lengths"};
}

// ---------------------------------------------------------------------------
// 8. NIWF ordering

Outcome niwf_ordering() {
  if (!fs::exists(kToy)) return {false, "toy corpus missing"};
  const auto mode = corpus::CommentMode::kFirst;
  const auto examples = corpus::mine_directory(kToy, mode).examples;
  const auto art = features::fit_artifacts(examples, mode, features::FitConfig{});
  const auto r = eval::niwf_report(examples, art.stats, mode);
  const bool ok = r.mean_sub > r.mean_sup && r.wilcoxon.p_value < 0.05;
  return {ok, "mean NIWF C-sub " + fmt("%.4f", r.mean_sub) + " vs C-sup " + fmt("%.4f", r.mean_sup) + " over " +
                  std::to_string(r.n) + " pairs, Wilcoxon p " + fmt("%.3g", r.wilcoxon.p_value)};
}

// ---------------------------------------------------------------------------
// 9. Full model vs Seq2Seq on the toy test split

Outcome full_vs_seq2seq() {
  if (!fs::exists(kToy)) return {false, "toy corpus missing"};
  Stopwatch sw;
  const auto dir = workdir("ablation");
  const cli::RunConfig cfg;
  cli::cmd_mine(kToy, dir / "all.jsonl", cfg.corpus.mode);
  cli::cmd_split(dir / "all.jsonl", dir / "data", cfg.corpus.split_ratios, cfg.corpus.split_seed);
  cli::cmd_fit(dir / "data" / "train.jsonl", dir / "data" / "artifacts.bin", cfg);
  double full = 0.0, s2s = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed : {1, 2, 3}) {
    auto c = cfg;
    c.training.seed = seed;
    double scores[2] = {0.0, 0.0};
    int k = 0;
    for (auto ab : {model::Ablation::kFull, model::Ablation::kSeq2Seq}) {
      const auto ck = dir / (std::string(model::ablation_name(ab)) + "_" + std::to_string(seed));
      cli::cmd_train(c, dir / "data", ck, ab);
      cli::cmd_generate(ck, dir / "data" / "test.jsonl", ck / "pred.jsonl");
      scores[k++] = cli::cmd_eval(ck / "pred.jsonl", dir / "data" / "test.jsonl", ck / "report.json", c.corpus.mode)
                        .bleu4;
    }
    full += scores[0] / 3.0;
    s2s += scores[1] / 3.0;
    per_seed << " " << fmt("%.3f", scores[0]) << "/" << fmt("%.3f", scores[1]);
  }
  const bool ok = full >= s2s;
  return {ok, "mean BLEU-4 full " + fmt("%.4f", full) + " vs seq2seq " + fmt("%.4f", s2s) + " (per seed" +
                  per_seed.str() + "), " + fmt("%.0f s", sw.seconds())};
}

// ---------------------------------------------------------------------------
// 10. Determinism

Outcome determinism() {
  if (!fs::exists(kToy)) return {false, "toy corpus missing"};
  const auto dir = workdir("determinism");
  cli::cmd_mine(kToy, dir / "a.jsonl", corpus::CommentMode::kFirst);
  cli::cmd_mine(kToy, dir / "b.jsonl", corpus::CommentMode::kFirst);
  const bool mine_same = read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl");

  cli::RunConfig cfg;
  cfg.training.max_epochs = 5;
  cli::cmd_split(dir / "a.jsonl", dir / "data", cfg.corpus.split_ratios, cfg.corpus.split_seed);
  std::string preds[2];
  for (int run = 0; run < 2; ++run) {
    const auto ck = dir / ("run" + std::to_string(run));
    cli::cmd_train(cfg, dir / "data", ck, model::Ablation::kFull);
    cli::cmd_generate(ck, dir / "data" / "test.jsonl", ck / "pred.jsonl");
    preds[run] = read_file(ck / "pred.jsonl");
  }
  const bool gen_same = preds[0] == preds[1] && !preds[0].empty();
  return {mine_same && gen_same, std::string("mined corpus ") + (mine_same ? "identical" : "DIFFERS") +
                                     ", predictions " + (gen_same ? "identical" : "DIFFER") + " (" +
                                     std::to_string(std::count(preds[0].begin(), preds[0].end(), '\n')) + " lines)"};
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "gradient integrity", gradient_integrity},
      {2, "distributional soundness", distributional_soundness},
      {3, "overfit oracle", overfit_oracle},
      {4, "unlikelihood effect", unlikelihood_effect},
      {5, "specificity conditioning", specificity_conditioning},
      {6, "baseline exactness", baseline_exactness},
      {7, "metric oracles", metric_oracles},
      {8, "NIWF ordering", niwf_ordering},
      {9, "full model vs seq2seq", full_vs_seq2seq},
      {10, "determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.number)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.number << " (" << c.name << "): " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
