#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "hierdoc/error.hpp"
#include "hierdoc/model.hpp"

using namespace hierdoc;
using namespace hierdoc::model;
using features::Stream;

namespace {

corpus::OverrideExample info_access_example() {
  corpus::OverrideExample ex;
  ex.id = "ias";
  ex.project_id = "bc";
  ex.sub_class_name = "InfoAccessSyntax";
  ex.sup_class_name = "ASN1Object";
  ex.sub_method_raw = "public byte[] getEncoded() { return info.toASN1Primitive().getEncoded(); }";
  ex.sup_method_raw = "public byte[] getEncoded() throws IOException { return toASN1Primitive().getEncoded(); }";
  ex.sub_comment_first = ex.sub_comment_full = "Returns ASN.1 encoded form of this info access syntax.";
  ex.sup_comment_first = ex.sup_comment_full = "Returns encoded form of the object.";
  return ex;
}

text::Vocabulary small_vocab(const features::ExampleInputs& in, std::vector<std::string> drop = {}) {
  std::vector<text::TokenSequence> seqs;
  for (const auto& s : in.streams) seqs.push_back({s.tokens, text::Origin::kCode});
  seqs.push_back({in.sub_comment, text::Origin::kComment});
  for (auto& s : seqs)
    s.tokens.erase(std::remove_if(s.tokens.begin(), s.tokens.end(),
                                  [&](const std::string& t) {
                                    return std::find(drop.begin(), drop.end(), t) != drop.end();
                                  }),
                   s.tokens.end());
  return text::Vocabulary::build(seqs, 1000, 1);
}

ModelConfig tiny_config() {
  ModelConfig c;
  c.embed_dim = 4;
  c.enc_hidden = 8;
  c.enc_layers = 2;
  c.dec_hidden = 16;
  c.dec_layers = 2;
  c.level_embed_dim = 2;
  c.feature_proj_dim = 3;
  c.dropout = 0.0;
  return c;
}

struct Fixture {
  features::ExampleInputs in = features::prepare_example(info_access_example(), corpus::CommentMode::kFirst);
  text::Vocabulary vocab = small_vocab(in, {"syntax"});
};

// Distribution table for the generic beam tests: state = prefix length, lp depends on (prefix length, last token).
class TableStepper : public BeamStepper {
 public:
  explicit TableStepper(std::map<std::pair<std::size_t, std::int32_t>, std::vector<double>> table)
      : table_(std::move(table)) {}
  std::size_t initial_state() override { return 0; }
  std::pair<std::vector<double>, std::size_t> step(std::size_t state, std::int32_t token) override {
    auto it = table_.find({state, token});
    if (it != table_.end()) return {it->second, state + 1};
    // Unlisted prefixes end immediately.
    std::vector<double> lp(table_.begin()->second.size(), std::log(1e-12));
    lp[text::kEos] = 0.0;
    return {lp, state + 1};
  }

 private:
  std::map<std::pair<std::size_t, std::int32_t>, std::vector<double>> table_;
};

// Stepper whose distribution depends on the whole prefix, hashed into a seeded draw.
class RandomStepper : public BeamStepper {
 public:
  RandomStepper(std::size_t vocab, std::uint64_t seed) : vocab_(vocab), seed_(seed) {}
  std::size_t initial_state() override {
    prefixes_.push_back({});
    return 0;
  }
  std::pair<std::vector<double>, std::size_t> step(std::size_t state, std::int32_t token) override {
    auto prefix = prefixes_[state];
    prefix.push_back(token);
    std::uint64_t h = seed_;
    for (auto t : prefix) h = fnv1a64(std::to_string(t), h);
    Rng rng(h);
    std::vector<double> w(vocab_);
    double z = 0;
    for (auto& x : w) z += (x = std::exp(3.0 * rng.normal()));
    for (auto& x : w) x = std::log(x / z);
    prefixes_.push_back(prefix);
    return {w, prefixes_.size() - 1};
  }

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
  std::vector<std::vector<std::int32_t>> prefixes_;
};

}  // namespace

TEST(ModelConfig, JsonRoundtripAndUnknownKeys) {
  ModelConfig c = tiny_config();
  c.use_coherence = false;
  EXPECT_EQ(ModelConfig::from_json(c.to_json()), c);
  Json j = c.to_json();
  j["hidden"] = 3;
  EXPECT_THROW(ModelConfig::from_json(j), SchemaError);
  Json bad = c.to_json();
  bad["dropout"] = "high";
  EXPECT_THROW(ModelConfig::from_json(bad), SchemaError);
  EXPECT_NE(c.hash(), ModelConfig{}.hash());
}

TEST(ModelConfig, DefaultsMatchAppendixValues) {
  const ModelConfig c;
  EXPECT_EQ(c.embed_dim, 64u);
  EXPECT_EQ(c.enc_hidden, 64u);
  EXPECT_EQ(c.enc_layers, 2u);
  EXPECT_EQ(c.dec_hidden, 128u);
  EXPECT_EQ(c.dec_layers, 2u);
  EXPECT_DOUBLE_EQ(c.dropout, 0.7);
  EXPECT_EQ(c.k_levels, 5);
}

TEST(Ablation, FlagSetsPerRow) {
  struct Row {
    const char* name;
    bool cls, sup, feats, spec, coh, ul;
  };
  const Row rows[] = {
      {"full", true, true, true, true, true, true},
      {"-ul", true, true, true, true, true, false},
      {"-ul-spec", true, true, true, false, false, false},
      {"-ul-spec-feats", true, true, false, false, false, false},
      {"-classname", false, true, false, false, false, false},
      {"-supcomment", true, false, false, false, false, false},
      {"seq2seq", false, false, false, false, false, false},
  };
  for (const auto& r : rows) {
    const auto c = apply_ablation(ModelConfig{}, parse_ablation(r.name));
    EXPECT_EQ(c.use_class_name_encoder, r.cls) << r.name;
    EXPECT_EQ(c.use_sup_comment_encoder, r.sup) << r.name;
    EXPECT_EQ(c.use_features, r.feats) << r.name;
    EXPECT_EQ(c.use_specificity, r.spec) << r.name;
    EXPECT_EQ(c.use_coherence, r.coh) << r.name;
    EXPECT_EQ(c.use_unlikelihood, r.ul) << r.name;
    EXPECT_EQ(ablation_name(parse_ablation(r.name)), r.name);
  }
  EXPECT_THROW(parse_ablation("-everything"), UsageError);
}

TEST(MakeInput, ExtendedVocabularyForSourceOov) {
  Fixture f;
  const auto cfg = tiny_config();
  const auto mi = make_input(f.in, f.vocab, cfg, 3, 2);
  ASSERT_EQ(mi.oov, std::vector<std::string>{"syntax"});
  const auto V = static_cast<std::int32_t>(f.vocab.size());
  // "syntax" is only in Kname-sub among the sources.
  EXPECT_EQ(mi.ext_ids[1].back(), V);
  EXPECT_EQ(mi.ids[1].back(), text::kUnk);
  EXPECT_EQ(mi.target.back(), text::kEos);
  EXPECT_EQ(mi.target[mi.target.size() - 3], V);  // "... access syntax ."
  EXPECT_EQ(mi.features[0].rows(), f.in.streams[0].tokens.size());

  const auto s2s = make_input(f.in, f.vocab, apply_ablation(cfg, Ablation::kSeq2Seq));
  EXPECT_TRUE(s2s.ids[1].empty());
  EXPECT_TRUE(s2s.ids[2].empty());
  EXPECT_TRUE(s2s.oov.empty());
  EXPECT_EQ(s2s.target[s2s.target.size() - 3], text::kUnk);
  for (double v : s2s.features[0].values()) EXPECT_EQ(v, 0.0);
}

TEST(Encoder, ShapesAndEmptyStream) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 1);
  auto mi = make_input(f.in, f.vocab, m.config());
  nn::Tape tape;
  Pass pass{tape};
  const auto enc = m.encode_stream(pass, mi, Stream::kMethod);
  EXPECT_EQ(enc.states.rows(), mi.ids[0].size());
  EXPECT_EQ(enc.states.cols(), 16u);
  EXPECT_EQ(enc.finals.size(), 2u);
  mi.ids[2].clear();
  mi.ext_ids[2].clear();
  mi.features[2] = Tensor();
  const auto empty = m.encode_stream(pass, mi, Stream::kSupComment);
  EXPECT_EQ(empty.states.rows(), 1u);
}

TEST(Encoder, ZeroFeaturesEqualPlainBiGru) {
  Fixture f;
  auto cfg = tiny_config();
  cfg.use_features = false;
  Model m(cfg, f.vocab, 2);
  const auto mi = make_input(f.in, f.vocab, cfg);
  nn::Tape tape;
  Pass pass{tape};
  const auto enc = m.encode_stream(pass, mi, Stream::kMethod);

  // Plain route: embeddings padded with zero columns, straight into the bi-GRU.
  Var emb = nn::embedding_gather(tape.param(m.param("embed.tokens")), mi.ids[0]);
  Var x = nn::concat({emb, tape.constant(Tensor::matrix(mi.ids[0].size(), cfg.feature_proj_dim))}, 1);
  std::vector<nn::GruWeights> fw, bw;
  for (int l = 0; l < 2; ++l) {
    const std::string p = "enc.method.l" + std::to_string(l) + ".";
    fw.push_back({&m.param(p + "f.w_x"), &m.param(p + "f.w_h"), &m.param(p + "f.b_x"), &m.param(p + "f.b_h")});
    bw.push_back({&m.param(p + "b.w_x"), &m.param(p + "b.w_h"), &m.param(p + "b.b_x"), &m.param(p + "b.b_h")});
  }
  const auto plain = nn::bigru_encode(tape, x, fw, bw, 0.0, nullptr, false);
  EXPECT_EQ(enc.states.value().values(), plain.states.value().values());
}

TEST(Decoder, InitFromZeroFinalsIsTanhBias) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 3);
  auto& b = m.param("init.b");
  Rng rng(1);
  for (double& v : b.value.values()) v = rng.uniform(-2, 2);
  nn::Tape tape;
  Pass pass{tape};
  const auto st = m.init_decoder(pass, {});
  ASSERT_EQ(st.h.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    ASSERT_EQ(st.h[l].cols(), 16u);
    for (std::size_t j = 0; j < 16; ++j) EXPECT_DOUBLE_EQ(st.h[l].value()[j], std::tanh(b.value[l * 16 + j]));
  }
}

TEST(Decoder, FinalDistIsADistributionAndCopiesOov) {
  Fixture f;
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Model m(tiny_config(), f.vocab, static_cast<std::uint64_t>(trial));
    const auto mi = make_input(f.in, f.vocab, m.config());
    nn::Tape tape;
    Pass pass{tape};
    auto [mem, st] = m.encode(pass, mi);
    std::int32_t prev = text::kBos;
    for (int t = 0; t < 10; ++t) {
      const int sl = 1 + static_cast<int>(rng.below(5)), cl = 1 + static_cast<int>(rng.below(5));
      auto out = m.decode_step(pass, st, prev, sl, cl, mem);
      const auto& d = out.final_dist.value().values();
      ASSERT_EQ(d.size(), f.vocab.size() + 1);
      double total = 0;
      for (double p : d) {
        ASSERT_GE(p, 0.0);
        total += p;
      }
      ASSERT_NEAR(total, 1.0, 1e-6);
      const double pg = out.p_gen.item();
      ASSERT_LT(pg, 1.0);
      EXPECT_GT(d.back(), 0.0);  // "syntax", only reachable by copying
      prev = static_cast<std::int32_t>(rng.below(d.size()));
      st = out.state;
    }
  }
}

TEST(Decoder, ForcedGateOneIsVocabularyDistribution) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 5);
  const auto mi = make_input(f.in, f.vocab, m.config());
  nn::Tape tape;
  Pass pass{tape};
  pass.force_p_gen = 1.0;
  auto [mem, st] = m.encode(pass, mi);
  const auto out = m.decode_step(pass, st, text::kBos, 5, 5, mem);
  const auto& d = out.final_dist.value().values();
  const auto& pv = out.p_vocab.value().values();
  for (std::size_t i = 0; i < pv.size(); ++i) EXPECT_DOUBLE_EQ(d[i], pv[i]);
  EXPECT_EQ(d.back(), 0.0);
  EXPECT_THROW(m.decode_step(pass, st, text::kBos, 0, 1, mem), UsageError);
  EXPECT_THROW(m.decode_step(pass, st, text::kBos, 1, 6, mem), UsageError);
}

TEST(Decoder, LevelChangesDecoderInput) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 6);
  const auto mi = make_input(f.in, f.vocab, m.config());
  nn::Tape tape;
  Pass pass{tape};
  auto [mem, st] = m.encode(pass, mi);
  const auto a = m.decode_step(pass, st, text::kBos, 1, 3, mem).dec_input.value().values();
  const auto b = m.decode_step(pass, st, text::kBos, 5, 3, mem).dec_input.value().values();
  EXPECT_NE(a, b);
}

TEST(Decoder, AblatedClassNameStreamHasNoInfluence) {
  Fixture f;
  auto cfg = tiny_config();
  cfg.use_class_name_encoder = false;
  Model a(cfg, f.vocab, 7);
  Model b(cfg, f.vocab, 7);
  // b's class-name encoder gets different weights, and its input different tokens.
  Rng rng(8);
  for (auto* p : b.parameters())
    if (p->name.rfind("enc.class_name", 0) == 0 || p->name == "feat.class_name")
      for (double& v : p->value.values()) v = rng.uniform(-1, 1);
  auto other = f.in;
  other.streams[1].tokens = {"completely", "different"};
  other.streams[1].features.resize(2);
  const auto ia = make_input(f.in, f.vocab, cfg), ib = make_input(other, f.vocab, cfg);
  nn::Tape ta, tb;
  Pass pa{ta}, pb{tb};
  auto [ma, sa] = a.encode(pa, ia);
  auto [mb, sb] = b.encode(pb, ib);
  EXPECT_EQ(ma.ext_ids, mb.ext_ids);
  for (auto tag : ma.tags) EXPECT_NE(tag, Stream::kClassName);
  std::int32_t prev = text::kBos;
  for (int t = 0; t < 4; ++t) {
    auto oa = a.decode_step(pa, sa, prev, 2, 2, ma);
    auto ob = b.decode_step(pb, sb, prev, 2, 2, mb);
    ASSERT_EQ(oa.final_dist.value().values(), ob.final_dist.value().values());
    ASSERT_EQ(oa.attn.value().values(), ob.attn.value().values());
    sa = oa.state;
    sb = ob.state;
    prev = ia.target[static_cast<std::size_t>(t)];
  }
}

TEST(ForwardNll, HandAccumulationOverThreeSteps) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 9);
  auto mi = make_input(f.in, f.vocab, m.config(), 2, 4);
  mi.target = {mi.target[0], mi.target[1], text::kEos};
  double hand = 0;
  {
    nn::Tape tape;
    Pass pass{tape};
    auto [mem, st] = m.encode(pass, mi);
    std::int32_t prev = text::kBos;
    for (auto y : mi.target) {
      auto out = m.decode_step(pass, st, prev, 2, 4, mem);
      hand -= std::log(out.final_dist.value()[static_cast<std::size_t>(y)]);
      st = out.state;
      prev = y;
    }
  }
  nn::Tape tape;
  Pass pass{tape};
  EXPECT_NEAR(m.forward_nll(pass, mi).item(), hand, 1e-12);
}

TEST(ForwardNll, BatchedTeacherForcingMatchesStepwise) {
  Fixture f;
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    auto cfg = tiny_config();
    cfg.use_coherence = seed % 2 == 0;
    Model m(cfg, f.vocab, seed);
    const auto mi = make_input(f.in, f.vocab, cfg, 1 + static_cast<int>(seed % 5), 3);
    nn::Tape tape;
    Pass pass{tape};
    auto [mem, st] = m.encode(pass, mi);
    const auto batched = m.teacher_forced_probs(pass, mem, st, mi, mi.target).value().values();
    ASSERT_EQ(batched.size(), mi.target.size());
    std::int32_t prev = text::kBos;
    for (std::size_t t = 0; t < mi.target.size(); ++t) {
      auto out = m.decode_step(pass, st, prev, mi.spec_level, mi.coh_level, mem);
      EXPECT_NEAR(out.final_dist.value()[static_cast<std::size_t>(mi.target[t])], batched[t], 1e-12);
      st = out.state;
      prev = mi.target[t];
    }
  }
}

TEST(ForwardNll, UniformAndDeterministicEndpoints) {
  Fixture f;
  auto cfg = tiny_config();
  cfg.use_class_name_encoder = cfg.use_sup_comment_encoder = false;
  Model m(cfg, f.vocab, 10);
  m.param("out.w").value.fill(0.0);
  m.param("out.b").value.fill(0.0);
  auto mi = make_input(f.in, f.vocab, cfg);
  ASSERT_TRUE(mi.oov.empty());
  nn::Tape tape;
  Pass pass{tape};
  pass.force_p_gen = 1.0;
  const double T = static_cast<double>(mi.target.size());
  EXPECT_NEAR(m.forward_nll(pass, mi).item(), T * std::log(static_cast<double>(f.vocab.size())), 1e-9);
  m.param("out.b").value[text::kEos] = 1000.0;
  mi.target = {text::kEos};
  EXPECT_EQ(m.forward_nll(pass, mi).item(), 0.0);
}

TEST(ForwardNll, EndToEndGradientCheck) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 11);
  auto mi = make_input(f.in, f.vocab, m.config(), 4, 2);
  for (std::size_t s = 0; s < 3; ++s) {
    const std::size_t keep = std::min<std::size_t>(3, mi.ids[s].size());
    mi.ids[s].resize(keep);
    mi.ext_ids[s].resize(keep);
    Tensor t = Tensor::matrix(keep, features::kFeatureDim);
    std::copy(mi.features[s].data(), mi.features[s].data() + t.size(), t.data());
    mi.features[s] = t;
  }
  mi.ext_ids[0][2] = static_cast<std::int32_t>(f.vocab.size());  // a copyable OOV
  mi.target = {mi.ext_ids[0][0], static_cast<std::int32_t>(f.vocab.size()), text::kEos};
  // A loss near 9 leaves about 2e-10 of rounding noise in each central
  // difference at h = 1e-5, so relative error is taken against a 1e-5 floor
  // and the absolute discrepancy is bounded separately.
  const auto rep = nn::grad_check_report(
      [&](nn::Tape& tape) {
        Pass pass{tape};
        return m.forward_nll(pass, mi);
      },
      m.parameters(), 1e-5, 1e-5);
  EXPECT_LT(rep.max_rel, 1e-4) << rep.worst;
  EXPECT_LT(rep.max_abs, 1e-8) << rep.worst;
  EXPECT_GT(rep.entries, 1000u);
}

TEST(Checkpoint, RoundtripIsIdentity) {
  Fixture f;
  auto cfg = tiny_config();
  cfg.use_coherence = false;
  Model m(cfg, f.vocab, 12);
  const auto path = std::filesystem::temp_directory_path() / "hierdoc_model_test.ckpt";
  m.save(path, {{"epoch", 7}});
  Json meta;
  Model back = Model::load(path, &meta);
  std::filesystem::remove(path);
  EXPECT_EQ(meta.at("epoch"), 7);
  EXPECT_EQ(back.config(), cfg);
  EXPECT_EQ(back.vocab(), m.vocab());
  auto pa = m.parameters(), pb = back.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i]->name, pb[i]->name);
    EXPECT_EQ(pa[i]->value.values(), pb[i]->value.values());
  }
}

TEST(Parameters, InitDependsOnlyOnNameAndSeed) {
  Fixture f;
  auto a = tiny_config(), b = tiny_config();
  b.use_features = false;
  Model ma(a, f.vocab, 13), mb(b, f.vocab, 13), mc(a, f.vocab, 14);
  EXPECT_EQ(ma.param("dec.l0.w_h").value.values(), mb.param("dec.l0.w_h").value.values());
  EXPECT_NE(ma.param("dec.l0.w_h").value.values(), mc.param("dec.l0.w_h").value.values());
}

TEST(BeamSearch, ForcedSingleToken) {
  std::map<std::pair<std::size_t, std::int32_t>, std::vector<double>> table;
  const double lo = std::log(1e-12);
  table[{0, text::kBos}] = {lo, lo, lo, lo, 0.0};
  for (std::int32_t t = 0; t < 5; ++t) table[{1, t}] = {lo, lo, lo, 0.0, lo};
  TableStepper st(table);
  BeamOptions opt;
  opt.max_len = 5;
  const auto r = beam_search(st, opt);
  EXPECT_EQ(r.tokens, std::vector<std::int32_t>{4});
  EXPECT_TRUE(r.finished);
}

TEST(BeamSearch, MatchesExhaustiveTwoStepEnumeration) {
  Rng rng(15);
  const std::size_t V = 6;  // 0 PAD, 1 UNK, 2 BOS, 3 EOS, 4, 5
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::pair<std::size_t, std::int32_t>, std::vector<double>> table;
    auto dist = [&] {
      std::vector<double> w(V);
      double z = 0;
      for (auto& x : w) z += (x = rng.uniform(0.01, 1.0));
      for (auto& x : w) x = std::log(x / z);
      return w;
    };
    table[{0, text::kBos}] = dist();
    for (std::int32_t t = 0; t < static_cast<std::int32_t>(V); ++t) table[{1, t}] = dist();
    TableStepper st(table);
    BeamOptions opt;
    opt.beam = 40;
    opt.max_len = 2;
    const auto r = beam_search(st, opt);

    // Every output of at most two steps, scored as log-prob over emitted length.
    double best = -1e300;
    std::vector<std::int32_t> arg;
    for (std::int32_t a : {1, 3, 4, 5}) {
      const double la = table[{0, text::kBos}][static_cast<std::size_t>(a)];
      if (a == text::kEos) {
        if (la > best) best = la, arg = {};
        continue;
      }
      for (std::int32_t b : {1, 3, 4, 5}) {
        const double s = (la + table[{1, a}][static_cast<std::size_t>(b)]) / 2.0;
        if (s > best) best = s, arg = b == text::kEos ? std::vector<std::int32_t>{a} : std::vector<std::int32_t>{a, b};
      }
    }
    ASSERT_NEAR(r.score, best, 1e-12) << trial;
    ASSERT_EQ(r.tokens, arg) << trial;
  }
}

TEST(BeamSearch, WidthOneIsGreedyAndBeamNeverLosesToGreedy) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStepper a(8, seed), b(8, seed), c(8, seed);
    BeamOptions opt;
    opt.max_len = 6;
    opt.beam = 1;
    const auto g = greedy_search(a, opt);
    const auto one = beam_search(b, opt);
    EXPECT_EQ(one.tokens, g.tokens);
    EXPECT_DOUBLE_EQ(one.score, g.score);
    opt.beam = 4;
    EXPECT_GE(beam_search(c, opt).score, g.score);
  }
}

TEST(Generate, WidthOneEqualsGreedyOnTheModel) {
  Fixture f;
  Model m(tiny_config(), f.vocab, 16);
  const auto mi = make_input(f.in, f.vocab, m.config());
  BeamResult r1;
  const auto w1 = generate(m, mi, 1, 8, 5, 5, &r1);
  nn::Tape tape;
  Pass pass{tape};
  auto [mem, st] = m.encode(pass, mi);
  std::vector<std::int32_t> greedy;
  std::int32_t prev = text::kBos;
  for (int t = 0; t < 8; ++t) {
    auto out = m.decode_step(pass, st, prev, 5, 5, mem);
    const auto& d = out.final_dist.value().values();
    std::int32_t best = -1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i == static_cast<std::size_t>(text::kPad) || i == static_cast<std::size_t>(text::kBos)) continue;
      if (best < 0 || d[i] > d[static_cast<std::size_t>(best)]) best = static_cast<std::int32_t>(i);
    }
    if (best == text::kEos) break;
    greedy.push_back(best);
    prev = best;
    st = out.state;
  }
  EXPECT_EQ(r1.tokens, greedy);
  EXPECT_EQ(w1.size(), greedy.size());
}
