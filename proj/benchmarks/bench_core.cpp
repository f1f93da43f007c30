#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "hierdoc/eval.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/model.hpp"
#include "hierdoc/rng.hpp"
#include "hierdoc/tensor.hpp"

using namespace hierdoc;

namespace {

nn::Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  nn::Tensor t = nn::Tensor::matrix(r, c);
  for (double& x : t.values()) x = rng.uniform(-1.0, 1.0);
  return t;
}

corpus::OverrideExample sample_example() {
  corpus::OverrideExample ex;
  ex.id = "bench";
  ex.project_id = "bench";
  ex.sub_class_name = "InfoAccessSyntax";
  ex.sup_class_name = "ASN1Object";
  ex.sub_method_raw = "public byte[] getEncoded() { return info.toASN1Primitive().getEncoded(); }";
  ex.sup_method_raw = "public byte[] getEncoded() throws IOException { return toASN1Primitive().getEncoded(); }";
  ex.sub_comment_first = ex.sub_comment_full = "Returns ASN.1 encoded form of this info access syntax.";
  ex.sup_comment_first = ex.sup_comment_full = "Returns encoded form of the object.";
  return ex;
}

struct ModelFixture {
  features::ExampleInputs in = features::prepare_example(sample_example(), corpus::CommentMode::kFirst);
  text::Vocabulary vocab;
  model::ModelConfig cfg;
  std::unique_ptr<model::Model> m;
  model::ModelInput mi;

  explicit ModelFixture(std::size_t width) {
    std::vector<text::TokenSequence> seqs;
    for (const auto& s : in.streams) seqs.push_back({s.tokens, text::Origin::kCode});
    seqs.push_back({in.sub_comment, text::Origin::kComment});
    // pad the vocabulary out to a realistic output layer
    text::TokenSequence filler{{}, text::Origin::kComment};
    for (int i = 0; i < 2000; ++i) filler.tokens.push_back("w" + std::to_string(i));
    seqs.push_back(filler);
    vocab = text::Vocabulary::build(seqs, 5000, 1);
    cfg.embed_dim = width;
    cfg.enc_hidden = width;
    cfg.dec_hidden = 2 * width;
    cfg.dropout = 0.0;
    m = std::make_unique<model::Model>(cfg, vocab, 1);
    mi = model::make_input(in, vocab, cfg, 5, 5);
  }
};

}  // namespace

static void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto x = random_matrix(n, n, rng), y = random_matrix(n, n, rng);
  for (auto _ : state) {
    nn::Tape tape;  // fresh tape so recorded nodes do not pile up
    auto c = nn::matmul(tape.constant(x), tape.constant(y));
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

static void BM_Softmax(benchmark::State& state) {
  Rng rng(2);
  const auto x = random_matrix(1, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    nn::Tape tape;
    benchmark::DoNotOptimize(nn::softmax(tape.constant(x), 1));
  }
}
BENCHMARK(BM_Softmax)->Arg(1000)->Arg(30000);

static void BM_ForwardBackward(benchmark::State& state) {
  ModelFixture f(static_cast<std::size_t>(state.range(0)));
  auto params = f.m->parameters();
  for (auto _ : state) {
    nn::Tape tape;
    model::Pass pass{tape};
    auto loss = f.m->forward_nll(pass, f.mi);
    tape.backward(loss);
    benchmark::DoNotOptimize(loss);
    for (auto* p : params) p->zero_grad();
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_BeamSearch(benchmark::State& state) {
  ModelFixture f(32);
  const auto beam = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = model::generate(*f.m, f.mi, beam, 30, 5, 5);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_BeamSearch)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Metrics(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::string> ref, hyp;
  for (int i = 0; i < state.range(0); ++i) {
    ref.push_back("w" + std::to_string(rng.below(20)));
    hyp.push_back("w" + std::to_string(rng.below(20)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::bleu4(ref, hyp));
    benchmark::DoNotOptimize(eval::meteor(ref, hyp));
    benchmark::DoNotOptimize(eval::rouge_l(ref, hyp));
  }
}
BENCHMARK(BM_Metrics)->Arg(10)->Arg(30);

BENCHMARK_MAIN();
