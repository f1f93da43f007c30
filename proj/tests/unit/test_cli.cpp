#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>

#include <sys/wait.h>

#include "hierdoc/cli.hpp"
#include "hierdoc/error.hpp"
#include "synth.hpp"

using namespace hierdoc;
using namespace hierdoc::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hierdoc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const fs::path kToy = fs::path(HIERDOC_SOURCE_DIR) / "data" / "toy_corpus";

RunConfig tiny_run() {
  RunConfig c;
  c.model.embed_dim = 8;
  c.model.enc_hidden = 8;
  c.model.enc_layers = 1;
  c.model.dec_hidden = 12;
  c.model.dec_layers = 1;
  c.model.level_embed_dim = 4;
  c.model.feature_proj_dim = 4;
  c.model.dropout = 0.1;
  c.training.max_epochs = 3;
  c.training.batch_size = 8;
  c.text.min_freq = 1;
  c.features.static_dim = 8;
  c.eval.beam = 3;
  c.eval.max_len = 12;
  return c;
}

// Writes a synthetic three-way split into `dir`.
void write_synth_split(const fs::path& dir, std::size_t n = 40) {
  auto rows = hierdoc::testing::synth_corpus(n, 5, 5);
  cli::require_exists(dir);
  const fs::path all = dir / "all.jsonl";
  corpus::write_examples(all, rows);
  cmd_split(all, dir, {0.6, 0.2, 0.2}, 3);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HIERDOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, DefaultsRoundtrip) {
  const RunConfig c;
  const auto j = c.to_json();
  for (const char* s : {"corpus", "text", "features", "model", "training", "eval"}) EXPECT_TRUE(j.contains(s)) << s;
  EXPECT_EQ(RunConfig::from_json(j).to_json(), j);
  EXPECT_EQ(RunConfig::from_json(Json::object()).to_json(), j);
  EXPECT_EQ(c.eval.beam, 20u);
  EXPECT_EQ(c.training.patience, 10u);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(RunConfig::from_json({{"decoder", Json::object()}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"eval", {{"beams", 3}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"eval", {{"beam", "wide"}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"eval", {{"beam", -1}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"eval", {{"beam", 0}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"model", {{"hidden", 3}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"training", {{"alpha", -1.0}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"corpus", {{"mode", "middle"}}}}), UsageError);
  EXPECT_THROW(RunConfig::from_json({{"corpus", {{"split_ratios", {0.5, 0.5}}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"corpus", {{"split_ratios", {0.5, 0.5, 0.5}}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"features", {{"k_levels", 4}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json({{"text", {{"shared", false}}}}), SchemaError);
  EXPECT_THROW(RunConfig::from_json(Json::array()), SchemaError);

  const auto c = RunConfig::from_json({{"corpus", {{"mode", "full"}}}, {"training", {{"alpha", 0.5}}}});
  EXPECT_EQ(c.corpus.mode, corpus::CommentMode::kFull);
  EXPECT_DOUBLE_EQ(c.training.alpha, 0.5);
}

TEST(RunConfig, EnvironmentNamesTheDefaultFile) {
  const auto dir = scratch("env");
  write_json(dir / "c.json", {{"eval", {{"beam", 7}}}});
  ::setenv(kConfigEnv, (dir / "c.json").c_str(), 1);
  EXPECT_EQ(resolve_config(std::nullopt).eval.beam, 7u);
  write_json(dir / "d.json", {{"eval", {{"beam", 9}}}});
  EXPECT_EQ(resolve_config(dir / "d.json").eval.beam, 9u);
  ::setenv(kConfigEnv, (dir / "missing.json").c_str(), 1);
  EXPECT_THROW(resolve_config(std::nullopt), UsageError);
  ::unsetenv(kConfigEnv);
  EXPECT_EQ(resolve_config(std::nullopt).eval.beam, 20u);
}

TEST(CmdMine, ToyCorpusBytesAreStable) {
  if (!fs::exists(kToy)) GTEST_SKIP() << "toy corpus not present";
  const auto dir = scratch("mine");
  const auto a = cmd_mine(kToy, dir / "a.jsonl", corpus::CommentMode::kFirst);
  const auto b = cmd_mine(kToy, dir / "b.jsonl", corpus::CommentMode::kFirst);
  EXPECT_EQ(a.examples, 64u);
  EXPECT_EQ(b.examples, a.examples);
  EXPECT_EQ(read_file(dir / "a.jsonl"), read_file(dir / "b.jsonl"));
  EXPECT_THROW(cmd_mine(dir / "nope", dir / "c.jsonl", corpus::CommentMode::kFirst), UsageError);
}

TEST(CmdSplit, ProjectsAreDisjointAndOutputStable) {
  const auto dir = scratch("split");
  corpus::write_examples(dir / "all.jsonl", hierdoc::testing::synth_corpus(50, 1, 6));
  const auto s = cmd_split(dir / "all.jsonl", dir / "a", {0.6, 0.2, 0.2}, 9);
  cmd_split(dir / "all.jsonl", dir / "b", {0.6, 0.2, 0.2}, 9);
  for (const char* f : {"train.jsonl", "valid.jsonl", "test.jsonl", "projects.json"})
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  std::set<std::string> train_projects;
  for (const auto& ex : s.train) train_projects.insert(ex.project_id);
  for (const auto& ex : s.test) EXPECT_FALSE(train_projects.count(ex.project_id));
  EXPECT_EQ(s.train.size() + s.valid.size() + s.test.size(), 50u);
  EXPECT_THROW(cmd_split(dir / "all.jsonl", dir / "c", {0.6, 0.6, 0.2}, 9), SchemaError);
}

TEST(CmdBaseline, CopyScoresOneWhenGoldIsTheSuperComment) {
  const auto dir = scratch("baseline");
  auto rows = hierdoc::testing::synth_corpus(12, 3);
  for (auto& ex : rows) ex.sub_comment_first = ex.sub_comment_full = ex.sup_comment_first;
  corpus::write_examples(dir / "gold.jsonl", rows);
  cmd_baseline(dir / "gold.jsonl", dir / "copy.jsonl", baselines::Kind::kCopy, corpus::CommentMode::kFirst);
  const auto r = cmd_eval(dir / "copy.jsonl", dir / "gold.jsonl", dir / "report.json", corpus::CommentMode::kFirst);
  EXPECT_DOUBLE_EQ(r.bleu4, 1.0);
  EXPECT_EQ(r.count(), 12u);
  EXPECT_EQ(r.name, "copy");
  EXPECT_EQ(eval::MetricReport::from_json(read_json(dir / "report.json")).bleu4, 1.0);
}

TEST(CmdCompare, WritesJsonAndCsv) {
  const auto dir = scratch("compare");
  const auto rows = hierdoc::testing::synth_corpus(20, 8);
  corpus::write_examples(dir / "gold.jsonl", rows);
  cmd_baseline(dir / "gold.jsonl", dir / "copy.jsonl", baselines::Kind::kCopy, corpus::CommentMode::kFirst);
  cmd_baseline(dir / "gold.jsonl", dir / "classsub.jsonl", baselines::Kind::kClassName, corpus::CommentMode::kFirst);
  cmd_eval(dir / "copy.jsonl", dir / "gold.jsonl", dir / "copy_report.json", corpus::CommentMode::kFirst);
  cmd_eval(dir / "classsub.jsonl", dir / "gold.jsonl", dir / "cs_report.json", corpus::CommentMode::kFirst);
  const auto cmp = cmd_compare({dir / "cs_report.json", dir / "copy_report.json"}, eval::TestKind::kWilcoxon, 100, 1,
                               dir / "cmp.json", dir / "cmp.csv");
  EXPECT_EQ(cmp.systems, (std::vector<std::string>{"classsub", "copy"}));
  EXPECT_TRUE(read_json(dir / "cmp.json").is_object());
  EXPECT_EQ(read_file(dir / "cmp.csv").rfind("system,bleu4,meteor,rouge_l", 0), 0u);
  EXPECT_THROW(cmd_compare({dir / "cs_report.json"}, eval::TestKind::kWilcoxon, 100, 1, {}, {}), UsageError);
}

TEST(CmdTrainGenerate, RepeatRunsAreByteIdentical) {
  const auto dir = scratch("train");
  write_synth_split(dir);
  const auto cfg = tiny_run();
  cmd_train(cfg, dir, dir / "ck1", model::Ablation::kFull);
  cmd_train(cfg, dir, dir / "ck2", model::Ablation::kFull);
  for (const char* f : {"best.ckpt", "run_config.json", "artifacts.bin", "summary.json"})
    EXPECT_EQ(read_file(dir / "ck1" / f), read_file(dir / "ck2" / f)) << f;
  cmd_generate(dir / "ck1", dir / "test.jsonl", dir / "p1.jsonl");
  cmd_generate(dir / "ck2" / "best.ckpt", dir / "test.jsonl", dir / "p2.jsonl");
  EXPECT_EQ(read_file(dir / "p1.jsonl"), read_file(dir / "p2.jsonl"));
  const auto run = read_json(dir / "ck1" / "run_config.json");
  EXPECT_EQ(run.at("ablation"), "full");
}

TEST(CmdTrain, AblationIsRecordedInTheCheckpoint) {
  const auto dir = scratch("ablation");
  write_synth_split(dir);
  auto cfg = tiny_run();
  cfg.training.max_epochs = 1;
  cmd_train(cfg, dir, dir / "ck", model::Ablation::kSeq2Seq);
  Json meta;
  const auto m = model::Model::load(dir / "ck" / "best.ckpt", &meta);
  EXPECT_EQ(m.config(), model::apply_ablation(cfg.model, model::Ablation::kSeq2Seq));
  EXPECT_THROW(cmd_train(cfg, dir / "missing", dir / "ck2", model::Ablation::kFull), UsageError);
}

TEST(CmdGenerate, BeamOneIsGreedy) {
  const auto dir = scratch("greedy");
  write_synth_split(dir);
  auto cfg = tiny_run();
  cfg.training.max_epochs = 4;
  cmd_train(cfg, dir, dir / "ck", model::Ablation::kFull);
  GenerateOptions opts;
  opts.beam = 1;
  const auto preds = cmd_generate(dir / "ck", dir / "test.jsonl", dir / "p.jsonl", opts);

  auto m = model::Model::load(dir / "ck" / "best.ckpt");
  const int K = m.config().k_levels;
  const auto rows = corpus::read_examples(dir / "test.jsonl");
  ASSERT_EQ(rows.size(), preds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto in = features::prepare_example(rows[i], corpus::CommentMode::kFirst);
    const auto mi = model::make_input(in, m.vocab(), m.config(), K, K);
    nn::Tape tape;
    model::Pass pass{tape};
    auto [mem, st] = m.encode(pass, mi);
    std::int32_t prev = text::kBos;
    std::vector<std::string> out;
    for (std::size_t t = 0; t < cfg.eval.max_len; ++t) {
      auto step = m.decode_step(pass, st, prev, K, K, mem);
      const auto& d = step.final_dist.value().values();
      std::int32_t best = -1;
      for (std::size_t v = 0; v < d.size(); ++v) {
        if (v == static_cast<std::size_t>(text::kPad) || v == static_cast<std::size_t>(text::kBos)) continue;
        if (best < 0 || d[v] > d[static_cast<std::size_t>(best)]) best = static_cast<std::int32_t>(v);
      }
      if (best == text::kEos) break;
      const auto vs = static_cast<std::int32_t>(m.vocab_size());
      out.push_back(best < vs ? m.vocab().token_of(best) : mi.oov[static_cast<std::size_t>(best - vs)]);
      prev = best;
      st = step.state;
    }
    EXPECT_EQ(preds[i].tokens, out) << rows[i].id;
  }
}

TEST(Executable, ExitCodes) {
  const auto dir = scratch("exe");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("mine " + (dir / "absent").string() + " " + (dir / "o.jsonl").string()), 2);
  EXPECT_EQ(run_cli("mine x y --mode middle"), 2);
  write_file(dir / "bad.json", "{\"model\": {\"hidden\": 3}}");
  write_synth_split(dir, 30);
  EXPECT_EQ(run_cli("train " + (dir / "bad.json").string() + " " + dir.string() + " " + (dir / "ck").string()), 2);
  write_file(dir / "broken.jsonl", "{\"id\": \"x\"\n");
  EXPECT_EQ(run_cli("baseline " + (dir / "broken.jsonl").string() + " " + (dir / "p.jsonl").string()), 2);
  EXPECT_EQ(run_cli("baseline " + (dir / "test.jsonl").string() + " " + (dir / "p.jsonl").string() + " --which copy"),
            0);
  EXPECT_EQ(run_cli("eval " + (dir / "p.jsonl").string() + " " + (dir / "test.jsonl").string() + " " +
                    (dir / "r.json").string()),
            0);
  // Predictions for another split name unknown ids.
  EXPECT_EQ(run_cli("eval " + (dir / "p.jsonl").string() + " " + (dir / "train.jsonl").string() + " " +
                    (dir / "r2.json").string()),
            2);
  EXPECT_EQ(run_cli("split " + (dir / "all.jsonl").string() + " " + (dir / "s").string() + " --ratios 0.5,x,0.5"), 2);
}
