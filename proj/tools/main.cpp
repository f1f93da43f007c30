// hierdoc: mine, split, fit, train, generate, baseline, eval, compare, niwf.
// Exit codes: 0 ok, 1 internal error, 2 usage or schema error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hierdoc/cli.hpp"
#include "hierdoc/error.hpp"

namespace {

using namespace hierdoc;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::array<double, 3> parse_ratios(const std::string& s) {
  std::vector<double> r;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      r.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw UsageError("--ratios: '" + part + "' is not a number");
    }
  }
  if (r.size() != 3) throw UsageError("--ratios expects three comma-separated values");
  return {r[0], r[1], r[2]};
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

corpus::CommentMode mode_or(const std::string& flag, const cli::RunConfig& cfg) {
  return flag.empty() ? cfg.corpus.mode : corpus::parse_mode(flag);
}

int run(int argc, char** argv) {
  CLI::App app{"Comment generation for overriding Java methods"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hierdoc 0.1.0");

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "RunConfig JSON (default: $HIERDOC_CONFIG, then built-in defaults)");
  };

  // mine
  std::string mine_src, mine_out, mine_mode = "first";
  auto* mine = app.add_subcommand("mine", "Extract override examples from a tree of Java projects");
  mine->add_option("src_dir", mine_src, "One subdirectory per project")->required();
  mine->add_option("out", mine_out, "Output JSONL")->required();
  mine->add_option("--mode", mine_mode, "first|full")->check(CLI::IsMember({"first", "full"}));

  // split
  std::string split_in, split_out, split_ratios;
  std::optional<std::uint64_t> split_seed;
  auto* split = app.add_subcommand("split", "Cross-project train/valid/test partition");
  split->add_option("in", split_in, "Examples JSONL")->required();
  split->add_option("out_dir", split_out, "Directory for train/valid/test.jsonl")->required();
  split->add_option("--ratios", split_ratios, "e.g. 0.8,0.1,0.1");
  split->add_option("--seed", split_seed, "Project shuffle seed");
  add_config(split);

  // fit
  std::string fit_train, fit_out, fit_mode;
  std::optional<std::uint64_t> fit_seed;
  auto* fit = app.add_subcommand("fit", "Fit comment statistics, level bins and static embeddings");
  fit->add_option("train", fit_train, "Training split JSONL")->required();
  fit->add_option("artifacts_out", fit_out, "Output artifact file")->required();
  fit->add_option("--mode", fit_mode, "first|full (default from config)")->check(CLI::IsMember({"first", "full"}));
  fit->add_option("--seed", fit_seed, "Embedding seed");
  add_config(fit);

  // train
  std::string train_cfg, train_data, train_ckpt, train_ablation = "full";
  std::optional<std::uint64_t> train_seed;
  std::optional<double> train_alpha;
  std::optional<std::size_t> train_epochs;
  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("config", train_cfg, "RunConfig JSON")->required();
  train->add_option("data_dir", train_data, "Directory with train.jsonl, valid.jsonl, optional artifacts.bin")
      ->required();
  train->add_option("ckpt_dir", train_ckpt, "Output directory")->required();
  train->add_option("--ablation", train_ablation, "full|-ul|-ul-spec|-ul-spec-feats|-classname|-supcomment|seq2seq")
      ->check(CLI::IsMember({"full", "-ul", "-ul-spec", "-ul-spec-feats", "-classname", "-supcomment", "seq2seq"}));
  train->add_option("--seed", train_seed, "Training seed (overrides training.seed)");
  train->add_option("--alpha", train_alpha, "Unlikelihood weight (overrides training.alpha)");
  train->add_option("--max-epochs", train_epochs, "Overrides training.max_epochs");

  // generate
  std::string gen_ckpt, gen_split, gen_out;
  cli::GenerateOptions gen_opts;
  auto* gen = app.add_subcommand("generate", "Decode comments with a trained model");
  gen->add_option("ckpt", gen_ckpt, "Training output directory or its best.ckpt")->required();
  gen->add_option("split", gen_split, "Examples JSONL")->required();
  gen->add_option("out", gen_out, "Predictions JSONL")->required();
  gen->add_option("--beam", gen_opts.beam, "Beam size (default 20)");
  gen->add_option("--max-len", gen_opts.max_len, "Maximum output length");
  gen->add_option("--spec-level", gen_opts.spec_level, "Specificity level (default: highest)");
  gen->add_option("--coh-level", gen_opts.coh_level, "Coherence level (default: highest)");
  gen->add_flag("--gold-levels", gen_opts.gold_levels, "Use the levels of each example's reference comment")
      ->excludes("--spec-level")
      ->excludes("--coh-level");

  // baseline
  std::string base_split, base_out, base_which = "copy", base_mode;
  auto* base = app.add_subcommand("baseline", "Rule-based baselines");
  base->add_option("split", base_split, "Examples JSONL")->required();
  base->add_option("out", base_out, "Predictions JSONL")->required();
  base->add_option("--which", base_which, "copy|classsub")->check(CLI::IsMember({"copy", "classsub", "classname"}));
  base->add_option("--mode", base_mode, "first|full (default from config)")->check(CLI::IsMember({"first", "full"}));
  add_config(base);

  // eval
  std::string ev_pred, ev_gold, ev_report, ev_mode;
  auto* ev = app.add_subcommand("eval", "Score predictions against a gold split");
  ev->add_option("pred", ev_pred, "Predictions JSONL")->required();
  ev->add_option("gold", ev_gold, "Gold split JSONL")->required();
  ev->add_option("report", ev_report, "Output report JSON")->required();
  ev->add_option("--mode", ev_mode, "first|full (default from config)")->check(CLI::IsMember({"first", "full"}));
  add_config(ev);

  // compare
  std::vector<std::string> cmp_reports;
  std::string cmp_test = "bootstrap", cmp_json, cmp_csv;
  std::optional<std::uint64_t> cmp_seed;
  std::optional<std::size_t> cmp_resamples;
  auto* cmp = app.add_subcommand("compare", "Significance tests between reports (first is the reference)");
  cmp->add_option("reports", cmp_reports, "Report JSON files")->required()->expected(2, -1);
  cmp->add_option("--test", cmp_test, "bootstrap|wilcoxon")->check(CLI::IsMember({"bootstrap", "wilcoxon"}));
  cmp->add_option("--json", cmp_json, "Write the comparison JSON here (default: stdout)");
  cmp->add_option("--csv", cmp_csv, "Also write a CSV table");
  cmp->add_option("--seed", cmp_seed, "Bootstrap seed");
  cmp->add_option("--resamples", cmp_resamples, "Bootstrap resamples");
  add_config(cmp);

  // niwf
  std::string niwf_examples, niwf_art, niwf_out;
  auto* niwf = app.add_subcommand("niwf", "Mean NIWF of C-sub vs C-sup with a Wilcoxon test");
  niwf->add_option("examples", niwf_examples, "Examples JSONL")->required();
  niwf->add_option("artifacts", niwf_art, "Fitted artifact file")->required();
  niwf->add_option("--out", niwf_out, "Report JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto cfg = [&] { return cli::resolve_config(opt_path(config_path)); };

  if (*mine) {
    const auto s = cli::cmd_mine(mine_src, mine_out, corpus::parse_mode(mine_mode));
    std::cerr << "files " << s.files << ", classes " << s.classes << ", pairs " << s.pairs << ", examples "
              << s.examples << ", diagnostics " << s.diagnostics << "\n";
  } else if (*split) {
    const auto c = cfg();
    const auto ratios = split_ratios.empty() ? c.corpus.split_ratios : parse_ratios(split_ratios);
    const auto s = cli::cmd_split(split_in, split_out, ratios, split_seed.value_or(c.corpus.split_seed));
    std::cerr << "train " << s.train.size() << ", valid " << s.valid.size() << ", test " << s.test.size() << "\n";
  } else if (*fit) {
    auto c = cfg();
    if (!fit_mode.empty()) c.corpus.mode = corpus::parse_mode(fit_mode);
    if (fit_seed) c.features.seed = *fit_seed;
    const auto art = cli::cmd_fit(fit_train, fit_out, c);
    for (const auto& w : art.warnings) std::cerr << "warning: " << w << "\n";
  } else if (*train) {
    auto c = cli::RunConfig::load(train_cfg);
    if (train_seed) c.training.seed = *train_seed;
    if (train_alpha) {
      if (*train_alpha < 0.0) throw UsageError("--alpha must be non-negative");
      c.training.alpha = *train_alpha;
    }
    if (train_epochs) c.training.max_epochs = *train_epochs;
    const auto r = cli::cmd_train(c, train_data, train_ckpt, model::parse_ablation(train_ablation));
    std::cerr << "stop " << r.stop_reason << " after " << r.log.size() << " epochs, best epoch " << r.best_epoch
              << " (valid " << r.best_valid << ")\n";
    if (r.stop_reason == "diverged") {
      std::cerr << "error: " << r.error << "\n";
      return kExitInternal;
    }
  } else if (*gen) {
    cli::cmd_generate(gen_ckpt, gen_split, gen_out, gen_opts);
  } else if (*base) {
    const auto c = cfg();
    cli::cmd_baseline(base_split, base_out, baselines::parse_kind(base_which), mode_or(base_mode, c));
  } else if (*ev) {
    const auto c = cfg();
    const auto r = cli::cmd_eval(ev_pred, ev_gold, ev_report, mode_or(ev_mode, c));
    std::cerr << "bleu4 " << r.bleu4 << ", meteor " << r.meteor << ", rouge_l " << r.rouge_l << " over "
              << r.count() << " examples\n";
  } else if (*cmp) {
    const auto c = cfg();
    std::vector<fs::path> paths(cmp_reports.begin(), cmp_reports.end());
    const auto out = cli::cmd_compare(paths, eval::parse_test(cmp_test), cmp_resamples.value_or(c.eval.n_resamples),
                                      cmp_seed.value_or(c.eval.seed), cmp_json, cmp_csv);
    if (cmp_json.empty()) std::cout << out.to_json().dump(2) << "\n";
  } else if (*niwf) {
    const auto r = cli::cmd_niwf(niwf_examples, niwf_art, niwf_out);
    if (niwf_out.empty()) std::cout << r.to_json().dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hierdoc::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hierdoc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::ordered_json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
