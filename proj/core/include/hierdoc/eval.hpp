#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hierdoc/corpus.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/json_io.hpp"

namespace hierdoc::eval {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Sentence metrics. All return values in [0, 1].

/// Sentence BLEU-4: unigram precision unsmoothed, (matches+1)/(max(count,1)+1)
/// for n = 2..4, geometric mean, brevity penalty exp(1 - r/h) when h < r.
/// 0 for an empty hypothesis or no unigram match.
double bleu4(std::span<const std::string> reference, std::span<const std::string> hypothesis);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// LCS F-measure, ((1+b^2) P R) / (R + b^2 P).
double rouge_l(std::span<const std::string> reference, std::span<const std::string> hypothesis, double beta = 1.2);

/// Porter's original suffix-stripping rules (lowercase input).
std::string porter_stem(std::string_view word);

struct MeteorAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (hyp position, ref position), hyp-ascending
  std::size_t exact = 0;
  std::size_t matches = 0;
  std::size_t chunks = 0;
  /// False when the search hit its node budget and kept the best alignment found so far.
  bool optimal = true;
};

/// Maximises exact matches, then exact+stem matches, then minimises chunks.
MeteorAlignment meteor_align(std::span<const std::string> reference, std::span<const std::string> hypothesis);
/// Fmean = 10PR/(R+9P), penalty 0.5 (chunks/matches)^3; 0 without matches.
double meteor(std::span<const std::string> reference, std::span<const std::string> hypothesis);

// ---------------------------------------------------------------------------
// Reports

struct ExampleScore {
  std::string id;
  double bleu4 = 0.0;
  double meteor = 0.0;
  double rouge_l = 0.0;
};

inline constexpr std::string_view kMetricNames[] = {"bleu4", "meteor", "rouge_l"};
double metric_of(const ExampleScore& s, std::string_view metric);

struct MetricReport {
  std::string name;
  std::vector<ExampleScore> examples;
  double bleu4 = 0.0;  // arithmetic means of the per-example scores
  double meteor = 0.0;
  double rouge_l = 0.0;

  std::size_t count() const { return examples.size(); }
  Json to_json() const;
  static MetricReport from_json(const Json& j);
};

struct Prediction {
  std::string id;
  Tokens tokens;
};

/// JSONL with {"id", "prediction"} per line; the prediction is a space-joined token string.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions);

/// Scores every gold example. Every gold id needs exactly one prediction and
/// no prediction may name an unknown id (SchemaError otherwise).
MetricReport score(std::span<const Prediction> predictions, std::span<const corpus::OverrideExample> gold,
                   corpus::CommentMode mode, std::string name = {});

// ---------------------------------------------------------------------------
// Significance

struct SignificanceResult {
  std::string test;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t n_resamples = 0;
  std::uint64_t seed = 0;

  Json to_json() const;
};

/// Paired bootstrap, one-sided (a hypothesised better): p is the share of
/// resamples with mean(a) <= mean(b), exact ties counting one half.
/// statistic = mean(a) - mean(b).
SignificanceResult bootstrap_test(std::span<const double> a, std::span<const double> b, std::size_t n_resamples = 10000,
                                  std::uint64_t seed = 1);

/// Two-sided signed-rank test, normal approximation with tie correction, no
/// continuity correction. Zero differences are dropped; statistic = min(W+, W-).
SignificanceResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

struct NiwfReport {
  std::size_t n = 0;
  double mean_sub = 0.0;
  double mean_sup = 0.0;
  SignificanceResult wilcoxon;

  Json to_json() const;
};

/// Mean normalised NIWF of C-sub and C-sup with a paired test between them.
/// Throws UsageError("insufficient pairs") with fewer than two examples.
NiwfReport niwf_report(std::span<const corpus::OverrideExample> examples, const features::CommentStats& stats,
                       corpus::CommentMode mode);

// ---------------------------------------------------------------------------
// Comparison table

enum class TestKind { kBootstrap, kWilcoxon };
TestKind parse_test(std::string_view name);
std::string_view test_name(TestKind t);

struct Comparison {
  std::vector<std::string> systems;
  std::vector<std::array<double, 3>> means;  // per system, in kMetricNames order
  /// tests[k-1][m]: systems[0] against systems[k] on metric m.
  std::vector<std::array<SignificanceResult, 3>> tests;

  Json to_json() const;
  std::string to_csv() const;
};

/// Reports must cover the same example ids; pairs are matched by id.
Comparison compare(std::span<const MetricReport> reports, TestKind test, std::size_t n_resamples = 10000,
                   std::uint64_t seed = 1);

}  // namespace hierdoc::eval
