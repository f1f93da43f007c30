#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hierdoc/corpus.hpp"
#include "hierdoc/json_io.hpp"

namespace hierdoc::features {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Token classes

struct JavaTokenClass {
  bool is_keyword = false;
  bool is_operator = false;
};

/// Membership in the 50 reserved Java words and the Java operator/separator set.
JavaTokenClass java_token_class(std::string_view token);
const std::unordered_set<std::string>& java_keywords();

// ---------------------------------------------------------------------------
// Diff

enum class EditLabel { kRetain = 0, kAdd = 1, kDelete = 2, kReplace = 3 };
std::string_view edit_label_name(EditLabel label);

struct DiffEntry {
  EditLabel label;
  std::string token;
};

/// LCS alignment of `sub` against `sup`, one label per sub token. Sub-only
/// tokens sharing a gap (between two consecutive LCS matches) with sup-only
/// tokens are REPLACE, other sub-only tokens ADD, LCS members RETAIN.
std::vector<EditLabel> diff_labels(std::span<const std::string> sup, std::span<const std::string> sub);

/// Full edit script including DELETE entries for sup-only tokens, for diagnostics.
std::vector<DiffEntry> diff_script(std::span<const std::string> sup, std::span<const std::string> sub);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// ---------------------------------------------------------------------------
// Overlap and comment-token features

std::vector<bool> overlap_flags(std::span<const std::string> tokens, const std::unordered_set<std::string>& reference);

enum class PosTag { kNoun = 0, kVerb, kAdj, kAdv, kDet, kPrep, kPron, kNum, kPunct, kOther };
inline constexpr std::size_t kNumPosTags = 10;
std::string_view pos_tag_name(PosTag tag);

bool is_stop_word(std::string_view token);
/// Lexicon lookup, then inflection rules over known verb stems, then suffix rules.
PosTag pos_tag(std::string_view token);

struct CommentTokenFeatures {
  bool appears_more_than_once = false;
  bool is_stop_word = false;
  PosTag pos = PosTag::kOther;
};

std::vector<CommentTokenFeatures> comment_token_features(std::span<const std::string> comment_tokens);

// ---------------------------------------------------------------------------
// Per-token feature vectors for the three encoder streams

enum class Stream { kMethod = 0, kClassName = 1, kSupComment = 2 };
inline constexpr std::size_t kNumStreams = 3;

/// Layout of the dense encoding (kFeatureDim columns):
///   0 keyword, 1 operator, 2..5 edit one-hot, 6 overlaps sub class name,
///   7 overlaps sup class name, 8 overlaps sup comment, 9 overlaps sub method,
///   10 appears more than once, 11 stop word, 12..21 POS one-hot, 22..24 stream one-hot.
inline constexpr std::size_t kFeatureDim = 25;
using FeatureRow = std::array<double, kFeatureDim>;

struct TokenFeatureVector {
  bool is_keyword = false;
  bool is_operator = false;
  bool has_edit = false;
  EditLabel edit_label = EditLabel::kRetain;
  bool overlaps_sub_class_name = false;
  bool overlaps_sup_class_name = false;
  bool overlaps_sup_comment = false;
  bool overlaps_sub_method = false;
  bool appears_more_than_once = false;
  bool is_stop_word = false;
  bool has_pos = false;
  PosTag pos_tag = PosTag::kOther;
  Stream stream = Stream::kMethod;

  FeatureRow encode() const;
};

struct StreamInput {
  Tokens tokens;
  std::vector<TokenFeatureVector> features;
};

/// Tokenized views of one example plus the per-stream features.
struct ExampleInputs {
  std::array<StreamInput, kNumStreams> streams;  // M-sub, Kname-sub, C-sup
  Tokens sub_comment;                            // C-sub (target)
  Tokens sup_method;
  Tokens sup_class_name;
};

ExampleInputs prepare_example(const corpus::OverrideExample& ex, corpus::CommentMode mode);

// ---------------------------------------------------------------------------
// Specificity (NIWF)

struct CommentStats {
  std::int64_t num_comments = 0;
  std::unordered_map<std::string, std::int64_t> doc_freq;
  /// Range of raw scores over the comments the stats were built from.
  double niwf_min = 0.0;
  double niwf_max = 0.0;

  std::int64_t freq(const std::string& token) const;
};

/// Document frequencies over `comments`; also records the raw-score range.
CommentStats fit_comment_stats(std::span<const Tokens> comments);

/// max_w log(1+|Y|) / (1+f_w). Throws UsageError("cannot score empty comment").
double niwf_raw(std::span<const std::string> comment_tokens, const CommentStats& stats);
/// Min-max normalised raw score clamped to [0,1]. A degenerate range maps to 0.
double niwf(std::span<const std::string> comment_tokens, const CommentStats& stats);

struct SpecificityBinning {
  int k = 5;
  std::vector<double> edges;  // k-1 strictly ascending thresholds
  double niwf_min = 0.0;
  double niwf_max = 0.0;

  /// 1 + number of edges strictly below x.
  int level(double x) const;
};

/// Equal-frequency edges over the distinct values: with v the sorted distinct
/// values and N = |v|, edge_j = v[ceil(jN/K) - 1]. Throws UsageError when
/// fewer than K distinct values exist.
SpecificityBinning fit_quantile_bins(std::span<const double> values, int k = 5);
SpecificityBinning fit_specificity_bins(std::span<const Tokens> train_comments, const CommentStats& stats, int k = 5);

// ---------------------------------------------------------------------------
// Static embeddings and coherence

struct StaticEmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> tokens;
  std::vector<double> vectors;  // tokens.size() x dim, row-major
  std::unordered_map<std::string, std::size_t> index;

  /// Row for `token`, or nullptr when it has no vector.
  const double* find(const std::string& token) const;
  void rebuild_index();
};

struct EmbeddingFit {
  StaticEmbeddingTable table;
  bool dim_reduced = false;
};

/// Positive-PMI co-occurrence (symmetric window 5, within each sequence)
/// factorised by randomised subspace iteration; vectors are U sqrt(max(lambda, 0))
/// of the `dim` largest eigenpairs. `dim` shrinks to the vocabulary
/// size when needed (reported via dim_reduced).
EmbeddingFit train_static_embeddings(std::span<const Tokens> corpus, std::size_t dim, std::uint64_t seed,
                                     std::size_t window = 5);

struct SentenceRepr {
  std::vector<double> vec;
  bool empty_input = false;
};

/// sum_w e_w / (1 + f_w), unnormalised.
SentenceRepr sentence_repr(std::span<const std::string> tokens, const StaticEmbeddingTable& table,
                           const CommentStats& stats);

/// Cosine of the two sentence representations; 0 when either is the zero vector.
double coherence(std::span<const std::string> c_sub, std::span<const std::string> s, const StaticEmbeddingTable& table,
                 const CommentStats& stats);

// ---------------------------------------------------------------------------
// Fitted artifact bundle

struct FitConfig {
  int k_levels = 5;
  std::size_t static_dim = 64;
  std::size_t window = 5;
  std::uint64_t seed = 13;
};

struct FeatureArtifacts {
  corpus::CommentMode mode = corpus::CommentMode::kFirst;
  CommentStats stats;
  SpecificityBinning specificity;
  /// One binning per s-type: C-sup, M-sub, Kname-sub.
  std::array<SpecificityBinning, 3> coherence;
  StaticEmbeddingTable embeddings;
  std::string dataset_hash;
  std::vector<std::string> warnings;

  int specificity_level(std::span<const std::string> c_sub) const;
  /// Per-s-type levels averaged and rounded to the nearest level.
  int coherence_level(const ExampleInputs& in) const;
};

/// Fits stats on the C-sub and C-sup comments of `train` (selected mode),
/// specificity bins on C-sub, embeddings on all four token streams, then the
/// three coherence binnings.
FeatureArtifacts fit_artifacts(std::span<const corpus::OverrideExample> train, corpus::CommentMode mode,
                               const FitConfig& config, std::string dataset_hash = {});

void save_artifacts(const std::filesystem::path& path, const FeatureArtifacts& art);
FeatureArtifacts load_artifacts(const std::filesystem::path& path);

/// FNV-1a of a file's bytes, hex encoded.
std::string file_hash(const std::filesystem::path& path);

}  // namespace hierdoc::features
