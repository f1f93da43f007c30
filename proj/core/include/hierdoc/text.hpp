#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hierdoc/json_io.hpp"

namespace hierdoc::text {

enum class Origin { kCode, kComment, kClassName };

/// Lowercased subtokens. No token is empty or contains whitespace.
struct TokenSequence {
  std::vector<std::string> tokens;
  Origin origin = Origin::kCode;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenSequence&) const = default;
};

/// Splits an identifier-like token at underscores, lower->Upper, Upper-Upper-lower
/// and letter/digit boundaries, and lowercases the parts.
std::vector<std::string> subtokenize(std::string_view token);

/// Whitespace and punctuation split (punctuation kept as single-character
/// tokens), then subtoken split, then lowercase. Bytes >= 0x80 count as word
/// characters so non-ASCII words survive as single tokens.
TokenSequence tokenize_code(std::string_view source);
TokenSequence tokenize_comment(std::string_view comment);
/// Class names are split into their subtokens: "InfoAccessSyntax" -> info access syntax.
TokenSequence tokenize_class_name(std::string_view name);

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

inline constexpr std::int32_t kPad = 0;
inline constexpr std::int32_t kUnk = 1;
inline constexpr std::int32_t kBos = 2;
inline constexpr std::int32_t kEos = 3;
inline constexpr std::int32_t kNumReserved = 4;

struct VocabConfig {
  std::size_t cap = 10000;
  std::size_t min_freq = 2;
  bool shared = true;
};

class Vocabulary {
 public:
  Vocabulary();

  /// Ranks tokens by frequency (desc) then lexicographically, keeps the first
  /// `cap` whose frequency is at least `min_freq`. Throws UsageError if cap < 4.
  static Vocabulary build(std::span<const TokenSequence> sequences, std::size_t cap, std::size_t min_freq);

  std::int32_t id_of(std::string_view token) const;
  const std::string& token_of(std::int32_t id) const;
  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<std::int32_t> encode(std::span<const std::string> tokens, bool bracket = false) const;
  std::vector<std::string> decode(std::span<const std::int32_t> ids) const;

  Json to_json(const VocabConfig& config) const;
  static Vocabulary from_json(const Json& doc, VocabConfig* config = nullptr);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

}  // namespace hierdoc::text
