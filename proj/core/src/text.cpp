#include "hierdoc/text.hpp"

#include <algorithm>
#include <map>

#include "hierdoc/error.hpp"

namespace hierdoc::text {
namespace {

enum class CharClass { kUpper, kLower, kDigit, kUnderscore };

CharClass classify(unsigned char c) {
  if (c >= 'A' && c <= 'Z') return CharClass::kUpper;
  if (c >= '0' && c <= '9') return CharClass::kDigit;
  if (c == '_') return CharClass::kUnderscore;
  return CharClass::kLower;  // a-z and non-ASCII bytes
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

TokenSequence tokenize(std::string_view source, Origin origin) {
  TokenSequence out;
  out.origin = origin;
  std::size_t i = 0;
  while (i < source.size()) {
    const auto c = static_cast<unsigned char>(source[i]);
    if (is_space(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < source.size() && is_word_byte(static_cast<unsigned char>(source[j]))) ++j;
      for (auto& part : subtokenize(source.substr(i, j - i))) out.tokens.push_back(std::move(part));
      i = j;
    } else {
      out.tokens.emplace_back(1, source[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> subtokenize(std::string_view token) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) parts.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    const CharClass cls = classify(c);
    if (cls == CharClass::kUnderscore) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const CharClass prev = classify(static_cast<unsigned char>(token[i - 1]));
      bool split = false;
      if ((prev == CharClass::kDigit) != (cls == CharClass::kDigit)) {
        split = true;
      } else if (prev == CharClass::kLower && cls == CharClass::kUpper) {
        split = true;
      } else if (prev == CharClass::kUpper && cls == CharClass::kUpper && i + 1 < token.size() &&
                 classify(static_cast<unsigned char>(token[i + 1])) == CharClass::kLower &&
                 static_cast<unsigned char>(token[i + 1]) < 0x80) {
        // "HTTPResponse": the last capital starts the next word.
        split = true;
      }
      if (split) flush();
    }
    current.push_back(ascii_lower(static_cast<char>(c)));
  }
  flush();
  return parts;
}

TokenSequence tokenize_code(std::string_view source) { return tokenize(source, Origin::kCode); }
TokenSequence tokenize_comment(std::string_view comment) { return tokenize(comment, Origin::kComment); }
TokenSequence tokenize_class_name(std::string_view name) { return tokenize(name, Origin::kClassName); }

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

Vocabulary::Vocabulary() {
  for (const char* t : {"<pad>", "<unk>", "<s>", "</s>"}) add(t);
}

void Vocabulary::add(std::string token) {
  ids_.emplace(token, static_cast<std::int32_t>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(std::span<const TokenSequence> sequences, std::size_t cap, std::size_t min_freq) {
  if (cap < 4) throw UsageError("vocabulary cap must be at least 4, got " + std::to_string(cap));
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : sequences)
    for (const auto& tok : seq.tokens) ++counts[tok];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary vocab;
  for (const auto& [tok, freq] : ranked) {
    if (vocab.size() - kNumReserved >= cap) break;
    if (freq < min_freq) break;
    if (vocab.contains(tok)) continue;
    vocab.add(tok);
  }
  return vocab;
}

std::int32_t Vocabulary::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

const std::string& Vocabulary::token_of(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw UsageError("token id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::int32_t> Vocabulary::encode(std::span<const std::string> tokens, bool bracket) const {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size() + 2);
  if (bracket) ids.push_back(kBos);
  for (const auto& t : tokens) ids.push_back(id_of(t));
  if (bracket) ids.push_back(kEos);
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const std::int32_t> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(token_of(id));
  return out;
}

Json Vocabulary::to_json(const VocabConfig& config) const {
  Json doc;
  doc["schema_version"] = 1;
  doc["config"] = {{"cap", config.cap}, {"min_freq", config.min_freq}, {"shared", config.shared}};
  doc["tokens"] = tokens_;
  return doc;
}

Vocabulary Vocabulary::from_json(const Json& doc, VocabConfig* config) {
  if (!doc.contains("tokens") || !doc["tokens"].is_array()) throw SchemaError("vocabulary: missing 'tokens' array");
  const auto tokens = doc["tokens"].get<std::vector<std::string>>();
  Vocabulary vocab;
  if (tokens.size() < kNumReserved) throw SchemaError("vocabulary: fewer entries than reserved ids");
  for (std::size_t i = 0; i < kNumReserved; ++i)
    if (tokens[i] != vocab.tokens_[i]) throw SchemaError("vocabulary: reserved id " + std::to_string(i) + " mismatch");
  for (std::size_t i = kNumReserved; i < tokens.size(); ++i) {
    if (vocab.contains(tokens[i])) throw SchemaError("vocabulary: duplicate token '" + tokens[i] + "'");
    vocab.add(tokens[i]);
  }
  if (config && doc.contains("config")) {
    const auto& c = doc["config"];
    config->cap = c.value("cap", config->cap);
    config->min_freq = c.value("min_freq", config->min_freq);
    config->shared = c.value("shared", config->shared);
  }
  return vocab;
}

}  // namespace hierdoc::text
