#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "hierdoc/features.hpp"
#include "hierdoc/text.hpp"

namespace hierdoc::features {

namespace {

const std::unordered_set<std::string> kOperators = {
    "=",  ">",  "<",   "!",   "~",   "?",   ":",    "->",  "==", ">=", "<=", "!=", "&&", "||", "++",
    "--", "+",  "-",   "*",   "/",   "&",   "|",    "^",   "%",  "<<", ">>", ">>>", "+=", "-=", "*=",
    "/=", "&=", "|=",  "^=",  "%=",  "<<=", ">>=",  ">>>=", "(",  ")",  "{",  "}",  "[",  "]",  ";",
    ",",  ".",  "...", "@",   "::"};

const std::unordered_set<std::string> kStopWords = {
    "a",       "about",   "above",  "after",   "again",  "against", "all",     "am",      "an",     "and",
    "any",     "are",     "as",     "at",      "be",     "because", "been",    "before",  "being",  "below",
    "between", "both",    "but",    "by",      "can",    "could",   "did",     "do",      "does",   "doing",
    "down",    "during",  "each",   "either",  "else",   "etc",     "ever",    "every",   "few",    "for",
    "from",    "further", "had",    "has",     "have",   "having",  "he",      "her",     "here",   "hers",
    "herself", "him",     "himself", "his",    "how",    "however", "i",       "if",      "in",     "into",
    "is",      "it",      "its",    "itself",  "just",   "may",     "me",      "might",   "more",   "most",
    "must",    "my",      "myself", "neither", "no",     "nor",     "not",     "now",     "of",     "off",
    "often",   "on",      "once",   "one",     "only",   "or",      "other",   "otherwise", "ought", "our",
    "ours",    "ourselves", "out",  "over",    "own",    "per",     "rather",  "same",    "shall",  "she",
    "should",  "since",   "so",     "some",    "such",   "than",    "that",    "the",     "their",  "theirs",
    "them",    "themselves", "then", "there",  "therefore", "these", "they",   "this",    "those",  "though",
    "through", "thus",    "to",     "too",     "under",  "until",   "up",      "upon",    "us",     "very",
    "via",     "was",     "we",     "were",    "what",   "when",    "where",   "whether", "which",  "while",
    "who",     "whom",    "whose",  "why",     "will",   "with",    "within",  "without", "would",  "yet",
    "you",     "your",    "yours",  "yourself", "yourselves", "also", "already", "always", "among", "another",
    "anyway",  "around",  "away",   "cannot",  "else",   "enough",  "even",    "instead", "many",   "much",
};

const std::unordered_map<std::string, PosTag> kLexicon = [] {
  std::unordered_map<std::string, PosTag> m;
  for (const char* w : {"the", "a", "an", "this", "that", "these", "those", "each", "every", "any", "all", "some",
                        "no", "its", "their", "his", "her", "our", "your", "my", "another", "either", "neither",
                        "both"})
    m[w] = PosTag::kDet;
  for (const char* w : {"it", "they", "he", "she", "we", "you", "i", "them", "him", "us", "me", "itself", "which",
                        "who", "whom", "what", "whose", "themselves", "one", "something", "nothing", "anything"})
    m[w] = PosTag::kPron;
  for (const char* w : {"of",     "in",   "on",      "at",      "to",     "for",     "from",   "with",
                        "by",     "about", "as",     "into",    "over",   "under",   "between", "through",
                        "after",  "before", "during", "without", "within", "against", "among",  "upon",
                        "via",    "per",   "onto",   "across",  "behind", "beyond",  "since",  "until",
                        "toward", "towards", "like", "than",    "unless", "whether", "if",     "because"})
    m[w] = PosTag::kPrep;
  for (const char* w : {"not", "also", "only", "then", "always", "never", "already", "just", "very", "too",
                        "again", "here", "there", "now", "still", "even", "instead", "else", "otherwise", "often",
                        "soon", "later", "once", "twice", "almost", "rather", "quite", "however", "thus",
                        "therefore", "yet", "how", "when", "where", "why"})
    m[w] = PosTag::kAdv;
  for (const char* w : {"new",     "true",     "false",   "null",     "empty",   "current",  "given",  "specified",
                        "default", "valid",    "invalid", "same",     "other",   "different", "first", "last",
                        "next",    "previous", "old",     "good",     "bad",     "large",    "small",  "short",
                        "long",    "full",     "whole",   "open",     "closed",  "public",   "private", "static",
                        "final",   "abstract", "native",  "local",    "global",  "internal", "external", "main",
                        "single",  "multiple", "many",    "few",      "more",    "most",     "less",   "least",
                        "such",    "own",      "non",     "raw",      "safe",    "unique",   "simple", "complex",
                        "able",    "available", "possible", "necessary", "optional", "required", "underlying"})
    m[w] = PosTag::kAdj;
  for (const char* w : {"is",    "are",   "was",    "were",  "be",    "been",   "being", "am",    "has",
                        "have",  "had",   "do",     "does",  "did",   "can",    "could", "should", "would",
                        "will",  "may",   "might",  "must",  "shall", "cannot", "get",   "gets",  "got",
                        "set",   "sets",  "put",    "puts",  "run",   "runs",   "let",   "lets"})
    m[w] = PosTag::kVerb;
  for (const char* w : {"and", "or", "but", "nor", "so", "e", "g", "ie", "eg", "etc"}) m[w] = PosTag::kOther;
  return m;
}();

// Base forms that take regular -s/-es/-ed/-ing inflections.
const std::unordered_set<std::string> kVerbStems = {
    "return", "create", "add",     "remove",   "check",    "compute",  "calculate", "convert",  "build",
    "parse",  "read",   "write",   "load",     "save",     "store",    "update",    "delete",   "insert",
    "find",   "search", "open",    "close",    "start",    "stop",     "reset",     "clear",    "init",
    "initialize", "invoke", "call", "handle",  "process",  "apply",    "append",    "contain",  "compare",
    "copy",   "clone",  "encode",  "decode",   "format",   "generate", "validate",  "verify",   "test",
    "determine", "indicate", "provide", "use", "allow",    "enable",   "disable",   "register", "notify",
    "send",   "receive", "accept", "reject",   "resolve",  "render",   "draw",      "paint",    "print",
    "display", "show",  "hide",    "execute",  "perform",  "fire",     "throw",     "catch",    "wrap",
    "evaluate", "match", "merge",  "split",    "sort",     "filter",   "map",       "visit",    "look",
    "lookup", "fetch",  "release", "acquire",  "lock",     "unlock",   "wait",      "flush",    "dispose",
    "destroy", "attach", "detach", "bind",     "unbind",   "connect",  "disconnect", "configure", "install",
    "represent", "describe", "define", "specify", "contain", "hold",   "keep",      "make",     "take",
    "give",   "need",   "want",    "try",      "include",  "exclude",  "ensure",    "support",  "produce",
    "consume", "obtain", "retrieve", "extract", "transform", "translate", "serialize", "deserialize",
    "close",  "answer", "report",  "log",      "trace",    "measure",  "count",     "iterate",  "select",
    "schedule", "cancel", "refresh", "reload", "restore",  "replace",  "change",    "modify",   "move",
    "mark",   "set",    "get",     "put",      "emit",     "signal",   "track",     "listen",   "override",
    "implement", "extend", "inherit", "delegate", "forward", "require", "compile",  "declare",  "assign"};

bool all_digits(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool has_alnum(std::string_view t) {
  return std::any_of(t.begin(), t.end(), [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() > suf.size() && s.substr(s.size() - suf.size()) == suf;
}

bool known_stem(std::string_view stem) { return !stem.empty() && kVerbStems.count(std::string(stem)) > 0; }

// Inflected form of a known verb stem ("returns", "created", "adding", "stopped").
bool inflected_verb(std::string_view t) {
  if (ends_with(t, "ies") && known_stem(std::string(t.substr(0, t.size() - 3)) + "y")) return true;
  if (ends_with(t, "es") && known_stem(t.substr(0, t.size() - 2))) return true;
  if (ends_with(t, "s") && known_stem(t.substr(0, t.size() - 1))) return true;
  if (ends_with(t, "ed")) {
    const auto base = t.substr(0, t.size() - 2);
    if (known_stem(base) || known_stem(std::string(base) + "e")) return true;
    if (base.size() >= 2 && base[base.size() - 1] == base[base.size() - 2] && known_stem(base.substr(0, base.size() - 1)))
      return true;
    if (ends_with(t, "ied") && known_stem(std::string(t.substr(0, t.size() - 3)) + "y")) return true;
  }
  if (ends_with(t, "ing")) {
    const auto base = t.substr(0, t.size() - 3);
    if (known_stem(base) || known_stem(std::string(base) + "e")) return true;
    if (base.size() >= 2 && base[base.size() - 1] == base[base.size() - 2] && known_stem(base.substr(0, base.size() - 1)))
      return true;
  }
  return false;
}

enum class Step { kMatch, kDel, kIns };

// Forward walk over the suffix-LCS table; ties prefer deleting from sup.
std::vector<Step> align(std::span<const std::string> sup, std::span<const std::string> sub) {
  const std::size_t n = sup.size(), m = sub.size();
  std::vector<std::uint32_t> L((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return L[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      at(i, j) = sup[i] == sub[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
  std::vector<Step> steps;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && sup[i] == sub[j] && at(i, j) == at(i + 1, j + 1) + 1) {
      steps.push_back(Step::kMatch);
      ++i;
      ++j;
    } else if (j == m || (i < n && at(i + 1, j) >= at(i, j + 1))) {
      steps.push_back(Step::kDel);
      ++i;
    } else {
      steps.push_back(Step::kIns);
      ++j;
    }
  }
  return steps;
}

}  // namespace

const std::unordered_set<std::string>& java_keywords() {
  static const std::unordered_set<std::string> kw = {
      "abstract",  "assert",     "boolean",   "break",     "byte",     "case",      "catch",     "char",
      "class",     "const",      "continue",  "default",   "do",       "double",    "else",      "enum",
      "extends",   "final",      "finally",   "float",     "for",      "goto",      "if",        "implements",
      "import",    "instanceof", "int",       "interface", "long",     "native",    "new",       "package",
      "private",   "protected",  "public",    "return",    "short",    "static",    "strictfp",  "super",
      "switch",    "synchronized", "this",    "throw",     "throws",   "transient", "try",       "void",
      "volatile",  "while"};
  return kw;
}

JavaTokenClass java_token_class(std::string_view token) {
  const std::string t(token);
  return {java_keywords().count(t) > 0, kOperators.count(t) > 0};
}

std::string_view edit_label_name(EditLabel label) {
  switch (label) {
    case EditLabel::kRetain: return "RETAIN";
    case EditLabel::kAdd: return "ADD";
    case EditLabel::kDelete: return "DELETE";
    case EditLabel::kReplace: return "REPLACE";
  }
  return "?";
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::size_t n = 0;
  for (Step s : align(a, b)) n += s == Step::kMatch;
  return n;
}

std::vector<DiffEntry> diff_script(std::span<const std::string> sup, std::span<const std::string> sub) {
  const auto steps = align(sup, sub);
  std::vector<DiffEntry> out;
  std::size_t i = 0, j = 0, k = 0;
  while (k < steps.size()) {
    if (steps[k] == Step::kMatch) {
      out.push_back({EditLabel::kRetain, sub[j]});
      ++i, ++j, ++k;
      continue;
    }
    // One gap: every non-match step up to the next match.
    std::size_t end = k;
    bool has_del = false;
    while (end < steps.size() && steps[end] != Step::kMatch) has_del |= steps[end++] == Step::kDel;
    for (; k < end; ++k) {
      if (steps[k] == Step::kDel) {
        out.push_back({EditLabel::kDelete, sup[i++]});
      } else {
        out.push_back({has_del ? EditLabel::kReplace : EditLabel::kAdd, sub[j++]});
      }
    }
  }
  return out;
}

std::vector<EditLabel> diff_labels(std::span<const std::string> sup, std::span<const std::string> sub) {
  std::vector<EditLabel> labels;
  labels.reserve(sub.size());
  for (const auto& e : diff_script(sup, sub))
    if (e.label != EditLabel::kDelete) labels.push_back(e.label);
  return labels;
}

std::vector<bool> overlap_flags(std::span<const std::string> tokens, const std::unordered_set<std::string>& reference) {
  std::vector<bool> out(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out[i] = reference.count(tokens[i]) > 0;
  return out;
}

std::string_view pos_tag_name(PosTag tag) {
  static constexpr std::string_view names[] = {"NOUN", "VERB", "ADJ", "ADV", "DET", "PREP", "PRON", "NUM", "PUNCT", "OTHER"};
  return names[static_cast<int>(tag)];
}

bool is_stop_word(std::string_view token) { return kStopWords.count(std::string(token)) > 0; }

PosTag pos_tag(std::string_view token) {
  if (token.empty()) return PosTag::kOther;
  if (all_digits(token)) return PosTag::kNum;
  if (!has_alnum(token)) return PosTag::kPunct;
  const std::string t(token);
  if (auto it = kLexicon.find(t); it != kLexicon.end()) return it->second;
  if (kVerbStems.count(t) || inflected_verb(t)) return PosTag::kVerb;
  if (ends_with(t, "ly")) return PosTag::kAdv;
  for (const char* suf : {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship", "ism", "er", "or", "ure"})
    if (ends_with(t, suf)) return PosTag::kNoun;
  for (const char* suf : {"able", "ible", "ful", "ous", "ive", "less", "ic", "ary", "al"})
    if (ends_with(t, suf)) return PosTag::kAdj;
  if (ends_with(t, "ing") || ends_with(t, "ed")) return PosTag::kVerb;
  const bool alpha = std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isalpha(c); });
  return alpha ? PosTag::kNoun : PosTag::kOther;
}

std::vector<CommentTokenFeatures> comment_token_features(std::span<const std::string> comment_tokens) {
  std::unordered_map<std::string, int> count;
  for (const auto& t : comment_tokens) ++count[t];
  std::vector<CommentTokenFeatures> out;
  out.reserve(comment_tokens.size());
  for (const auto& t : comment_tokens) out.push_back({count[t] > 1, is_stop_word(t), pos_tag(t)});
  return out;
}

FeatureRow TokenFeatureVector::encode() const {
  FeatureRow r{};
  r[0] = is_keyword;
  r[1] = is_operator;
  if (has_edit) r[2 + static_cast<int>(edit_label)] = 1.0;
  r[6] = overlaps_sub_class_name;
  r[7] = overlaps_sup_class_name;
  r[8] = overlaps_sup_comment;
  r[9] = overlaps_sub_method;
  r[10] = appears_more_than_once;
  r[11] = is_stop_word;
  if (has_pos) r[12 + static_cast<int>(pos_tag)] = 1.0;
  r[22 + static_cast<int>(stream)] = 1.0;
  return r;
}

ExampleInputs prepare_example(const corpus::OverrideExample& ex, corpus::CommentMode mode) {
  ExampleInputs in;
  auto& method = in.streams[static_cast<int>(Stream::kMethod)];
  auto& cname = in.streams[static_cast<int>(Stream::kClassName)];
  auto& scomment = in.streams[static_cast<int>(Stream::kSupComment)];

  method.tokens = text::tokenize_code(ex.sub_method_raw).tokens;
  cname.tokens = text::tokenize_class_name(ex.sub_class_name).tokens;
  scomment.tokens = text::tokenize_comment(ex.sup_comment(mode)).tokens;
  in.sub_comment = text::tokenize_comment(ex.sub_comment(mode)).tokens;
  in.sup_method = text::tokenize_code(ex.sup_method_raw).tokens;
  in.sup_class_name = text::tokenize_class_name(ex.sup_class_name).tokens;

  const std::unordered_set<std::string> sub_name(cname.tokens.begin(), cname.tokens.end());
  const std::unordered_set<std::string> sup_name(in.sup_class_name.begin(), in.sup_class_name.end());
  const std::unordered_set<std::string> sup_comment(scomment.tokens.begin(), scomment.tokens.end());
  const std::unordered_set<std::string> sub_method(method.tokens.begin(), method.tokens.end());

  {
    const auto edits = diff_labels(in.sup_method, method.tokens);
    for (std::size_t i = 0; i < method.tokens.size(); ++i) {
      const auto& t = method.tokens[i];
      TokenFeatureVector f;
      f.stream = Stream::kMethod;
      const auto cls = java_token_class(t);
      f.is_keyword = cls.is_keyword;
      f.is_operator = cls.is_operator;
      f.has_edit = true;
      f.edit_label = edits[i];
      f.overlaps_sub_class_name = sub_name.count(t) > 0;
      f.overlaps_sup_class_name = sup_name.count(t) > 0;
      f.overlaps_sup_comment = sup_comment.count(t) > 0;
      method.features.push_back(f);
    }
  }
  {
    const auto edits = diff_labels(in.sup_class_name, cname.tokens);
    for (std::size_t i = 0; i < cname.tokens.size(); ++i) {
      TokenFeatureVector f;
      f.stream = Stream::kClassName;
      f.has_edit = true;
      f.edit_label = edits[i];
      f.overlaps_sub_method = sub_method.count(cname.tokens[i]) > 0;
      cname.features.push_back(f);
    }
  }
  {
    const auto cf = comment_token_features(scomment.tokens);
    for (std::size_t i = 0; i < scomment.tokens.size(); ++i) {
      TokenFeatureVector f;
      f.stream = Stream::kSupComment;
      f.overlaps_sub_class_name = sub_name.count(scomment.tokens[i]) > 0;
      f.overlaps_sub_method = sub_method.count(scomment.tokens[i]) > 0;
      f.appears_more_than_once = cf[i].appears_more_than_once;
      f.is_stop_word = cf[i].is_stop_word;
      f.has_pos = true;
      f.pos_tag = cf[i].pos;
      scomment.features.push_back(f);
    }
  }
  return in;
}

}  // namespace hierdoc::features
