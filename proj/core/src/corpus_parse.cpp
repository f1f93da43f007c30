#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "hierdoc/corpus.hpp"

namespace hierdoc::corpus {
namespace {

enum class TokKind { kWord, kPunct, kString, kChar, kJavadoc };

struct Tok {
  TokKind kind;
  std::size_t begin;
  std::size_t end;  // one past the last byte
  std::string_view text;
};

bool word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

struct LexResult {
  std::vector<Tok> toks;
  std::optional<std::string> error;
};

LexResult lex(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto push = [&](TokKind k, std::size_t b, std::size_t e) { out.toks.push_back({k, b, e, src.substr(b, e - b)}); };
  while (i < n) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const std::size_t close = src.find("*/", i + 2);
      if (close == std::string_view::npos) {
        out.error = "unterminated block comment";
        return out;
      }
      const bool javadoc = i + 2 < n && src[i + 2] == '*' && close != i + 2;
      if (javadoc) push(TokKind::kJavadoc, i, close + 2);
      i = close + 2;
    } else if (c == '"') {
      const std::size_t b = i;
      if (src.substr(i, 3) == "\"\"\"") {
        const std::size_t close = src.find("\"\"\"", i + 3);
        if (close == std::string_view::npos) {
          out.error = "unterminated text block";
          return out;
        }
        i = close + 3;
      } else {
        ++i;
        while (i < n && src[i] != '"' && src[i] != '\n') i += (src[i] == '\\') ? 2 : 1;
        if (i < n && src[i] == '"') ++i;
      }
      push(TokKind::kString, b, std::min(i, n));
    } else if (c == '\'') {
      const std::size_t b = i++;
      while (i < n && src[i] != '\'' && src[i] != '\n') i += (src[i] == '\\') ? 2 : 1;
      if (i < n && src[i] == '\'') ++i;
      push(TokKind::kChar, b, std::min(i, n));
    } else if (word_start(c) || std::isdigit(c)) {
      const std::size_t b = i;
      while (i < n && word_char(static_cast<unsigned char>(src[i]))) ++i;
      push(TokKind::kWord, b, i);
    } else {
      push(TokKind::kPunct, i, i + 1);
      ++i;
    }
  }
  return out;
}

bool is_punct(const Tok& t, char c) { return t.kind == TokKind::kPunct && t.text[0] == c; }
bool is_word(const Tok& t, std::string_view w) { return t.kind == TokKind::kWord && t.text == w; }

const std::unordered_set<std::string_view>& modifier_words() {
  static const std::unordered_set<std::string_view> kWords = {
      "public", "protected", "private",  "static",   "final",    "abstract", "synchronized",
      "native", "default",   "strictfp", "transient", "volatile", "sealed",   "non-sealed"};
  return kWords;
}

bool is_type_keyword(std::string_view w) { return w == "class" || w == "interface" || w == "enum" || w == "record"; }

/// Index just past a leading run of annotations starting at `i`.
std::size_t skip_annotation(const std::vector<Tok>& toks, const std::vector<std::size_t>& header, std::size_t i) {
  // header[i] is '@'
  ++i;
  if (i < header.size() && is_word(toks[header[i]], "interface")) return i;  // @interface declaration
  while (i < header.size() && toks[header[i]].kind == TokKind::kWord) {
    ++i;
    if (i < header.size() && is_punct(toks[header[i]], '.')) {
      ++i;
    } else {
      break;
    }
  }
  if (i < header.size() && is_punct(toks[header[i]], '(')) {
    int depth = 0;
    for (; i < header.size(); ++i) {
      if (is_punct(toks[header[i]], '(')) ++depth;
      if (is_punct(toks[header[i]], ')') && --depth == 0) return i + 1;
    }
  }
  return i;
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

struct TypeDecl {
  std::string name;
  std::optional<std::string> extends_name;
  bool is_interface = false;
};

std::optional<TypeDecl> match_type_decl(const std::vector<Tok>& toks, const std::vector<std::size_t>& header) {
  for (std::size_t k = 0; k + 1 < header.size(); ++k) {
    const Tok& t = toks[header[k]];
    if (t.kind != TokKind::kWord || !is_type_keyword(t.text)) continue;
    if (k > 0 && is_punct(toks[header[k - 1]], '.')) continue;  // Foo.class
    const Tok& name = toks[header[k + 1]];
    if (name.kind != TokKind::kWord) continue;
    TypeDecl decl;
    decl.name = std::string(name.text);
    decl.is_interface = t.text == "interface";
    if (t.text != "class") return decl;
    int angle = 0;
    for (std::size_t j = k + 2; j < header.size(); ++j) {
      const Tok& u = toks[header[j]];
      if (is_punct(u, '<')) ++angle;
      if (is_punct(u, '>')) --angle;
      if (angle == 0 && is_word(u, "extends")) {
        std::string parent;
        for (std::size_t m = j + 1; m < header.size(); ++m) {
          const Tok& v = toks[header[m]];
          if (v.kind == TokKind::kWord && (parent.empty() || parent.back() == '.')) {
            parent += v.text;
          } else if (is_punct(v, '.') && !parent.empty()) {
            parent += '.';
          } else {
            break;
          }
        }
        if (!parent.empty() && parent.back() != '.') decl.extends_name = parent;
        break;
      }
    }
    return decl;
  }
  return std::nullopt;
}

struct MethodHeader {
  MethodRecord record;
  std::size_t text_begin = 0;
};

std::optional<MethodHeader> match_method(std::string_view src, const std::vector<Tok>& toks,
                                         const std::vector<std::size_t>& header) {
  // Skip leading annotations; remember where the verbatim text starts.
  std::size_t k = 0;
  while (k < header.size() && is_punct(toks[header[k]], '@')) k = skip_annotation(toks, header, k);
  if (k >= header.size()) return std::nullopt;
  const std::size_t first = k;

  // First '(' at nesting depth 0 (angle brackets included).
  std::size_t open = header.size();
  int angle = 0;
  for (std::size_t j = first; j < header.size(); ++j) {
    const Tok& t = toks[header[j]];
    if (is_punct(t, '=')) return std::nullopt;
    if (is_punct(t, '<')) ++angle;
    if (is_punct(t, '>')) --angle;
    if (angle == 0 && is_punct(t, '(')) {
      open = j;
      break;
    }
  }
  if (open == header.size() || open == first) return std::nullopt;
  const Tok& name = toks[header[open - 1]];
  if (name.kind != TokKind::kWord) return std::nullopt;

  MethodHeader out;
  bool has_type = false;
  for (std::size_t j = first; j + 1 < open; ++j) {
    const Tok& t = toks[header[j]];
    if (is_punct(t, '@')) {
      j = skip_annotation(toks, header, j) - 1;
      continue;
    }
    if (t.kind == TokKind::kWord && modifier_words().count(t.text)) {
      out.record.modifiers.emplace_back(t.text);
    } else {
      has_type = true;
    }
  }
  if (!has_type) return std::nullopt;  // constructors and enum constants

  // Matching ')' and parameter split.
  std::size_t close = header.size();
  int depth = 0;
  for (std::size_t j = open; j < header.size(); ++j) {
    if (is_punct(toks[header[j]], '(')) ++depth;
    if (is_punct(toks[header[j]], ')') && --depth == 0) {
      close = j;
      break;
    }
  }
  if (close == header.size()) return std::nullopt;
  // Only `throws ...`, array dims or an annotation default may follow.
  if (close + 1 < header.size()) {
    const Tok& after = toks[header[close + 1]];
    if (!is_word(after, "throws") && !is_word(after, "default") && !is_punct(after, '[')) return std::nullopt;
  }

  std::vector<std::vector<std::size_t>> params(1);
  int nest = 0;
  for (std::size_t j = open + 1; j < close; ++j) {
    const Tok& t = toks[header[j]];
    if (is_punct(t, '<') || is_punct(t, '(') || is_punct(t, '[')) ++nest;
    if (is_punct(t, '>') || is_punct(t, ')') || is_punct(t, ']')) --nest;
    if (nest == 0 && is_punct(t, ',')) {
      params.emplace_back();
      continue;
    }
    params.back().push_back(j);
  }
  if (params.size() == 1 && params[0].empty()) params.clear();
  for (const auto& p : params) {
    std::vector<std::size_t> idx;
    for (auto q : p) idx.push_back(header[q]);
    std::size_t b = 0;
    while (b < idx.size()) {
      if (is_punct(toks[idx[b]], '@')) {
        b = skip_annotation(toks, idx, b);
      } else if (is_word(toks[idx[b]], "final")) {
        ++b;
      } else {
        break;
      }
    }
    if (b + 1 >= idx.size()) {
      out.record.param_types.emplace_back(b < idx.size() ? toks[idx[b]].text : "?");
      continue;
    }
    // Everything but the trailing parameter name.
    const Tok& ft = toks[idx[b]];
    const Tok& lt = toks[idx[idx.size() - 2]];
    out.record.param_types.push_back(collapse_ws(src.substr(ft.begin, lt.end - ft.begin)));
  }
  out.record.name = std::string(name.text);
  out.text_begin = toks[header[first]].begin;
  return out;
}

enum class ScopeKind { kFile, kClassBody, kOpaque };

struct Scope {
  Scope(ScopeKind k, std::size_t cls = 0) : kind(k), class_index(cls) {}
  ScopeKind kind;
  std::size_t class_index = 0;
  // For method bodies: the record being filled and the class it belongs to.
  std::optional<MethodHeader> method;
  std::size_t owner_class = 0;
};

}  // namespace

bool MethodRecord::has_modifier(std::string_view m) const {
  return std::find(modifiers.begin(), modifiers.end(), m) != modifiers.end();
}

std::string RawJavaClass::container_path() const {
  const auto dot = qualified_name.rfind('.');
  return dot == std::string::npos ? std::string() : qualified_name.substr(0, dot);
}

std::string strip_javadoc_gutters(std::string_view raw) {
  if (raw.substr(0, 3) == "/**") raw.remove_prefix(3);
  if (raw.size() >= 2 && raw.substr(raw.size() - 2) == "*/") raw.remove_suffix(2);
  std::string out;
  std::size_t pos = 0;
  bool first_line = true;
  while (pos <= raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    std::string_view line = raw.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t k = 0;
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
    if (k < line.size() && line[k] == '*') {
      ++k;
      if (k < line.size() && line[k] == ' ') ++k;
      line.remove_prefix(k);
    } else if (first_line) {
      line.remove_prefix(k);
    }
    if (!first_line) out.push_back('\n');
    out += line;
    first_line = false;
    pos = nl + 1;
  }
  // Trim surrounding blank space.
  const auto b = out.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = out.find_last_not_of(" \t\n");
  return out.substr(b, e - b + 1);
}

ParsedFile parse_java_file(std::string_view src, std::string_view project_id, std::string_view source_path) {
  ParsedFile result;
  auto diag = [&](std::string msg) { result.diagnostics.push_back({std::string(source_path), std::move(msg)}); };

  LexResult lexed = lex(src);
  if (lexed.error) {
    diag(*lexed.error + "; file skipped");
    return result;
  }
  const auto& toks = lexed.toks;

  {
    long depth = 0;
    for (const auto& t : toks) {
      if (is_punct(t, '{')) ++depth;
      if (is_punct(t, '}') && --depth < 0) break;
    }
    if (depth != 0) {
      diag("unbalanced braces; file skipped");
      return result;
    }
  }

  std::string package;
  std::vector<Scope> stack{{ScopeKind::kFile}};
  std::vector<std::size_t> header;
  std::optional<std::size_t> pending_doc;

  auto qualified_prefix = [&]() {
    std::string prefix = package;
    for (const auto& s : stack) {
      if (s.kind != ScopeKind::kClassBody) continue;
      if (!prefix.empty()) prefix += '.';
      prefix += result.classes[s.class_index].simple_name;
    }
    return prefix;
  };
  auto current_class = [&]() -> std::optional<std::size_t> {
    if (stack.back().kind == ScopeKind::kClassBody) return stack.back().class_index;
    return std::nullopt;
  };
  auto doc_text = [&]() -> std::optional<std::string> {
    if (!pending_doc) return std::nullopt;
    return strip_javadoc_gutters(toks[*pending_doc].text);
  };
  auto reset = [&] {
    header.clear();
    pending_doc.reset();
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Tok& t = toks[i];
    Scope& top = stack.back();
    if (top.kind == ScopeKind::kOpaque) {
      if (is_punct(t, '{')) {
        stack.push_back({ScopeKind::kOpaque});
      } else if (is_punct(t, '}')) {
        Scope done = std::move(stack.back());
        stack.pop_back();
        if (done.method) {
          done.method->record.body_text = std::string(src.substr(done.method->text_begin, t.end - done.method->text_begin));
          result.classes[done.owner_class].methods.push_back(std::move(done.method->record));
        }
        if (stack.back().kind != ScopeKind::kOpaque) reset();
      }
      continue;
    }

    if (t.kind == TokKind::kJavadoc) {
      pending_doc = i;
      continue;
    }
    if (is_punct(t, ';')) {
      if (stack.size() == 1 && !header.empty() && is_word(toks[header[0]], "package")) {
        for (std::size_t k = 1; k < header.size(); ++k) package += toks[header[k]].text;
      } else if (auto cls = current_class()) {
        if (auto m = match_method(src, toks, header)) {
          m->record.body_text = std::string(src.substr(m->text_begin, t.end - m->text_begin));
          m->record.javadoc_text = doc_text();
          result.classes[*cls].methods.push_back(std::move(m->record));
        }
      }
      reset();
      continue;
    }
    if (is_punct(t, '{')) {
      if (auto decl = match_type_decl(toks, header)) {
        RawJavaClass cls;
        const std::string prefix = qualified_prefix();
        cls.simple_name = decl->name;
        cls.qualified_name = prefix.empty() ? decl->name : prefix + "." + decl->name;
        cls.extends_name = decl->extends_name;
        cls.is_interface = decl->is_interface;
        cls.source_path = std::string(source_path);
        cls.project_id = std::string(project_id);
        result.classes.push_back(std::move(cls));
        stack.push_back({ScopeKind::kClassBody, result.classes.size() - 1});
      } else {
        Scope opaque{ScopeKind::kOpaque};
        if (auto cls = current_class()) {
          if (auto m = match_method(src, toks, header)) {
            m->record.javadoc_text = doc_text();
            opaque.method = std::move(m);
            opaque.owner_class = *cls;
          }
        }
        stack.push_back(std::move(opaque));
      }
      reset();
      continue;
    }
    if (is_punct(t, '}')) {
      if (stack.size() > 1) stack.pop_back();
      reset();
      continue;
    }
    header.push_back(i);
  }
  return result;
}

}  // namespace hierdoc::corpus
