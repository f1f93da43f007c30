#include "hierdoc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "hierdoc/error.hpp"
#include "hierdoc/rng.hpp"
#include "hierdoc/text.hpp"

namespace hierdoc::corpus {
namespace {

std::vector<std::string> split_path(const std::string& dotted) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= dotted.size() && !dotted.empty()) {
    auto dot = dotted.find('.', pos);
    if (dot == std::string::npos) dot = dotted.size();
    parts.push_back(dotted.substr(pos, dot - pos));
    pos = dot + 1;
  }
  return parts;
}

std::size_t common_prefix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

bool can_override(const MethodRecord& m) { return !m.has_modifier("private") && !m.has_modifier("static"); }

std::string method_signature(const MethodRecord& m) {
  std::string sig = m.name + "(";
  for (std::size_t i = 0; i < m.param_types.size(); ++i) {
    if (i) sig += ",";
    for (char c : m.param_types[i])
      if (c != ' ') sig += c;
  }
  return sig + ")";
}

std::string collapse_spaces(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string decode_entities(std::string s) {
  static const std::pair<const char*, const char*> kEntities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&nbsp;", " "}, {"&#39;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : kEntities) {
    std::size_t pos = 0;
    const std::string f(from);
    while ((pos = s.find(f, pos)) != std::string::npos) {
      s.replace(pos, f.size(), to);
      pos += std::string(to).size();
    }
  }
  return s;
}

bool printable_ascii(const std::string& tok) {
  return std::all_of(tok.begin(), tok.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x20 && u <= 0x7e;
  });
}

}  // namespace

LinkResult link_overrides(const std::vector<RawJavaClass>& classes) {
  LinkResult out;
  std::unordered_map<std::string, std::vector<const RawJavaClass*>> by_simple;
  for (const auto& c : classes)
    if (!c.is_interface) by_simple[c.simple_name].push_back(&c);

  std::unordered_map<const RawJavaClass*, const RawJavaClass*> parent_cache;
  auto resolve = [&](const RawJavaClass& cls) -> const RawJavaClass* {
    if (auto it = parent_cache.find(&cls); it != parent_cache.end()) return it->second;
    const RawJavaClass* found = nullptr;
    if (cls.extends_name) {
      const std::string& ext = *cls.extends_name;
      const auto dot = ext.rfind('.');
      const std::string simple = dot == std::string::npos ? ext : ext.substr(dot + 1);
      std::vector<const RawJavaClass*> cands;
      if (auto it = by_simple.find(simple); it != by_simple.end())
        for (auto* c : it->second)
          if (c != &cls) cands.push_back(c);
      if (dot != std::string::npos) {
        std::vector<const RawJavaClass*> exact;
        for (auto* c : cands) {
          const auto& q = c->qualified_name;
          if (q == ext || (q.size() > ext.size() && q.compare(q.size() - ext.size(), ext.size(), ext) == 0 &&
                           q[q.size() - ext.size() - 1] == '.'))
            exact.push_back(c);
        }
        if (!exact.empty()) cands = exact;
      }
      if (cands.size() == 1) {
        found = cands[0];
      } else if (cands.size() > 1) {
        const auto here = split_path(cls.container_path());
        std::size_t best = 0;
        std::vector<const RawJavaClass*> best_cands;
        for (auto* c : cands) {
          const std::size_t score = common_prefix(here, split_path(c->container_path()));
          if (best_cands.empty() || score > best) {
            best = score;
            best_cands = {c};
          } else if (score == best) {
            best_cands.push_back(c);
          }
        }
        if (best_cands.size() == 1) {
          found = best_cands[0];
        } else {
          out.diagnostics.push_back({cls.source_path, "ambiguous parent '" + ext + "' for " + cls.qualified_name +
                                                          " (" + std::to_string(best_cands.size()) +
                                                          " equally close candidates); skipped"});
        }
      }
    }
    parent_cache[&cls] = found;
    return found;
  };

  for (const auto& cls : classes) {
    if (cls.is_interface || !cls.extends_name) continue;
    if (!resolve(cls)) continue;
    for (const auto& m : cls.methods) {
      if (!can_override(m)) continue;
      std::unordered_set<const RawJavaClass*> seen{&cls};
      for (const RawJavaClass* anc = resolve(cls); anc && seen.insert(anc).second; anc = resolve(*anc)) {
        std::vector<const MethodRecord*> same;
        for (const auto& pm : anc->methods)
          if (pm.name == m.name && pm.arity() == m.arity() && can_override(pm)) same.push_back(&pm);
        if (same.empty()) continue;
        const MethodRecord* chosen = nullptr;
        if (same.size() == 1) {
          chosen = same[0];
        } else {
          // Overloads with equal arity: fall back to parameter-type text.
          std::vector<const MethodRecord*> typed;
          for (auto* pm : same)
            if (pm->param_types == m.param_types) typed.push_back(pm);
          if (typed.size() == 1) {
            chosen = typed[0];
          } else {
            out.diagnostics.push_back({cls.source_path, "ambiguous overload " + method_signature(m) + " in " +
                                                            anc->qualified_name + "; skipped"});
          }
        }
        if (chosen) out.pairs.push_back({{&cls, &m}, {anc, chosen}});
        break;
      }
    }
  }
  return out;
}

MainDescription extract_main_description(std::string_view javadoc_text) {
  std::string main;
  std::size_t pos = 0;
  while (pos < javadoc_text.size()) {
    std::size_t nl = javadoc_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = javadoc_text.size();
    const std::string_view line = javadoc_text.substr(pos, nl - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] == '@') break;
    main.append(line);
    main.push_back('\n');
    pos = nl + 1;
  }
  static const std::regex kInlineTag(R"(\{@[A-Za-z]+\s*([^{}]*)\})");
  static const std::regex kHtmlTag(R"(<[^<>]*>)");
  main = std::regex_replace(main, kInlineTag, "$1");
  main = std::regex_replace(main, kHtmlTag, " ");
  main = collapse_spaces(decode_entities(main));

  MainDescription out;
  out.full_description = main;
  out.first_sentence = main;
  for (std::size_t i = 0; i < main.size(); ++i) {
    if (main[i] == '.' && (i + 1 == main.size() || std::isspace(static_cast<unsigned char>(main[i + 1])))) {
      out.first_sentence = main.substr(0, i + 1);
      break;
    }
  }
  return out;
}

CommentMode parse_mode(std::string_view s) {
  if (s == "first") return CommentMode::kFirst;
  if (s == "full") return CommentMode::kFull;
  throw UsageError("unknown comment mode '" + std::string(s) + "' (expected first|full)");
}

std::string_view mode_name(CommentMode mode) { return mode == CommentMode::kFirst ? "first" : "full"; }

Json OverrideExample::to_json() const {
  Json row;
  row["id"] = id;
  row["project_id"] = project_id;
  row["sub_class_name"] = sub_class_name;
  row["sup_class_name"] = sup_class_name;
  row["sub_method_raw"] = sub_method_raw;
  row["sup_method_raw"] = sup_method_raw;
  row["sub_comment_first"] = sub_comment_first;
  row["sub_comment_full"] = sub_comment_full;
  row["sup_comment_first"] = sup_comment_first;
  row["sup_comment_full"] = sup_comment_full;
  row["schema_version"] = kSchemaVersion;
  return row;
}

OverrideExample OverrideExample::from_json(const Json& row) {
  if (!row.is_object()) throw SchemaError("example row is not an object");
  if (!row.contains("schema_version") || row["schema_version"] != kSchemaVersion)
    throw SchemaError("example row: unsupported or missing schema_version");
  OverrideExample ex;
  ex.id = require_string(row, "id");
  ex.project_id = require_string(row, "project_id");
  ex.sub_class_name = require_string(row, "sub_class_name");
  ex.sup_class_name = require_string(row, "sup_class_name");
  ex.sub_method_raw = require_string(row, "sub_method_raw");
  ex.sup_method_raw = require_string(row, "sup_method_raw");
  ex.sub_comment_first = require_string(row, "sub_comment_first");
  ex.sub_comment_full = require_string(row, "sub_comment_full");
  ex.sup_comment_first = require_string(row, "sup_comment_first");
  ex.sup_comment_full = require_string(row, "sup_comment_full");
  return ex;
}

std::vector<OverrideExample> make_examples(const std::vector<OverridePair>& pairs) {
  std::vector<OverrideExample> out;
  for (const auto& p : pairs) {
    if (!p.sub.method->javadoc_text || !p.sup.method->javadoc_text) continue;
    const auto sub_desc = extract_main_description(*p.sub.method->javadoc_text);
    const auto sup_desc = extract_main_description(*p.sup.method->javadoc_text);
    OverrideExample ex;
    ex.id = p.sub.cls->project_id + ":" + p.sub.cls->qualified_name + "#" + method_signature(*p.sub.method);
    ex.project_id = p.sub.cls->project_id;
    ex.sub_class_name = p.sub.cls->simple_name;
    ex.sup_class_name = p.sup.cls->simple_name;
    ex.sub_method_raw = p.sub.method->body_text;
    ex.sup_method_raw = p.sup.method->body_text;
    ex.sub_comment_first = sub_desc.first_sentence;
    ex.sub_comment_full = sub_desc.full_description;
    ex.sup_comment_first = sup_desc.first_sentence;
    ex.sup_comment_full = sup_desc.full_description;
    out.push_back(std::move(ex));
  }
  return out;
}

FilterReason filter_reason(const OverrideExample& ex, CommentMode mode) {
  const std::string* fields[] = {&ex.sub_comment_first, &ex.sub_comment_full, &ex.sup_comment_first,
                                 &ex.sup_comment_full};
  std::vector<text::TokenSequence> toks;
  for (const auto* f : fields) toks.push_back(text::tokenize_comment(*f));
  for (const auto& t : toks)
    if (t.size() < 3) return FilterReason::kTooShort;
  for (const auto& t : toks)
    for (const auto& tok : t.tokens)
      if (!printable_ascii(tok)) return FilterReason::kNonEnglish;
  const auto& sub = mode == CommentMode::kFirst ? toks[0] : toks[1];
  const auto& sup = mode == CommentMode::kFirst ? toks[2] : toks[3];
  if (sub.tokens == sup.tokens) return FilterReason::kIdentical;
  return FilterReason::kKept;
}

std::vector<OverrideExample> filter_examples(const std::vector<OverrideExample>& examples, CommentMode mode) {
  std::vector<OverrideExample> kept;
  for (const auto& ex : examples)
    if (filter_reason(ex, mode) == FilterReason::kKept) kept.push_back(ex);
  return kept;
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "?";
}

DatasetSplit partition_by_project(const std::vector<OverrideExample>& examples, std::array<double, 3> ratios,
                                  std::uint64_t seed) {
  double total_ratio = 0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw UsageError("split ratios must be non-negative");
    total_ratio += r;
  }
  if (std::abs(total_ratio - 1.0) > 1e-6) throw UsageError("split ratios must sum to 1");

  std::map<std::string, std::size_t> counts;
  for (const auto& ex : examples) ++counts[ex.project_id];
  if (counts.size() < 3) throw UsageError("insufficient projects for cross-project split");

  std::vector<std::pair<std::string, std::size_t>> projects(counts.begin(), counts.end());
  Rng rng(seed);
  rng.shuffle(std::span(projects));
  std::stable_sort(projects.begin(), projects.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  const double n = static_cast<double>(examples.size());
  std::array<double, 3> assigned{0, 0, 0};
  std::array<std::size_t, 3> project_count{0, 0, 0};
  DatasetSplit split;
  for (std::size_t i = 0; i < projects.size(); ++i) {
    const std::size_t remaining = projects.size() - i;
    std::size_t empty_splits = 0;
    for (std::size_t s = 0; s < 3; ++s)
      if (project_count[s] == 0 && ratios[s] > 0) ++empty_splits;
    std::size_t best = 3;
    double best_deficit = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      if (remaining <= empty_splits && (project_count[s] != 0 || ratios[s] == 0)) continue;
      const double deficit = ratios[s] * n - assigned[s];
      if (best == 3 || deficit > best_deficit) {
        best = s;
        best_deficit = deficit;
      }
    }
    assigned[best] += static_cast<double>(projects[i].second);
    ++project_count[best];
    split.project_split[projects[i].first] = static_cast<Split>(best);
  }
  for (const auto& ex : examples) {
    switch (split.project_split.at(ex.project_id)) {
      case Split::kTrain:
        split.train.push_back(ex);
        break;
      case Split::kValid:
        split.valid.push_back(ex);
        break;
      case Split::kTest:
        split.test.push_back(ex);
        break;
    }
  }
  return split;
}

MineResult mine_directory(const std::filesystem::path& root, CommentMode mode) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw UsageError("source directory does not exist: " + root.string());
  MineResult result;
  std::vector<fs::path> projects;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) projects.push_back(entry.path());
  std::sort(projects.begin(), projects.end());

  std::vector<OverrideExample> all;
  for (const auto& proj : projects) {
    const std::string project_id = proj.filename().string();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(proj))
      if (entry.is_regular_file() && entry.path().extension() == ".java") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<RawJavaClass> classes;
    for (const auto& f : files) {
      const std::string rel = fs::relative(f, root).generic_string();
      ParsedFile parsed = parse_java_file(read_file(f), project_id, rel);
      ++result.files;
      for (auto& c : parsed.classes) classes.push_back(std::move(c));
      for (auto& d : parsed.diagnostics) result.diagnostics.push_back(std::move(d));
    }
    result.classes += classes.size();
    LinkResult linked = link_overrides(classes);
    result.pairs += linked.pairs.size();
    for (auto& d : linked.diagnostics) result.diagnostics.push_back(std::move(d));
    for (auto& ex : make_examples(linked.pairs)) all.push_back(std::move(ex));
  }
  result.examples = filter_examples(all, mode);
  std::sort(result.examples.begin(), result.examples.end(),
            [](const OverrideExample& a, const OverrideExample& b) { return a.id < b.id; });
  return result;
}

std::vector<OverrideExample> read_examples(const std::filesystem::path& path) {
  std::vector<OverrideExample> out;
  for (const auto& row : read_jsonl(path)) out.push_back(OverrideExample::from_json(row));
  return out;
}

void write_examples(const std::filesystem::path& path, const std::vector<OverrideExample>& examples) {
  std::vector<Json> rows;
  rows.reserve(examples.size());
  for (const auto& ex : examples) rows.push_back(ex.to_json());
  write_jsonl(path, rows);
}

}  // namespace hierdoc::corpus
