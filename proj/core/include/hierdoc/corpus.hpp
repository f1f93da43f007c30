#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hierdoc/json_io.hpp"

namespace hierdoc::corpus {

struct MethodRecord {
  std::string name;
  std::vector<std::string> param_types;
  /// Verbatim source from the first modifier through the closing brace (or `;` for abstract methods).
  std::string body_text;
  /// Javadoc content without the comment delimiters and leading `*` gutters.
  std::optional<std::string> javadoc_text;
  std::vector<std::string> modifiers;

  std::size_t arity() const { return param_types.size(); }
  bool has_modifier(std::string_view m) const;
};

struct RawJavaClass {
  std::string qualified_name;
  std::string simple_name;
  std::optional<std::string> extends_name;
  std::vector<MethodRecord> methods;
  std::string source_path;
  std::string project_id;
  bool is_interface = false;

  /// Dotted path of the enclosing package and outer classes ("" for the default package).
  std::string container_path() const;
};

struct Diagnostic {
  std::string source;
  std::string message;
};

struct ParsedFile {
  std::vector<RawJavaClass> classes;
  std::vector<Diagnostic> diagnostics;
};

/// Structural scan of one Java file. Never throws on malformed input: a file
/// whose braces do not balance after comment/string stripping yields no
/// classes and one diagnostic.
ParsedFile parse_java_file(std::string_view source_text, std::string_view project_id,
                           std::string_view source_path = "<memory>");

/// Strips `/**`, `*/` and the leading `*` gutter of each line.
std::string strip_javadoc_gutters(std::string_view raw_comment);

struct MethodRef {
  const RawJavaClass* cls = nullptr;
  const MethodRecord* method = nullptr;
};

struct OverridePair {
  MethodRef sub;
  MethodRef sup;
};

struct LinkResult {
  std::vector<OverridePair> pairs;
  std::vector<Diagnostic> diagnostics;
};

/// Pairs each subclass method with the nearest ancestor method of the same
/// name and arity. Parents are resolved by simple name inside the project;
/// ambiguous names fall back to package-path proximity. Private and static
/// methods never override. The returned pointers alias `classes`.
LinkResult link_overrides(const std::vector<RawJavaClass>& classes);

struct MainDescription {
  std::string first_sentence;
  std::string full_description;
};

MainDescription extract_main_description(std::string_view javadoc_text);

enum class CommentMode { kFirst, kFull };
CommentMode parse_mode(std::string_view s);
std::string_view mode_name(CommentMode mode);

struct OverrideExample {
  std::string id;
  std::string project_id;
  std::string sub_class_name;
  std::string sup_class_name;
  std::string sub_method_raw;
  std::string sup_method_raw;
  std::string sub_comment_first;
  std::string sub_comment_full;
  std::string sup_comment_first;
  std::string sup_comment_full;

  const std::string& sub_comment(CommentMode mode) const {
    return mode == CommentMode::kFirst ? sub_comment_first : sub_comment_full;
  }
  const std::string& sup_comment(CommentMode mode) const {
    return mode == CommentMode::kFirst ? sup_comment_first : sup_comment_full;
  }

  Json to_json() const;
  static OverrideExample from_json(const Json& row);
  bool operator==(const OverrideExample&) const = default;
};

inline constexpr int kSchemaVersion = 1;

/// Turns linked pairs into examples (both need Javadoc) without filtering.
std::vector<OverrideExample> make_examples(const std::vector<OverridePair>& pairs);

enum class FilterReason { kKept, kTooShort, kNonEnglish, kIdentical };

/// Why an example would be dropped, checking in order: every comment field has
/// at least 3 tokens, every token is printable ASCII, and the selected-mode
/// tokenized C-sub differs from C-sup.
FilterReason filter_reason(const OverrideExample& ex, CommentMode mode);
std::vector<OverrideExample> filter_examples(const std::vector<OverrideExample>& examples, CommentMode mode);

enum class Split { kTrain, kValid, kTest };
std::string_view split_name(Split s);

struct DatasetSplit {
  std::vector<OverrideExample> train;
  std::vector<OverrideExample> valid;
  std::vector<OverrideExample> test;
  std::map<std::string, Split> project_split;
};

/// Shuffles projects with `seed`, orders them largest-first, then assigns each
/// to the split furthest below its target example count. The last projects are
/// forced into still-empty splits. Throws UsageError with fewer than 3 projects.
DatasetSplit partition_by_project(const std::vector<OverrideExample>& examples, std::array<double, 3> ratios,
                                  std::uint64_t seed);

/// Walks `root` (one subdirectory per project), parses every .java file in a
/// stable order, links, builds examples and filters them. Output is sorted by id.
struct MineResult {
  std::vector<OverrideExample> examples;
  std::vector<Diagnostic> diagnostics;
  std::size_t files = 0;
  std::size_t classes = 0;
  std::size_t pairs = 0;
};
MineResult mine_directory(const std::filesystem::path& root, CommentMode mode);

std::vector<OverrideExample> read_examples(const std::filesystem::path& path);
void write_examples(const std::filesystem::path& path, const std::vector<OverrideExample>& examples);

}  // namespace hierdoc::corpus
