#include "hierdoc/baselines.hpp"

#include <algorithm>
#include <cctype>

#include "hierdoc/error.hpp"

namespace hierdoc::baselines {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

features::Tokens copy_baseline(const features::ExampleInputs& in) {
  return in.streams[static_cast<std::size_t>(features::Stream::kSupComment)].tokens;
}

features::Tokens replace_subsequence(std::span<const std::string> tokens, std::span<const std::string> from,
                                     std::span<const std::string> to) {
  features::Tokens out;
  if (from.empty()) return {tokens.begin(), tokens.end()};
  std::vector<std::string> pattern;
  for (const auto& t : from) pattern.push_back(lower(t));
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool hit = i + pattern.size() <= tokens.size();
    for (std::size_t k = 0; hit && k < pattern.size(); ++k) hit = lower(tokens[i + k]) == pattern[k];
    if (hit) {
      out.insert(out.end(), to.begin(), to.end());
      i += pattern.size();
    } else {
      out.push_back(tokens[i++]);
    }
  }
  return out;
}

features::Tokens class_name_substitution(const features::ExampleInputs& in) {
  return replace_subsequence(copy_baseline(in), in.sup_class_name,
                             in.streams[static_cast<std::size_t>(features::Stream::kClassName)].tokens);
}

model::ModelConfig seq2seq_baseline_config(model::ModelConfig base) {
  return model::apply_ablation(base, model::Ablation::kSeq2Seq);
}

Kind parse_kind(std::string_view name) {
  if (name == "copy") return Kind::kCopy;
  if (name == "classsub" || name == "classname") return Kind::kClassName;
  throw UsageError("unknown baseline '" + std::string(name) + "' (expected copy or classsub)");
}

std::string_view kind_name(Kind k) { return k == Kind::kCopy ? "copy" : "classsub"; }

features::Tokens run(Kind kind, const corpus::OverrideExample& ex, corpus::CommentMode mode) {
  const auto in = features::prepare_example(ex, mode);
  return kind == Kind::kCopy ? copy_baseline(in) : class_name_substitution(in);
}

}  // namespace hierdoc::baselines
