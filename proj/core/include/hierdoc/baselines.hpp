#pragma once

#include <span>
#include <string>
#include <vector>

#include "hierdoc/corpus.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/model.hpp"

namespace hierdoc::baselines {

/// C-sup's tokens, unchanged.
features::Tokens copy_baseline(const features::ExampleInputs& in);

/// Replaces each occurrence of `from` inside `tokens` with `to`. Matching is on
/// lowercased subtokens, left to right, without overlap. An empty `from` leaves
/// `tokens` as is.
features::Tokens replace_subsequence(std::span<const std::string> tokens, std::span<const std::string> from,
                                     std::span<const std::string> to);

/// C-sup with the superclass name's subtokens swapped for the subclass name's.
features::Tokens class_name_substitution(const features::ExampleInputs& in);

/// Method encoder only; no features, levels or unlikelihood.
model::ModelConfig seq2seq_baseline_config(model::ModelConfig base = {});

enum class Kind { kCopy, kClassName };
Kind parse_kind(std::string_view name);
std::string_view kind_name(Kind k);

features::Tokens run(Kind kind, const corpus::OverrideExample& ex, corpus::CommentMode mode);

}  // namespace hierdoc::baselines
