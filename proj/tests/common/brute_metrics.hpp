#pragma once

// Slow reference scorers shared by the unit and acceptance tests. They avoid
// the data structures of the library versions on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "hierdoc/eval.hpp"

namespace hierdoc::testing {

using Tokens = std::vector<std::string>;

// Naive BLEU: n-gram counting with nested scans, no maps.
inline double naive_bleu(const Tokens& ref, const Tokens& hyp) {
  if (hyp.empty()) return 0.0;
  double logp = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t hn = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    const std::size_t rn = ref.size() >= n ? ref.size() - n + 1 : 0;
    std::vector<bool> taken(rn, false);
    std::size_t match = 0;
    for (std::size_t i = 0; i < hn; ++i) {
      for (std::size_t j = 0; j < rn; ++j) {
        if (taken[j]) continue;
        bool eq = true;
        for (std::size_t k = 0; k < n && eq; ++k) eq = hyp[i + k] == ref[j + k];
        if (eq) {
          taken[j] = true;
          ++match;
          break;
        }
      }
    }
    if (n == 1) {
      if (match == 0) return 0.0;
      logp += std::log(static_cast<double>(match) / static_cast<double>(hn));
    } else {
      logp += std::log((match + 1.0) / (std::max<std::size_t>(hn, 1) + 1.0));
    }
  }
  const double bp = hyp.size() < ref.size() ? std::exp(1.0 - double(ref.size()) / double(hyp.size())) : 1.0;
  return bp * std::exp(logp / 4.0);
}

// Exhaustive METEOR: every partial injection hyp -> ref through exact or stem
// equality, ranked by (exact matches, total matches, -chunks).
inline double brute_meteor(const Tokens& ref, const Tokens& hyp, std::size_t* chunks_out = nullptr) {
  if (ref.empty() || hyp.empty()) return 0.0;
  std::vector<std::string> hs, rs;
  for (const auto& t : hyp) hs.push_back(eval::porter_stem(t));
  for (const auto& t : ref) rs.push_back(eval::porter_stem(t));
  std::vector<int> assign(hyp.size(), -1);
  std::vector<bool> used(ref.size(), false);
  std::tuple<int, int, int> best{-1, -1, 0};
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == hyp.size()) {
      int exact = 0, total = 0, chunks = 0;
      int prev_i = -2, prev_j = -2;
      for (std::size_t k = 0; k < hyp.size(); ++k) {
        if (assign[k] < 0) continue;
        ++total;
        exact += hyp[k] == ref[static_cast<std::size_t>(assign[k])] ? 1 : 0;
        if (!(static_cast<int>(k) == prev_i + 1 && assign[k] == prev_j + 1)) ++chunks;
        prev_i = static_cast<int>(k);
        prev_j = assign[k];
      }
      best = std::max(best, std::make_tuple(exact, total, -chunks));
      return;
    }
    rec(i + 1);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (used[j] || (hyp[i] != ref[j] && hs[i] != rs[j])) continue;
      used[j] = true;
      assign[i] = static_cast<int>(j);
      rec(i + 1);
      assign[i] = -1;
      used[j] = false;
    }
  };
  rec(0);
  const double m = std::get<1>(best);
  const double chunks = -std::get<2>(best);
  if (chunks_out) *chunks_out = static_cast<std::size_t>(chunks);
  if (m == 0) return 0.0;
  const double p = m / double(hyp.size()), r = m / double(ref.size());
  const double frag = chunks / m;
  return 10 * p * r / (r + 9 * p) * (1 - 0.5 * frag * frag * frag);
}


// LCS by enumerating every subsequence of the shorter side (inputs up to ~20 tokens).
inline std::size_t brute_lcs(const Tokens& a, const Tokens& b) {
  const Tokens& s = a.size() <= b.size() ? a : b;
  const Tokens& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
    std::size_t bits = 0, j = 0, matched = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      ++bits;
      while (j < t.size() && t[j] != s[i]) ++j;
      if (j == t.size()) break;
      ++j;
      ++matched;
    }
    if (matched == bits) best = std::max(best, bits);
  }
  return best;
}

inline double brute_rouge_l(const Tokens& ref, const Tokens& hyp, double beta = 1.2) {
  if (ref.empty() || hyp.empty()) return 0.0;
  const double l = static_cast<double>(brute_lcs(ref, hyp));
  if (l == 0) return 0.0;
  const double p = l / double(hyp.size()), r = l / double(ref.size()), b2 = beta * beta;
  return (1 + b2) * p * r / (r + b2 * p);
}

}  // namespace hierdoc::testing
