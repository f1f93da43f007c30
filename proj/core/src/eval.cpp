#include "hierdoc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hierdoc/error.hpp"
#include "hierdoc/rng.hpp"
#include "hierdoc/text.hpp"

namespace hierdoc::eval {

// ---------------------------------------------------------------------------
// BLEU

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(std::span<const std::string> s, std::size_t n) {
  std::map<Ngram, std::size_t> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[Ngram(s.begin() + static_cast<std::ptrdiff_t>(i),
                                                                s.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return out;
}

}  // namespace

double bleu4(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (hypothesis.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hyp = ngram_counts(hypothesis, n);
    const auto ref = ngram_counts(reference, n);
    std::size_t matched = 0, total = 0;
    for (const auto& [g, c] : hyp) {
      total += c;
      auto it = ref.find(g);
      if (it != ref.end()) matched += std::min(c, it->second);
    }
    if (n == 1) {
      if (matched == 0) return 0.0;
      log_sum += std::log(static_cast<double>(matched) / static_cast<double>(total));
    } else {
      log_sum += std::log((static_cast<double>(matched) + 1.0) / (static_cast<double>(std::max<std::size_t>(total, 1)) + 1.0));
    }
  }
  const double h = static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(reference.size());
  const double bp = h < r ? std::exp(1.0 - r / h) : 1.0;
  return bp * std::exp(log_sum / 4.0);
}

// ---------------------------------------------------------------------------
// ROUGE-L

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(std::span<const std::string> reference, std::span<const std::string> hypothesis, double beta) {
  if (reference.empty() || hypothesis.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(reference, hypothesis));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(hypothesis.size());
  const double r = lcs / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  return (1.0 + b2) * p * r / (r + b2 * p);
}

// ---------------------------------------------------------------------------
// METEOR

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kNodeBudget = 2'000'000;

// Depth-first search over hypothesis positions. Word and stem classes are ids;
// quotas make every leaf an alignment with the maximal exact and stem counts.
class AlignSearch {
 public:
  AlignSearch(std::span<const std::string> ref, std::span<const std::string> hyp) : ref_(ref), hyp_(hyp) {
    auto intern = [](std::unordered_map<std::string, int>& ids, const std::string& key) {
      return ids.emplace(key, static_cast<int>(ids.size())).first->second;
    };
    std::unordered_map<std::string, int> word_ids, stem_ids;
    for (const auto& t : hyp) {
      hw_.push_back(intern(word_ids, t));
      hs_.push_back(intern(stem_ids, porter_stem(t)));
    }
    for (const auto& t : ref) {
      rw_.push_back(intern(word_ids, t));
      rs_.push_back(intern(stem_ids, porter_stem(t)));
    }
    const std::size_t nw = word_ids.size(), ns = stem_ids.size();
    std::vector<long> ch(nw, 0), cr(nw, 0);
    for (int w : hw_) ++ch[static_cast<std::size_t>(w)];
    for (int w : rw_) ++cr[static_cast<std::size_t>(w)];
    exact_left_.assign(nw, 0);
    std::vector<long> left_h(ns, 0), left_r(ns, 0);
    std::vector<int> stem_of_word(nw, 0);
    for (std::size_t i = 0; i < hw_.size(); ++i) stem_of_word[static_cast<std::size_t>(hw_[i])] = hs_[i];
    for (std::size_t j = 0; j < rw_.size(); ++j) stem_of_word[static_cast<std::size_t>(rw_[j])] = rs_[j];
    for (std::size_t w = 0; w < nw; ++w) {
      const long e = std::min(ch[w], cr[w]);
      exact_left_[w] = e;
      exact_target_ += static_cast<std::size_t>(e);
      const auto s = static_cast<std::size_t>(stem_of_word[w]);
      left_h[s] += ch[w] - e;
      left_r[s] += cr[w] - e;
    }
    stem_left_.assign(ns, 0);
    skip_left_.assign(ns, 0);
    for (std::size_t s = 0; s < ns; ++s) {
      stem_left_[s] = std::min(left_h[s], left_r[s]);
      stem_target_ += static_cast<std::size_t>(stem_left_[s]);
      skip_left_[s] = left_h[s] - stem_left_[s];
    }
    // Suffix counts for feasibility pruning.
    word_after_.assign(hyp.size() + 1, std::vector<long>());
    stem_after_.assign(hyp.size() + 1, std::vector<long>());
    word_after_[hyp.size()].assign(nw, 0);
    stem_after_[hyp.size()].assign(ns, 0);
    for (std::size_t i = hyp.size(); i-- > 0;) {
      word_after_[i] = word_after_[i + 1];
      stem_after_[i] = stem_after_[i + 1];
      ++word_after_[i][static_cast<std::size_t>(hw_[i])];
      ++stem_after_[i][static_cast<std::size_t>(hs_[i])];
    }
    used_.assign(ref.size(), false);
    assign_.assign(hyp.size(), kNone);
  }

  MeteorAlignment run() {
    // A valid greedy alignment seeds the bound and survives if the budget runs out.
    if (greedy_chunks() <= hyp_.size()) {
      best_ = greedy_;
      best_chunks_ = count_chunks(pairs_of(greedy_)) + 1;
    } else {
      best_chunks_ = hyp_.size() + 2;
    }
    dfs(0, 0);
    MeteorAlignment out;
    out.optimal = nodes_ < kNodeBudget;
    out.pairs = pairs_of(best_);
    for (const auto& [i, j] : out.pairs) out.exact += hyp_[i] == ref_[j] ? 1 : 0;
    out.matches = out.pairs.size();
    out.chunks = count_chunks(out.pairs);
    return out;
  }

 private:
  static std::size_t count_chunks(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (k == 0 || pairs[k].first != pairs[k - 1].first + 1 || pairs[k].second != pairs[k - 1].second + 1) ++c;
    return c;
  }

  std::size_t greedy_chunks() {
    // Leftmost free candidate everywhere, respecting quotas: exact first, then stem.
    std::vector<bool> used(ref_.size(), false);
    std::vector<std::size_t> a(hyp_.size(), kNone);
    auto exact = exact_left_;
    for (std::size_t i = 0; i < hyp_.size(); ++i) {
      auto& q = exact[static_cast<std::size_t>(hw_[i])];
      if (q == 0) continue;
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used[j] && rw_[j] == hw_[i]) {
          used[j] = true;
          a[i] = j;
          --q;
          break;
        }
    }
    auto stem = stem_left_;
    for (std::size_t i = 0; i < hyp_.size(); ++i) {
      if (a[i] != kNone) continue;
      auto& q = stem[static_cast<std::size_t>(hs_[i])];
      if (q == 0) continue;
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used[j] && rs_[j] == hs_[i] && rw_[j] != hw_[i]) {
          used[j] = true;
          a[i] = j;
          --q;
          break;
        }
    }
    greedy_ = a;
    const auto pairs = pairs_of(a);
    // Greedy can strand stem quota; then it is no valid bound.
    if (pairs.size() != exact_target_ + stem_target_) return hyp_.size() + 1;
    return count_chunks(pairs);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const std::vector<std::size_t>& a) const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != kNone) pairs.emplace_back(i, a[i]);
    return pairs;
  }

  bool feasible(std::size_t i) const {
    for (std::size_t w = 0; w < exact_left_.size(); ++w)
      if (exact_left_[w] > word_after_[i][w]) return false;
    for (std::size_t s = 0; s < stem_left_.size(); ++s)
      if (stem_left_[s] > stem_after_[i][s]) return false;
    return true;
  }

  void place(std::size_t i, std::size_t j, std::size_t chunks) {
    used_[j] = true;
    assign_[i] = j;
    const bool extends = i > 0 && j > 0 && assign_[i - 1] == j - 1;
    dfs(i + 1, chunks + (extends ? 0 : 1));
    used_[j] = false;
    assign_[i] = kNone;
  }

  void dfs(std::size_t i, std::size_t chunks) {
    if (chunks >= best_chunks_ || ++nodes_ >= kNodeBudget) return;
    if (!feasible(i)) return;
    if (i == hyp_.size()) {
      best_chunks_ = chunks;
      best_ = assign_;
      return;
    }
    const auto w = static_cast<std::size_t>(hw_[i]);
    const auto s = static_cast<std::size_t>(hs_[i]);
    if (exact_left_[w] > 0) {
      --exact_left_[w];
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used_[j] && rw_[j] == hw_[i]) place(i, j, chunks);
      ++exact_left_[w];
    }
    if (stem_left_[s] > 0) {
      --stem_left_[s];
      for (std::size_t j = 0; j < ref_.size(); ++j)
        if (!used_[j] && rs_[j] == hs_[i] && rw_[j] != hw_[i]) place(i, j, chunks);
      ++stem_left_[s];
    }
    if (skip_left_[s] > 0) {
      --skip_left_[s];
      dfs(i + 1, chunks);
      ++skip_left_[s];
    }
  }

  std::span<const std::string> ref_, hyp_;
  std::vector<int> hw_, hs_, rw_, rs_;
  std::vector<long> exact_left_, stem_left_, skip_left_;
  std::vector<std::vector<long>> word_after_, stem_after_;
  std::size_t exact_target_ = 0, stem_target_ = 0;
  std::vector<bool> used_;
  std::vector<std::size_t> assign_, best_, greedy_;
  std::size_t best_chunks_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace

MeteorAlignment meteor_align(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  return AlignSearch(reference, hypothesis).run();
}

double meteor(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (reference.empty() || hypothesis.empty()) return 0.0;
  const auto a = meteor_align(reference, hypothesis);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(hypothesis.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  return fmean * (1.0 - 0.5 * frag * frag * frag);
}

// ---------------------------------------------------------------------------
// Reports

double metric_of(const ExampleScore& s, std::string_view metric) {
  if (metric == "bleu4") return s.bleu4;
  if (metric == "meteor") return s.meteor;
  if (metric == "rouge_l") return s.rouge_l;
  throw UsageError("unknown metric '" + std::string(metric) + "'");
}

Json MetricReport::to_json() const {
  Json rows = Json::array();
  for (const auto& e : examples)
    rows.push_back({{"id", e.id}, {"bleu4", e.bleu4}, {"meteor", e.meteor}, {"rouge_l", e.rouge_l}});
  return {{"name", name},
          {"count", count()},
          {"means", {{"bleu4", bleu4}, {"meteor", meteor}, {"rouge_l", rouge_l}}},
          {"examples", rows}};
}

MetricReport MetricReport::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("examples") || !j.at("examples").is_array())
    throw SchemaError("metric report needs an 'examples' array");
  MetricReport r;
  if (j.contains("name")) r.name = require_string(j, "name");
  for (const auto& row : j.at("examples")) {
    ExampleScore e;
    e.id = require_string(row, "id");
    e.bleu4 = require_number(row, "bleu4");
    e.meteor = require_number(row, "meteor");
    e.rouge_l = require_number(row, "rouge_l");
    r.examples.push_back(std::move(e));
  }
  // Means are recomputed so a hand-edited file cannot disagree with its rows.
  for (const auto& e : r.examples) {
    r.bleu4 += e.bleu4;
    r.meteor += e.meteor;
    r.rouge_l += e.rouge_l;
  }
  if (!r.examples.empty()) {
    const double n = static_cast<double>(r.examples.size());
    r.bleu4 /= n;
    r.meteor /= n;
    r.rouge_l /= n;
  }
  return r;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  for (const auto& row : read_jsonl(path)) {
    Prediction p;
    p.id = require_string(row, "id");
    std::istringstream in(require_string(row, "prediction"));
    for (std::string t; in >> t;) p.tokens.push_back(t);
    out.push_back(std::move(p));
  }
  return out;
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions) {
  std::vector<Json> rows;
  rows.reserve(predictions.size());
  for (const auto& p : predictions) rows.push_back({{"id", p.id}, {"prediction", text::join(p.tokens)}});
  write_jsonl(path, rows);
}

MetricReport score(std::span<const Prediction> predictions, std::span<const corpus::OverrideExample> gold,
                   corpus::CommentMode mode, std::string name) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions)
    if (!by_id.emplace(p.id, &p).second) throw SchemaError("duplicate prediction for id '" + p.id + "'");
  std::unordered_map<std::string, bool> gold_ids;
  for (const auto& g : gold) gold_ids[g.id] = true;
  for (const auto& p : predictions)
    if (!gold_ids.count(p.id)) throw SchemaError("prediction for unknown id '" + p.id + "'");
  MetricReport r;
  r.name = std::move(name);
  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw SchemaError("missing prediction for id '" + g.id + "'");
    const auto ref =
        text::tokenize_comment(mode == corpus::CommentMode::kFirst ? g.sub_comment_first : g.sub_comment_full).tokens;
    const auto& hyp = it->second->tokens;
    ExampleScore e{g.id, bleu4(ref, hyp), meteor(ref, hyp), rouge_l(ref, hyp)};
    r.bleu4 += e.bleu4;
    r.meteor += e.meteor;
    r.rouge_l += e.rouge_l;
    r.examples.push_back(std::move(e));
  }
  if (!r.examples.empty()) {
    const double n = static_cast<double>(r.examples.size());
    r.bleu4 /= n;
    r.meteor /= n;
    r.rouge_l /= n;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Significance

Json SignificanceResult::to_json() const {
  return {{"test", test}, {"statistic", statistic}, {"p_value", p_value},
          {"n", n},       {"n_resamples", n_resamples}, {"seed", seed}};
}

SignificanceResult bootstrap_test(std::span<const double> a, std::span<const double> b, std::size_t n_resamples,
                                  std::uint64_t seed) {
  if (a.size() != b.size()) throw UsageError("bootstrap_test: score lists differ in length");
  if (a.empty()) throw UsageError("bootstrap_test: no scores");
  if (n_resamples == 0) throw UsageError("bootstrap_test: n_resamples must be positive");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  Rng rng(seed);
  double count = 0.0;
  for (std::size_t r = 0; r < n_resamples; ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += d[rng.below(n)];
    if (s < 0.0)
      count += 1.0;
    else if (s == 0.0)
      count += 0.5;
  }
  SignificanceResult out;
  out.test = "bootstrap";
  out.statistic = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  out.p_value = count / static_cast<double>(n_resamples);
  out.n = n;
  out.n_resamples = n_resamples;
  out.seed = seed;
  return out;
}

SignificanceResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("wilcoxon_signed_rank: samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] - y[i] != 0.0) d.push_back(x[i] - y[i]);
  SignificanceResult out;
  out.test = "wilcoxon";
  out.n = d.size();
  if (d.empty()) return out;  // p = 1
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });
  std::vector<double> rank(d.size());
  double tie_term = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k;
    while (e + 1 < order.size() && std::abs(d[order[e + 1]]) == std::abs(d[order[k]])) ++e;
    const double avg = 0.5 * static_cast<double>(k + e) + 1.0;
    for (std::size_t q = k; q <= e; ++q) rank[order[q]] = avg;
    const double t = static_cast<double>(e - k + 1);
    tie_term += t * t * t - t;
    k = e + 1;
  }
  double w_plus = 0.0, w_minus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? w_plus : w_minus) += rank[i];
  const double n = static_cast<double>(d.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  out.statistic = std::min(w_plus, w_minus);
  if (var <= 0.0) return out;
  const double z = (out.statistic - mean) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return out;
}

Json NiwfReport::to_json() const {
  return {{"n", n}, {"mean_sub", mean_sub}, {"mean_sup", mean_sup}, {"wilcoxon", wilcoxon.to_json()}};
}

NiwfReport niwf_report(std::span<const corpus::OverrideExample> examples, const features::CommentStats& stats,
                       corpus::CommentMode mode) {
  if (examples.size() < 2) throw UsageError("insufficient pairs");
  std::vector<double> sub, sup;
  for (const auto& ex : examples) {
    const bool first = mode == corpus::CommentMode::kFirst;
    const auto cs = text::tokenize_comment(first ? ex.sub_comment_first : ex.sub_comment_full).tokens;
    const auto cp = text::tokenize_comment(first ? ex.sup_comment_first : ex.sup_comment_full).tokens;
    if (cs.empty() || cp.empty()) throw SchemaError("example " + ex.id + " has an empty comment");
    sub.push_back(features::niwf(cs, stats));
    sup.push_back(features::niwf(cp, stats));
  }
  NiwfReport r;
  r.n = examples.size();
  r.mean_sub = std::accumulate(sub.begin(), sub.end(), 0.0) / static_cast<double>(r.n);
  r.mean_sup = std::accumulate(sup.begin(), sup.end(), 0.0) / static_cast<double>(r.n);
  r.wilcoxon = wilcoxon_signed_rank(sub, sup);
  return r;
}

// ---------------------------------------------------------------------------
// Comparison

TestKind parse_test(std::string_view name) {
  if (name == "bootstrap") return TestKind::kBootstrap;
  if (name == "wilcoxon") return TestKind::kWilcoxon;
  throw UsageError("unknown test '" + std::string(name) + "' (expected bootstrap or wilcoxon)");
}

std::string_view test_name(TestKind t) { return t == TestKind::kBootstrap ? "bootstrap" : "wilcoxon"; }

Comparison compare(std::span<const MetricReport> reports, TestKind test, std::size_t n_resamples, std::uint64_t seed) {
  if (reports.size() < 2) throw UsageError("compare needs at least two reports");
  Comparison c;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < reports[0].examples.size(); ++i) index[reports[0].examples[i].id] = i;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    c.systems.push_back(rep.name.empty() ? "system" + std::to_string(r) : rep.name);
    c.means.push_back({rep.bleu4, rep.meteor, rep.rouge_l});
    if (rep.examples.size() != reports[0].examples.size())
      throw SchemaError("report '" + c.systems.back() + "' covers a different number of examples");
    if (r == 0) continue;
    std::vector<const ExampleScore*> aligned(rep.examples.size(), nullptr);
    for (const auto& e : rep.examples) {
      auto it = index.find(e.id);
      if (it == index.end()) throw SchemaError("report '" + c.systems.back() + "' has unknown id '" + e.id + "'");
      aligned[it->second] = &e;
    }
    std::array<SignificanceResult, 3> row;
    for (std::size_t m = 0; m < 3; ++m) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < aligned.size(); ++i) {
        if (!aligned[i]) throw SchemaError("report '" + c.systems.back() + "' misses id '" + reports[0].examples[i].id + "'");
        a.push_back(metric_of(reports[0].examples[i], kMetricNames[m]));
        b.push_back(metric_of(*aligned[i], kMetricNames[m]));
      }
      row[m] = test == TestKind::kBootstrap ? bootstrap_test(a, b, n_resamples, seed) : wilcoxon_signed_rank(a, b);
    }
    c.tests.push_back(row);
  }
  return c;
}

Json Comparison::to_json() const {
  Json rows = Json::array();
  for (std::size_t r = 0; r < systems.size(); ++r) {
    Json row{{"system", systems[r]}};
    for (std::size_t m = 0; m < 3; ++m) row[std::string(kMetricNames[m])] = means[r][m];
    if (r > 0) {
      Json t = Json::object();
      for (std::size_t m = 0; m < 3; ++m) t[std::string(kMetricNames[m])] = tests[r - 1][m].to_json();
      row["vs_" + systems[0]] = t;
    }
    rows.push_back(row);
  }
  return {{"baseline", systems.empty() ? "" : systems[0]}, {"rows", rows}};
}

std::string Comparison::to_csv() const {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "system";
  for (auto m : kMetricNames) out << "," << m;
  for (auto m : kMetricNames) out << ",p_" << m;
  out << "\n";
  for (std::size_t r = 0; r < systems.size(); ++r) {
    out << systems[r];
    for (std::size_t m = 0; m < 3; ++m) out << "," << means[r][m];
    for (std::size_t m = 0; m < 3; ++m) {
      out << ",";
      if (r > 0) out << tests[r - 1][m].p_value;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace hierdoc::eval
