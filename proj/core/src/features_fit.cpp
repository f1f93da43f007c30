#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "hierdoc/checkpoint.hpp"
#include "hierdoc/error.hpp"
#include "hierdoc/features.hpp"
#include "hierdoc/rng.hpp"

namespace hierdoc::features {

// ---------------------------------------------------------------------------
// NIWF

std::int64_t CommentStats::freq(const std::string& token) const {
  auto it = doc_freq.find(token);
  return it == doc_freq.end() ? 0 : it->second;
}

double niwf_raw(std::span<const std::string> comment_tokens, const CommentStats& stats) {
  if (comment_tokens.empty()) throw UsageError("cannot score empty comment");
  const double num = std::log(1.0 + static_cast<double>(stats.num_comments));
  double best = -INFINITY;
  for (const auto& t : comment_tokens) best = std::max(best, num / (1.0 + static_cast<double>(stats.freq(t))));
  return best;
}

double niwf(std::span<const std::string> comment_tokens, const CommentStats& stats) {
  const double raw = niwf_raw(comment_tokens, stats);
  const double range = stats.niwf_max - stats.niwf_min;
  if (!(range > 0.0)) return 0.0;
  return std::clamp((raw - stats.niwf_min) / range, 0.0, 1.0);
}

CommentStats fit_comment_stats(std::span<const Tokens> comments) {
  CommentStats st;
  st.num_comments = static_cast<std::int64_t>(comments.size());
  for (const auto& c : comments) {
    std::unordered_set<std::string> seen(c.begin(), c.end());
    for (const auto& t : seen) ++st.doc_freq[t];
  }
  bool any = false;
  for (const auto& c : comments) {
    if (c.empty()) continue;
    const double r = niwf_raw(c, st);
    st.niwf_min = any ? std::min(st.niwf_min, r) : r;
    st.niwf_max = any ? std::max(st.niwf_max, r) : r;
    any = true;
  }
  return st;
}

int SpecificityBinning::level(double x) const {
  int n = 0;
  for (double e : edges) n += e < x;
  return 1 + n;
}

SpecificityBinning fit_quantile_bins(std::span<const double> values, int k) {
  if (k < 2) throw UsageError("need at least 2 levels");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() < static_cast<std::size_t>(k))
    throw UsageError("need at least " + std::to_string(k) + " distinct values to fit levels, got " +
                     std::to_string(v.size()));
  SpecificityBinning b;
  b.k = k;
  const std::size_t n = v.size();
  for (int j = 1; j < k; ++j) {
    const std::size_t idx = (static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
    b.edges.push_back(v[idx - 1]);
  }
  return b;
}

SpecificityBinning fit_specificity_bins(std::span<const Tokens> train_comments, const CommentStats& stats, int k) {
  std::vector<double> vals;
  for (const auto& c : train_comments)
    if (!c.empty()) vals.push_back(niwf(c, stats));
  auto b = fit_quantile_bins(vals, k);
  b.niwf_min = stats.niwf_min;
  b.niwf_max = stats.niwf_max;
  return b;
}

// ---------------------------------------------------------------------------
// Static embeddings

const double* StaticEmbeddingTable::find(const std::string& token) const {
  auto it = index.find(token);
  return it == index.end() ? nullptr : vectors.data() + it->second * dim;
}

void StaticEmbeddingTable::rebuild_index() {
  index.clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) index.emplace(tokens[i], i);
}

namespace {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

// Top `d` eigenpairs of symmetric `m` by magnitude, as (vectors, values).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> top_eigen(const Eigen::SparseMatrix<double>& m, std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd basis;
  Eigen::MatrixXd small;
  const Eigen::Index l = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(d) + 10);
  if (l >= n) {
    basis = Eigen::MatrixXd::Identity(n, n);
    small = Eigen::MatrixXd(m);
  } else {
    Eigen::MatrixXd omega(n, l);
    for (Eigen::Index j = 0; j < l; ++j)
      for (Eigen::Index i = 0; i < n; ++i) omega(i, j) = rng.normal();
    // Shift by a Gershgorin bound so the iteration favours the largest algebraic eigenvalues.
    double shift = 0.0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
      double s = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) s += std::abs(it.value());
      shift = std::max(shift, s);
    }
    const auto apply = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return m * x + shift * x; };
    Eigen::MatrixXd q = orthonormalize(apply(omega));
    for (int it = 0; it < 16; ++it) q = orthonormalize(apply(q));
    basis = q;
    small = q.transpose() * (m * q);
    small = 0.5 * (small + small.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(small.rows()));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
  Eigen::MatrixXd vecs(n, static_cast<Eigen::Index>(d));
  Eigen::VectorXd vals(static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    vecs.col(static_cast<Eigen::Index>(c)) = basis * es.eigenvectors().col(order[c]);
    vals(static_cast<Eigen::Index>(c)) = ev(order[c]);
  }
  return {vecs, vals};
}

}  // namespace

EmbeddingFit train_static_embeddings(std::span<const Tokens> corpus, std::size_t dim, std::uint64_t seed,
                                     std::size_t window) {
  EmbeddingFit fit;
  std::map<std::string, std::size_t> ids;
  for (const auto& seq : corpus)
    for (const auto& t : seq) ids.emplace(t, 0);
  std::size_t next = 0;
  for (auto& [tok, id] : ids) {
    id = next++;
    fit.table.tokens.push_back(tok);
  }
  const std::size_t n = fit.table.tokens.size();
  if (dim > n) {
    dim = n;
    fit.dim_reduced = true;
  }
  fit.table.dim = dim;
  fit.table.vectors.assign(n * dim, 0.0);
  fit.table.rebuild_index();
  if (n == 0 || dim == 0) return fit;

  std::map<std::pair<std::size_t, std::size_t>, double> counts;
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const std::size_t a = ids[seq[i]];
      for (std::size_t j = i + 1; j < seq.size() && j <= i + window; ++j) {
        const std::size_t b = ids[seq[j]];
        counts[{a, b}] += 1.0;
        counts[{b, a}] += 1.0;
      }
    }
  }
  std::vector<double> row(n, 0.0);
  double total = 0.0;
  for (const auto& [key, c] : counts) {
    row[key.first] += c;
    total += c;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [key, c] : counts) {
    const double pmi = std::log(c * total / (row[key.first] * row[key.second]));
    if (pmi > 0.0) trip.emplace_back(static_cast<int>(key.first), static_cast<int>(key.second), pmi);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(trip.begin(), trip.end());
  std::vector<bool> live(n, false);
  for (const auto& t : trip) live[static_cast<std::size_t>(t.row())] = true;

  Rng rng(seed);
  auto [vecs, vals] = top_eigen(m, dim, rng);
  for (std::size_t c = 0; c < dim; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    // Sign convention: the largest-magnitude component of each vector is positive.
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < vecs.rows(); ++i)
      if (std::abs(vecs(i, col)) > std::abs(vecs(arg, col)) + 1e-12) arg = i;
    const double sign = vecs(arg, col) < 0 ? -1.0 : 1.0;
    const double scale = sign * std::sqrt(std::max(vals(col), 0.0));
    for (std::size_t i = 0; i < n; ++i)
      fit.table.vectors[i * dim + c] = live[i] ? vecs(static_cast<Eigen::Index>(i), col) * scale : 0.0;
  }
  return fit;
}

SentenceRepr sentence_repr(std::span<const std::string> tokens, const StaticEmbeddingTable& table,
                           const CommentStats& stats) {
  SentenceRepr r;
  r.vec.assign(table.dim, 0.0);
  if (tokens.empty()) {
    r.empty_input = true;
    return r;
  }
  for (const auto& t : tokens) {
    const double* e = table.find(t);
    if (!e) continue;
    const double w = 1.0 / (1.0 + static_cast<double>(stats.freq(t)));
    for (std::size_t j = 0; j < table.dim; ++j) r.vec[j] += w * e[j];
  }
  return r;
}

double coherence(std::span<const std::string> c_sub, std::span<const std::string> s, const StaticEmbeddingTable& table,
                 const CommentStats& stats) {
  const auto a = sentence_repr(c_sub, table, stats).vec;
  const auto b = sentence_repr(s, table, stats).vec;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Artifact bundle

namespace {

std::array<double, 3> coherence_values(const ExampleInputs& in, const FeatureArtifacts& art) {
  const auto& c = in.sub_comment;
  return {coherence(c, in.streams[2].tokens, art.embeddings, art.stats),
          coherence(c, in.streams[0].tokens, art.embeddings, art.stats),
          coherence(c, in.streams[1].tokens, art.embeddings, art.stats)};
}

Json binning_json(const SpecificityBinning& b) {
  return {{"k", b.k}, {"edges", b.edges}, {"niwf_min", b.niwf_min}, {"niwf_max", b.niwf_max}};
}

SpecificityBinning binning_from(const Json& j) {
  SpecificityBinning b;
  b.k = j.at("k").get<int>();
  b.edges = j.at("edges").get<std::vector<double>>();
  b.niwf_min = j.at("niwf_min").get<double>();
  b.niwf_max = j.at("niwf_max").get<double>();
  if (b.edges.size() != static_cast<std::size_t>(b.k - 1)) throw SchemaError("binning edge count does not match k");
  return b;
}

}  // namespace

int FeatureArtifacts::specificity_level(std::span<const std::string> c_sub) const {
  return specificity.level(niwf(c_sub, stats));
}

int FeatureArtifacts::coherence_level(const ExampleInputs& in) const {
  const auto v = coherence_values(in, *this);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += coherence[i].level(v[i]);
  return static_cast<int>(std::lround(s / 3.0));
}

FeatureArtifacts fit_artifacts(std::span<const corpus::OverrideExample> train, corpus::CommentMode mode,
                               const FitConfig& config, std::string dataset_hash) {
  if (train.empty()) throw UsageError("cannot fit features on an empty training split");
  FeatureArtifacts art;
  art.mode = mode;
  art.dataset_hash = std::move(dataset_hash);
  std::vector<ExampleInputs> inputs;
  inputs.reserve(train.size());
  for (const auto& ex : train) inputs.push_back(prepare_example(ex, mode));

  std::vector<Tokens> comments, sub_comments, all_streams;
  for (const auto& in : inputs) {
    comments.push_back(in.sub_comment);
    comments.push_back(in.streams[2].tokens);
    sub_comments.push_back(in.sub_comment);
    all_streams.push_back(in.sub_comment);
    for (const auto& s : in.streams) all_streams.push_back(s.tokens);
  }
  art.stats = fit_comment_stats(comments);
  art.specificity = fit_specificity_bins(sub_comments, art.stats, config.k_levels);

  auto emb = train_static_embeddings(all_streams, config.static_dim, config.seed, config.window);
  if (emb.dim_reduced)
    art.warnings.push_back("static embedding dimension reduced to vocabulary size " + std::to_string(emb.table.dim));
  art.embeddings = std::move(emb.table);

  std::array<std::vector<double>, 3> values;
  for (const auto& in : inputs) {
    const auto v = coherence_values(in, art);
    for (std::size_t i = 0; i < 3; ++i) values[i].push_back(v[i]);
  }
  for (std::size_t i = 0; i < 3; ++i) art.coherence[i] = fit_quantile_bins(values[i], config.k_levels);
  return art;
}

void save_artifacts(const std::filesystem::path& path, const FeatureArtifacts& art) {
  nn::TensorArchive ar;
  Json df = Json::object();
  std::map<std::string, std::int64_t> sorted(art.stats.doc_freq.begin(), art.stats.doc_freq.end());
  for (const auto& [k, v] : sorted) df[k] = v;
  ar.meta["kind"] = "feature_artifacts";
  ar.meta["dataset_hash"] = art.dataset_hash;
  ar.meta["mode"] = std::string(corpus::mode_name(art.mode));
  ar.meta["stats"] = {{"num_comments", art.stats.num_comments},
                      {"niwf_min", art.stats.niwf_min},
                      {"niwf_max", art.stats.niwf_max},
                      {"doc_freq", std::move(df)}};
  ar.meta["specificity"] = binning_json(art.specificity);
  ar.meta["coherence"] = Json::array();
  for (const auto& b : art.coherence) ar.meta["coherence"].push_back(binning_json(b));
  ar.meta["embedding_tokens"] = art.embeddings.tokens;
  ar.meta["embedding_dim"] = art.embeddings.dim;
  ar.meta["warnings"] = art.warnings;
  const std::size_t rows = std::max<std::size_t>(1, art.embeddings.tokens.size());
  const std::size_t cols = std::max<std::size_t>(1, art.embeddings.dim);
  std::vector<double> data = art.embeddings.vectors;
  data.resize(rows * cols, 0.0);
  ar.add("static_embeddings", nn::Tensor({rows, cols}, std::move(data)));
  nn::save_archive(path, ar);
}

FeatureArtifacts load_artifacts(const std::filesystem::path& path) {
  const auto ar = nn::load_archive(path);
  if (ar.meta.value("kind", std::string{}) != "feature_artifacts")
    throw SchemaError(path.string() + ": not a feature artifact file");
  FeatureArtifacts art;
  try {
    art.dataset_hash = ar.meta.at("dataset_hash").get<std::string>();
    art.mode = corpus::parse_mode(ar.meta.at("mode").get<std::string>());
    const auto& st = ar.meta.at("stats");
    art.stats.num_comments = st.at("num_comments").get<std::int64_t>();
    art.stats.niwf_min = st.at("niwf_min").get<double>();
    art.stats.niwf_max = st.at("niwf_max").get<double>();
    for (const auto& [k, v] : st.at("doc_freq").items()) art.stats.doc_freq[k] = v.get<std::int64_t>();
    art.specificity = binning_from(ar.meta.at("specificity"));
    for (std::size_t i = 0; i < 3; ++i) art.coherence[i] = binning_from(ar.meta.at("coherence").at(i));
    art.embeddings.tokens = ar.meta.at("embedding_tokens").get<std::vector<std::string>>();
    art.embeddings.dim = ar.meta.at("embedding_dim").get<std::size_t>();
    art.warnings = ar.meta.value("warnings", std::vector<std::string>{});
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": malformed feature artifact header: " + e.what());
  }
  const auto& t = ar.get("static_embeddings");
  art.embeddings.vectors.assign(t.values().begin(),
                                t.values().begin() + static_cast<std::ptrdiff_t>(art.embeddings.tokens.size() * art.embeddings.dim));
  art.embeddings.rebuild_index();
  return art;
}

std::string file_hash(const std::filesystem::path& path) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_file(path))));
  return buf;
}

}  // namespace hierdoc::features
