// include/wordgeom/cluster.hpp

// Copyright 2026  The wordgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Silhouette scores of word groups in full, PCA and LDA spaces, with the
// leave-one-group-out protocol and layerwise sweeps.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordgeom/core.hpp"
#include "wordgeom/metrics.hpp"
#include "wordgeom/subspace.hpp"

namespace wordgeom {

enum class Subspace { kFull, kPca, kLda };

inline const char* to_string(Subspace s) {
  switch (s) {
    case Subspace::kFull: return "full";
    case Subspace::kPca: return "pca";
    case Subspace::kLda: return "lda";
  }
  return "?";
}

inline Subspace parse_subspace(const std::string& s) {
  if (s == "full") return Subspace::kFull;
  if (s == "pca") return Subspace::kPca;
  if (s == "lda") return Subspace::kLda;
  throw UsageError("unknown subspace '" + s + "' (expected full, pca or lda)");
}

struct ConcretenessSplit {
  double abstract_score = 0.0;
  double concrete_score = 0.0;
};

struct ClusterScore {
  std::string model_id;
  int layer = 0;
  Subspace subspace = Subspace::kFull;
  std::optional<int> k;
  IntervalEstimate score;
  std::optional<ConcretenessSplit> concreteness_split;
  /// Per-iteration leave-one-out values (empty for single-fit scores).
  std::vector<double> iterations;
};

struct ClusterOptions {
  LdaOptions lda;
  SilhouetteBetween between = SilhouetteBetween::kNearestGroup;
};

struct GroupMatrix {
  Matrix x;
  std::vector<int> labels;  // index into WordGroupSet::groups
  std::vector<std::string> words;
  std::vector<std::string> warnings;
};

/// Rows for every group word, in group-then-word order.
inline GroupMatrix group_matrix(const EmbeddingTable& table, const WordGroupSet& groups) {
  require_valid(table);
  std::unordered_map<std::string, std::size_t> first;
  std::set<std::string> repeated;
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    if (!first.emplace(table.rows[i].word, i).second) repeated.insert(table.rows[i].word);

  std::map<std::string, std::string> owner;
  std::vector<std::string> missing;
  GroupMatrix out;
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < groups.groups.size(); ++g) {
    for (const auto& w : groups.groups[g].words) {
      auto [it, fresh] = owner.emplace(w, groups.groups[g].name);
      if (!fresh)
        throw DataError("word in multiple groups: '" + w + "' in '" + it->second + "' and '" +
                        groups.groups[g].name + "'");
      auto hit = first.find(w);
      if (hit == first.end()) {
        missing.push_back(w);
        continue;
      }
      if (repeated.count(w))
        out.warnings.push_back("word '" + w + "' has several tokens; using the first");
      rows.push_back(hit->second);
      out.labels.push_back(static_cast<int>(g));
      out.words.push_back(w);
    }
  }
  if (!missing.empty()) {
    std::string msg = "words missing from table " + table.model_id + "/" +
                      std::to_string(table.layer) + ":";
    for (const auto& w : missing) msg += " " + w;
    throw DataError(msg);
  }
  out.x.resize(static_cast<Eigen::Index>(rows.size()), table.dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < table.dim; ++j)
      out.x(static_cast<Eigen::Index>(r), j) = table.rows[rows[r]].vector[static_cast<std::size_t>(j)];
  return out;
}

/// Fits the requested projection on (x, labels) and returns the projected
/// rows; kFull returns x unchanged.
inline Matrix fit_and_project(const Matrix& x, std::span<const int> labels, Subspace subspace,
                              int k, const ClusterOptions& options = {}) {
  switch (subspace) {
    case Subspace::kFull: return x;
    case Subspace::kPca: return project(x, pca_fit(x, k));
    case Subspace::kLda: return project(x, lda_fit(x, labels, k, options.lda));
  }
  throw UsageError("unknown subspace");
}

inline double subspace_silhouette(const Matrix& x, std::span<const int> labels, Subspace subspace,
                                  int k, const ClusterOptions& options = {}) {
  return silhouette_mean(fit_and_project(x, labels, subspace, k, options), labels,
                         options.between);
}

/// Single-fit silhouettes in the full space and the PCA-k and LDA-k subspaces.
inline std::vector<ClusterScore> score_subspaces(const EmbeddingTable& table,
                                                 const WordGroupSet& groups, int k,
                                                 const ClusterOptions& options = {}) {
  const GroupMatrix gm = group_matrix(table, groups);
  std::vector<ClusterScore> out;
  for (Subspace s : {Subspace::kFull, Subspace::kPca, Subspace::kLda}) {
    ClusterScore cs;
    cs.model_id = table.model_id;
    cs.layer = table.layer;
    cs.subspace = s;
    if (s != Subspace::kFull) cs.k = k;
    cs.score = IntervalEstimate::point(subspace_silhouette(gm.x, gm.labels, s, k, options));
    out.push_back(std::move(cs));
  }
  return out;
}

struct LooResult {
  IntervalEstimate score;
  std::vector<double> per_iteration;
  std::vector<std::string> dropped;
  /// Projection dimension actually used per iteration (0 for full space).
  std::vector<int> effective_k;
};

/// Leave-one-group-out silhouette.
///
/// Each iteration drops one group, refits the projection on the remaining
/// groups and scores them. LDA needs k <= classes - 1; with one class
/// dropped a requested k above that is lowered to the rank limit and the
/// value used is reported in `effective_k`.
inline LooResult loo_score(const EmbeddingTable& table, const WordGroupSet& groups,
                           Subspace subspace, int k, const ClusterOptions& options = {}) {
  if (groups.groups.size() < 3)
    throw DataError("leave-one-out needs at least 3 groups, got " +
                    std::to_string(groups.groups.size()));
  const GroupMatrix gm = group_matrix(table, groups);
  LooResult out;
  for (std::size_t g = 0; g < groups.groups.size(); ++g) {
    std::vector<Eigen::Index> keep;
    std::vector<int> labels;
    for (std::size_t r = 0; r < gm.labels.size(); ++r)
      if (gm.labels[r] != static_cast<int>(g)) {
        keep.push_back(static_cast<Eigen::Index>(r));
        labels.push_back(gm.labels[r]);
      }
    const Matrix x = gm.x(keep, Eigen::all);
    const int classes = static_cast<int>(groups.groups.size()) - 1;
    int used = 0;
    if (subspace == Subspace::kLda) used = std::min(k, classes - 1);
    if (subspace == Subspace::kPca) used = k;
    out.per_iteration.push_back(subspace_silhouette(x, labels, subspace, used, options));
    out.dropped.push_back(groups.groups[g].name);
    out.effective_k.push_back(used);
  }
  out.score = ci95(out.per_iteration);
  return out;
}

/// Leave-one-out score for every layer of one model, ascending by layer.
inline std::vector<ClusterScore> layer_sweep(const std::vector<EmbeddingTable>& tables,
                                             const WordGroupSet& groups, Subspace subspace, int k,
                                             const ClusterOptions& options = {}) {
  if (tables.empty()) throw DataError("layer_sweep: no tables");
  std::set<int> layers;
  for (const auto& t : tables) {
    if (t.model_id != tables.front().model_id)
      throw DataError("layer_sweep: tables come from different models");
    if (!layers.insert(t.layer).second)
      throw DataError("layer_sweep: layer " + std::to_string(t.layer) + " given twice");
  }
  std::vector<const EmbeddingTable*> ordered;
  for (const auto& t : tables) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const EmbeddingTable* a, const EmbeddingTable* b) { return a->layer < b->layer; });
  std::vector<ClusterScore> out;
  for (const EmbeddingTable* t : ordered) {
    LooResult loo = loo_score(*t, groups, subspace, k, options);
    ClusterScore cs;
    cs.model_id = t->model_id;
    cs.layer = t->layer;
    cs.subspace = subspace;
    if (subspace != Subspace::kFull) cs.k = k;
    cs.score = loo.score;
    cs.iterations = std::move(loo.per_iteration);
    out.push_back(std::move(cs));
  }
  return out;
}

/// Silhouettes of abstract-labeled and concrete-labeled groups, read out from
/// one projection fitted on all groups.
inline ConcretenessSplit concreteness_split(const EmbeddingTable& table,
                                            const WordGroupSet& groups, Subspace subspace, int k,
                                            const ClusterOptions& options = {}) {
  std::size_t n_abstract = 0, n_concrete = 0;
  for (const auto& g : groups.groups)
    (g.label == ConcretenessLabel::kAbstract ? n_abstract : n_concrete)++;
  if (n_abstract < 2 || n_concrete < 2)
    throw DataError("concreteness split needs at least 2 abstract and 2 concrete groups (have " +
                    std::to_string(n_abstract) + " and " + std::to_string(n_concrete) + ")");
  const GroupMatrix gm = group_matrix(table, groups);
  const Matrix projected = fit_and_project(gm.x, gm.labels, subspace, k, options);
  const std::vector<double> s = silhouette_samples(projected, gm.labels, options.between);
  double sum_a = 0, sum_c = 0;
  std::size_t cnt_a = 0, cnt_c = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (groups.groups[static_cast<std::size_t>(gm.labels[i])].label == ConcretenessLabel::kAbstract) {
      sum_a += s[i];
      ++cnt_a;
    } else {
      sum_c += s[i];
      ++cnt_c;
    }
  }
  return {sum_a / static_cast<double>(cnt_a), sum_c / static_cast<double>(cnt_c)};
}

/// Two readings of across-layer spread for a sweep: spread of the per-layer
/// LOO means, and spread of all LOO iterations pooled over layers.
struct SweepSummary {
  double mean_of_layer_means = 0.0;
  double sd_of_layer_means = 0.0;
  double pooled_mean = 0.0;
  double pooled_sd = 0.0;
};

inline SweepSummary summarize_sweep(const std::vector<ClusterScore>& sweep) {
  std::vector<double> means, pooled;
  for (const auto& cs : sweep) {
    means.push_back(cs.score.mean);
    pooled.insert(pooled.end(), cs.iterations.begin(), cs.iterations.end());
  }
  SweepSummary s;
  std::tie(s.mean_of_layer_means, s.sd_of_layer_means) = mean_std(means);
  std::tie(s.pooled_mean, s.pooled_sd) = mean_std(pooled);
  return s;
}

}  // namespace wordgeom
