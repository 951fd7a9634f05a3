// include/wordgeom/grounding.hpp

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

// Comparison of a grounded model against its ungrounded counterpart.

#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "wordgeom/cluster.hpp"
#include "wordgeom/metrics.hpp"
#include "wordgeom/subspace.hpp"

namespace wordgeom {

/// CKA between the LDA-k projections of two models' group words. Each table
/// gets its own LDA fit; CKA compares the projected data, which is defined
/// even though the two bases live in different spaces.
inline double lda_subspace_cka(const EmbeddingTable& table_a, const EmbeddingTable& table_b,
                               const WordGroupSet& groups, int k,
                               const LdaOptions& options = {}) {
  const GroupMatrix a = group_matrix(table_a, groups);
  const GroupMatrix b = group_matrix(table_b, groups);
  if (a.words != b.words) throw DataError("lda_subspace_cka: word coverage differs between tables");
  const Matrix pa = project(a.x, lda_fit(a.x, a.labels, k, options));
  const Matrix pb = project(b.x, lda_fit(b.x, b.labels, k, options));
  return linear_cka(pa, pb);
}

struct LayerCka {
  int layer = 0;
  double value = 0.0;
};

struct GroundingLayer {
  int layer = 0;
  double lda_cka = 0.0;
  double delta_silhouette = 0.0;
};

struct GroundingComparison {
  std::vector<GroundingLayer> per_layer;
  CorrelationResult correlation;
};

/// Pearson correlation between per-layer silhouette change (grounded minus
/// ungrounded LOO mean) and the layer's LDA-subspace CKA.
inline GroundingComparison grounding_correlation(const std::vector<ClusterScore>& ungrounded,
                                                 const std::vector<ClusterScore>& grounded,
                                                 const std::vector<LayerCka>& ckas) {
  auto by_layer = [](const auto& items, auto value, const char* what) {
    std::map<int, double> m;
    for (const auto& it : items)
      if (!m.emplace(it.layer, value(it)).second)
        throw DataError(std::string("grounding_correlation: duplicate layer in ") + what);
    return m;
  };
  const auto u = by_layer(ungrounded, [](const ClusterScore& c) { return c.score.mean; }, "ungrounded");
  const auto g = by_layer(grounded, [](const ClusterScore& c) { return c.score.mean; }, "grounded");
  const auto c = by_layer(ckas, [](const LayerCka& l) { return l.value; }, "cka");
  auto keys = [](const std::map<int, double>& m) {
    std::vector<int> k;
    for (const auto& [layer, v] : m) k.push_back(layer);
    return k;
  };
  if (keys(u) != keys(g) || keys(u) != keys(c))
    throw DataError("grounding_correlation: layer sets are misaligned");
  if (u.size() < 3) throw DataError("grounding_correlation: need at least 3 layers");

  GroundingComparison out;
  std::vector<double> deltas, values;
  for (const auto& [layer, ungrounded_mean] : u) {
    GroundingLayer gl{layer, c.at(layer), g.at(layer) - ungrounded_mean};
    deltas.push_back(gl.delta_silhouette);
    values.push_back(gl.lda_cka);
    out.per_layer.push_back(gl);
  }
  out.correlation = pearson(deltas, values);
  return out;
}

}  // namespace wordgeom
