// tests/test_grounding.cpp

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

// LDA-subspace CKA between models and the grounding correlation.

#include <random>

#include <gtest/gtest.h>

#include "synth.hpp"
#include "wordgeom/grounding.hpp"

namespace wordgeom {
namespace {

EmbeddingTable transformed(const EmbeddingTable& t, const Matrix& q, double scale) {
  const Matrix x = scale * t.matrix() * q;
  EmbeddingTable out = t;
  for (std::size_t i = 0; i < out.rows.size(); ++i)
    for (int j = 0; j < out.dim; ++j)
      out.rows[i].vector[static_cast<std::size_t>(j)] = x(static_cast<Eigen::Index>(i), j);
  return out;
}

TEST(LdaSubspaceCka, SelfComparisonIsOne) {
  const auto d = synth::gaussian_groups(1, 9, 13, 32, 2.0);
  EXPECT_NEAR(lda_subspace_cka(d.table, d.table, d.groups, 8), 1.0, 1e-12);
}

TEST(LdaSubspaceCka, OrthogonalAndScaleInvariant) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = synth::gaussian_groups(seed, 9, 13, 32, 2.0);
    const EmbeddingTable b = transformed(d.table, synth::random_orthogonal(rng, 32), 1.0);
    EXPECT_NEAR(lda_subspace_cka(d.table, b, d.groups, 8), 1.0, 1e-6);
    const EmbeddingTable c = transformed(d.table, synth::random_orthogonal(rng, 32), 7.5);
    EXPECT_NEAR(lda_subspace_cka(b, c, d.groups, 8), 1.0, 1e-6);
  }
}

TEST(LdaSubspaceCka, WideTablesStayInvariant) {
  std::mt19937_64 rng(5);
  const auto d = synth::gaussian_groups(2, 9, 13, 200, 5.0);
  const EmbeddingTable b = transformed(d.table, synth::random_orthogonal(rng, 200), 0.2);
  EXPECT_NEAR(lda_subspace_cka(d.table, b, d.groups, 8), 1.0, 1e-6);
}

TEST(LdaSubspaceCka, Symmetric) {
  const auto a = synth::gaussian_groups(1, 9, 13, 32, 2.0);
  const auto b = synth::gaussian_groups(2, 9, 13, 24, 1.0);
  EXPECT_NEAR(lda_subspace_cka(a.table, b.table, a.groups, 8),
              lda_subspace_cka(b.table, a.table, a.groups, 8), 1e-9);
}

double null_cka(int dim) {
  // Pure noise in both tables; the shared labels are the only link.
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = synth::gaussian_groups(100 + seed, 9, 13, dim, 0.0);
    const auto b = synth::gaussian_groups(200 + seed, 9, 13, dim, 0.0);
    sum += lda_subspace_cka(a.table, b.table, a.groups, 8);
  }
  return sum / 10;
}

TEST(LdaSubspaceCka, IndependentTablesScoreLow) {
  EXPECT_LT(null_cka(16), 0.3);
}

TEST(LdaSubspaceCka, NullBiasGrowsWithDimension) {
  // In-sample LDA on 117 noise points separates the labels better as the
  // dimension grows, so both projections share label structure. Observed
  // mean over these seeds: 0.305 at 64 dimensions.
  const double wide = null_cka(64);
  EXPECT_NEAR(wide, 0.305, 0.01);
  EXPECT_GT(wide, null_cka(16));
}

TEST(LdaSubspaceCka, CoverageMismatch) {
  const auto a = synth::gaussian_groups(1, 3, 5, 8, 2.0);
  auto b = a;
  b.table.rows.pop_back();
  EXPECT_THROW(lda_subspace_cka(a.table, b.table, a.groups, 2), DataError);
}

std::vector<ClusterScore> scores(const std::vector<double>& means, int first_layer = 0) {
  std::vector<ClusterScore> out;
  for (std::size_t i = 0; i < means.size(); ++i) {
    ClusterScore c;
    c.layer = first_layer + static_cast<int>(i);
    c.subspace = Subspace::kLda;
    c.k = 8;
    c.score.mean = means[i];
    out.push_back(c);
  }
  return out;
}

std::vector<LayerCka> ckas(const std::vector<double>& values) {
  std::vector<LayerCka> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({static_cast<int>(i), values[i]});
  return out;
}

TEST(GroundingCorrelation, AffineRelations) {
  const std::vector<double> cka = {0.3, 0.5, 0.45, 0.8, 0.62, 0.71};
  const std::vector<double> base = {0.2, 0.1, 0.3, 0.25, 0.4, 0.15};
  std::vector<double> up(base.size()), down(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    up[i] = base[i] + 0.5 * cka[i] - 0.1;
    down[i] = base[i] - 2.0 * cka[i];
  }
  const auto pos = grounding_correlation(scores(base), scores(up), ckas(cka));
  EXPECT_NEAR(pos.correlation.r, 1.0, 1e-9);
  const auto neg = grounding_correlation(scores(base), scores(down), ckas(cka));
  EXPECT_NEAR(neg.correlation.r, -1.0, 1e-9);
  ASSERT_EQ(pos.per_layer.size(), 6u);
  EXPECT_NEAR(pos.per_layer[3].delta_silhouette, 0.5 * 0.8 - 0.1, 1e-12);
  EXPECT_EQ(pos.per_layer[3].lda_cka, 0.8);
}

TEST(GroundingCorrelation, ReorderInvariant) {
  const std::vector<double> cka = {0.3, 0.5, 0.45, 0.8};
  auto u = scores({0.2, 0.1, 0.3, 0.25});
  auto g = scores({0.1, 0.4, 0.2, 0.6});
  auto c = ckas(cka);
  const auto a = grounding_correlation(u, g, c);
  std::reverse(u.begin(), u.end());
  std::rotate(g.begin(), g.begin() + 1, g.end());
  std::swap(c[0], c[2]);
  const auto b = grounding_correlation(u, g, c);
  EXPECT_EQ(a.correlation.r, b.correlation.r);
  EXPECT_EQ(b.per_layer.front().layer, 0);
}

TEST(GroundingCorrelation, Errors) {
  const auto c = ckas({0.1, 0.2, 0.3});
  EXPECT_THROW(grounding_correlation(scores({1, 2, 3}), scores({1, 2, 3}, 1), c), DataError);
  EXPECT_THROW(grounding_correlation(scores({1, 2}), scores({1, 2}), ckas({0.1, 0.2})), DataError);
  auto dup = scores({1, 2, 3});
  dup[2].layer = 1;
  EXPECT_THROW(grounding_correlation(dup, scores({1, 2, 3}), c), DataError);
}

}  // namespace
}  // namespace wordgeom
