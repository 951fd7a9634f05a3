// tests/synth.hpp

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

// Synthetic fixtures shared by the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "wordgeom/core.hpp"

namespace synth {

using wordgeom::Matrix;
using wordgeom::Vector;

inline Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                       double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, d, d));
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline std::string word_name(int g, int w) {
  return "g" + std::to_string(g) + "w" + std::to_string(w);
}

/// Groups of words whose vectors are a per-group mean plus unit noise.
struct GroupedData {
  wordgeom::EmbeddingTable table;
  wordgeom::WordGroupSet groups;
};

inline GroupedData gaussian_groups(std::uint64_t seed, int n_groups, int per_group, int dim,
                                   double separation, int layer = 0,
                                   std::vector<double> group_scale = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  GroupedData out;
  out.table.model_id = "synthetic";
  out.table.layer = layer;
  out.table.dim = dim;
  out.groups.kind = wordgeom::GroupKind::kSemantic;
  for (int g = 0; g < n_groups; ++g) {
    std::vector<double> mean(static_cast<std::size_t>(dim), 0.0);
    const double scale = group_scale.empty() ? 1.0 : group_scale[static_cast<std::size_t>(g)];
    mean[static_cast<std::size_t>(g % dim)] = separation * scale;
    wordgeom::WordGroup group;
    group.name = "group" + std::to_string(g);
    group.label = g % 2 == 0 ? wordgeom::ConcretenessLabel::kConcrete
                             : wordgeom::ConcretenessLabel::kAbstract;
    for (int w = 0; w < per_group; ++w) {
      wordgeom::TokenRow row;
      row.word = word_name(g, w);
      row.token_id = "t_" + row.word;
      row.vector.resize(static_cast<std::size_t>(dim));
      for (int j = 0; j < dim; ++j)
        row.vector[static_cast<std::size_t>(j)] = mean[static_cast<std::size_t>(j)] + nd(rng);
      group.words.push_back(row.word);
      out.table.rows.push_back(std::move(row));
    }
    out.groups.groups.push_back(std::move(group));
  }
  return out;
}

inline wordgeom::EmbeddingTable table_from_matrix(const Matrix& m, const std::string& model,
                                                  int layer,
                                                  const std::vector<std::string>& words) {
  wordgeom::EmbeddingTable t;
  t.model_id = model;
  t.layer = layer;
  t.dim = static_cast<int>(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    wordgeom::TokenRow r;
    r.word = words[static_cast<std::size_t>(i)];
    r.token_id = "t_" + r.word;
    r.vector.resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.vector[static_cast<std::size_t>(j)] = m(i, j);
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// Token table plus lexicon and synonym sets for pair-profile experiments.
///
/// Words are random phoneme strings; every third word gets a partner that
/// differs by one phoneme (a near-homophone). A word's base vector is the
/// mean of position-independent phoneme embeddings plus a word-specific
/// random part, so phonetically close words have correlated bases. Each
/// token is its word's unit base plus `eps` times isotropic noise of unit
/// expected norm.
struct PairWorld {
  wordgeom::EmbeddingTable table;
  wordgeom::PhonemicLexicon lexicon;
  wordgeom::SynonymSets synonyms;
};

inline PairWorld pair_world(std::uint64_t seed, double eps, int n_base_words = 60,
                            int tokens_per_word = 4, int n_speakers = 6, int dim = 64) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::vector<std::string> alphabet = {"AA", "AE", "B", "D",  "EH", "F",  "G",  "IY",
                                             "K",  "L",  "M", "N",  "OW", "P",  "R",  "S",
                                             "T",  "UW", "V", "Z",  "SH", "CH", "TH", "NG"};
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(5, 7);

  std::vector<Vector> phone_vec;
  for (std::size_t i = 0; i < alphabet.size(); ++i) phone_vec.push_back(synth::gaussian(rng, dim, 1));

  PairWorld world;
  std::vector<std::pair<std::string, wordgeom::Pronunciation>> words;
  for (int w = 0; w < n_base_words; ++w) {
    wordgeom::Pronunciation p;
    const int l = len(rng);
    for (int i = 0; i < l; ++i) p.push_back(alphabet[pick(rng)]);
    words.emplace_back("w" + std::to_string(w), p);
    if (w % 3 == 0) {
      wordgeom::Pronunciation q = p;
      q[static_cast<std::size_t>(l / 2)] = q[static_cast<std::size_t>(l / 2)] == "AA" ? "IY" : "AA";
      words.emplace_back("w" + std::to_string(w) + "h", q);
    }
  }
  std::map<std::string, Vector> base;
  for (const auto& [word, pron] : words) {
    world.lexicon.entries[word].push_back(pron);
    Vector phon = Vector::Zero(dim);
    for (const auto& ph : pron) {
      const auto idx = static_cast<std::size_t>(
          std::find(alphabet.begin(), alphabet.end(), ph) - alphabet.begin());
      phon += phone_vec[idx];
    }
    phon /= phon.norm();
    Vector own = synth::gaussian(rng, dim, 1);
    own /= own.norm();
    Vector b = 0.6 * phon + 0.8 * own;
    base[word] = b / b.norm();
  }
  // Synonym sets pair unrelated words: no shared vector component.
  for (std::size_t i = 0; i + 1 < words.size(); i += 5)
    world.synonyms.sets.push_back({words[i].first, words[(i + 7) % words.size()].first});

  world.table.model_id = "pairworld";
  world.table.dim = dim;
  int tok = 0;
  const double noise_sd = eps / std::sqrt(static_cast<double>(dim));
  std::normal_distribution<double> noise(0.0, noise_sd);
  for (const auto& [word, pron] : words) {
    for (int t = 0; t < tokens_per_word; ++t) {
      wordgeom::TokenRow r;
      r.token_id = "tok" + std::to_string(tok++);
      r.word = word;
      r.speaker_id = "spk" + std::to_string((tok * 7) % n_speakers);
      r.vector.resize(static_cast<std::size_t>(dim));
      for (int j = 0; j < dim; ++j)
        r.vector[static_cast<std::size_t>(j)] = base[word](j) + noise(rng);
      world.table.rows.push_back(std::move(r));
    }
  }
  return world;
}

}  // namespace synth
