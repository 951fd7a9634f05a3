// include/wordgeom/core.hpp

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

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wordgeom/errors.hpp"

namespace wordgeom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A pronunciation is a sequence of stress-free phoneme symbols.
using Pronunciation = std::vector<std::string>;

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// One word token: a single recording (or text occurrence) of a word.
struct TokenRow {
  std::string token_id;
  std::string word;
  std::optional<std::string> speaker_id;
  std::vector<double> vector;

  bool operator==(const TokenRow&) const = default;
};

/// Word-token embeddings of one model layer.
///
/// Plain value type. Use validate_table() to check the invariants (uniform
/// dim, finite non-zero vectors, unique token ids); analysis entry points call
/// require_valid() and refuse tables that fail.
struct EmbeddingTable {
  std::string model_id;
  int layer = 0;
  int dim = 0;
  std::vector<TokenRow> rows;

  bool operator==(const EmbeddingTable&) const = default;

  std::size_t size() const { return rows.size(); }

  /// Row-major copy of all vectors as an n x dim matrix.
  Matrix matrix() const {
    Matrix m(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < dim; ++j)
        m(static_cast<Eigen::Index>(i), j) = rows[i].vector[static_cast<std::size_t>(j)];
    return m;
  }
};

struct PhonemicLexicon {
  std::map<std::string, std::vector<Pronunciation>> entries;

  bool contains(const std::string& word) const { return entries.count(word) != 0; }

  const std::vector<Pronunciation>& pronunciations(const std::string& word) const {
    auto it = entries.find(word);
    if (it == entries.end()) throw DataError("word not in lexicon: " + word);
    return it->second;
  }
};

struct ConcretenessTable {
  std::map<std::string, double> ratings;

  bool contains(const std::string& word) const { return ratings.count(word) != 0; }

  double at(const std::string& word) const {
    auto it = ratings.find(word);
    if (it == ratings.end()) throw DataError("word has no concreteness rating: " + word);
    return it->second;
  }
};

/// Static (context-free) word vectors, e.g. a GloVe export.
struct StaticEmbeddingTable {
  int dim = 0;
  std::map<std::string, std::vector<double>> vectors;

  bool contains(const std::string& word) const { return vectors.count(word) != 0; }

  const std::vector<double>& at(const std::string& word) const {
    auto it = vectors.find(word);
    if (it == vectors.end()) throw DataError("word not in static embeddings: " + word);
    return it->second;
  }
};

struct SynonymSets {
  std::vector<std::vector<std::string>> sets;
};

enum class GroupKind { kPhonetic, kSemantic };
enum class ConcretenessLabel { kConcrete, kAbstract };

inline const char* to_string(GroupKind k) {
  return k == GroupKind::kPhonetic ? "phonetic" : "semantic";
}
inline const char* to_string(ConcretenessLabel l) {
  return l == ConcretenessLabel::kConcrete ? "concrete" : "abstract";
}

struct WordGroup {
  std::string name;
  std::vector<std::string> words;
  ConcretenessLabel label = ConcretenessLabel::kConcrete;

  bool operator==(const WordGroup&) const = default;
};

struct WordGroupSet {
  GroupKind kind = GroupKind::kSemantic;
  std::vector<WordGroup> groups;

  bool operator==(const WordGroupSet&) const = default;

  /// Minimum group size the set must satisfy for its kind.
  std::size_t min_group_size() const { return kind == GroupKind::kPhonetic ? 5 : 8; }
};

/// Throws DataError on empty/duplicate-word groups or groups below the
/// kind's minimum size. `min_size` overrides the kind default when given.
inline void check_group_set(const WordGroupSet& set,
                            std::optional<std::size_t> min_size = std::nullopt) {
  if (set.groups.empty()) throw DataError("word group set has no groups");
  const std::size_t need = min_size.value_or(set.min_group_size());
  for (const auto& g : set.groups) {
    if (g.words.empty()) throw DataError("group '" + g.name + "' is empty");
    std::set<std::string> seen;
    for (const auto& w : g.words)
      if (!seen.insert(w).second)
        throw DataError("group '" + g.name + "' contains '" + w + "' twice");
    if (g.words.size() < need)
      throw DataError("group '" + g.name + "' has " + std::to_string(g.words.size()) +
                      " words, need at least " + std::to_string(need));
  }
}

enum class PairClass { kSameWord, kSameSpeaker, kNearHomophone, kSynonym, kRandom };

inline constexpr PairClass kAllPairClasses[] = {PairClass::kSameWord, PairClass::kSameSpeaker,
                                                PairClass::kNearHomophone, PairClass::kSynonym,
                                                PairClass::kRandom};

inline const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::kSameWord: return "same_word";
    case PairClass::kSameSpeaker: return "same_speaker";
    case PairClass::kNearHomophone: return "near_homophone";
    case PairClass::kSynonym: return "synonym";
    case PairClass::kRandom: return "random";
  }
  return "?";
}

struct TokenPair {
  std::string token_a;
  std::string token_b;
  PairClass cls = PairClass::kRandom;

  bool operator==(const TokenPair&) const = default;
};

struct PairSet {
  std::vector<TokenPair> pairs;
};

// ---------------------------------------------------------------------------
// Table validation and row matching.

struct Violation {
  std::size_t row;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Reports every invariant violation of `table`; never throws.
inline ValidationResult validate_table(const EmbeddingTable& table) {
  ValidationResult result;
  auto flag = [&](std::size_t row, std::string msg) {
    result.violations.push_back({row, std::move(msg)});
  };
  if (table.dim < 1) flag(0, "dim must be >= 1");
  if (table.layer < 0) flag(0, "layer must be >= 0");
  if (table.rows.empty()) flag(0, "table has no rows");
  std::unordered_map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const TokenRow& r = table.rows[i];
    if (r.token_id.empty()) flag(i, "empty token_id at row " + std::to_string(i));
    if (!ids.emplace(r.token_id, i).second)
      flag(i, "duplicate token_id \"" + r.token_id + "\" at row " + std::to_string(i));
    if (r.word.empty()) flag(i, "empty word at row " + std::to_string(i));
    if (r.vector.size() != static_cast<std::size_t>(std::max(table.dim, 0))) {
      flag(i, "vector of length " + std::to_string(r.vector.size()) + " at row " +
                  std::to_string(i) + ", expected " + std::to_string(table.dim));
      continue;
    }
    bool finite = true;
    double norm2 = 0.0;
    for (double v : r.vector) {
      if (!std::isfinite(v)) finite = false;
      norm2 += v * v;
    }
    if (!finite)
      flag(i, "non-finite vector at row " + std::to_string(i));
    else if (norm2 == 0.0)
      flag(i, "zero-norm vector at row " + std::to_string(i));
  }
  return result;
}

inline void require_valid(const EmbeddingTable& table) {
  ValidationResult v = validate_table(table);
  if (v.ok()) return;
  std::string msg = "invalid embedding table " + table.model_id + "/" +
                    std::to_string(table.layer) + ": " + v.violations.front().message;
  if (v.violations.size() > 1)
    msg += " (+" + std::to_string(v.violations.size() - 1) + " more)";
  throw DataError(msg);
}

enum class MatchMode { kTokenId, kWord };

/// Row-index pairs (index into a, index into b).
using RowPairing = std::vector<std::pair<std::size_t, std::size_t>>;

/// Aligns the rows of two tables.
///
/// kTokenId pairs rows with equal token_id. kWord pairs the k-th occurrence
/// of a word in `a` with the k-th occurrence in `b`, which is one-to-one,
/// maximal and symmetric. Output follows row order of `a`.
inline RowPairing match_words(const EmbeddingTable& a, const EmbeddingTable& b,
                              MatchMode mode = MatchMode::kTokenId) {
  RowPairing out;
  if (mode == MatchMode::kTokenId) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < b.rows.size(); ++j) index.emplace(b.rows[j].token_id, j);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      auto it = index.find(a.rows[i].token_id);
      if (it != index.end()) out.emplace_back(i, it->second);
    }
  } else {
    std::unordered_map<std::string, std::vector<std::size_t>> occurrences;
    for (std::size_t j = 0; j < b.rows.size(); ++j) occurrences[b.rows[j].word].push_back(j);
    std::unordered_map<std::string, std::size_t> used;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      auto it = occurrences.find(a.rows[i].word);
      if (it == occurrences.end()) continue;
      std::size_t& k = used[a.rows[i].word];
      if (k < it->second.size()) out.emplace_back(i, it->second[k++]);
    }
  }
  if (out.empty()) throw DataError("no common tokens");
  return out;
}

/// Stacks the paired rows of both tables into two row-aligned matrices.
inline std::pair<Matrix, Matrix> aligned_matrices(const EmbeddingTable& a, const EmbeddingTable& b,
                                                  const RowPairing& pairing) {
  Matrix x(static_cast<Eigen::Index>(pairing.size()), a.dim);
  Matrix y(static_cast<Eigen::Index>(pairing.size()), b.dim);
  for (std::size_t r = 0; r < pairing.size(); ++r) {
    const auto& va = a.rows[pairing[r].first].vector;
    const auto& vb = b.rows[pairing[r].second].vector;
    const auto row = static_cast<Eigen::Index>(r);
    for (int j = 0; j < a.dim; ++j) x(row, j) = va[static_cast<std::size_t>(j)];
    for (int j = 0; j < b.dim; ++j) y(row, j) = vb[static_cast<std::size_t>(j)];
  }
  return {std::move(x), std::move(y)};
}

}  // namespace wordgeom
