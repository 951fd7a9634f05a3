// include/wordgeom/pairs.hpp

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

// Word-pair classes and the baseline-normalized cosine similarity profile.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordgeom/core.hpp"
#include "wordgeom/metrics.hpp"
#include "wordgeom/random.hpp"

namespace wordgeom {

struct PoolOptions {
  double homophone_threshold = 0.4;
  /// Number of uniformly drawn distinct-token pairs in the Random pool.
  std::size_t random_pool_size = 50000;
  /// Per-class cap; larger candidate pools are reservoir-subsampled.
  std::size_t max_pool_size = 2000000;
  bool same_speaker = true;
  std::uint64_t seed = 0;
};

/// Candidate pairs per class. Pools may overlap, except that SameWord pairs
/// never appear in another pool (all other classes need distinct words).
struct PairPool {
  PairSet pairs;
  std::vector<std::string> warnings;

  std::vector<TokenPair> of_class(PairClass c) const {
    std::vector<TokenPair> out;
    for (const auto& p : pairs.pairs)
      if (p.cls == c) out.push_back(p);
    return out;
  }
};

/// Highest-priority class a word pair qualifies for, ignoring speakers:
/// SameWord > Synonym > NearHomophone; nullopt when none applies.
inline std::optional<PairClass> word_pair_class(const std::string& w1, const std::string& w2,
                                                const PhonemicLexicon& lexicon,
                                                const SynonymSets& synonyms, double threshold) {
  if (w1 == w2) return PairClass::kSameWord;
  for (const auto& set : synonyms.sets)
    if (std::find(set.begin(), set.end(), w1) != set.end() &&
        std::find(set.begin(), set.end(), w2) != set.end())
      return PairClass::kSynonym;
  if (lexicon.contains(w1) && lexicon.contains(w2) && word_distance(w1, w2, lexicon) <= threshold)
    return PairClass::kNearHomophone;
  return std::nullopt;
}

namespace detail {

// Reservoir of token pairs with a fixed capacity.
class PairReservoir {
 public:
  PairReservoir(PairClass cls, std::size_t cap, Rng& rng) : cls_(cls), cap_(cap), rng_(rng) {}

  void offer(const std::string& a, const std::string& b) {
    ++seen_;
    if (kept_.size() < cap_) {
      kept_.push_back({a, b, cls_});
      return;
    }
    const std::size_t j = rng_.index(seen_);
    if (j < cap_) kept_[j] = {a, b, cls_};
  }

  PairClass cls() const { return cls_; }
  std::size_t seen() const { return seen_; }
  std::vector<TokenPair>& kept() { return kept_; }

 private:
  PairClass cls_;
  std::size_t cap_;
  Rng& rng_;
  std::size_t seen_ = 0;
  std::vector<TokenPair> kept_;
};

}  // namespace detail

/// Pronunciations of a fixed word list with phonemes mapped to small integers,
/// for all-pairs distance scans.
class InternedLexicon {
 public:
  InternedLexicon(const PhonemicLexicon& lexicon, const std::vector<std::string>& words) {
    std::map<std::string, std::uint16_t> ids;
    prons_.reserve(words.size());
    for (const auto& w : words) {
      std::vector<std::vector<std::uint16_t>> list;
      for (const auto& pron : lexicon.pronunciations(w)) {
        std::vector<std::uint16_t> seq;
        for (const auto& ph : pron)
          seq.push_back(ids.emplace(ph, static_cast<std::uint16_t>(ids.size())).first->second);
        list.push_back(std::move(seq));
      }
      prons_.push_back(std::move(list));
    }
  }

  /// Same value as word_distance() for words i and j.
  double distance(std::size_t i, std::size_t j) const {
    double best = 1.0;
    for (const auto& a : prons_[i])
      for (const auto& b : prons_[j])
        best = std::min(best, normalized_levenshtein(std::span<const std::uint16_t>(a),
                                                     std::span<const std::uint16_t>(b)));
    return best;
  }

  /// distance(i, j) <= threshold, skipping pairs whose length gap rules it out.
  bool within(std::size_t i, std::size_t j, double threshold) const {
    for (const auto& a : prons_[i])
      for (const auto& b : prons_[j]) {
        const double longer = static_cast<double>(std::max(a.size(), b.size()));
        const double gap = a.size() > b.size() ? static_cast<double>(a.size() - b.size())
                                               : static_cast<double>(b.size() - a.size());
        if (gap / longer > threshold) continue;
        if (normalized_levenshtein(std::span<const std::uint16_t>(a),
                                   std::span<const std::uint16_t>(b)) <= threshold)
          return true;
      }
    return false;
  }

  std::size_t size() const { return prons_.size(); }

 private:
  std::vector<std::vector<std::vector<std::uint16_t>>> prons_;
};

/// Enumerates candidate token pairs for every pair class.
inline PairPool build_pair_pool(const EmbeddingTable& table, const PhonemicLexicon& lexicon,
                                const SynonymSets& synonyms, const PoolOptions& options = {}) {
  require_valid(table);
  if (!(options.homophone_threshold > 0.0 && options.homophone_threshold <= 1.0))
    throw UsageError("homophone threshold must lie in (0, 1]");
  if (options.same_speaker)
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      if (!table.rows[i].speaker_id)
        throw DataError("same-speaker pairs requested but row " + std::to_string(i) +
                        " has no speaker_id");

  PairPool pool;
  Rng rng(options.seed);

  // Words in first-occurrence order, each with its token indices.
  std::vector<std::string> words;
  std::unordered_map<std::string, std::vector<std::size_t>> tokens_of;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& list = tokens_of[table.rows[i].word];
    if (list.empty()) words.push_back(table.rows[i].word);
    list.push_back(i);
  }
  const auto& rows = table.rows;

  auto expand = [&](detail::PairReservoir& res, const std::string& w1, const std::string& w2) {
    for (std::size_t i : tokens_of[w1])
      for (std::size_t j : tokens_of[w2]) res.offer(rows[i].token_id, rows[j].token_id);
  };

  detail::PairReservoir same_word(PairClass::kSameWord, options.max_pool_size, rng);
  for (const auto& w : words) {
    const auto& toks = tokens_of[w];
    for (std::size_t a = 0; a < toks.size(); ++a)
      for (std::size_t b = a + 1; b < toks.size(); ++b)
        same_word.offer(rows[toks[a]].token_id, rows[toks[b]].token_id);
  }

  detail::PairReservoir synonym(PairClass::kSynonym, options.max_pool_size, rng);
  {
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& set : synonyms.sets)
      for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b) {
          std::string w1 = set[a], w2 = set[b];
          if (w1 == w2 || !tokens_of.count(w1) || !tokens_of.count(w2)) continue;
          if (w2 < w1) std::swap(w1, w2);
          if (done.emplace(w1, w2).second) expand(synonym, w1, w2);
        }
  }

  detail::PairReservoir homophone(PairClass::kNearHomophone, options.max_pool_size, rng);
  {
    std::vector<std::string> covered;
    for (const auto& w : words)
      if (lexicon.contains(w)) covered.push_back(w);
    if (covered.size() < words.size())
      pool.warnings.push_back(std::to_string(words.size() - covered.size()) +
                              " words missing from the lexicon; excluded from near-homophones");
    const InternedLexicon interned(lexicon, covered);
    for (std::size_t a = 0; a < covered.size(); ++a)
      for (std::size_t b = a + 1; b < covered.size(); ++b)
        if (interned.within(a, b, options.homophone_threshold))
          expand(homophone, covered[a], covered[b]);
  }

  detail::PairReservoir same_speaker(PairClass::kSameSpeaker, options.max_pool_size, rng);
  if (options.same_speaker) {
    std::map<std::string, std::vector<std::size_t>> by_speaker;
    for (std::size_t i = 0; i < rows.size(); ++i) by_speaker[*rows[i].speaker_id].push_back(i);
    for (const auto& [speaker, toks] : by_speaker)
      for (std::size_t a = 0; a < toks.size(); ++a)
        for (std::size_t b = a + 1; b < toks.size(); ++b)
          if (rows[toks[a]].word != rows[toks[b]].word)
            same_speaker.offer(rows[toks[a]].token_id, rows[toks[b]].token_id);
  }

  std::vector<TokenPair> random;
  if (rows.size() >= 2)
    for (std::size_t r = 0; r < options.random_pool_size; ++r) {
      auto [i, j] = rng.distinct_pair(rows.size());
      random.push_back({rows[i].token_id, rows[j].token_id, PairClass::kRandom});
    }

  for (detail::PairReservoir* res : {&same_word, &same_speaker, &homophone, &synonym}) {
    if (res == &same_speaker && !options.same_speaker) continue;
    if (res->seen() == 0) {
      pool.warnings.push_back(std::string("empty pool for class ") + to_string(res->cls()));
      continue;
    }
    if (res->seen() > res->kept().size())
      pool.warnings.push_back(std::string(to_string(res->cls())) + " pool subsampled from " +
                              std::to_string(res->seen()) + " to " +
                              std::to_string(res->kept().size()) + " pairs");
    for (auto& p : res->kept()) pool.pairs.pairs.push_back(std::move(p));
  }
  for (auto& p : random) pool.pairs.pairs.push_back(std::move(p));
  return pool;
}

struct SampleOptions {
  std::size_t n_per_class = 10000;
  int repeats = 5;
  std::uint64_t seed = 0;
};

struct PairProfile {
  std::string model_id;
  int layer = 0;
  /// Baseline-normalized mean cosine per class (Random excluded).
  std::map<PairClass, IntervalEstimate> per_class;
  /// Raw mean cosine of Random pairs.
  IntervalEstimate random_baseline;
  /// Classes sampled with replacement because their pool was too small.
  std::vector<PairClass> with_replacement;
  /// Classes without any candidate pair.
  std::vector<PairClass> skipped;
  /// Per-repeat normalized means, per class (Random included, always 0).
  std::map<PairClass, std::vector<double>> repeat_values;
};

namespace detail {

struct ResolvedPool {
  std::map<PairClass, std::vector<std::pair<std::size_t, std::size_t>>> by_class;
};

inline ResolvedPool resolve_pool(const EmbeddingTable& table, const PairSet& pool) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.rows.size(); ++i) index.emplace(table.rows[i].token_id, i);
  ResolvedPool out;
  for (const auto& p : pool.pairs) {
    auto ia = index.find(p.token_a), ib = index.find(p.token_b);
    if (ia == index.end() || ib == index.end())
      throw DataError("pair references unknown token_id \"" +
                      (ia == index.end() ? p.token_a : p.token_b) + "\"");
    if (ia->second == ib->second) throw DataError("pair joins token \"" + p.token_a + "\" to itself");
    out.by_class[p.cls].emplace_back(ia->second, ib->second);
  }
  return out;
}

}  // namespace detail

/// Samples pairs per class in `repeats` independent draws and reports
/// per-class mean cosine minus the same draw's Random mean.
inline PairProfile sample_profile(const EmbeddingTable& table, const PairSet& pool,
                                  const SampleOptions& options = {}) {
  require_valid(table);
  if (options.repeats < 2) throw UsageError("sample_profile: need at least 2 repeats");
  if (options.n_per_class < 1) throw UsageError("sample_profile: n_per_class must be >= 1");
  const detail::ResolvedPool resolved = detail::resolve_pool(table, pool);
  auto random_it = resolved.by_class.find(PairClass::kRandom);
  if (random_it == resolved.by_class.end() || random_it->second.empty())
    throw DataError("sample_profile: pool has no random pairs");

  const Matrix unit = normalize_rows(table.matrix());
  auto cos = [&](std::size_t i, std::size_t j) {
    return std::clamp(unit.row(static_cast<Eigen::Index>(i)).dot(unit.row(static_cast<Eigen::Index>(j))),
                      -1.0, 1.0);
  };

  PairProfile profile;
  profile.model_id = table.model_id;
  profile.layer = table.layer;

  std::vector<PairClass> classes;
  for (PairClass c : kAllPairClasses) {
    auto it = resolved.by_class.find(c);
    if (it == resolved.by_class.end() || it->second.empty()) {
      profile.skipped.push_back(c);
      continue;
    }
    classes.push_back(c);
    if (it->second.size() < options.n_per_class) profile.with_replacement.push_back(c);
  }

  std::map<PairClass, std::vector<double>> raw;
  for (int r = 0; r < options.repeats; ++r) {
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      const PairClass c = classes[ci];
      const auto& pairs = resolved.by_class.at(c);
      Rng rng = Rng::substream(options.seed,
                               static_cast<std::uint64_t>(r) * 16 + static_cast<std::uint64_t>(c));
      const auto picks = pairs.size() < options.n_per_class
                             ? rng.sample_with_replacement(pairs.size(), options.n_per_class)
                             : rng.sample_without_replacement(pairs.size(), options.n_per_class);
      double sum = 0.0;
      for (std::size_t k : picks) sum += cos(pairs[k].first, pairs[k].second);
      raw[c].push_back(sum / static_cast<double>(picks.size()));
    }
  }

  const auto& baseline = raw.at(PairClass::kRandom);
  profile.random_baseline = ci95(baseline);
  for (PairClass c : classes) {
    std::vector<double> normalized(raw[c].size());
    for (std::size_t r = 0; r < normalized.size(); ++r) normalized[r] = raw[c][r] - baseline[r];
    if (c != PairClass::kRandom) profile.per_class[c] = ci95(normalized);
    profile.repeat_values[c] = std::move(normalized);
  }
  return profile;
}

/// One profile per layer from a single pool; draws are identical across layers.
inline std::vector<PairProfile> profile_across_layers(const std::vector<EmbeddingTable>& tables,
                                                      const PairSet& pool,
                                                      const SampleOptions& options = {}) {
  if (tables.empty()) throw DataError("profile_across_layers: no tables");
  std::set<int> layers;
  for (const auto& t : tables) {
    if (t.model_id != tables.front().model_id)
      throw DataError("profile_across_layers: tables come from different models");
    if (!layers.insert(t.layer).second)
      throw DataError("profile_across_layers: layer " + std::to_string(t.layer) + " given twice");
  }
  const auto token_set = [](const EmbeddingTable& t) {
    std::set<std::string> ids;
    for (const auto& r : t.rows) ids.insert(r.token_id);
    return ids;
  };
  const auto reference = token_set(tables.front());
  for (const auto& t : tables)
    if (token_set(t) != reference)
      throw DataError("profile_across_layers: token_ids of layer " + std::to_string(t.layer) +
                      " differ from layer " + std::to_string(tables.front().layer));

  std::vector<const EmbeddingTable*> ordered;
  for (const auto& t : tables) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const EmbeddingTable* a, const EmbeddingTable* b) { return a->layer < b->layer; });
  std::vector<PairProfile> out;
  for (const EmbeddingTable* t : ordered) out.push_back(sample_profile(*t, pool, options));
  return out;
}

}  // namespace wordgeom
