// include/wordgeom/groups.hpp

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

// Construction of phonetic word groups and validation of word-group datasets.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "wordgeom/core.hpp"
#include "wordgeom/metrics.hpp"
#include "wordgeom/pairs.hpp"
#include "wordgeom/random.hpp"

namespace wordgeom {

struct BuilderParams {
  double phon_within_max = 0.529;  ///< seed-to-member distance, inclusive
  double phon_across_min = 0.529;  ///< distance to earlier groups, strict >
  double sem_cos_max = 0.1;        ///< pairwise static cosine, strict <
  double conc_top_pct = 0.25;
  double conc_bottom_pct = 0.25;
  int min_group_size = 5;
  int target_groups = 14;
  std::uint64_t seed = 0;

  void check() const {
    auto unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!unit(phon_within_max) || !unit(phon_across_min) || !unit(sem_cos_max))
      throw UsageError("builder thresholds must lie in (0, 1)");
    if (!(conc_top_pct > 0.0 && conc_top_pct <= 0.5) ||
        !(conc_bottom_pct > 0.0 && conc_bottom_pct <= 0.5))
      throw UsageError("concreteness percentiles must lie in (0, 0.5]");
    if (min_group_size < 2) throw UsageError("min_group_size must be >= 2");
    if (target_groups < 1) throw UsageError("target_groups must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Quantiles.

/// Value below which `fraction` of `values` lie, read from the small end as a
/// lower order statistic: sorted[ceil(fraction * n) - 1].
inline double lower_tail_quantile(std::vector<double> values, double fraction) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  if (!(fraction > 0.0 && fraction < 1.0) && fraction != 1.0)
    throw UsageError("quantile fraction must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto idx = static_cast<std::ptrdiff_t>(std::ceil(fraction * n - 1e-9)) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(values.size()) - 1);
  return values[static_cast<std::size_t>(idx)];
}

/// Mirror of lower_tail_quantile read from the large end.
inline double upper_tail_quantile(std::vector<double> values, double fraction) {
  for (double& v : values) v = -v;
  return -lower_tail_quantile(std::move(values), fraction);
}

namespace detail {

inline std::vector<std::string> normalized_vocab(const std::vector<std::string>& vocab) {
  std::set<std::string> s;
  for (const auto& w : vocab)
    if (!w.empty()) s.insert(to_lower(w));
  return {s.begin(), s.end()};
}

}  // namespace detail

/// Distance threshold marking the most similar `top_fraction` of random word
/// pairs, estimated from `n_samples` uniformly drawn distinct pairs.
inline double percentile_threshold(const PhonemicLexicon& lexicon,
                                   const std::vector<std::string>& vocabulary,
                                   double top_fraction, std::size_t n_samples,
                                   std::uint64_t seed) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0))
    throw UsageError("top_fraction must lie in (0, 1)");
  if (n_samples < 1) throw UsageError("n_samples must be >= 1");
  std::vector<std::string> covered;
  std::size_t missing = 0;
  for (const auto& w : detail::normalized_vocab(vocabulary)) {
    if (lexicon.contains(w))
      covered.push_back(w);
    else
      ++missing;
  }
  if (covered.size() < 2)
    throw DataError("insufficient lexicon coverage: " + std::to_string(covered.size()) +
                    " of " + std::to_string(covered.size() + missing) +
                    " vocabulary words have pronunciations");
  const InternedLexicon interned(lexicon, covered);
  Rng rng(seed);
  std::vector<double> d(n_samples);
  for (auto& v : d) {
    auto [i, j] = rng.distinct_pair(covered.size());
    v = interned.distance(i, j);
  }
  return lower_tail_quantile(std::move(d), top_fraction);
}

// ---------------------------------------------------------------------------
// Concreteness bands.

struct ConcretenessBands {
  double bottom_cut = 0.0;  ///< ratings <= bottom_cut are abstract
  double top_cut = 0.0;     ///< ratings >= top_cut are concrete

  std::optional<ConcretenessLabel> band(double rating) const {
    if (rating >= top_cut) return ConcretenessLabel::kConcrete;
    if (rating <= bottom_cut) return ConcretenessLabel::kAbstract;
    return std::nullopt;
  }
};

inline ConcretenessBands concreteness_bands(const ConcretenessTable& table,
                                            const std::vector<std::string>& words,
                                            double top_pct, double bottom_pct) {
  std::vector<double> r;
  for (const auto& w : words) r.push_back(table.at(w));
  if (r.empty()) throw DataError("no rated words to form concreteness bands");
  ConcretenessBands b;
  b.bottom_cut = lower_tail_quantile(r, bottom_pct);
  b.top_cut = upper_tail_quantile(r, top_pct);
  if (b.top_cut <= b.bottom_cut)
    throw DataError("concreteness bands overlap; ratings are too concentrated");
  return b;
}

/// Words covered by all three resources, lowercased, deduplicated, sorted.
inline std::vector<std::string> eligible_vocabulary(const std::vector<std::string>& vocab,
                                                    const PhonemicLexicon& lexicon,
                                                    const ConcretenessTable& concreteness,
                                                    const StaticEmbeddingTable& semantic) {
  std::vector<std::string> out;
  for (const auto& w : detail::normalized_vocab(vocab))
    if (lexicon.contains(w) && concreteness.contains(w) && semantic.contains(w)) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------
// Phonetic group construction.

/// Greedy construction of phonetically similar, semantically unrelated word
/// groups in alternating concreteness bands.
///
/// Each attempt draws a seed word from the band with fewer accepted groups,
/// gathers unused same-band words within `phon_within_max` of the seed and
/// farther than `phon_across_min` from every previously grouped word, and
/// adds them in order of (distance to seed, spelling) while their static
/// cosine to every current member stays below `sem_cos_max`. Groups reaching
/// `min_group_size` are accepted. The seed is stored as the first word.
inline WordGroupSet build_phonetic_groups(const PhonemicLexicon& lexicon,
                                          const ConcretenessTable& concreteness,
                                          const StaticEmbeddingTable& semantic,
                                          const std::vector<std::string>& vocab,
                                          const BuilderParams& params) {
  params.check();
  const std::vector<std::string> words = eligible_vocabulary(vocab, lexicon, concreteness, semantic);
  if (words.size() < static_cast<std::size_t>(params.min_group_size))
    throw DataError("resources too small: " + std::to_string(words.size()) +
                    " eligible words (in lexicon, ratings and static embeddings)");
  const ConcretenessBands bands =
      concreteness_bands(concreteness, words, params.conc_top_pct, params.conc_bottom_pct);
  const InternedLexicon interned(lexicon, words);

  std::vector<std::optional<ConcretenessLabel>> band(words.size());
  std::vector<std::vector<std::size_t>> band_words(2);  // 0 concrete, 1 abstract
  for (std::size_t i = 0; i < words.size(); ++i) {
    band[i] = bands.band(concreteness.at(words[i]));
    if (band[i]) band_words[*band[i] == ConcretenessLabel::kConcrete ? 0 : 1].push_back(i);
  }
  Rng rng(params.seed);
  std::vector<char> used(words.size(), 0), tried(words.size(), 0);
  std::vector<std::size_t> used_list;
  auto far_from_used = [&](std::size_t w) {
    for (std::size_t u : used_list)
      if (interned.distance(w, u) <= params.phon_across_min) return false;
    return true;
  };

  WordGroupSet out;
  out.kind = GroupKind::kPhonetic;
  int accepted[2] = {0, 0};
  int attempts = 0;
  while (static_cast<int>(out.groups.size()) < params.target_groups) {
    const int preferred = accepted[0] <= accepted[1] ? 0 : 1;
    std::optional<std::size_t> seed;
    int seed_band = preferred;
    for (int b : {preferred, 1 - preferred}) {
      while (true) {
        std::vector<std::size_t> open;
        for (std::size_t i : band_words[static_cast<std::size_t>(b)])
          if (!used[i] && !tried[i]) open.push_back(i);
        if (open.empty()) break;
        const std::size_t pick = open[rng.index(open.size())];
        tried[pick] = 1;
        if (far_from_used(pick)) {
          seed = pick;
          break;
        }
      }
      if (seed) {
        seed_band = b;
        break;
      }
    }
    if (!seed) break;
    ++attempts;

    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t i : band_words[static_cast<std::size_t>(seed_band)]) {
      if (i == *seed || used[i]) continue;
      const double d = interned.distance(*seed, i);
      if (d <= params.phon_within_max && far_from_used(i)) candidates.emplace_back(d, i);
    }
    std::sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
      return std::tie(a.first, words[a.second]) < std::tie(b.first, words[b.second]);
    });
    std::vector<std::size_t> members = {*seed};
    for (const auto& [d, i] : candidates) {
      bool unrelated = true;
      for (std::size_t m : members)
        if (cosine_similarity(semantic.at(words[i]), semantic.at(words[m])) >=
            params.sem_cos_max) {
          unrelated = false;
          break;
        }
      if (unrelated) members.push_back(i);
    }
    if (members.size() < static_cast<std::size_t>(params.min_group_size)) continue;

    WordGroup g;
    g.name = "phon" + std::to_string(out.groups.size() + 1);
    g.label = seed_band == 0 ? ConcretenessLabel::kConcrete : ConcretenessLabel::kAbstract;
    for (std::size_t m : members) {
      g.words.push_back(words[m]);
      used[m] = 1;
      used_list.push_back(m);
    }
    ++accepted[seed_band];
    out.groups.push_back(std::move(g));
  }
  if (out.groups.empty())
    throw DataError("no phonetic group could be formed: " + std::to_string(words.size()) +
                    " eligible words, " + std::to_string(band_words[0].size()) + " concrete / " +
                    std::to_string(band_words[1].size()) + " abstract, " +
                    std::to_string(attempts) + " seeds tried");
  return out;
}

struct PhoneticValidation {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Checks a phonetic group set against the builder's postconditions. The
/// first word of each group is taken as its seed.
inline PhoneticValidation validate_phonetic_groups(const WordGroupSet& groups,
                                                   const PhonemicLexicon& lexicon,
                                                   const ConcretenessTable& concreteness,
                                                   const StaticEmbeddingTable& semantic,
                                                   const std::vector<std::string>& vocab,
                                                   const BuilderParams& params) {
  params.check();
  PhoneticValidation v;
  auto problem = [&](std::string s) { v.problems.push_back(std::move(s)); };
  if (groups.kind != GroupKind::kPhonetic) problem("group set is not phonetic");
  const std::vector<std::string> words = eligible_vocabulary(vocab, lexicon, concreteness, semantic);
  const ConcretenessBands bands =
      concreteness_bands(concreteness, words, params.conc_top_pct, params.conc_bottom_pct);
  const std::set<std::string> eligible(words.begin(), words.end());

  std::map<std::string, std::size_t> group_of;
  for (std::size_t gi = 0; gi < groups.groups.size(); ++gi) {
    const auto& g = groups.groups[gi];
    if (g.words.size() < static_cast<std::size_t>(params.min_group_size))
      problem(g.name + ": only " + std::to_string(g.words.size()) + " words");
    const std::size_t before = v.problems.size();
    for (const auto& w : g.words) {
      if (!eligible.count(w)) {
        problem(g.name + ": '" + w + "' is not an eligible vocabulary word");
        continue;
      }
      if (!group_of.emplace(w, gi).second) problem("'" + w + "' appears more than once");
      const auto b = bands.band(concreteness.at(w));
      if (!b || *b != g.label)
        problem(g.name + ": '" + w + "' is outside the " + to_string(g.label) + " band");
    }
    if (v.problems.size() != before) continue;
    for (std::size_t i = 1; i < g.words.size(); ++i)
      if (word_distance(g.words[0], g.words[i], lexicon) > params.phon_within_max)
        problem(g.name + ": '" + g.words[i] + "' too far from seed '" + g.words[0] + "'");
    for (std::size_t i = 0; i < g.words.size(); ++i)
      for (std::size_t j = i + 1; j < g.words.size(); ++j)
        if (cosine_similarity(semantic.at(g.words[i]), semantic.at(g.words[j])) >=
            params.sem_cos_max)
          problem(g.name + ": '" + g.words[i] + "' and '" + g.words[j] +
                  "' are semantically related");
  }
  for (const auto& [w1, g1] : group_of)
    for (const auto& [w2, g2] : group_of)
      if (g1 < g2 && word_distance(w1, w2, lexicon) <= params.phon_across_min)
        problem("'" + w1 + "' and '" + w2 + "' in different groups are phonetically close");
  return v;
}

// ---------------------------------------------------------------------------
// Semantic group validation.

struct SemanticCheckParams {
  /// Within-group cosines must reach the similarity of the top fraction of
  /// reference-vocabulary pairs.
  double top_similarity_fraction = 0.15;
  /// Average pairwise phonemic distance inside a group must exceed this.
  double min_avg_phon_dist = 0.6;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
};

struct GroupValidation {
  std::string name;
  std::size_t n_words = 0;
  double avg_concreteness = 0.0;
  double sd_concreteness = 0.0;
  double avg_phon_dist = 0.0;
  double sd_phon_dist = 0.0;
  double min_within_similarity = 0.0;
  bool within_sim_percentile_ok = false;
  bool phon_dist_ok = false;
};

struct ValidationReport {
  double similarity_threshold = 0.0;
  std::vector<GroupValidation> per_group;
  bool overall_ok = false;
};

/// Population mean and standard deviation.
inline std::pair<double, double> population_mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size()))};
}

/// Static-embedding cosine marking the most similar `fraction` of random
/// reference-vocabulary pairs.
inline double similarity_threshold(const StaticEmbeddingTable& semantic,
                                   const std::vector<std::string>& reference_vocab,
                                   double fraction, std::size_t n_samples, std::uint64_t seed) {
  std::vector<std::string> covered;
  for (const auto& w : detail::normalized_vocab(reference_vocab))
    if (semantic.contains(w)) covered.push_back(w);
  if (covered.size() < 2) throw DataError("reference vocabulary has fewer than 2 embedded words");
  Rng rng(seed);
  std::vector<double> sims(n_samples);
  for (auto& s : sims) {
    auto [i, j] = rng.distinct_pair(covered.size());
    s = cosine_similarity(semantic.at(covered[i]), semantic.at(covered[j]));
  }
  return upper_tail_quantile(std::move(sims), fraction);
}

inline ValidationReport validate_semantic_groups(const WordGroupSet& groups,
                                                 const StaticEmbeddingTable& semantic,
                                                 const PhonemicLexicon& lexicon,
                                                 const ConcretenessTable& concreteness,
                                                 const std::vector<std::string>& reference_vocab,
                                                 const SemanticCheckParams& params = {}) {
  if (groups.kind != GroupKind::kSemantic) throw DataError("group set is not semantic");
  for (const auto& g : groups.groups)
    for (const auto& w : g.words) {
      if (!semantic.contains(w)) throw DataError("'" + w + "' missing from static embeddings");
      if (!lexicon.contains(w)) throw DataError("'" + w + "' missing from lexicon");
      if (!concreteness.contains(w)) throw DataError("'" + w + "' missing from concreteness ratings");
    }
  ValidationReport report;
  report.similarity_threshold = similarity_threshold(
      semantic, reference_vocab, params.top_similarity_fraction, params.n_samples, params.seed);
  report.overall_ok = true;
  for (const auto& g : groups.groups) {
    GroupValidation gv;
    gv.name = g.name;
    gv.n_words = g.words.size();
    std::vector<double> conc, dist;
    for (const auto& w : g.words) conc.push_back(concreteness.at(w));
    double min_sim = 1.0;
    for (std::size_t i = 0; i < g.words.size(); ++i)
      for (std::size_t j = i + 1; j < g.words.size(); ++j) {
        dist.push_back(word_distance(g.words[i], g.words[j], lexicon));
        min_sim = std::min(min_sim, cosine_similarity(semantic.at(g.words[i]),
                                                      semantic.at(g.words[j])));
      }
    std::tie(gv.avg_concreteness, gv.sd_concreteness) = population_mean_sd(conc);
    std::tie(gv.avg_phon_dist, gv.sd_phon_dist) = population_mean_sd(dist);
    gv.min_within_similarity = min_sim;
    gv.within_sim_percentile_ok = min_sim >= report.similarity_threshold;
    gv.phon_dist_ok = !dist.empty() && gv.avg_phon_dist > params.min_avg_phon_dist;
    report.overall_ok = report.overall_ok && gv.within_sim_percentile_ok && gv.phon_dist_ok;
    report.per_group.push_back(std::move(gv));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Shipped semantic category asset.

struct ReferenceStat {
  double mean = 0.0;
  double sd = 0.0;
};

struct SemanticCategory {
  std::string name;
  ConcretenessLabel label = ConcretenessLabel::kConcrete;
  std::size_t expected_size = 0;
  ReferenceStat concreteness;
  ReferenceStat phon_dist;
  std::vector<std::string> members;
};

/// Category list with reference summary statistics. Member lists may be
/// partial; complete() tells whether the set can be used for validation.
struct SemanticAsset {
  std::string version;
  std::string provenance;
  std::vector<SemanticCategory> categories;

  bool complete() const {
    return !categories.empty() &&
           std::all_of(categories.begin(), categories.end(), [](const SemanticCategory& c) {
             return c.members.size() == c.expected_size;
           });
  }

  WordGroupSet to_group_set() const {
    if (!complete()) {
      std::string msg = "semantic asset member lists are incomplete:";
      for (const auto& c : categories)
        if (c.members.size() != c.expected_size)
          msg += " " + c.name + " (" + std::to_string(c.members.size()) + "/" +
                 std::to_string(c.expected_size) + ")";
      throw DataError(msg);
    }
    WordGroupSet set;
    set.kind = GroupKind::kSemantic;
    for (const auto& c : categories) set.groups.push_back({c.name, c.members, c.label});
    check_group_set(set);
    return set;
  }
};

}  // namespace wordgeom
