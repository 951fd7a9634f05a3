// include/wordgeom/io.hpp

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

// Readers and writers for the toolkit's file formats:
//
//   .embt / .embt.gz   layer embedding dumps (JSON header line + TSV body)
//   lexicon            CMU-style "WORD  PH1 PH2 ..." pronunciations
//   static vectors     "word f1 f2 ..." text vectors (GloVe layout)
//   ratings            delimiter-separated concreteness table with header
//   synonyms           one synonym set per line, words space-separated
//   word lists         one word per line
//   group sets         JSON
//
// Parsers reject malformed input with the offending line number; nothing is
// silently repaired. Words are lowercased on the way in.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <zlib.h>

#include "json.hpp"
#include "wordgeom/core.hpp"
#include "wordgeom/groups.hpp"

namespace wordgeom {

// ---------------------------------------------------------------------------
// Raw file access.

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Whole file as bytes; gzip input is inflated transparently.
inline std::string read_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw DataError("cannot open " + path);
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw DataError("read error in " + path);
  return out;
}

/// Writes bytes; a ".gz" suffix selects gzip compression.
inline void write_file(const std::string& path, std::string_view bytes) {
  if (ends_with(path, ".gz")) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot write " + path);
    const int n = bytes.empty() ? 0 : gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(f);
    if (!bytes.empty() && n <= 0) throw DataError("write error in " + path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write error in " + path);
}

/// Splits on '\n'; a trailing newline does not yield an empty last line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("float formatting failed");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Embedding dumps.

inline constexpr const char* kEmbtFormat = "embt/1";

struct EmbtReadOptions {
  /// Keep only the first token of each (speaker, word) combination.
  bool dedup_per_speaker = false;
};

inline EmbeddingTable parse_embt(std::string_view text, const std::string& source = "<embt>",
                                 const EmbtReadOptions& options = {}) {
  if (text.find('\r') != std::string_view::npos)
    throw ParseError(source, 1, "CR characters are not allowed (LF line endings only)");
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty file, expected JSON header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines[0]);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 1, std::string("header is not JSON: ") + e.what());
  }
  EmbeddingTable t;
  std::size_t count = 0;
  try {
    if (header.at("format").get<std::string>() != kEmbtFormat)
      throw ParseError(source, 1, "unsupported format " + header.at("format").dump());
    t.model_id = header.at("model_id").get<std::string>();
    t.layer = header.at("layer").get<int>();
    t.dim = header.at("dim").get<int>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 1, std::string("bad header: ") + e.what());
  }
  if (t.dim < 1) throw ParseError(source, 1, "dim must be >= 1");
  if (t.layer < 0) throw ParseError(source, 1, "layer must be >= 0");
  if (lines.size() - 1 != count)
    throw ParseError(source, lines.size(), "header count " + std::to_string(count) + " but " +
                                               std::to_string(lines.size() - 1) + " data lines");

  std::unordered_set<std::string> ids;
  std::set<std::pair<std::string, std::string>> seen_speaker_word;
  t.rows.reserve(count);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t lineno = li + 1;
    const auto fields = split_on(lines[li], '\t');
    if (fields.size() != 4)
      throw ParseError(source, lineno, "expected 4 tab-separated fields, got " +
                                           std::to_string(fields.size()));
    TokenRow row;
    row.token_id = std::string(fields[0]);
    row.word = to_lower(fields[1]);
    if (row.token_id.empty()) throw ParseError(source, lineno, "empty token_id");
    if (row.word.empty()) throw ParseError(source, lineno, "empty word");
    if (fields[2].empty()) throw ParseError(source, lineno, "empty speaker field (use '-')");
    if (fields[2] != "-") row.speaker_id = std::string(fields[2]);
    if (!ids.insert(row.token_id).second)
      throw ParseError(source, lineno, "duplicate token_id \"" + row.token_id + "\"");
    const auto values = split_on(fields[3], ' ');
    if (values.size() != static_cast<std::size_t>(t.dim))
      throw ParseError(source, lineno, "expected " + std::to_string(t.dim) + " values, got " +
                                           std::to_string(values.size()));
    row.vector.reserve(values.size());
    double norm2 = 0.0;
    for (auto v : values) {
      auto d = parse_double(v);
      if (!d) throw ParseError(source, lineno, "bad number '" + std::string(v) + "'");
      if (!std::isfinite(*d)) throw ParseError(source, lineno, "non-finite value");
      norm2 += *d * *d;
      row.vector.push_back(*d);
    }
    if (norm2 == 0.0) throw ParseError(source, lineno, "zero-norm vector");
    if (options.dedup_per_speaker && row.speaker_id &&
        !seen_speaker_word.emplace(*row.speaker_id, row.word).second)
      continue;
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw ParseError(source, 1, "dump has no rows");
  return t;
}

inline EmbeddingTable read_embt(const std::string& path, const EmbtReadOptions& options = {}) {
  return parse_embt(read_file(path), path, options);
}

inline std::string serialize_embt(const EmbeddingTable& t) {
  require_valid(t);
  auto clean = [](const std::string& s, const char* what) {
    if (s.find_first_of("\t\n\r") != std::string::npos)
      throw DataError(std::string(what) + " contains a tab or newline: " + s);
  };
  nlohmann::ordered_json header;
  header["format"] = kEmbtFormat;
  header["model_id"] = t.model_id;
  header["layer"] = t.layer;
  header["dim"] = t.dim;
  header["count"] = t.rows.size();
  std::string out = header.dump() + "\n";
  for (const auto& r : t.rows) {
    clean(r.token_id, "token_id");
    clean(r.word, "word");
    if (r.speaker_id) {
      clean(*r.speaker_id, "speaker_id");
      if (r.speaker_id->empty() || *r.speaker_id == "-")
        throw DataError("speaker_id '" + *r.speaker_id + "' is not representable");
    }
    out += r.token_id;
    out += '\t';
    out += r.word;
    out += '\t';
    out += r.speaker_id ? *r.speaker_id : "-";
    out += '\t';
    for (std::size_t j = 0; j < r.vector.size(); ++j) {
      if (j) out += ' ';
      out += format_double(r.vector[j]);
    }
    out += '\n';
  }
  return out;
}

inline void write_embt(const std::string& path, const EmbeddingTable& t) {
  write_file(path, serialize_embt(t));
}

// ---------------------------------------------------------------------------
// Lexicon.

namespace detail {

// Strips stress digits; the remainder must be uppercase alphanumeric.
inline std::optional<std::string> phoneme_symbol(std::string_view raw) {
  std::size_t end = raw.size();
  while (end > 0 && raw[end - 1] >= '0' && raw[end - 1] <= '9') --end;
  if (end == 0) return std::nullopt;
  for (std::size_t i = 0; i < end; ++i) {
    const char c = raw[i];
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return std::nullopt;
  }
  return std::string(raw.substr(0, end));
}

// "WORD(2)" -> "WORD".
inline std::string_view base_word(std::string_view w) {
  if (w.size() > 2 && w.back() == ')') {
    const std::size_t open = w.rfind('(');
    if (open != std::string_view::npos && open > 0 && open + 2 < w.size()) {
      bool digits = true;
      for (std::size_t i = open + 1; i + 1 < w.size(); ++i)
        if (w[i] < '0' || w[i] > '9') digits = false;
      if (digits) return w.substr(0, open);
    }
  }
  return w;
}

}  // namespace detail

inline PhonemicLexicon parse_lexicon(std::string_view text, const std::string& source = "<lexicon>") {
  PhonemicLexicon lex;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (line.substr(0, 3) == ";;;") continue;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) throw ParseError(source, li + 1, "word without phonemes");
    const std::string word = to_lower(detail::base_word(tokens[0]));
    Pronunciation pron;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto sym = detail::phoneme_symbol(tokens[i]);
      if (!sym)
        throw ParseError(source, li + 1, "bad phoneme symbol '" + std::string(tokens[i]) + "'");
      pron.push_back(std::move(*sym));
    }
    auto& list = lex.entries[word];
    if (std::find(list.begin(), list.end(), pron) == list.end()) list.push_back(std::move(pron));
  }
  return lex;
}

inline PhonemicLexicon read_lexicon(const std::string& path) {
  return parse_lexicon(read_file(path), path);
}

// ---------------------------------------------------------------------------
// Static text vectors.

inline StaticEmbeddingTable parse_static_embeddings(
    std::string_view text, const std::string& source = "<vectors>",
    const std::optional<std::set<std::string>>& vocab_filter = std::nullopt) {
  StaticEmbeddingTable t;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto tokens = split_ws(lines[li]);
    if (tokens.empty()) continue;
    // word2vec-style "count dim" header line.
    if (li == 0 && tokens.size() == 2 && tokens[0].find_first_not_of("0123456789") == std::string_view::npos &&
        tokens[1].find_first_not_of("0123456789") == std::string_view::npos)
      continue;
    if (tokens.size() < 2) throw ParseError(source, li + 1, "word without values");
    const int dim = static_cast<int>(tokens.size() - 1);
    if (t.dim == 0) t.dim = dim;
    if (dim != t.dim)
      throw ParseError(source, li + 1, "expected " + std::to_string(t.dim) + " values, got " +
                                           std::to_string(dim));
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(dim));
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto d = parse_double(tokens[i]);
      if (!d || !std::isfinite(*d))
        throw ParseError(source, li + 1, "bad number '" + std::string(tokens[i]) + "'");
      v.push_back(*d);
    }
    std::string word = to_lower(tokens[0]);
    if (vocab_filter && !vocab_filter->count(word)) continue;
    // Case folding can merge entries; the first one is kept.
    t.vectors.emplace(std::move(word), std::move(v));
  }
  return t;
}

inline StaticEmbeddingTable read_static_embeddings(
    const std::string& path, const std::optional<std::set<std::string>>& vocab_filter = std::nullopt) {
  return parse_static_embeddings(read_file(path), path, vocab_filter);
}

// ---------------------------------------------------------------------------
// Concreteness ratings.

struct RatingColumns {
  std::string word = "Word";
  std::string rating = "Conc.M";
};

inline ConcretenessTable parse_concreteness(std::string_view text,
                                            const std::string& source = "<ratings>",
                                            const RatingColumns& columns = {}) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty ratings file");
  const char sep = lines[0].find('\t') != std::string_view::npos ? '\t' : ',';
  const auto header = split_on(lines[0], sep);
  std::optional<std::size_t> wcol, rcol;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == columns.word) wcol = i;
    if (header[i] == columns.rating) rcol = i;
  }
  if (!wcol || !rcol)
    throw ParseError(source, 1, "missing column; expected headers '" + columns.word + "' and '" +
                                    columns.rating + "'");
  ConcretenessTable t;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split_on(lines[li], sep);
    if (fields.size() <= std::max(*wcol, *rcol))
      throw ParseError(source, li + 1, "too few fields");
    const std::string word = to_lower(fields[*wcol]);
    if (word.empty()) throw ParseError(source, li + 1, "empty word");
    auto r = parse_double(fields[*rcol]);
    if (!r) throw ParseError(source, li + 1, "bad rating '" + std::string(fields[*rcol]) + "'");
    if (!(*r >= 1.0 && *r <= 5.0))
      throw ParseError(source, li + 1, "rating " + std::string(fields[*rcol]) + " outside [1, 5]");
    if (!t.ratings.emplace(word, *r).second)
      throw ParseError(source, li + 1, "duplicate word '" + word + "'");
  }
  return t;
}

inline ConcretenessTable read_concreteness(const std::string& path, const RatingColumns& columns = {}) {
  return parse_concreteness(read_file(path), path, columns);
}

// ---------------------------------------------------------------------------
// Synonym sets and word lists.

/// One set per line. Duplicate words on a line collapse; sets smaller than
/// two words are dropped and counted in `dropped`.
inline SynonymSets parse_synonyms(std::string_view text, const std::string& source = "<synonyms>",
                                  std::size_t* dropped = nullptr) {
  SynonymSets out;
  std::size_t n_dropped = 0, n_lines = 0;
  for (auto line : split_lines(text)) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    ++n_lines;
    std::vector<std::string> set;
    for (auto t : tokens) {
      std::string w = to_lower(t);
      if (std::find(set.begin(), set.end(), w) == set.end()) set.push_back(std::move(w));
    }
    if (set.size() < 2) {
      ++n_dropped;
      continue;
    }
    out.sets.push_back(std::move(set));
  }
  if (n_lines == 0) throw ParseError(source, 1, "synonym file is empty");
  if (dropped) *dropped = n_dropped;
  return out;
}

inline SynonymSets read_synonyms(const std::string& path, std::size_t* dropped = nullptr) {
  return parse_synonyms(read_file(path), path, dropped);
}

/// First whitespace-delimited token of each non-empty, non-'#' line.
inline std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto line : split_lines(text)) {
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    out.push_back(to_lower(tokens[0]));
  }
  return out;
}

inline std::vector<std::string> read_word_list(const std::string& path) {
  return parse_word_list(read_file(path));
}

// ---------------------------------------------------------------------------
// Word group sets.

inline nlohmann::ordered_json group_set_to_json(const WordGroupSet& set) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(set.kind);
  j["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : set.groups) {
    nlohmann::ordered_json gj;
    gj["name"] = g.name;
    gj["label"] = to_string(g.label);
    gj["words"] = g.words;
    j["groups"].push_back(std::move(gj));
  }
  return j;
}

inline GroupKind parse_group_kind(const std::string& s) {
  if (s == "phonetic") return GroupKind::kPhonetic;
  if (s == "semantic") return GroupKind::kSemantic;
  throw DataError("unknown group kind '" + s + "'");
}

inline ConcretenessLabel parse_label(const std::string& s) {
  if (s == "concrete") return ConcretenessLabel::kConcrete;
  if (s == "abstract") return ConcretenessLabel::kAbstract;
  throw DataError("unknown concreteness label '" + s + "'");
}

/// Parses a group set and checks its invariants; `min_size` overrides the
/// kind's default minimum group size.
inline WordGroupSet parse_group_set(std::string_view text, const std::string& source = "<groups>",
                                    std::optional<std::size_t> min_size = std::nullopt) {
  WordGroupSet set;
  try {
    const auto j = nlohmann::json::parse(text);
    set.kind = parse_group_kind(j.at("kind").get<std::string>());
    for (const auto& gj : j.at("groups")) {
      WordGroup g;
      g.name = gj.at("name").get<std::string>();
      g.label = parse_label(gj.at("label").get<std::string>());
      for (const auto& w : gj.at("words")) g.words.push_back(to_lower(w.get<std::string>()));
      set.groups.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
  check_group_set(set, min_size);
  return set;
}

inline WordGroupSet read_group_set(const std::string& path,
                                   std::optional<std::size_t> min_size = std::nullopt) {
  return parse_group_set(read_file(path), path, min_size);
}

inline SemanticAsset parse_semantic_asset(std::string_view text,
                                          const std::string& source = "<asset>") {
  SemanticAsset a;
  try {
    const auto j = nlohmann::json::parse(text);
    a.version = j.at("version").get<std::string>();
    a.provenance = j.at("provenance").get<std::string>();
    for (const auto& cj : j.at("categories")) {
      SemanticCategory c;
      c.name = cj.at("name").get<std::string>();
      c.label = parse_label(cj.at("label").get<std::string>());
      c.expected_size = cj.at("size").get<std::size_t>();
      c.concreteness = {cj.at("concreteness").at("mean").get<double>(),
                        cj.at("concreteness").at("sd").get<double>()};
      c.phon_dist = {cj.at("phon_dist").at("mean").get<double>(),
                     cj.at("phon_dist").at("sd").get<double>()};
      for (const auto& w : cj.at("members")) c.members.push_back(to_lower(w.get<std::string>()));
      a.categories.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
  return a;
}

inline SemanticAsset read_semantic_asset(const std::string& path) {
  return parse_semantic_asset(read_file(path), path);
}

}  // namespace wordgeom
