// include/wordgeom/report.hpp

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

// Analysis reports: JSON-lines records, one self-describing object per line.
//
//   {"record_type": ..., "payload": {...}, "toolkit_version": ...,
//    "seed": ..., "params_digest": ...}
//
// Record types: cka, pair_profile, cluster_score, grounding, lda_points.
// A CSV rendering flattens the same records into rows.

#pragma once

#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wordgeom/cluster.hpp"
#include "wordgeom/grounding.hpp"
#include "wordgeom/io.hpp"
#include "wordgeom/pairs.hpp"

#ifndef WORDGEOM_VERSION
#define WORDGEOM_VERSION "0.1.0"
#endif

namespace wordgeom {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolkitVersion = WORDGEOM_VERSION;

inline const std::set<std::string>& known_record_types() {
  static const std::set<std::string> types = {"cka", "pair_profile", "cluster_score", "grounding",
                                              "lda_points"};
  return types;
}

struct ReportRecord {
  std::string record_type;
  Json payload;
};

struct ReportContext {
  std::uint64_t seed = 0;
  /// Parameters that shaped the run; hashed into params_digest.
  nlohmann::json params = nlohmann::json::object();
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string params_digest(const nlohmann::json& params) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(params.dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Payload builders.

inline Json interval_json(const IntervalEstimate& e) {
  Json j;
  j["mean"] = e.mean;
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["n"] = e.n_samples;
  return j;
}

inline IntervalEstimate interval_from_json(const Json& j) {
  IntervalEstimate e;
  e.mean = j.at("mean").get<double>();
  e.lo = j.at("lo").get<double>();
  e.hi = j.at("hi").get<double>();
  e.n_samples = j.at("n").get<std::size_t>();
  return e;
}

inline ReportRecord cka_record(const std::string& model_a, int layer_a, const std::string& model_b,
                               int layer_b, double value, std::size_t n_tokens) {
  Json p;
  p["model_a"] = model_a;
  p["layer_a"] = layer_a;
  p["model_b"] = model_b;
  p["layer_b"] = layer_b;
  p["kernel"] = "linear";
  p["n_tokens"] = n_tokens;
  p["value"] = value;
  return {"cka", std::move(p)};
}

inline ReportRecord pair_profile_record(const PairProfile& profile) {
  Json p;
  p["model_id"] = profile.model_id;
  p["layer"] = profile.layer;
  p["random_baseline"] = interval_json(profile.random_baseline);
  Json classes = Json::object();
  for (const auto& [cls, est] : profile.per_class) classes[to_string(cls)] = interval_json(est);
  p["per_class"] = std::move(classes);
  p["with_replacement"] = Json::array();
  for (PairClass c : profile.with_replacement) p["with_replacement"].push_back(to_string(c));
  p["skipped"] = Json::array();
  for (PairClass c : profile.skipped) p["skipped"].push_back(to_string(c));
  return {"pair_profile", std::move(p)};
}

inline ReportRecord cluster_score_record(const ClusterScore& cs) {
  Json p;
  p["model_id"] = cs.model_id;
  p["layer"] = cs.layer;
  p["subspace"] = to_string(cs.subspace);
  p["k"] = cs.k ? Json(*cs.k) : Json(nullptr);
  p["score"] = interval_json(cs.score);
  if (cs.concreteness_split) {
    p["concreteness_split"] = {{"abstract", cs.concreteness_split->abstract_score},
                               {"concrete", cs.concreteness_split->concrete_score}};
  }
  if (!cs.iterations.empty()) p["iterations"] = cs.iterations;
  return {"cluster_score", std::move(p)};
}

inline ReportRecord grounding_record(const std::string& ungrounded_model,
                                     const std::string& grounded_model,
                                     const GroundingComparison& g) {
  Json p;
  p["ungrounded_model"] = ungrounded_model;
  p["grounded_model"] = grounded_model;
  p["per_layer"] = Json::array();
  for (const auto& l : g.per_layer)
    p["per_layer"].push_back(
        {{"layer", l.layer}, {"lda_cka", l.lda_cka}, {"delta_silhouette", l.delta_silhouette}});
  p["r"] = g.correlation.r;
  p["p_value"] = g.correlation.p_value;
  p["n"] = g.correlation.n;
  return {"grounding", std::move(p)};
}

/// First two projected dimensions of each group word.
inline ReportRecord lda_points_record(const std::string& model_id, int layer, int k,
                                      const GroupMatrix& gm, const WordGroupSet& groups,
                                      const Matrix& projected) {
  if (projected.cols() < 2) throw UsageError("scatter points need at least 2 projected dimensions");
  Json p;
  p["model_id"] = model_id;
  p["layer"] = layer;
  p["k"] = k;
  p["points"] = Json::array();
  for (Eigen::Index i = 0; i < projected.rows(); ++i) {
    const auto& g = groups.groups[static_cast<std::size_t>(gm.labels[static_cast<std::size_t>(i)])];
    p["points"].push_back({{"word", gm.words[static_cast<std::size_t>(i)]},
                           {"group", g.name},
                           {"x", projected(i, 0)},
                           {"y", projected(i, 1)}});
  }
  return {"lda_points", std::move(p)};
}

// ---------------------------------------------------------------------------
// Emission.

enum class ReportFormat { kJsonl, kCsv };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "jsonl") return ReportFormat::kJsonl;
  if (s == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown format '" + s + "' (expected jsonl or csv)");
}

inline Json stamp(const ReportRecord& r, const ReportContext& ctx) {
  if (!known_record_types().count(r.record_type))
    throw Error("unknown record_type '" + r.record_type + "'");
  Json j;
  j["record_type"] = r.record_type;
  j["payload"] = r.payload;
  j["toolkit_version"] = kToolkitVersion;
  j["seed"] = ctx.seed;
  j["params_digest"] = params_digest(ctx.params);
  return j;
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_num(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

struct CsvRow {
  std::string model_id, layer, series, item, k, mean, lo, hi, n, x, y;
};

inline CsvRow make_row(std::string model_id, std::string layer, std::string series = {},
                       std::string item = {}) {
  CsvRow r;
  r.model_id = std::move(model_id);
  r.layer = std::move(layer);
  r.series = std::move(series);
  r.item = std::move(item);
  return r;
}

inline void csv_rows(const Json& rec, std::vector<CsvRow>& rows) {
  const std::string type = rec.at("record_type").get<std::string>();
  const Json& p = rec.at("payload");
  auto interval_row = [](CsvRow row, const Json& e) {
    row.mean = json_num(e.at("mean"));
    row.lo = json_num(e.at("lo"));
    row.hi = json_num(e.at("hi"));
    row.n = json_num(e.at("n"));
    return row;
  };
  if (type == "cka") {
    CsvRow r = make_row(p.at("model_a").get<std::string>(), json_num(p.at("layer_a")),
                        p.at("model_b").get<std::string>() + "/" + json_num(p.at("layer_b")));
    r.mean = r.lo = r.hi = json_num(p.at("value"));
    r.n = json_num(p.at("n_tokens"));
    rows.push_back(r);
  } else if (type == "pair_profile") {
    const CsvRow base = make_row(p.at("model_id").get<std::string>(), json_num(p.at("layer")));
    for (const auto& [cls, e] : p.at("per_class").items()) {
      CsvRow r = base;
      r.series = cls;
      rows.push_back(interval_row(r, e));
    }
    CsvRow r = base;
    r.series = "Random(raw)";
    rows.push_back(interval_row(r, p.at("random_baseline")));
  } else if (type == "cluster_score") {
    CsvRow r = make_row(p.at("model_id").get<std::string>(), json_num(p.at("layer")),
                        p.at("subspace").get<std::string>());
    r.k = json_num(p.at("k"));
    rows.push_back(interval_row(r, p.at("score")));
    if (p.contains("concreteness_split")) {
      for (const char* label : {"abstract", "concrete"}) {
        CsvRow s = r;
        s.item = label;
        s.mean = json_num(p.at("concreteness_split").at(label));
        s.lo = s.hi = s.n = "";
        rows.push_back(s);
      }
    }
  } else if (type == "grounding") {
    const std::string model = p.at("grounded_model").get<std::string>() + " vs " +
                              p.at("ungrounded_model").get<std::string>();
    for (const auto& l : p.at("per_layer")) {
      for (const char* series : {"lda_cka", "delta_silhouette"}) {
        CsvRow r = make_row(model, json_num(l.at("layer")), series);
        r.mean = json_num(l.at(series));
        rows.push_back(r);
      }
    }
    CsvRow r = make_row(model, "", "pearson_r");
    r.mean = json_num(p.at("r"));
    r.item = "p=" + json_num(p.at("p_value"));
    r.n = json_num(p.at("n"));
    rows.push_back(r);
  } else if (type == "lda_points") {
    for (const auto& pt : p.at("points")) {
      CsvRow r = make_row(p.at("model_id").get<std::string>(), json_num(p.at("layer")),
                          pt.at("group").get<std::string>(), pt.at("word").get<std::string>());
      r.k = json_num(p.at("k"));
      r.x = json_num(pt.at("x"));
      r.y = json_num(pt.at("y"));
      rows.push_back(r);
    }
  } else {
    throw Error("unknown record_type '" + type + "'");
  }
}

}  // namespace detail

/// Renders records; identical records and version give identical bytes.
inline std::string emit_report(const std::vector<ReportRecord>& records, const ReportContext& ctx,
                               ReportFormat format = ReportFormat::kJsonl) {
  std::string out;
  if (format == ReportFormat::kJsonl) {
    for (const auto& r : records) out += stamp(r, ctx).dump() + "\n";
    return out;
  }
  out = "record_type,model_id,layer,series,item,k,mean,lo,hi,n,x,y,seed,params_digest\n";
  for (const auto& r : records) {
    const Json rec = stamp(r, ctx);
    std::vector<detail::CsvRow> rows;
    detail::csv_rows(rec, rows);
    for (const auto& row : rows) {
      const std::string cells[] = {r.record_type, row.model_id, row.layer, row.series, row.item,
                                   row.k, row.mean, row.lo, row.hi, row.n, row.x, row.y,
                                   std::to_string(ctx.seed), rec.at("params_digest").get<std::string>()};
      for (std::size_t i = 0; i < std::size(cells); ++i) {
        if (i) out += ',';
        out += detail::csv_cell(cells[i]);
      }
      out += '\n';
    }
  }
  return out;
}

/// Parses a JSON-lines report. Blank lines are skipped; every other line
/// must be a complete record of a known type.
inline std::vector<Json> parse_report(std::string_view text, const std::string& source = "<report>") {
  std::vector<Json> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    Json j;
    try {
      j = Json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, i + 1, std::string("not JSON: ") + e.what());
    }
    for (const char* key : {"record_type", "payload", "toolkit_version", "seed", "params_digest"})
      if (!j.is_object() || !j.contains(key))
        throw ParseError(source, i + 1, std::string("record lacks '") + key + "'");
    if (!j["record_type"].is_string() || !known_record_types().count(j["record_type"].get<std::string>()))
      throw ParseError(source, i + 1, "unknown record_type " + j["record_type"].dump());
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<Json> read_report(const std::string& path) {
  return parse_report(read_file(path), path);
}

}  // namespace wordgeom
