// tests/test_report.cpp

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

// Report records, JSONL/CSV emission and SVG figures.

#include <regex>

#include <gtest/gtest.h>

#include "synth.hpp"
#include "wordgeom/plot.hpp"
#include "wordgeom/report.hpp"

namespace wordgeom {
namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

ClusterScore score(int layer, Subspace s, double mean) {
  ClusterScore cs;
  cs.model_id = "m";
  cs.layer = layer;
  cs.subspace = s;
  if (s != Subspace::kFull) cs.k = 8;
  cs.score = {mean, mean - 0.1, mean + 0.1, 9};
  cs.iterations = {mean, mean};
  return cs;
}

std::vector<ReportRecord> sweep_records(int layers) {
  std::vector<ReportRecord> out;
  for (Subspace s : {Subspace::kFull, Subspace::kPca, Subspace::kLda})
    for (int l = 0; l < layers; ++l) out.push_back(cluster_score_record(score(l, s, 0.05 * l)));
  return out;
}

ReportContext context() {
  ReportContext ctx;
  ctx.seed = 7;
  ctx.params = {{"k", 8}, {"subspace", "lda"}};
  return ctx;
}

TEST(Digest, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  // Key order does not change the digest.
  EXPECT_EQ(params_digest({{"a", 1}, {"b", 2}}), params_digest({{"b", 2}, {"a", 1}}));
  EXPECT_NE(params_digest({{"a", 1}}), params_digest({{"a", 2}}));
  EXPECT_EQ(params_digest({{"a", 1}}).size(), 16u);
}

TEST(EmitReport, EmptyIsValid) {
  EXPECT_EQ(emit_report({}, context()), "");
  EXPECT_TRUE(parse_report("").empty());
}

TEST(EmitReport, StampedRecords) {
  const std::string text = emit_report(sweep_records(2), context());
  const auto records = parse_report(text);
  ASSERT_EQ(records.size(), 6u);
  const Json& r = records[3];
  EXPECT_EQ(r["record_type"], "cluster_score");
  EXPECT_EQ(r["seed"], 7);
  EXPECT_EQ(r["toolkit_version"], kToolkitVersion);
  EXPECT_EQ(r["params_digest"], params_digest(context().params));
  EXPECT_EQ(r["payload"]["subspace"], "pca");
  EXPECT_EQ(r["payload"]["k"], 8);
  EXPECT_TRUE(records[0]["payload"]["k"].is_null());
  EXPECT_EQ(interval_from_json(r["payload"]["score"]), score(1, Subspace::kPca, 0.05).score);
}

TEST(EmitReport, ConcatenationIsValid) {
  const std::string a = emit_report(sweep_records(2), context());
  const std::string b = emit_report({cka_record("x", 0, "y", 1, 0.5, 10)}, context());
  EXPECT_EQ(parse_report(a + b).size(), 7u);
}

TEST(EmitReport, Deterministic) {
  EXPECT_EQ(emit_report(sweep_records(3), context()), emit_report(sweep_records(3), context()));
}

TEST(EmitReport, UnknownTypeRejected) {
  EXPECT_THROW(emit_report({{"mystery", Json::object()}}, context()), Error);
  const std::string good = emit_report({cka_record("x", 0, "y", 1, 0.5, 10)}, context());
  std::string bad = good;
  bad.replace(bad.find("\"cka\""), 5, "\"odd\"");
  try {
    parse_report(good + bad, "r.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_report("{\"record_type\":\"cka\"}\n"), ParseError);
  EXPECT_THROW(parse_report("[1]\n"), ParseError);
}

TEST(EmitReport, Csv) {
  std::vector<ReportRecord> recs = sweep_records(2);
  ClusterScore split = score(3, Subspace::kLda, 0.5);
  split.concreteness_split = ConcretenessSplit{0.29, 0.33};
  recs.push_back(cluster_score_record(split));
  recs.push_back(cka_record("a,b", 0, "c", 1, 0.25, 4));
  const std::string csv = emit_report(recs, context(), ReportFormat::kCsv);
  const auto lines = split_lines(csv);
  EXPECT_EQ(lines[0], "record_type,model_id,layer,series,item,k,mean,lo,hi,n,x,y,seed,params_digest");
  EXPECT_EQ(lines.size(), 1u + 6u + 3u + 1u);
  EXPECT_NE(csv.find(",abstract,8,0.29,,,,,,7,"), std::string::npos);
  EXPECT_NE(csv.find("cka,\"a,b\",0,c/1,"), std::string::npos);
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::kCsv);
  EXPECT_THROW(parse_report_format("xml"), UsageError);
}

TEST(EmitReport, PairProfileAndGroundingPayloads) {
  PairProfile p;
  p.model_id = "m";
  p.per_class[PairClass::kSameWord] = {0.5, 0.4, 0.6, 5};
  p.skipped = {PairClass::kSynonym};
  GroundingComparison g;
  g.per_layer = {{0, 0.4, 0.1}, {1, 0.5, 0.2}, {2, 0.6, 0.3}};
  g.correlation.r = 1.0;
  g.correlation.n = 3;
  const auto recs = parse_report(
      emit_report({pair_profile_record(p), grounding_record("u", "g", g)}, context()));
  EXPECT_EQ(recs[0]["payload"]["per_class"]["same_word"]["mean"], 0.5);
  EXPECT_EQ(recs[0]["payload"]["skipped"][0], "synonym");
  EXPECT_EQ(recs[1]["payload"]["per_layer"].size(), 3u);
  const std::string csv = emit_report({pair_profile_record(p), grounding_record("u", "g", g)},
                                      context(), ReportFormat::kCsv);
  EXPECT_EQ(count(csv, "\ngrounding,"), 7u);
}

std::vector<Json> parsed(const std::vector<ReportRecord>& recs) {
  return parse_report(emit_report(recs, context()));
}

TEST(Plot, EmptyReportHasNothingToPlot) {
  try {
    emit_plot({}, FigureKind::kLine);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("nothing to plot"), std::string::npos);
  }
  EXPECT_THROW(emit_plot(parsed(sweep_records(2)), FigureKind::kScatter), DataError);
}

TEST(Plot, OnePolylinePerSubspace) {
  const std::string svg = emit_plot(parsed(sweep_records(12)), FigureKind::kLine);
  EXPECT_EQ(count(svg, "<polyline"), 3u);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  // Each sweep polyline has 12 vertices.
  const std::regex pts("<polyline[^>]*points=\"([^\"]*)\"");
  std::size_t lines = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pts); it != std::sregex_iterator(); ++it) {
    const std::string p = (*it)[1];
    EXPECT_EQ(count(p, ",") , 12u);
    ++lines;
  }
  EXPECT_EQ(lines, 3u);
  EXPECT_EQ(count(svg, "class=\"ci\""), 36u);
}

TEST(Plot, Deterministic) {
  const auto report = parsed(sweep_records(4));
  EXPECT_EQ(emit_plot(report, FigureKind::kLine), emit_plot(report, FigureKind::kLine));
}

TEST(Plot, MixedTypesNeedSelection) {
  auto recs = sweep_records(3);
  recs.push_back(cka_record("a", 0, "b", 0, 0.5, 5));
  recs.push_back(cka_record("a", 1, "b", 1, 0.6, 5));
  const auto report = parsed(recs);
  EXPECT_THROW(emit_plot(report, FigureKind::kLine), UsageError);
  const std::string svg = emit_plot(report, FigureKind::kLine, std::string("cka"));
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_THROW(emit_plot(report, FigureKind::kLine, std::string("bogus")), UsageError);
  EXPECT_THROW(emit_plot(report, FigureKind::kLine, std::string("grounding")), DataError);
}

TEST(Plot, ScatterOfEightyOneWords) {
  const auto d = synth::gaussian_groups(1, 14, 6, 16, 3.0);
  WordGroupSet groups = d.groups;
  for (int g = 0; g < 3; ++g) groups.groups[static_cast<std::size_t>(g)].words.pop_back();
  const GroupMatrix gm = group_matrix(d.table, groups);
  const Matrix proj = project(gm.x, lda_fit(gm.x, gm.labels, 8));
  const auto report = parsed({lda_points_record("m", 0, 8, gm, groups, proj)});
  const std::string svg = emit_plot(report, FigureKind::kScatter);
  EXPECT_EQ(count(svg, "<circle"), 81u);
  EXPECT_THROW(lda_points_record("m", 0, 1, gm, groups, proj.leftCols(1)), UsageError);
}

TEST(Plot, FigureKinds) {
  EXPECT_EQ(parse_figure_kind("scatter"), FigureKind::kScatter);
  EXPECT_THROW(parse_figure_kind("pie"), UsageError);
}

}  // namespace
}  // namespace wordgeom
