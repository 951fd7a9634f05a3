// tests/test_cli.cpp

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

// Command-line surface: subcommands, exit codes and output files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>

#include "cli_fixture.hpp"

namespace wordgeom {
namespace {

namespace fs = std::filesystem;
using cli_fixture::run;

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    paths_ = new cli_fixture::Paths(
        cli_fixture::write((fs::temp_directory_path() / "wordgeom_cli_test").string()));
  }
  static void TearDownTestSuite() {
    fs::remove_all(paths_->dir);
    delete paths_;
  }
  static std::string file(const std::string& name) { return (fs::path(paths_->dir) / name).string(); }
  static const cli_fixture::Paths& p() { return *paths_; }

  static cli_fixture::Paths* paths_;
};

cli_fixture::Paths* Cli::paths_ = nullptr;

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// Runs the installed binary through the shell; returns the exit status.
int run_binary(const std::string& args, std::string* output) {
  const std::string log = (fs::temp_directory_path() / "wordgeom_cli_binary.log").string();
  const int status = std::system((std::string(WORDGEOM_CLI) + " " + args + " >" + log + " 2>&1").c_str());
  *output = read_file(log);
  fs::remove(log);
  return WEXITSTATUS(status);
}

TEST_F(Cli, CkaOfIdenticalFilesPrintsOne) {
  std::string out;
  EXPECT_EQ(run_binary("cka " + p().ungrounded[0] + " " + p().ungrounded[0], &out), 0);
  EXPECT_EQ(out, "1.0\n");
  const auto r = run({"cka", p().grounded[1], p().grounded[1], "--match", "word"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.0\n");
}

TEST_F(Cli, CkaWritesReportWithOut) {
  const std::string report = file("cka.jsonl");
  const auto r = run({"--seed", "3", "cka", p().ungrounded[0], p().grounded[0], "--out", report});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto recs = read_report(report);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0]["payload"]["n_tokens"], 117);
  EXPECT_EQ(recs[0]["seed"], 3);
  EXPECT_EQ(cli_detail::display_number(recs[0]["payload"]["value"].get<double>()) + "\n", r.out);
}

TEST_F(Cli, MissingFileIsDataError) {
  std::string out;
  EXPECT_EQ(run_binary("cka /no/such/file.embt " + p().ungrounded[0], &out), 2);
  EXPECT_NE(out.find("/no/such/file.embt"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  std::string out;
  EXPECT_EQ(run_binary("frobnicate", &out), 1);
  EXPECT_NE(out.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"cka", p().ungrounded[0]}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "cka", "a", "b"}).code, 1);
  EXPECT_EQ(run({"cluster", p().ungrounded[0], "--groups", p().groups, "--subspace", "ica"}).code, 1);
  EXPECT_EQ(run({"validate-groups", "--lexicon", "x", "--concreteness", "y", "--vectors", "z"}).code, 1);
  EXPECT_EQ(run({"--version"}).out, std::string(kToolkitVersion) + "\n");
}

TEST_F(Cli, MalformedDumpIsDataError) {
  const std::string bad = file("bad.embt");
  write_file(bad, "{\"format\":\"embt/1\",\"model_id\":\"m\",\"layer\":0,\"dim\":2,\"count\":1}\nt\tw\t-\t1 x\n");
  const auto r = run({"cka", bad, bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.embt:2:"), std::string::npos) << r.err;
}

TEST_F(Cli, PairsProfilesEveryLayer) {
  std::vector<std::string> args = {"--seed", "5", "pairs"};
  args.insert(args.end(), p().pair_dumps.rbegin(), p().pair_dumps.rend());
  for (const char* a : {"--lexicon", p().pair_lexicon.c_str(), "--synonyms", p().synonyms.c_str(),
                        "--n-per-class", "200", "--repeats", "3", "--random-pool", "2000"})
    args.push_back(a);
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto recs = parse_report(r.out);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0]["payload"]["layer"], 0);
  EXPECT_EQ(recs[2]["payload"]["per_class"].size(), 4u);
  EXPECT_GT(recs[2]["payload"]["per_class"]["same_word"]["mean"].get<double>(),
            recs[0]["payload"]["per_class"]["same_word"]["mean"].get<double>());
  EXPECT_EQ(run(args).out, r.out);
  args[1] = "6";
  EXPECT_NE(run(args).out, r.out);
}

TEST_F(Cli, ClusterSweepAndPlot) {
  const std::string report = file("sweep.jsonl");
  std::vector<std::string> args = {"cluster"};
  args.insert(args.end(), p().ungrounded.begin(), p().ungrounded.end());
  for (const char* a : {"--groups", p().groups.c_str(), "--loo", "--out", report.c_str()}) args.push_back(a);
  ASSERT_EQ(run(args).code, 0);
  const auto recs = read_report(report);
  EXPECT_EQ(recs.size(), 12u);
  EXPECT_EQ(recs[0]["payload"]["iterations"].size(), 9u);

  const auto plot = run({"plot", report});
  ASSERT_EQ(plot.code, 0) << plot.err;
  EXPECT_EQ(count(plot.out, "<polyline"), 3u);
}

TEST_F(Cli, ClusterCsvAndSplit) {
  const auto r = run({"--format", "csv", "cluster", p().ungrounded[2], "--groups", p().groups,
                      "--subspace", "lda", "--split", "--k", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count(r.out, "\n"), 1u + 3u);
  EXPECT_NE(r.out.find("cluster_score,ungrounded,2,lda,abstract,4,"), std::string::npos) << r.out;
}

TEST_F(Cli, ScatterPoints) {
  const std::string report = file("points.jsonl");
  ASSERT_EQ(run({"cluster", p().ungrounded[3], "--groups", p().groups, "--subspace", "lda",
                 "--points", "--out", report}).code, 0);
  const auto r = run({"plot", report, "--kind", "scatter"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count(r.out, "<circle"), 117u);
  EXPECT_EQ(run({"plot", report}).code, 0);
}

TEST_F(Cli, PlotOfEmptyReport) {
  const std::string empty = file("empty.jsonl");
  write_file(empty, "");
  const auto r = run({"plot", empty});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nothing to plot"), std::string::npos);
}

TEST_F(Cli, BuildAndValidateGroups) {
  const std::string groups = file("built.json");
  const std::vector<std::string> res = {"--lexicon", p().lexicon, "--concreteness", p().ratings,
                                        "--vectors", p().vectors, "--vocab", p().vocab,
                                        "--top-pct", "0.5", "--bottom-pct", "0.5"};
  std::vector<std::string> build = {"build-groups", "--out", groups};
  build.insert(build.end(), res.begin(), res.end());
  const auto b = run(build);
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.err.find("built 2 of 14"), std::string::npos);
  const WordGroupSet set = read_group_set(groups);
  EXPECT_EQ(set.kind, GroupKind::kPhonetic);
  EXPECT_EQ(set.groups.size(), 2u);

  std::vector<std::string> validate = {"validate-groups", "--groups", groups};
  validate.insert(validate.end(), res.begin(), res.end());
  const auto v = run(validate);
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_TRUE(Json::parse(v.out)["ok"].get<bool>());

  validate.push_back("--within-max");
  validate.push_back("0.1");
  const auto strict = run(validate);
  EXPECT_EQ(strict.code, 0);
  EXPECT_FALSE(Json::parse(strict.out)["ok"].get<bool>());
  EXPECT_NE(strict.err.find("validation failed"), std::string::npos);
}

TEST_F(Cli, ValidateShippedAssetNeedsMembers) {
  const auto r = run({"validate-groups", "--asset", std::string(WORDGEOM_DATA_DIR) + "/semantic_groups.json",
                      "--lexicon", p().lexicon, "--concreteness", p().ratings, "--vectors", p().vectors,
                      "--reference-vocab", p().vocab});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("member lists are incomplete"), std::string::npos) << r.err;
}

TEST_F(Cli, CalibrateThreshold) {
  const auto r = run({"--seed", "1", "calibrate-threshold", "--lexicon", p().lexicon, "--vocab",
                      p().vocab, "--samples", "5000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_GE(j["threshold"].get<double>(), 0.0);
  EXPECT_LE(j["threshold"].get<double>(), 1.0);
  EXPECT_EQ(run({"calibrate-threshold", "--lexicon", p().lexicon, "--vocab", p().vocab,
                 "--top-fraction", "1.5"}).code, 1);
}

TEST_F(Cli, CompareGrounding) {
  std::vector<std::string> args = {"compare-grounding", "--groups", p().groups, "--ungrounded"};
  args.insert(args.end(), p().ungrounded.begin(), p().ungrounded.end());
  args.push_back("--grounded");
  args.insert(args.end(), p().grounded.begin(), p().grounded.end());
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto recs = parse_report(r.out);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0]["payload"]["per_layer"].size(), 4u);
  const double rr = recs[0]["payload"]["r"].get<double>();
  EXPECT_GE(rr, -1.0);
  EXPECT_LE(rr, 1.0);

  args.pop_back();
  const auto misaligned = run(args);
  EXPECT_EQ(misaligned.code, 2);
}

}  // namespace
}  // namespace wordgeom
