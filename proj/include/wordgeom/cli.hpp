// include/wordgeom/cli.hpp

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

// Command-line front end. cli_dispatch() takes the argument list without the
// program name and returns the exit status: 0 success, 1 usage error, 2 data
// error.

#pragma once

#include <algorithm>
#include <cstdio>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wordgeom/cluster.hpp"
#include "wordgeom/groups.hpp"
#include "wordgeom/grounding.hpp"
#include "wordgeom/io.hpp"
#include "wordgeom/pairs.hpp"
#include "wordgeom/plot.hpp"
#include "wordgeom/report.hpp"

namespace wordgeom {

namespace cli_detail {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "jsonl";
};

inline void emit(const Globals& g, std::ostream& out, const std::string& content) {
  if (g.out.empty())
    out << content;
  else
    write_file(g.out, content);
}

/// Loads dumps in parallel; results keep argument order.
inline std::vector<EmbeddingTable> load_tables(const std::vector<std::string>& paths,
                                               const EmbtReadOptions& options = {}) {
  std::vector<std::future<EmbeddingTable>> jobs;
  for (const auto& p : paths)
    jobs.push_back(std::async(std::launch::async, [p, options] { return read_embt(p, options); }));
  std::vector<EmbeddingTable> tables;
  for (auto& j : jobs) tables.push_back(j.get());
  return tables;
}

inline void sort_tables(std::vector<EmbeddingTable>& tables) {
  std::stable_sort(tables.begin(), tables.end(), [](const EmbeddingTable& a, const EmbeddingTable& b) {
    return std::tie(a.model_id, a.layer) < std::tie(b.model_id, b.layer);
  });
}

/// Value for humans: fixed six decimals with trailing zeros trimmed.
inline std::string display_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return s;
}

inline SilhouetteBetween parse_between(const std::string& s) {
  if (s == "nearest") return SilhouetteBetween::kNearestGroup;
  if (s == "all") return SilhouetteBetween::kAllOtherPoints;
  throw UsageError("unknown --between '" + s + "' (expected nearest or all)");
}

struct ResourcePaths {
  std::string lexicon, concreteness, vectors, vocab;
  std::string rating_word_col = "Word", rating_col = "Conc.M";
};

inline void add_builder_options(CLI::App* sub, BuilderParams& p) {
  sub->add_option("--within-max", p.phon_within_max, "max seed-to-member phonemic distance");
  sub->add_option("--across-min", p.phon_across_min, "min distance to words of other groups");
  sub->add_option("--sem-cos-max", p.sem_cos_max, "max static-embedding cosine inside a group");
  sub->add_option("--top-pct", p.conc_top_pct, "fraction of most concrete words");
  sub->add_option("--bottom-pct", p.conc_bottom_pct, "fraction of most abstract words");
  sub->add_option("--min-size", p.min_group_size, "minimum words per group");
  sub->add_option("--target", p.target_groups, "number of groups to build");
}

inline void add_resource_options(CLI::App* sub, ResourcePaths& r, bool need_vocab) {
  sub->add_option("--lexicon", r.lexicon, "pronunciation lexicon")->required();
  sub->add_option("--concreteness", r.concreteness, "concreteness ratings table")->required();
  sub->add_option("--vectors", r.vectors, "static word vectors")->required();
  auto* v = sub->add_option("--vocab", r.vocab, "candidate word list");
  if (need_vocab) v->required();
  sub->add_option("--rating-word-col", r.rating_word_col, "word column of the ratings table");
  sub->add_option("--rating-col", r.rating_col, "rating column of the ratings table");
}

inline nlohmann::json builder_params_json(const BuilderParams& p) {
  return {{"phon_within_max", p.phon_within_max}, {"phon_across_min", p.phon_across_min},
          {"sem_cos_max", p.sem_cos_max},         {"conc_top_pct", p.conc_top_pct},
          {"conc_bottom_pct", p.conc_bottom_pct}, {"min_group_size", p.min_group_size},
          {"target_groups", p.target_groups},     {"seed", p.seed}};
}

struct Resources {
  PhonemicLexicon lexicon;
  ConcretenessTable concreteness;
  StaticEmbeddingTable vectors;
};

inline Resources load_resources(const ResourcePaths& r, const std::optional<std::set<std::string>>& filter) {
  auto lex = std::async(std::launch::async, [&] { return read_lexicon(r.lexicon); });
  auto conc = std::async(std::launch::async, [&] {
    return read_concreteness(r.concreteness, RatingColumns{r.rating_word_col, r.rating_col});
  });
  auto vec = std::async(std::launch::async, [&] { return read_static_embeddings(r.vectors, filter); });
  return {lex.get(), conc.get(), vec.get()};
}

}  // namespace cli_detail

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"wordgeom: representational analyses of word embeddings", "wordgeom"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolkitVersion));
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();

  // cka
  auto* cka_cmd = app.add_subcommand("cka", "linear CKA between two dumps");
  std::string cka_a, cka_b, cka_match = "token";
  cka_cmd->add_option("a", cka_a, "first dump")->required();
  cka_cmd->add_option("b", cka_b, "second dump")->required();
  cka_cmd->add_option("--match", cka_match, "row matching: token ids or word occurrences")
      ->check(CLI::IsMember({"token", "word"}))
      ->capture_default_str();

  // pairs
  auto* pairs_cmd = app.add_subcommand("pairs", "word-pair similarity profile per layer");
  std::vector<std::string> pair_dumps;
  std::string pair_lexicon, pair_synonyms;
  PoolOptions pool_opts;
  SampleOptions sample_opts;
  bool no_same_speaker = false, dedup = false;
  pairs_cmd->add_option("dumps", pair_dumps, "layer dumps of one model")->required();
  pairs_cmd->add_option("--lexicon", pair_lexicon, "pronunciation lexicon")->required();
  pairs_cmd->add_option("--synonyms", pair_synonyms, "synonym sets")->required();
  pairs_cmd->add_option("--threshold", pool_opts.homophone_threshold, "near-homophone distance cutoff")
      ->capture_default_str();
  pairs_cmd->add_option("--n-per-class", sample_opts.n_per_class, "pairs drawn per class")
      ->capture_default_str();
  pairs_cmd->add_option("--repeats", sample_opts.repeats, "independent draws")->capture_default_str();
  pairs_cmd->add_option("--random-pool", pool_opts.random_pool_size, "size of the random pool")
      ->capture_default_str();
  pairs_cmd->add_option("--max-pool", pool_opts.max_pool_size, "cap on any class pool")
      ->capture_default_str();
  pairs_cmd->add_flag("--no-same-speaker", no_same_speaker, "skip the same-speaker class");
  pairs_cmd->add_flag("--dedup-per-speaker", dedup, "keep one token per speaker and word");

  // cluster
  auto* cluster_cmd = app.add_subcommand("cluster", "silhouette of word groups");
  std::vector<std::string> cl_dumps, cl_subspaces = {"full", "pca", "lda"};
  std::string cl_groups, cl_between = "nearest";
  int cl_k = 8;
  std::optional<std::size_t> cl_min_size;
  bool cl_loo = false, cl_split = false, cl_points = false;
  cluster_cmd->add_option("dumps", cl_dumps, "layer dumps")->required();
  cluster_cmd->add_option("--groups", cl_groups, "word group set (JSON)")->required();
  cluster_cmd->add_option("--subspace", cl_subspaces, "full, pca and/or lda")
      ->check(CLI::IsMember({"full", "pca", "lda"}))
      ->capture_default_str();
  cluster_cmd->add_option("--k", cl_k, "projection dimension")->capture_default_str();
  cluster_cmd->add_flag("--loo", cl_loo, "leave-one-group-out scores");
  cluster_cmd->add_flag("--split", cl_split, "add abstract/concrete split");
  cluster_cmd->add_flag("--points", cl_points, "emit first two LDA dimensions per word");
  cluster_cmd->add_option("--between", cl_between, "silhouette b(i): nearest group or all other points")
      ->check(CLI::IsMember({"nearest", "all"}))
      ->capture_default_str();
  cluster_cmd->add_option("--min-group-size", cl_min_size, "override the minimum group size");

  // build-groups
  auto* build_cmd = app.add_subcommand("build-groups", "construct phonetic word groups");
  ResourcePaths build_res;
  BuilderParams build_params;
  add_resource_options(build_cmd, build_res, true);
  add_builder_options(build_cmd, build_params);

  // validate-groups
  auto* validate_cmd = app.add_subcommand("validate-groups", "check a word group set");
  ResourcePaths val_res;
  BuilderParams val_params;
  SemanticCheckParams sem_params;
  std::string val_groups, val_asset, val_reference;
  std::optional<std::size_t> val_min_size;
  add_resource_options(validate_cmd, val_res, false);
  add_builder_options(validate_cmd, val_params);
  auto* groups_opt = validate_cmd->add_option("--groups", val_groups, "word group set (JSON)");
  auto* asset_opt = validate_cmd->add_option("--asset", val_asset, "semantic category asset (JSON)");
  groups_opt->excludes(asset_opt);
  validate_cmd->add_option("--reference-vocab", val_reference, "reference word list (semantic)");
  validate_cmd->add_option("--top-similarity", sem_params.top_similarity_fraction,
                           "similarity quantile for within-group cosines")
      ->capture_default_str();
  validate_cmd->add_option("--min-phon-dist", sem_params.min_avg_phon_dist,
                           "minimum average within-group phonemic distance")
      ->capture_default_str();
  validate_cmd->add_option("--samples", sem_params.n_samples, "reference pairs sampled")
      ->capture_default_str();
  validate_cmd->add_option("--min-group-size", val_min_size, "override the minimum group size");

  // calibrate-threshold
  auto* calib_cmd = app.add_subcommand("calibrate-threshold", "phonemic distance percentile");
  std::string cal_lexicon, cal_vocab;
  double cal_fraction = 0.1;
  std::size_t cal_samples = 100000;
  calib_cmd->add_option("--lexicon", cal_lexicon, "pronunciation lexicon")->required();
  calib_cmd->add_option("--vocab", cal_vocab, "word list")->required();
  calib_cmd->add_option("--top-fraction", cal_fraction, "fraction of most similar pairs")
      ->capture_default_str();
  calib_cmd->add_option("--samples", cal_samples, "random word pairs")->capture_default_str();

  // compare-grounding
  auto* ground_cmd = app.add_subcommand("compare-grounding", "grounded vs ungrounded model");
  std::vector<std::string> gr_ungrounded, gr_grounded;
  std::string gr_groups, gr_subspace = "lda";
  int gr_k = 8;
  std::optional<std::size_t> gr_min_size;
  ground_cmd->add_option("--ungrounded", gr_ungrounded, "layer dumps of the ungrounded model")->required();
  ground_cmd->add_option("--grounded", gr_grounded, "layer dumps of the grounded model")->required();
  ground_cmd->add_option("--groups", gr_groups, "word group set (JSON)")->required();
  ground_cmd->add_option("--k", gr_k, "LDA dimension")->capture_default_str();
  ground_cmd->add_option("--subspace", gr_subspace, "subspace of the silhouette sweeps")
      ->check(CLI::IsMember({"full", "pca", "lda"}))
      ->capture_default_str();
  ground_cmd->add_option("--min-group-size", gr_min_size, "override the minimum group size");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "SVG figure from a report");
  std::string plot_report, plot_kind = "line";
  std::optional<std::string> plot_type;
  plot_cmd->add_option("report", plot_report, "JSON-lines report")->required();
  plot_cmd->add_option("--kind", plot_kind, "line or scatter")
      ->check(CLI::IsMember({"line", "scatter"}))
      ->capture_default_str();
  plot_cmd->add_option("--record-type", plot_type, "record type to draw");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolkitVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    const ReportFormat format = parse_report_format(g.format);
    ReportContext ctx;
    ctx.seed = g.seed;

    if (cka_cmd->parsed()) {
      auto tables = load_tables({cka_a, cka_b});
      const auto pairing =
          match_words(tables[0], tables[1], cka_match == "word" ? MatchMode::kWord : MatchMode::kTokenId);
      const auto [x, y] = aligned_matrices(tables[0], tables[1], pairing);
      const double value = linear_cka(x, y);
      out << display_number(value) << "\n";
      if (!g.out.empty()) {
        ctx.params = {{"command", "cka"}, {"match", cka_match}};
        write_file(g.out, emit_report({cka_record(tables[0].model_id, tables[0].layer,
                                                  tables[1].model_id, tables[1].layer, value,
                                                  pairing.size())},
                                      ctx, format));
      }
      return 0;
    }

    if (pairs_cmd->parsed()) {
      pool_opts.same_speaker = !no_same_speaker;
      pool_opts.seed = Rng::substream(g.seed, 0).next();
      sample_opts.seed = Rng::substream(g.seed, 1).next();
      auto tables = load_tables(pair_dumps, EmbtReadOptions{dedup});
      const PhonemicLexicon lexicon = read_lexicon(pair_lexicon);
      std::size_t dropped = 0;
      const SynonymSets synonyms = read_synonyms(pair_synonyms, &dropped);
      if (dropped) err << "warning: dropped " << dropped << " synonym sets with fewer than 2 words\n";
      std::vector<EmbeddingTable> sorted = tables;
      sort_tables(sorted);
      const PairPool pool = build_pair_pool(sorted.front(), lexicon, synonyms, pool_opts);
      for (const auto& w : pool.warnings) err << "warning: " << w << "\n";
      const auto profiles = profile_across_layers(sorted, pool.pairs, sample_opts);
      std::vector<ReportRecord> records;
      for (const auto& p : profiles) {
        for (PairClass c : p.with_replacement)
          err << "warning: layer " << p.layer << ": " << to_string(c)
              << " pool smaller than the sample; drawn with replacement\n";
        records.push_back(pair_profile_record(p));
      }
      ctx.params = {{"command", "pairs"},
                    {"threshold", pool_opts.homophone_threshold},
                    {"n_per_class", sample_opts.n_per_class},
                    {"repeats", sample_opts.repeats},
                    {"random_pool", pool_opts.random_pool_size},
                    {"max_pool", pool_opts.max_pool_size},
                    {"same_speaker", pool_opts.same_speaker},
                    {"dedup_per_speaker", dedup}};
      emit(g, out, emit_report(records, ctx, format));
      return 0;
    }

    if (cluster_cmd->parsed()) {
      const WordGroupSet groups = read_group_set(cl_groups, cl_min_size);
      auto tables = load_tables(cl_dumps);
      sort_tables(tables);
      ClusterOptions copts;
      copts.between = parse_between(cl_between);
      std::vector<ReportRecord> records;
      for (const auto& t : tables) {
        for (const auto& name : cl_subspaces) {
          const Subspace s = parse_subspace(name);
          ClusterScore cs;
          cs.model_id = t.model_id;
          cs.layer = t.layer;
          cs.subspace = s;
          if (s != Subspace::kFull) cs.k = cl_k;
          if (cl_loo) {
            LooResult loo = loo_score(t, groups, s, cl_k, copts);
            cs.score = loo.score;
            cs.iterations = std::move(loo.per_iteration);
          } else {
            const GroupMatrix gm = group_matrix(t, groups);
            cs.score = IntervalEstimate::point(subspace_silhouette(gm.x, gm.labels, s, cl_k, copts));
          }
          if (cl_split) cs.concreteness_split = concreteness_split(t, groups, s, cl_k, copts);
          records.push_back(cluster_score_record(cs));
        }
        if (cl_points) {
          const GroupMatrix gm = group_matrix(t, groups);
          const Matrix projected = project(gm.x, lda_fit(gm.x, gm.labels, cl_k, copts.lda));
          records.push_back(lda_points_record(t.model_id, t.layer, cl_k, gm, groups, projected));
        }
        const GroupMatrix gm = group_matrix(t, groups);
        for (const auto& w : gm.warnings) err << "warning: " << t.model_id << "/" << t.layer << ": " << w << "\n";
      }
      ctx.params = {{"command", "cluster"}, {"subspaces", cl_subspaces}, {"k", cl_k},
                    {"loo", cl_loo},        {"split", cl_split},         {"points", cl_points},
                    {"between", cl_between}};
      emit(g, out, emit_report(records, ctx, format));
      return 0;
    }

    if (build_cmd->parsed()) {
      build_params.seed = g.seed;
      const auto vocab = read_word_list(build_res.vocab);
      const std::set<std::string> filter(vocab.begin(), vocab.end());
      const Resources res = load_resources(build_res, filter);
      const WordGroupSet set =
          build_phonetic_groups(res.lexicon, res.concreteness, res.vectors, vocab, build_params);
      if (set.groups.size() < static_cast<std::size_t>(build_params.target_groups))
        err << "warning: built " << set.groups.size() << " of " << build_params.target_groups
            << " requested groups\n";
      Json doc = group_set_to_json(set);
      doc["params"] = builder_params_json(build_params);
      doc["toolkit_version"] = kToolkitVersion;
      emit(g, out, doc.dump(2) + "\n");
      return 0;
    }

    if (validate_cmd->parsed()) {
      if (val_groups.empty() && val_asset.empty())
        throw UsageError("validate-groups needs --groups or --asset");
      WordGroupSet set;
      std::optional<SemanticAsset> asset;
      if (!val_asset.empty()) {
        asset = read_semantic_asset(val_asset);
        set = asset->to_group_set();
      } else {
        set = read_group_set(val_groups, val_min_size);
      }
      Json doc;
      doc["kind"] = to_string(set.kind);
      if (set.kind == GroupKind::kPhonetic) {
        if (val_res.vocab.empty()) throw UsageError("phonetic validation needs --vocab");
        val_params.seed = g.seed;
        const auto vocab = read_word_list(val_res.vocab);
        const Resources res = load_resources(val_res, std::nullopt);
        const PhoneticValidation v = validate_phonetic_groups(set, res.lexicon, res.concreteness,
                                                              res.vectors, vocab, val_params);
        doc["ok"] = v.problems.empty();
        doc["problems"] = v.problems;
        doc["params"] = builder_params_json(val_params);
      } else {
        if (val_reference.empty()) throw UsageError("semantic validation needs --reference-vocab");
        sem_params.seed = g.seed;
        const auto reference = read_word_list(val_reference);
        const Resources res = load_resources(val_res, std::nullopt);
        const ValidationReport r = validate_semantic_groups(set, res.vectors, res.lexicon,
                                                            res.concreteness, reference, sem_params);
        doc["ok"] = r.overall_ok;
        doc["similarity_threshold"] = r.similarity_threshold;
        doc["groups"] = Json::array();
        for (std::size_t i = 0; i < r.per_group.size(); ++i) {
          const GroupValidation& gv = r.per_group[i];
          Json gj = {{"name", gv.name},
                     {"n_words", gv.n_words},
                     {"avg_concreteness", gv.avg_concreteness},
                     {"sd_concreteness", gv.sd_concreteness},
                     {"avg_phon_dist", gv.avg_phon_dist},
                     {"sd_phon_dist", gv.sd_phon_dist},
                     {"min_within_similarity", gv.min_within_similarity},
                     {"within_sim_percentile_ok", gv.within_sim_percentile_ok},
                     {"phon_dist_ok", gv.phon_dist_ok}};
          if (asset) {
            const SemanticCategory& c = asset->categories[i];
            gj["reference"] = {{"concreteness", {{"mean", c.concreteness.mean}, {"sd", c.concreteness.sd}}},
                               {"phon_dist", {{"mean", c.phon_dist.mean}, {"sd", c.phon_dist.sd}}}};
          }
          doc["groups"].push_back(std::move(gj));
        }
        doc["params"] = {{"top_similarity_fraction", sem_params.top_similarity_fraction},
                         {"min_avg_phon_dist", sem_params.min_avg_phon_dist},
                         {"n_samples", sem_params.n_samples},
                         {"seed", sem_params.seed}};
      }
      if (!doc["ok"].get<bool>()) err << "validation failed\n";
      emit(g, out, doc.dump(2) + "\n");
      return 0;
    }

    if (calib_cmd->parsed()) {
      if (!(cal_fraction > 0.0 && cal_fraction < 1.0)) throw UsageError("--top-fraction must lie in (0, 1)");
      if (cal_samples < 1) throw UsageError("--samples must be >= 1");
      const PhonemicLexicon lexicon = read_lexicon(cal_lexicon);
      const auto vocab = read_word_list(cal_vocab);
      const double t = percentile_threshold(lexicon, vocab, cal_fraction, cal_samples, g.seed);
      Json doc = {{"threshold", t},
                  {"top_fraction", cal_fraction},
                  {"n_samples", cal_samples},
                  {"seed", g.seed},
                  {"toolkit_version", kToolkitVersion}};
      emit(g, out, doc.dump() + "\n");
      return 0;
    }

    if (ground_cmd->parsed()) {
      const WordGroupSet groups = read_group_set(gr_groups, gr_min_size);
      auto ungrounded_f = std::async(std::launch::async, [&] { return load_tables(gr_ungrounded); });
      auto grounded = load_tables(gr_grounded);
      auto ungrounded = ungrounded_f.get();
      sort_tables(ungrounded);
      sort_tables(grounded);
      const Subspace s = parse_subspace(gr_subspace);
      const auto sweep_u = layer_sweep(ungrounded, groups, s, gr_k);
      const auto sweep_g = layer_sweep(grounded, groups, s, gr_k);
      std::map<int, const EmbeddingTable*> by_layer;
      for (const auto& t : grounded) by_layer[t.layer] = &t;
      std::vector<LayerCka> ckas;
      for (const auto& t : ungrounded) {
        auto it = by_layer.find(t.layer);
        if (it == by_layer.end())
          throw DataError("layer " + std::to_string(t.layer) + " has no grounded counterpart");
        ckas.push_back({t.layer, lda_subspace_cka(t, *it->second, groups, gr_k)});
      }
      const GroundingComparison cmp = grounding_correlation(sweep_u, sweep_g, ckas);
      ctx.params = {{"command", "compare-grounding"}, {"k", gr_k}, {"subspace", gr_subspace}};
      emit(g, out,
           emit_report({grounding_record(ungrounded.front().model_id, grounded.front().model_id, cmp)},
                       ctx, format));
      return 0;
    }

    if (plot_cmd->parsed()) {
      const auto report = read_report(plot_report);
      emit(g, out, emit_plot(report, parse_figure_kind(plot_kind), plot_type));
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace wordgeom
