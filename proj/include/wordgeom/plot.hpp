// include/wordgeom/plot.hpp

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

// SVG figures from report records.
//
// Line figures plot one polyline per series against layer:
//   cluster_score  one series per subspace (per model when several)
//   pair_profile   one series per pair class
//   cka            one series per model pair, over layer_a
//   grounding      lda_cka and delta_silhouette
// Scatter figures draw one circle per word of an lda_points record.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wordgeom/report.hpp"

namespace wordgeom {

enum class FigureKind { kLine, kScatter };

inline FigureKind parse_figure_kind(const std::string& s) {
  if (s == "line") return FigureKind::kLine;
  if (s == "scatter") return FigureKind::kScatter;
  throw UsageError("unknown figure kind '" + s + "' (expected line or scatter)");
}

namespace detail {

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                 "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                 "#8c6d31", "#843c39", "#7b4173"};
  return colors[i % std::size(colors)];
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct SeriesPoint {
  double x = 0, y = 0;
  std::optional<double> lo = std::nullopt, hi = std::nullopt;
};

struct Canvas {
  static constexpr double kWidth = 720, kHeight = 440;
  static constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }

  void fit(double xmin, double xmax, double ymin, double ymax) {
    if (xmax <= xmin) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (ymax <= ymin) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    x0 = xmin, x1 = xmax, y0 = ymin - pad, y1 = ymax + pad;
  }
};

inline std::string svg_open(const std::string& title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(Canvas::kWidth) + "\" height=\"" +
       fmt(Canvas::kHeight) + "\" viewBox=\"0 0 " + fmt(Canvas::kWidth) + " " + fmt(Canvas::kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(Canvas::kWidth / 2 - 40) + "\" y=\"22\" font-size=\"14\">" +
       xml_escape(title) + "</text>\n";
  return s;
}

inline std::string svg_axes(const Canvas& c, const std::string& xlabel, const std::string& ylabel,
                            bool integer_x) {
  std::string s;
  const double left = Canvas::kLeft, bottom = Canvas::kHeight - Canvas::kBottom;
  const double right = Canvas::kWidth - Canvas::kRight, top = Canvas::kTop;
  s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(right) + "\" y2=\"" +
       fmt(bottom) + "\"/>\n";
  s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
       fmt(top) + "\"/>\n";
  s += "</g>\n<g class=\"ticks\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = c.y0 + (c.y1 - c.y0) * i / 5.0;
    s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(c.py(y) + 4) + "\" text-anchor=\"end\">" +
         tick_label(y) + "</text>\n";
  }
  if (integer_x) {
    const int lo = static_cast<int>(std::ceil(c.x0)), hi = static_cast<int>(std::floor(c.x1));
    const int step = std::max(1, (hi - lo) / 12 + 1);
    for (int x = lo; x <= hi; x += step)
      s += "<text x=\"" + fmt(c.px(x)) + "\" y=\"" + fmt(bottom + 16) + "\" text-anchor=\"middle\">" +
           std::to_string(x) + "</text>\n";
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double x = c.x0 + (c.x1 - c.x0) * i / 5.0;
      s += "<text x=\"" + fmt(c.px(x)) + "\" y=\"" + fmt(bottom + 16) +
           "\" text-anchor=\"middle\">" + tick_label(x) + "</text>\n";
    }
  }
  s += "</g>\n";
  s += "<text x=\"" + fmt((left + right) / 2) + "\" y=\"" + fmt(Canvas::kHeight - 12) +
       "\" text-anchor=\"middle\">" + xml_escape(xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt((top + bottom) / 2) + "\" transform=\"rotate(-90 16 " +
       fmt((top + bottom) / 2) + ")\" text-anchor=\"middle\">" + xml_escape(ylabel) + "</text>\n";
  return s;
}

inline std::string svg_legend(const std::vector<std::string>& names) {
  std::string s = "<g class=\"legend\">\n";
  const double x = Canvas::kWidth - Canvas::kRight + 16;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = Canvas::kTop + 14.0 * static_cast<double>(i);
    s += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"10\" height=\"10\" fill=\"" +
         palette(i) + "\"/>\n";
    s += "<text x=\"" + fmt(x + 14) + "\" y=\"" + fmt(y + 9) + "\">" + xml_escape(names[i]) +
         "</text>\n";
  }
  return s + "</g>\n";
}

using SeriesMap = std::map<std::string, std::vector<SeriesPoint>>;

inline SeriesMap line_series(const std::vector<Json>& records, const std::string& type,
                             std::string& ylabel) {
  SeriesMap series;
  std::set<std::string> models;
  if (type == "cluster_score")
    for (const auto& r : records) models.insert(r["payload"]["model_id"].get<std::string>());
  for (const auto& r : records) {
    const Json& p = r.at("payload");
    auto with_interval = [](double x, const Json& e) {
      return SeriesPoint{x, e.at("mean").get<double>(), e.at("lo").get<double>(),
                         e.at("hi").get<double>()};
    };
    if (type == "cluster_score") {
      std::string name = p.at("subspace").get<std::string>();
      if (!p.at("k").is_null()) name += "-" + p.at("k").dump();
      if (models.size() > 1) name = p.at("model_id").get<std::string>() + " " + name;
      series[name].push_back(with_interval(p.at("layer").get<double>(), p.at("score")));
      ylabel = "silhouette score";
    } else if (type == "pair_profile") {
      const double x = p.at("layer").get<double>();
      const std::string model = p.at("model_id").get<std::string>();
      for (const auto& [cls, e] : p.at("per_class").items())
        series[model + " " + cls].push_back(with_interval(x, e));
      ylabel = "normalized cosine similarity";
    } else if (type == "cka") {
      const std::string name = p.at("model_a").get<std::string>() + " vs " +
                               p.at("model_b").get<std::string>();
      series[name].push_back({p.at("layer_a").get<double>(), p.at("value").get<double>(), {}, {}});
      ylabel = "linear CKA";
    } else if (type == "grounding") {
      const std::string model = p.at("grounded_model").get<std::string>();
      for (const auto& l : p.at("per_layer")) {
        const double x = l.at("layer").get<double>();
        series[model + " lda_cka"].push_back({x, l.at("lda_cka").get<double>(), {}, {}});
        series[model + " delta_silhouette"].push_back(
            {x, l.at("delta_silhouette").get<double>(), {}, {}});
      }
      ylabel = "value";
    }
  }
  for (auto& [name, pts] : series)
    std::stable_sort(pts.begin(), pts.end(),
                     [](const SeriesPoint& a, const SeriesPoint& b) { return a.x < b.x; });
  return series;
}

inline std::string line_figure(const std::vector<Json>& records, const std::string& type) {
  std::string ylabel;
  const SeriesMap series = line_series(records, type, ylabel);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : series)
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min({ymin, p.y, p.lo.value_or(p.y)});
      ymax = std::max({ymax, p.y, p.hi.value_or(p.y)});
    }
  Canvas c;
  c.fit(xmin, xmax, ymin, ymax);
  std::string s = svg_open(type);
  s += svg_axes(c, "layer", ylabel, true);
  std::vector<std::string> names;
  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    names.push_back(name);
    const char* color = palette(idx++);
    s += "<g class=\"series\" data-name=\"" + xml_escape(name) + "\">\n";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += fmt(c.px(pts[i].x)) + "," + fmt(c.py(pts[i].y));
    }
    s += "\"/>\n";
    for (const auto& p : pts)
      if (p.lo && p.hi && *p.hi > *p.lo)
        s += "<line class=\"ci\" stroke=\"" + std::string(color) + "\" x1=\"" + fmt(c.px(p.x)) +
             "\" y1=\"" + fmt(c.py(*p.lo)) + "\" x2=\"" + fmt(c.px(p.x)) + "\" y2=\"" +
             fmt(c.py(*p.hi)) + "\"/>\n";
    s += "</g>\n";
  }
  s += svg_legend(names);
  return s + "</svg>\n";
}

inline std::string scatter_figure(const std::vector<Json>& records) {
  struct Pt {
    double x, y;
    std::string word, group;
  };
  std::vector<Pt> pts;
  std::vector<std::string> groups;
  for (const auto& r : records)
    for (const auto& p : r.at("payload").at("points")) {
      Pt pt{p.at("x").get<double>(), p.at("y").get<double>(), p.at("word").get<std::string>(),
            p.at("group").get<std::string>()};
      if (std::find(groups.begin(), groups.end(), pt.group) == groups.end())
        groups.push_back(pt.group);
      pts.push_back(std::move(pt));
    }
  if (pts.empty()) throw DataError("nothing to plot");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  Canvas c;
  const double padx = 0.05 * (xmax - xmin);
  c.fit(xmin - padx, xmax + padx, ymin, ymax);
  const Json& first = records.front().at("payload");
  std::string s = svg_open(first.at("model_id").get<std::string>() + " layer " +
                           first.at("layer").dump());
  s += svg_axes(c, "LD1", "LD2", false);
  s += "<g class=\"points\">\n";
  for (const auto& p : pts) {
    const auto gi = static_cast<std::size_t>(
        std::find(groups.begin(), groups.end(), p.group) - groups.begin());
    s += "<circle cx=\"" + fmt(c.px(p.x)) + "\" cy=\"" + fmt(c.py(p.y)) + "\" r=\"3\" fill=\"" +
         palette(gi) + "\"><title>" + xml_escape(p.word) + "</title></circle>\n";
  }
  s += "</g>\n";
  s += svg_legend(groups);
  return s + "</svg>\n";
}

}  // namespace detail

/// Renders report records as an SVG document. `record_type` selects which
/// records to draw when a report mixes several plottable types.
inline std::string emit_plot(const std::vector<Json>& report, FigureKind kind,
                             const std::optional<std::string>& record_type = std::nullopt) {
  for (const auto& r : report) {
    const std::string t = r.at("record_type").get<std::string>();
    if (!known_record_types().count(t)) throw DataError("unknown record_type '" + t + "'");
  }
  if (kind == FigureKind::kScatter) {
    std::vector<Json> pts;
    for (const auto& r : report)
      if (r.at("record_type") == "lda_points") pts.push_back(r);
    if (pts.empty()) throw DataError("nothing to plot");
    return detail::scatter_figure(pts);
  }
  std::set<std::string> types;
  for (const auto& r : report)
    if (r.at("record_type") != "lda_points") types.insert(r.at("record_type").get<std::string>());
  std::string type;
  if (record_type) {
    type = *record_type;
    if (!known_record_types().count(type) || type == "lda_points")
      throw UsageError("record type '" + type + "' cannot be drawn as a line figure");
  } else {
    if (types.size() > 1)
      throw UsageError("report mixes record types; choose one with --record-type");
    if (types.empty()) throw DataError("nothing to plot");
    type = *types.begin();
  }
  std::vector<Json> chosen;
  for (const auto& r : report)
    if (r.at("record_type") == type) chosen.push_back(r);
  if (chosen.empty()) throw DataError("nothing to plot");
  return detail::line_figure(chosen, type);
}

}  // namespace wordgeom
