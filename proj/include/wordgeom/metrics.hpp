// include/wordgeom/metrics.hpp

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

// Scalar kernels shared by the analyses: cosine similarity, phoneme edit
// distance, linear CKA, silhouette, Pearson correlation, t intervals.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "wordgeom/core.hpp"
#include "wordgeom/stats.hpp"

namespace wordgeom {

struct IntervalEstimate {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int n_samples = 0;

  double half_width() const { return 0.5 * (hi - lo); }
  bool overlaps(const IntervalEstimate& o) const { return lo <= o.hi && o.lo <= hi; }
  bool operator==(const IntervalEstimate&) const = default;

  static IntervalEstimate point(double v) { return {v, v, v, 1}; }
};

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  int n = 0;
};

// ---------------------------------------------------------------------------
// Cosine.

inline double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw DataError("cosine_similarity: dimension mismatch " + std::to_string(u.size()) +
                    " vs " + std::to_string(v.size()));
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw DataError("cosine_similarity: zero-norm vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

/// Rows scaled to unit length; throws on a zero row.
inline Matrix normalize_rows(const Matrix& x) {
  Matrix out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n == 0.0) throw DataError("zero-norm vector at row " + std::to_string(i));
    out.row(i) /= n;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edit distance over phoneme symbols.

/// Unit-cost Levenshtein distance between two symbol sequences.
template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Edit distance divided by the longer length; both sequences non-empty.
template <class T>
double normalized_levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) throw DataError("normalized_levenshtein: empty sequence");
  return static_cast<double>(levenshtein(a, b)) /
         static_cast<double>(std::max(a.size(), b.size()));
}

inline double normalized_levenshtein(const Pronunciation& a, const Pronunciation& b) {
  return normalized_levenshtein(std::span<const std::string>(a), std::span<const std::string>(b));
}

/// Minimum normalized distance over all pronunciation pairs of two words.
inline double word_distance(const std::string& w1, const std::string& w2,
                            const PhonemicLexicon& lexicon) {
  const auto& pa = lexicon.pronunciations(w1);
  const auto& pb = lexicon.pronunciations(w2);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : pa)
    for (const auto& b : pb) best = std::min(best, normalized_levenshtein(a, b));
  return best;
}

// ---------------------------------------------------------------------------
// Centered kernel alignment.

enum class CkaKernel { kLinear };

/// Linear CKA with the biased (feature-space) estimator:
/// ||Yc' Xc||_F^2 / (||Xc' Xc||_F ||Yc' Yc||_F) on column-centered inputs.
///
/// The cross term is evaluated in both orientations and summed so that
/// swapping the arguments gives a bit-identical result.
inline double linear_cka(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows())
    throw DataError("linear_cka: row counts differ (" + std::to_string(x.rows()) + " vs " +
                    std::to_string(y.rows()) + ")");
  if (x.rows() < 3) throw DataError("linear_cka: need at least 3 aligned rows");
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix yc = y.rowwise() - y.colwise().mean();
  if (xc.squaredNorm() == 0.0 || yc.squaredNorm() == 0.0)
    throw DataError("linear_cka: centered matrix is all zero");
  const double cross = 0.5 * ((xc.transpose() * yc).squaredNorm() +
                              (yc.transpose() * xc).squaredNorm());
  const double self_x = (xc.transpose() * xc).norm();
  const double self_y = (yc.transpose() * yc).norm();
  return cross / (self_x * self_y);
}

inline double cka(const Matrix& x, const Matrix& y, CkaKernel kernel = CkaKernel::kLinear) {
  switch (kernel) {
    case CkaKernel::kLinear: return linear_cka(x, y);
  }
  throw UsageError("unsupported CKA kernel");
}

// ---------------------------------------------------------------------------
// Silhouette with cosine distance.

/// How b(i) is formed from the other groups.
enum class SilhouetteBetween {
  kNearestGroup,    ///< min over other groups of the mean distance (classic)
  kAllOtherPoints,  ///< mean distance to every point outside the own group
};

/// Per-point silhouettes s(i) = (b - a) / max(a, b) under cosine distance.
/// Labels are arbitrary integers; needs >= 2 labels with >= 2 members each.
inline std::vector<double> silhouette_samples(
    const Matrix& x, std::span<const int> labels,
    SilhouetteBetween between = SilhouetteBetween::kNearestGroup) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n) throw DataError("silhouette: label count does not match rows");
  std::map<int, std::size_t> sizes;
  for (int l : labels) ++sizes[l];
  if (sizes.size() < 2) throw DataError("silhouette: need at least 2 groups");
  for (const auto& [label, count] : sizes)
    if (count < 2)
      throw DataError("silhouette: group " + std::to_string(label) + " has a single member");

  std::map<int, std::size_t> slot;
  for (const auto& [label, count] : sizes) slot.emplace(label, slot.size());
  std::vector<std::size_t> group(n);
  std::vector<double> group_size(sizes.size());
  for (std::size_t i = 0; i < n; ++i) group[i] = slot.at(labels[i]);
  for (const auto& [label, count] : sizes) group_size[slot.at(label)] = static_cast<double>(count);

  const Matrix unit = normalize_rows(x);
  const Matrix sim = unit * unit.transpose();

  std::vector<double> out(n);
  std::vector<double> sums(sizes.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s = std::clamp(sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                                  -1.0, 1.0);
      sums[group[j]] += 1.0 - s;
    }
    const std::size_t own = group[i];
    const double a = sums[own] / (group_size[own] - 1.0);
    double b;
    if (between == SilhouetteBetween::kNearestGroup) {
      b = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < sums.size(); ++g)
        if (g != own) b = std::min(b, sums[g] / group_size[g]);
    } else {
      double total = 0.0, count = 0.0;
      for (std::size_t g = 0; g < sums.size(); ++g)
        if (g != own) {
          total += sums[g];
          count += group_size[g];
        }
      b = total / count;
    }
    const double denom = std::max(a, b);
    out[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return out;
}

inline double silhouette_mean(const Matrix& x, std::span<const int> labels,
                              SilhouetteBetween between = SilhouetteBetween::kNearestGroup) {
  const auto s = silhouette_samples(x, labels, between);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

// ---------------------------------------------------------------------------
// Correlation and intervals.

inline CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: sequences differ in length");
  if (x.size() < 3) throw DataError("pearson: need at least 3 observations");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  CorrelationResult out;
  out.r = r;
  out.n = static_cast<int>(x.size());
  const double dof = n - 2.0;
  if (std::fabs(r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    out.p_value = std::clamp(stats::student_t_two_tailed_p(t, dof), 0.0, 1.0);
  }
  return out;
}

/// Mean with a two-sided 95% Student-t interval.
inline IntervalEstimate ci95(std::span<const double> samples) {
  if (samples.size() < 2) throw DataError("ci95: need at least 2 samples");
  const auto n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double half = stats::student_t_quantile(0.975, n - 1.0) * sd / std::sqrt(n);
  return {mean, mean - half, mean + half, static_cast<int>(samples.size())};
}

/// Sample mean and (n-1) standard deviation.
inline std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  const auto n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double s : v) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace wordgeom
