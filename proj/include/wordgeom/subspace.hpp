// include/wordgeom/subspace.hpp

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

// PCA and LDA projections.
//
// Both fits return a Projection whose basis columns are unit length and carry
// a fixed sign (largest-magnitude entry positive), so repeated fits on the
// same data give bit-identical results.
//
// When the embedding dimension d exceeds the sample count n, all scatter lives
// in the (at most n-dimensional) span of the centered data. PCA then goes
// through the n x n Gram matrix and LDA solves its eigenproblem in an
// orthonormal basis of that span; outside it S_b vanishes and S_w + eps*I is
// eps*I, so no nonzero discriminant direction is lost.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "wordgeom/core.hpp"

namespace wordgeom {

enum class ProjectionKind { kPca, kLda };

inline const char* to_string(ProjectionKind k) { return k == ProjectionKind::kPca ? "pca" : "lda"; }

struct Projection {
  ProjectionKind kind = ProjectionKind::kPca;
  int input_dim = 0;
  int out_dim = 0;
  Vector mean;
  Matrix basis;  // input_dim x out_dim
  std::vector<double> eigenvalues;
};

struct LdaOptions {
  /// Ridge on the within-class scatter: eps = ridge_scale * trace(S_w) / d.
  double ridge_scale = 1e-6;
};

namespace detail {

inline void fix_signs(Matrix& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      const double m = std::fabs(basis(r, c));
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    if (basis(arg, c) < 0.0) basis.col(c) *= -1.0;
  }
}

// Top-k eigenpairs of a symmetric matrix, eigenvalues non-increasing.
inline void top_eigen(const Matrix& sym, int k, Matrix& vecs, std::vector<double>& vals) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
  const Eigen::Index m = sym.rows();
  vecs.resize(m, k);
  vals.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    vecs.col(i) = es.eigenvectors().col(m - 1 - i);
    vals[static_cast<std::size_t>(i)] = es.eigenvalues()(m - 1 - i);
  }
}

}  // namespace detail

/// Top-k principal axes of the sample covariance of `x` (rows are samples).
inline Projection pca_fit(const Matrix& x, int k) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (n < 2) throw DataError("pca_fit: need at least 2 samples");
  if (k < 1 || k > std::min<Eigen::Index>(n - 1, d))
    throw UsageError("pca_fit: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(std::min<Eigen::Index>(n - 1, d)) + "]");
  Projection p;
  p.kind = ProjectionKind::kPca;
  p.input_dim = static_cast<int>(d);
  p.out_dim = k;
  p.mean = x.colwise().mean().transpose();
  const Matrix xc = x.rowwise() - p.mean.transpose();
  const double scale = 1.0 / static_cast<double>(n - 1);

  bool done = false;
  if (d > n) {
    Matrix u;
    detail::top_eigen(scale * (xc * xc.transpose()), k, u, p.eigenvalues);
    const double top = std::max(p.eigenvalues.front(), 0.0);
    const bool full_rank = std::all_of(p.eigenvalues.begin(), p.eigenvalues.end(),
                                       [&](double v) { return v > 1e-12 * top && v > 0.0; });
    if (full_rank) {
      p.basis = xc.transpose() * u;
      for (Eigen::Index c = 0; c < p.basis.cols(); ++c) p.basis.col(c).normalize();
      done = true;
    }
  }
  if (!done) detail::top_eigen(scale * (xc.transpose() * xc), k, p.basis, p.eigenvalues);
  detail::fix_signs(p.basis);
  return p;
}

/// Fisher discriminant directions from S_b v = lambda (S_w + eps I) v.
inline Projection lda_fit(const Matrix& x, std::span<const int> labels, int k,
                          const LdaOptions& options = {}) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (labels.size() != static_cast<std::size_t>(n))
    throw DataError("lda_fit: label count does not match rows");
  std::map<int, std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < n; ++i) members[labels[static_cast<std::size_t>(i)]].push_back(i);
  const int classes = static_cast<int>(members.size());
  if (classes < 2) throw DataError("lda_fit: need at least 2 classes");
  for (const auto& [label, rows] : members)
    if (rows.size() < 2)
      throw DataError("lda_fit: class " + std::to_string(label) + " is a singleton");
  if (k < 1 || k > classes - 1)
    throw UsageError("LDA rank limit: k=" + std::to_string(k) + " but " +
                     std::to_string(classes) + " classes allow at most " +
                     std::to_string(classes - 1));
  if (k > d) throw UsageError("lda_fit: k exceeds input dimension");

  Projection p;
  p.kind = ProjectionKind::kLda;
  p.input_dim = static_cast<int>(d);
  p.out_dim = k;
  p.mean = x.colwise().mean().transpose();
  const Matrix xc = x.rowwise() - p.mean.transpose();

  // Coordinates in an orthonormal basis q of a space containing the data span.
  Matrix q;
  Matrix z;
  const bool reduce = d > n;
  if (reduce) {
    Eigen::HouseholderQR<Matrix> qr(xc.transpose());
    q = qr.householderQ() * Matrix::Identity(d, n);
    z = xc * q;
  } else {
    z = xc;
  }
  const Eigen::Index r = z.cols();

  Matrix sw = Matrix::Zero(r, r);
  Matrix sb = Matrix::Zero(r, r);
  const Vector grand = z.colwise().mean().transpose();
  for (const auto& [label, rows] : members) {
    Vector mu = Vector::Zero(r);
    for (Eigen::Index i : rows) mu += z.row(i).transpose();
    mu /= static_cast<double>(rows.size());
    for (Eigen::Index i : rows) {
      const Vector dev = z.row(i).transpose() - mu;
      sw.noalias() += dev * dev.transpose();
    }
    const Vector between = mu - grand;
    sb.noalias() += static_cast<double>(rows.size()) * between * between.transpose();
  }

  double trace = sw.trace();
  if (trace <= 0.0) trace = (sw + sb).trace();
  if (trace <= 0.0) throw DataError("lda_fit: data has zero variance");
  const double eps = options.ridge_scale * trace / static_cast<double>(d);

  Matrix reg = sw;
  reg.diagonal().array() += eps;
  Eigen::LLT<Matrix> llt(reg);
  if (llt.info() != Eigen::Success) throw Error("lda_fit: regularized S_w not positive definite");
  const Matrix l = llt.matrixL();
  const Matrix linv_sb =
      l.triangularView<Eigen::Lower>().solve(sb);
  Matrix whitened = l.triangularView<Eigen::Lower>().solve(linv_sb.transpose());
  whitened = 0.5 * (whitened + whitened.transpose()).eval();

  Matrix y;
  detail::top_eigen(whitened, k, y, p.eigenvalues);
  const Matrix a = l.transpose().triangularView<Eigen::Upper>().solve(y);
  p.basis = reduce ? Matrix(q * a) : a;
  for (Eigen::Index c = 0; c < p.basis.cols(); ++c) p.basis.col(c).normalize();
  detail::fix_signs(p.basis);
  return p;
}

/// (x - mean) * basis.
inline Matrix project(const Matrix& x, const Projection& p) {
  if (x.cols() != p.input_dim)
    throw DataError("project: input has " + std::to_string(x.cols()) +
                    " columns, projection expects " + std::to_string(p.input_dim));
  return (x.rowwise() - p.mean.transpose()) * p.basis;
}

}  // namespace wordgeom
