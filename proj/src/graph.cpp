#include "ronmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ronmf {

GraphScheme GraphScheme::heat(double bandwidth) {
  if (bandwidth <= 0.0) throw ContractViolation("heat kernel bandwidth must be > 0");
  return {Kind::Heat, bandwidth};
}

Eigen::Index GraphContext::num_labeled() const {
  return std::count(labeled_mask.begin(), labeled_mask.end(), true);
}

Matrix build_knn_graph(const DataMatrix& data, int knn, const GraphScheme& scheme) {
  const Eigen::Index n = data.num_samples();
  if (knn < 1 || knn >= n) throw ContractViolation("knn must satisfy 1 <= knn < n");

  // Squared pairwise distances via the Gram expansion.
  const Matrix& X = data.values;
  const Vector sq = X.colwise().squaredNorm();
  Matrix dist2 = (-2.0 * (X.transpose() * X)).eval();
  dist2.colwise() += sq;
  dist2.rowwise() += sq.transpose();
  dist2 = dist2.cwiseMax(0.0);

  Matrix W = Matrix::Zero(n, n);
  std::vector<Eigen::Index> cand;
  cand.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    cand.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) cand.push_back(j);
    }
    // (distance, index) ordering makes the lower index win ties.
    std::partial_sort(cand.begin(), cand.begin() + knn, cand.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const double da = dist2(i, a), db = dist2(i, b);
                        return da < db || (da == db && a < b);
                      });
    for (int k = 0; k < knn; ++k) {
      const Eigen::Index j = cand[static_cast<std::size_t>(k)];
      const double w = scheme.kind == GraphScheme::Kind::Binary
                           ? 1.0
                           : std::exp(-dist2(i, j) / (scheme.bandwidth * scheme.bandwidth));
      // Union symmetrization.
      W(i, j) = std::max(W(i, j), w);
      W(j, i) = W(i, j);
    }
  }
  W.diagonal().setZero();
  return W;
}

std::pair<Vector, Matrix> laplacian(const Matrix& W) {
  const Eigen::Index n = W.rows();
  if (W.cols() != n) throw ContractViolation("laplacian: W must be square");
  if (((W - W.transpose()).array().abs() > 1e-12).any()) {
    throw ContractViolation("laplacian: W must be symmetric");
  }
  if ((W.array() < 0.0).any()) throw ContractViolation("laplacian: W must be non-negative");
  if ((W.diagonal().array() != 0.0).any()) {
    throw ContractViolation("laplacian: W must have a zero diagonal");
  }
  Vector degrees = W.rowwise().sum();
  Matrix L = -W;
  L.diagonal() += degrees;
  return {std::move(degrees), std::move(L)};
}

LabelStructures build_label_structures(const DataMatrix& data, double p, std::uint64_t seed) {
  if (!data.has_labels()) {
    throw ContractViolation("build_label_structures: data has no ground-truth labels");
  }
  if (p <= 0.0 || p > 1.0) throw ContractViolation("labeled fraction p must be in (0, 1]");
  const Eigen::Index n = data.num_samples();
  const int c = data.num_classes;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = data.labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= c) {
      throw ContractViolation("build_label_structures: sample " + std::to_string(i) +
                              " lacks a valid ground-truth label");
    }
  }

  std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(c));
  for (Eigen::Index i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])].push_back(i);
  }

  LabelStructures out;
  out.Y = Matrix::Zero(n, c);
  out.S = Vector::Zero(n);
  out.labeled_mask.assign(static_cast<std::size_t>(n), false);

  std::mt19937_64 rng(seed);
  for (int j = 0; j < c; ++j) {
    auto& members = by_class[static_cast<std::size_t>(j)];
    if (members.empty()) {
      throw ContractViolation("class " + std::to_string(j) + " has zero samples");
    }
    const auto take =
        static_cast<std::size_t>(std::ceil(p * static_cast<double>(members.size())));
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t k = 0; k < take; ++k) {
      const Eigen::Index i = members[k];
      out.labeled_mask[static_cast<std::size_t>(i)] = true;
      out.S(i) = 1.0;
      out.Y(i, j) = 1.0;
    }
  }
  return out;
}

GraphContext build_graph_context(const DataMatrix& data, int knn, const GraphScheme& scheme,
                                 double p, std::uint64_t seed) {
  GraphContext ctx;
  ctx.W = build_knn_graph(data, knn, scheme);
  std::tie(ctx.degrees, ctx.L) = laplacian(ctx.W);
  auto labels = build_label_structures(data, p, seed);
  ctx.Y = std::move(labels.Y);
  ctx.S = std::move(labels.S);
  ctx.labeled_mask = std::move(labels.labeled_mask);
  ctx.num_classes = data.num_classes;
  return ctx;
}

}  // namespace ronmf
