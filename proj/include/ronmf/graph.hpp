#pragma once

#include "ronmf/types.hpp"

#include <cstdint>

namespace ronmf {

/// kNN weight scheme. Heat weights are exp(−‖xᵢ−xⱼ‖²/bandwidth²).
struct GraphScheme {
  enum class Kind { Binary, Heat } kind = Kind::Binary;
  double bandwidth = 1.0;

  static GraphScheme binary() { return {Kind::Binary, 0.0}; }
  static GraphScheme heat(double bandwidth);
};

/// Affinity graph, Laplacian and semi-supervised label structures shared by
/// the solver. Immutable once built.
struct GraphContext {
  Matrix W;                        // n×n symmetric, zero diagonal
  Vector degrees;                  // diagonal of D
  Matrix L;                        // D − W
  Matrix Y;                        // n×c, one-hot on labeled rows, zero elsewhere
  Vector S;                        // diagonal of the 0/1 label indicator
  std::vector<bool> labeled_mask;  // length n
  int num_classes = 0;

  Eigen::Index num_samples() const { return W.rows(); }
  Eigen::Index num_labeled() const;
};

/// Union-symmetrized kNN affinity over the columns of `data`. Ties in
/// distance break toward the lower sample index.
Matrix build_knn_graph(const DataMatrix& data, int knn, const GraphScheme& scheme);

/// Degree vector and unnormalized Laplacian L = D − W.
/// Throws ContractViolation if W is asymmetric, has a nonzero diagonal or
/// negative weights.
std::pair<Vector, Matrix> laplacian(const Matrix& W);

struct LabelStructures {
  Matrix Y;
  Vector S;
  std::vector<bool> labeled_mask;
};

/// Stratified selection of ⌈p·n_j⌉ labeled samples per class j.
/// Requires every sample to carry a ground-truth label.
LabelStructures build_label_structures(const DataMatrix& data, double p, std::uint64_t seed);

/// Convenience: graph + label structures in one pass.
GraphContext build_graph_context(const DataMatrix& data, int knn, const GraphScheme& scheme,
                                 double p, std::uint64_t seed);

}  // namespace ronmf
