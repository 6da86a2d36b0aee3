#pragma once

#include "ronmf/types.hpp"

#include <cstdint>
#include <optional>

namespace ronmf {

struct BaselineResult {
  std::vector<int> labels;
  std::optional<std::pair<Matrix, Matrix>> factors;  // (U, V) when applicable
  std::vector<double> objective_trace;               // per-iteration objective
};

/// Lee–Seung multiplicative updates for min ‖X − UVᵀ‖²_F with U, V ≥ 0.
/// Denominators are floored at 1e-12. The trace holds the Frobenius
/// reconstruction error at initialization and after each iteration; labels
/// come from the row-wise argmax of V.
BaselineResult nmf_multiplicative(const Matrix& X, int rank, int iters, std::uint64_t seed);

/// Lloyd's k-means over the columns of X with k-means++ seeding. Empty
/// clusters are re-seeded from the point farthest from its centroid. The
/// trace holds the within-cluster sum of squares after seeding and after
/// each Lloyd step.
BaselineResult kmeans(const Matrix& X, int k, int iters, std::uint64_t seed);

}  // namespace ronmf
