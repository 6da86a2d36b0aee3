#pragma once

#include "ronmf/types.hpp"

namespace ronmf {

/// Kuhn–Munkres optimal assignment: returns perm with perm[row] = column,
/// minimizing the total cost of a square finite cost matrix.
std::vector<int> hungarian_assignment(const Matrix& cost);

/// Contingency table of counts, padded square over both label alphabets.
Eigen::MatrixXi contingency_table(const std::vector<int>& pred, const std::vector<int>& truth);

/// Best-match clustering accuracy (Hungarian on the negated contingency).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// Pair-counting F1 = 2PR/(P+R) over all unordered sample pairs; 0 when
/// P + R = 0.
double pairwise_f1(const std::vector<int>& pred, const std::vector<int>& truth);

/// MI(K,T)/max(H(K), H(T)) with natural logs; 0 when both partitions are
/// single-cluster (max entropy 0).
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// (1/N) Σ over predicted clusters of their largest overlap with any true
/// cluster.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

/// All four metrics plus the contingency table.
MetricReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace ronmf
