#include "ronmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ronmf {

namespace {

void require_same_length(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw ContractViolation("label vectors differ in length");
  }
  if (pred.empty()) throw ContractViolation("label vectors are empty");
}

// Labels may be arbitrary non-negative ints; compact them to 0..k-1.
std::vector<int> compact(const std::vector<int>& labels, int& k) {
  std::map<int, int> remap;
  for (int y : labels) remap.emplace(y, 0);
  int next = 0;
  for (auto& [key, idx] : remap) idx = next++;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap[labels[i]];
  k = next;
  return out;
}

}  // namespace

// Potentials-and-augmenting-path Kuhn–Munkres, O(k^3).
std::vector<int> hungarian_assignment(const Matrix& cost) {
  const Eigen::Index k = cost.rows();
  if (cost.cols() != k) throw ContractViolation("hungarian: cost matrix must be square");
  if (!cost.allFinite()) throw ContractViolation("hungarian: cost matrix must be finite");
  const int n = static_cast<int>(k);
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based internals; matched[j] = row assigned to column j.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> matched(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    matched[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = matched[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (matched[static_cast<std::size_t>(j0)] != 0);
    for (; j0 != 0;) {
      const int j1 = way[static_cast<std::size_t>(j0)];
      matched[static_cast<std::size_t>(j0)] = matched[static_cast<std::size_t>(j1)];
      j0 = j1;
    }
  }

  std::vector<int> perm(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) {
    perm[static_cast<std::size_t>(matched[static_cast<std::size_t>(j)]) - 1] = j - 1;
  }
  return perm;
}

Eigen::MatrixXi contingency_table(const std::vector<int>& pred, const std::vector<int>& truth) {
  require_same_length(pred, truth);
  int kp = 0, kt = 0;
  const auto p = compact(pred, kp);
  const auto t = compact(truth, kt);
  const int k = std::max(kp, kt);
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < p.size(); ++i) table(p[i], t[i]) += 1;
  return table;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  const std::vector<int> perm = hungarian_assignment(-table.cast<double>());
  long matched = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    matched += table(i, perm[static_cast<std::size_t>(i)]);
  }
  return static_cast<double>(matched) / static_cast<double>(pred.size());
}

double pairwise_f1(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  auto pairs = [](long m) { return m * (m - 1) / 2; };

  long tp = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.cols(); ++j) tp += pairs(table(i, j));
  }
  long same_pred = 0, same_true = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) same_pred += pairs(table.row(i).sum());
  for (Eigen::Index j = 0; j < table.cols(); ++j) same_true += pairs(table.col(j).sum());

  const double precision = same_pred > 0 ? static_cast<double>(tp) / same_pred : 0.0;
  const double recall = same_true > 0 ? static_cast<double>(tp) / same_true : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  const double n = static_cast<double>(pred.size());
  const Eigen::VectorXi row_sums = table.rowwise().sum();
  const Eigen::VectorXi col_sums = table.colwise().sum();

  double hk = 0.0, ht = 0.0, mi = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    if (row_sums(i) > 0) {
      const double p = row_sums(i) / n;
      hk -= p * std::log(p);
    }
  }
  for (Eigen::Index j = 0; j < table.cols(); ++j) {
    if (col_sums(j) > 0) {
      const double p = col_sums(j) / n;
      ht -= p * std::log(p);
    }
  }
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      if (table(i, j) == 0) continue;
      const double pij = table(i, j) / n;
      mi += pij * std::log(pij * n * n / (static_cast<double>(row_sums(i)) * col_sums(j)));
    }
  }
  const double hmax = std::max(hk, ht);
  if (hmax == 0.0) return 0.0;  // both partitions are single clusters
  return mi / hmax;
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  long correct = 0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) correct += table.row(i).maxCoeff();
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

MetricReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth) {
  MetricReport report;
  report.acc = accuracy(pred, truth);
  report.f1 = pairwise_f1(pred, truth);
  report.nmi = nmi(pred, truth);
  report.pur = purity(pred, truth);
  report.confusion = contingency_table(pred, truth);
  return report;
}

}  // namespace ronmf
