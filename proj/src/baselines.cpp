#include "ronmf/baselines.hpp"

#include <limits>
#include <random>

namespace ronmf {

namespace {

constexpr double kDenomFloor = 1e-12;

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = u(rng);
  }
  return M;
}

std::vector<int> argmax_rows(const Matrix& M) {
  std::vector<int> labels(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < M.cols(); ++j) {
      if (M(i, j) > M(i, best)) best = static_cast<int>(j);
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

}  // namespace

BaselineResult nmf_multiplicative(const Matrix& X, int rank, int iters, std::uint64_t seed) {
  if ((X.array() < 0.0).any()) throw ContractViolation("nmf: X must be non-negative");
  if (rank < 1 || rank > std::min(X.rows(), X.cols())) {
    throw ContractViolation("nmf: rank must be in [1, min(d, n)]");
  }

  std::mt19937_64 rng(seed);
  Matrix U = uniform_matrix(X.rows(), rank, rng);
  Matrix V = uniform_matrix(X.cols(), rank, rng);

  BaselineResult result;
  result.objective_trace.push_back((X - U * V.transpose()).norm());

  for (int it = 0; it < iters; ++it) {
    // V <- V .* (X'U) ./ (V U'U)
    const Matrix num_v = X.transpose() * U;
    const Matrix den_v = (V * (U.transpose() * U)).cwiseMax(kDenomFloor);
    V = V.cwiseProduct(num_v.cwiseQuotient(den_v));
    // U <- U .* (XV) ./ (U V'V)
    const Matrix num_u = X * V;
    const Matrix den_u = (U * (V.transpose() * V)).cwiseMax(kDenomFloor);
    U = U.cwiseProduct(num_u.cwiseQuotient(den_u));

    result.objective_trace.push_back((X - U * V.transpose()).norm());
  }

  result.labels = argmax_rows(V);
  result.factors = std::make_pair(std::move(U), std::move(V));
  return result;
}

BaselineResult kmeans(const Matrix& X, int k, int iters, std::uint64_t seed) {
  const Eigen::Index n = X.cols();
  if (k < 1 || k > n) throw ContractViolation("kmeans: k must be in [1, n]");

  std::mt19937_64 rng(seed);
  Matrix centroids(X.rows(), k);

  // k-means++ seeding.
  {
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centroids.col(0) = X.col(first(rng));
    Vector dist2 = (X.colwise() - centroids.col(0)).colwise().squaredNorm().transpose();
    for (int j = 1; j < k; ++j) {
      const double total = dist2.sum();
      Eigen::Index pick = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng), acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += dist2(i);
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        std::uniform_int_distribution<Eigen::Index> any(0, n - 1);
        pick = any(rng);
      }
      centroids.col(j) = X.col(pick);
      dist2 = dist2.cwiseMin((X.colwise() - centroids.col(j)).colwise().squaredNorm().transpose());
    }
  }

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  Vector point_dist2(n);
  auto assign_all = [&]() {
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (X.col(i) - centroids.col(0)).squaredNorm();
      for (int j = 1; j < k; ++j) {
        const double d = (X.col(i) - centroids.col(j)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      assign[static_cast<std::size_t>(i)] = best;
      point_dist2(i) = best_d;
    }
  };

  BaselineResult result;
  assign_all();
  result.objective_trace.push_back(point_dist2.sum());

  for (int it = 0; it < iters; ++it) {
    Matrix sums = Matrix::Zero(X.rows(), k);
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(assign[static_cast<std::size_t>(i)]) += X.col(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        centroids.col(j) = sums.col(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
      } else {
        // Re-seed from the farthest point; its distance drops to zero, so
        // the objective cannot rise.
        Eigen::Index farthest = 0;
        point_dist2.maxCoeff(&farthest);
        centroids.col(j) = X.col(farthest);
        point_dist2(farthest) = 0.0;
      }
    }
    assign_all();
    result.objective_trace.push_back(point_dist2.sum());
  }

  result.labels = std::move(assign);
  return result;
}

}  // namespace ronmf
