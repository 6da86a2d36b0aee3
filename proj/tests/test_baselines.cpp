#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ronmf/baselines.hpp"
#include "ronmf/metrics.hpp"
#include "test_support.hpp"

#include <random>

using namespace ronmf;
using test_support::uniform_matrix;

TEST_CASE("nmf recovers a rank-1 matrix") {
  std::mt19937_64 rng(1);
  const Matrix u = uniform_matrix(8, 1, rng);
  const Matrix v = uniform_matrix(6, 1, rng);
  const Matrix X = u * v.transpose();
  const BaselineResult res = nmf_multiplicative(X, 1, 500, 7);
  CHECK(res.objective_trace.back() / X.norm() <= 1e-3);
}

TEST_CASE("nmf with zero iterations returns the initialization") {
  std::mt19937_64 rng(2);
  const Matrix X = uniform_matrix(5, 4, rng);
  const BaselineResult res = nmf_multiplicative(X, 2, 0, 3);
  CHECK(res.objective_trace.size() == 1);
  REQUIRE(res.factors.has_value());
  CHECK(res.factors->first.rows() == 5);
  CHECK(res.factors->second.rows() == 4);
}

TEST_CASE("nmf objective is non-increasing and factors stay non-negative") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix X = uniform_matrix(10, 8, rng);
    const BaselineResult res = nmf_multiplicative(X, 3, 100, 11 + trial);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-9);
    }
    CHECK(res.factors->first.minCoeff() >= 0.0);
    CHECK(res.factors->second.minCoeff() >= 0.0);
  }
}

TEST_CASE("kmeans separates two well-separated pairs") {
  Matrix X(2, 4);
  X << 0.0, 0.1, 10.0, 10.1,
       0.0, 0.1, 10.0, 10.1;
  const BaselineResult res = kmeans(X, 2, 20, 5);
  CHECK(res.labels[0] == res.labels[1]);
  CHECK(res.labels[2] == res.labels[3]);
  CHECK(res.labels[0] != res.labels[2]);
}

TEST_CASE("kmeans with k = n isolates every point") {
  std::mt19937_64 rng(4);
  const Matrix X = uniform_matrix(3, 6, rng) * 10.0;
  const BaselineResult res = kmeans(X, 6, 20, 9);
  CHECK(res.objective_trace.back() == doctest::Approx(0.0));
  std::vector<int> sorted = res.labels;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 6; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("kmeans beats random assignments on WCSS") {
  std::mt19937_64 rng(6);
  const Matrix X = uniform_matrix(4, 30, rng);
  const BaselineResult res = kmeans(X, 3, 50, 13);
  const double wcss = res.objective_trace.back();

  std::uniform_int_distribution<int> lab(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> assign(30);
    for (auto& a : assign) a = lab(rng);
    Matrix centroids = Matrix::Zero(4, 3);
    Vector counts = Vector::Zero(3);
    for (int i = 0; i < 30; ++i) {
      centroids.col(assign[static_cast<std::size_t>(i)]) += X.col(i);
      counts(assign[static_cast<std::size_t>(i)]) += 1.0;
    }
    double random_wcss = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (counts(j) > 0) centroids.col(j) /= counts(j);
    }
    for (int i = 0; i < 30; ++i) {
      random_wcss += (X.col(i) - centroids.col(assign[static_cast<std::size_t>(i)])).squaredNorm();
    }
    CHECK(wcss <= random_wcss + 1e-9);
  }
}

TEST_CASE("kmeans WCSS trace is non-increasing") {
  std::mt19937_64 rng(7);
  const Matrix X = uniform_matrix(5, 40, rng);
  const BaselineResult res = kmeans(X, 4, 30, 17);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
    CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-9);
  }
}

TEST_CASE("kmeans partitions are permutation-covariant") {
  std::mt19937_64 rng(8);
  const Matrix X = uniform_matrix(3, 20, rng);
  const BaselineResult a = kmeans(X, 3, 25, 19);
  const BaselineResult b = kmeans(X, 3, 25, 19);
  // Same seed gives the identical partition; relabeling does not change it.
  CHECK(accuracy(a.labels, b.labels) == 1.0);
  std::vector<int> relabeled = a.labels;
  for (auto& y : relabeled) y = (y + 1) % 3;
  CHECK(accuracy(relabeled, a.labels) == 1.0);
}
